//! Tabulates the family a q^2 c^2 x^2 - a d^2 y^2 + e^2 q z^2 = 1 by residue
//! of a, and confirms that obstructed members have no small integral points.
//!
//! cargo run --release --example family_obstruction -- 17 10000

use quadric_bm::brauer::{family_invariant_profile, integral_point_search, obstruction_decision, Decision};
use quadric_bm::census::s_set;
use quadric_bm::local::{family_local_criterion, FamilyInstance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1).map(|s| s.parse::<u64>());
    let q = args.next().transpose()?.unwrap_or(17);
    let bound = args.next().transpose()?.unwrap_or(10_000);
    println!("S = {:?}", s_set(q)?);
    println!("{:>4} {:>8} {:>14} {:>12} {:>10}", "a", "local", "decision", "profile", "point");
    for a in 1..q as i64 {
        let f = FamilyInstance::new(q, a, 1, 1, 1)?;
        if !family_local_criterion(&f) {
            println!("{a:>4} {:>8}", "no");
            continue;
        }
        let decision = obstruction_decision(&f)?;
        let profile = family_invariant_profile(&f)?;
        let point = integral_point_search(&f.quadric()?, bound);
        let shown = match point {
            Some(p) => format!("{p:?}"),
            None => "-".to_string(),
        };
        println!(
            "{a:>4} {:>8} {:>14} {:>12} {:>10}",
            "yes",
            format!("{decision:?}"),
            serde_json::to_string(&profile.nonzero())?,
            shown
        );
        assert!(decision == Decision::NoObstruction || point.is_none());
    }
    Ok(())
}
