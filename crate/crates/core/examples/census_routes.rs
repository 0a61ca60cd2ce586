//! The three exact routes to N'(B), side by side, plus N_loc for small B.
//!
//! cargo run --release --example census_routes -- 17 578 1000 10000 100000

use quadric_bm::census::{count_nbr_characters, count_nbr_direct, count_nbr_rearranged, count_nloc, intermediate_u_chi};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let (q, bs) = match args.split_first() {
        Some((&q, rest)) if !rest.is_empty() => (q, rest.to_vec()),
        _ => (17, vec![578, 1_000, 10_000, 100_000]),
    };
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "B", "direct", "moebius", "characters", "U_0");
    for &b in &bs {
        let d = count_nbr_direct(b, q, 1)?;
        let r = count_nbr_rearranged(b, q, 1)?;
        let c = count_nbr_characters(b, q, 1)?;
        let u0 = intermediate_u_chi(b, q, 0)?;
        println!("{b:>8} {:>10} {:>10} {:>10} {:>10}", d.count, r.count, c.count, u0.coeffs.iter().sum::<i64>());
    }
    println!("\nN_loc(B, n = 1): ordered triples with |a|,|b|,|c| <= B, indefinite, locally solvable");
    for b in [1, 2, 5, 10, 20, 40] {
        let r = count_nloc(b, 1, 1)?;
        let cube = (2.0 * b as f64).powi(3);
        println!("{b:>4} {:>8} {:>8.4}", r.count, r.count as f64 / cube);
    }
    Ok(())
}
