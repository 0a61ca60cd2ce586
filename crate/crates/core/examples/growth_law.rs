//! Compares N'(B) with the predicted main term E B^{3/2} (log B)^{1/2}.
//!
//! cargo run --release --example growth_law -- 17 100000 1000000 2000000 10000000

use quadric_bm::census::count_nbr_direct;
use quadric_bm::constants::{constant_e, DEFAULT_TRUNCATION};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let (q, bs) = match args.split_first() {
        Some((&q, rest)) if !rest.is_empty() => (q, rest.to_vec()),
        _ => (17, vec![100_000, 1_000_000, 2_000_000, 10_000_000]),
    };
    let e = constant_e(q, DEFAULT_TRUNCATION)?.value;
    println!("E({q}) = {e:.6e}");
    println!("{:>10} {:>12} {:>10} {:>8}", "B", "N'(B)", "ratio/E", "secs");
    for b in bs {
        let r = count_nbr_direct(b, q, 1)?;
        let bf = b as f64;
        let ratio = r.count as f64 / (bf.powf(1.5) * bf.ln().sqrt());
        println!("{:>10} {:>12} {:>10.4} {:>8.2}", b, r.count, ratio / e, r.elapsed_s);
    }
    Ok(())
}
