//! Density of pairwise coprime triples in a cube against the Euler product C_{a,b,c}.
//!
//! cargo run --release --example coprime_density -- 10000

use quadric_bm::census::coprime_triple_count;
use quadric_bm::constants::{euler_c, DEFAULT_TRUNCATION};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let x: u64 = std::env::args().nth(1).map_or(Ok(10_000), |s| s.parse())?;
    for (a, b, c) in [(1, 1, 1), (2, 3, 5), (6, 10, 15)] {
        let t = std::time::Instant::now();
        let n = coprime_triple_count([x; 3], [a, b, c]);
        let density = n as f64 / (x as f64).powi(3);
        let pred = euler_c(a as i64, b as i64, c as i64, DEFAULT_TRUNCATION)?.value;
        println!(
            "({a},{b},{c}) X={x}: L={n} density={density:.6} C={pred:.6} diff={:+.2e} ({:.1}s)",
            density - pred,
            t.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
