//! Hilbert symbols of random rational pairs and the product formula.
//!
//! cargo run --example hilbert_product -- 20

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use quadric_bm::brauer::{hilbert_symbol, relevant_places};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let count: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(10);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..count {
        let mut draw = || {
            let n: i64 = rng.gen_range(-100..=100);
            BigRational::new(if n == 0 { 1 } else { n }.into(), rng.gen_range(1..=100i64).into())
        };
        let (u, v) = (draw(), draw());
        let mut product = 1;
        let mut row = Vec::new();
        for place in relevant_places(&u, &v)? {
            let s = hilbert_symbol(&u, &v, place)?;
            product *= s;
            if s == -1 {
                row.push(place.to_string());
            }
        }
        println!("({u}, {v}): -1 at {row:?}, product {product}");
    }
    Ok(())
}
