//! Local solvability of a x^2 + b y^2 + c z^2 = n at every place.
//!
//! cargo run --example local_solvability -- 1 1 1 7

use quadric_bm::local::{certified_depth, solvable_at_prime, solvable_everywhere, solvable_real, QuadricInstance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v: Vec<i64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let [a, b, c, n] = v[..] else {
        return Err("expected four integers a b c n".into());
    };
    let q = QuadricInstance::new(a, b, c, n)?;
    println!("{q}");
    println!("  real: {}", solvable_real(&q));
    for p in q.relevant_primes() {
        let v = solvable_at_prime(&q, p)?;
        match v.witness {
            Some(w) => println!("  p = {p}: solvable, {:?} mod {p}^{}", w.point, w.exponent),
            None => println!("  p = {p}: no solution mod {p}^{}", certified_depth(&q, p)),
        }
    }
    let (ok, failing) = solvable_everywhere(&q)?;
    let failing: Vec<String> = failing.iter().map(ToString::to_string).collect();
    println!("everywhere locally solvable: {ok}, failing at [{}]", failing.join(", "));
    Ok(())
}
