//! Euler products and analytic constants, with their truncation behaviour.
//!
//! cargo run --release --example constants -- 17

use quadric_bm::constants::{constant_d, constant_e, dirichlet_l1, euler_c, euler_c_f};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q: u64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(17);
    let l = dirichlet_l1(q)?;
    println!("L(psi, 1) = {:.12} (tail <= {:.1e})", l.value, l.error_estimate);
    for p in [1_000u64, 10_000, 100_000, 1_000_000] {
        let d = constant_d(q, p)?;
        let e = constant_e(q, p)?;
        println!("P = {p:>8}: D = {:.8}  E = {:.8e}  (err ~ {:.1e})", d.value, e.value, d.error_estimate);
    }
    for abc in [(1, 1, 1), (2, 3, 5), (6, 10, 15)] {
        let c = euler_c(abc.0, abc.1, abc.2, 1_000_000)?;
        println!("C{abc:?} = {:.8}", c.value);
    }
    for f in [1, 3, 15, 105] {
        println!("C_f(f = {f}) = {:.8}", euler_c_f(f, q, 1_000_000)?.value);
    }
    Ok(())
}
