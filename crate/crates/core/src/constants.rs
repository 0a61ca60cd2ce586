//! Euler products and the density constants `C_{a,b,c}`, `C_f`, `L(psi, 1)`, `D` and `E`.
//!
//! The printed closed form of `D` contains the divergent product
//! `prod_p (1 - p)^{-psi(p)/2}`. `D` is evaluated instead from the factorisation
//! `F(s) = (1 - q^{-s})^{1/2} zeta(s)^{1/2} L(psi, s)^{1/2} K(s)`, giving
//! `D = pi^{-1/2} (1 - 1/q)^{1/2} L(psi, 1)^{1/2} prod_{psi(p) = -1} (1 - p^{-2})^{1/2}`.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use serde::Serialize;

use crate::arith::{distinct_primes, is_prime, jacobi_odd, primes_up_to};
use crate::census::CharacterTable;
use crate::error::{Error, Result};

pub const DEFAULT_TRUNCATION: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantReport {
    pub name: String,
    pub value: f64,
    pub truncation_prime: u64,
    pub error_estimate: f64,
    pub inputs: BTreeMap<String, i64>,
}

fn inputs(pairs: &[(&str, i64)]) -> BTreeMap<String, i64> {
    pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
}

fn check_truncation(p: u64) -> Result<()> {
    if p < 2 {
        return Err(Error::OutOfRange(format!("truncation P = {p}")));
    }
    Ok(())
}

fn check_family_prime(q: u64) -> Result<()> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q % 8 != 1 {
        return Err(Error::NotOneModEight(q));
    }
    Ok(())
}

fn psi(p: u64, q: u64) -> i32 {
    jacobi_odd(p % q, q)
}

/// `C_p = (1 - 1/p)^2 (1 + (2 - i)/p)` where `p` divides exactly `i` of `a, b, c`.
pub fn local_factor_c(p: u64, i: u32) -> f64 {
    let x = 1.0 / p as f64;
    (1.0 - x).powi(2) * (1.0 + (2.0 - i as f64) * x)
}

/// `C_{a,b,c} = prod_p C_p` over `p <= P` and every prime dividing `abc`.
pub fn euler_c(a: i64, b: i64, c: i64, truncation: u64) -> Result<ConstantReport> {
    check_truncation(truncation)?;
    if a == 0 || b == 0 || c == 0 {
        return Err(Error::ZeroInput);
    }
    let sets = [a, b, c].map(|k| distinct_primes(k.unsigned_abs()));
    let hits = |p: u64| sets.iter().filter(|s| s.contains(&p)).count() as u32;
    let mut value = 1.0;
    for p in primes_up_to(truncation) {
        value *= local_factor_c(p, hits(p));
    }
    let mut extra: Vec<u64> = sets.iter().flatten().copied().filter(|&p| p > truncation).collect();
    extra.sort_unstable();
    extra.dedup();
    for p in extra {
        value *= local_factor_c(p, hits(p));
    }
    Ok(ConstantReport {
        name: "C".into(),
        value,
        truncation_prime: truncation,
        error_estimate: 3.0 / truncation as f64,
        inputs: inputs(&[("a", a), ("b", b), ("c", c)]),
    })
}

fn generic_product(truncation: u64) -> f64 {
    primes_up_to(truncation)
        .into_iter()
        .map(|p| {
            let x = 1.0 / p as f64;
            1.0 - 3.0 * x * x + 2.0 * x * x * x
        })
        .product()
}

/// `C_f = (q+1)/(q+2) prod_{p | f} (1 + 2/p)^{-1} prod_p (1 - 3/p^2 + 2/p^3)`.
pub fn euler_c_f(f: u64, q: u64, truncation: u64) -> Result<ConstantReport> {
    check_truncation(truncation)?;
    if f == 0 {
        return Err(Error::ZeroInput);
    }
    let fp = crate::arith::factor_u64(f);
    if fp.iter().any(|&(_, e)| e > 1) {
        return Err(Error::Precondition(format!("f = {f} is not squarefree")));
    }
    let middle: f64 = fp.iter().map(|&(p, _)| 1.0 / (1.0 + 2.0 / p as f64)).product();
    let value = (q as f64 + 1.0) / (q as f64 + 2.0) * middle * generic_product(truncation);
    Ok(ConstantReport {
        name: "Cf".into(),
        value,
        truncation_prime: truncation,
        error_estimate: 3.0 / truncation as f64,
        inputs: inputs(&[("f", f as i64), ("q", q as i64)]),
    })
}

/// Bound on `|sum_{n > N} psi(n)/n|` for even `psi` mod `q` and `q | N`.
///
/// Over each period the weights `1` and `r` cancel, so a block starting at `M`
/// is at most `sum r^2 / M^3`; summing over blocks gives the bound below.
pub fn l_tail_bound(q: u64, n: u64) -> f64 {
    let (qf, nf) = (q as f64, n as f64);
    let sq = qf * (qf + 1.0) * (2.0 * qf + 1.0) / 6.0;
    sq * (1.0 / nf.powi(3) + 1.0 / (2.0 * qf * nf * nf))
}

/// `L(psi, 1)` for `psi = (./q)`, summed over whole periods until the tail is below `1e-10`.
pub fn dirichlet_l1(q: u64) -> Result<ConstantReport> {
    check_family_prime(q)?;
    let mut periods = 1u64;
    while l_tail_bound(q, periods * q) > 1e-10 {
        periods *= 2;
    }
    let n = periods * q;
    let table = CharacterTable::new(q)?;
    let chi: Vec<f64> = (0..q).map(|r| table.value(table.legendre(), r as i128).re.round()).collect();
    // pairwise-style accumulation per period keeps rounding far below the tail bound
    let mut total = 0.0;
    for k in (0..periods).rev() {
        let base = k * q;
        let mut block = 0.0;
        for r in 1..q {
            block += chi[r as usize] / (base + r) as f64;
        }
        total += block;
    }
    Ok(ConstantReport {
        name: "L".into(),
        value: total,
        truncation_prime: n,
        error_estimate: l_tail_bound(q, n) + 1e-14 * periods as f64,
        inputs: inputs(&[("q", q as i64)]),
    })
}

/// `D = pi^{-1/2} (1 - 1/q)^{1/2} L(psi, 1)^{1/2} prod_{psi(p) = -1} (1 - p^{-2})^{1/2}`.
pub fn constant_d(q: u64, truncation: u64) -> Result<ConstantReport> {
    check_family_prime(q)?;
    check_truncation(truncation)?;
    let l = dirichlet_l1(q)?;
    let inert: f64 = primes_up_to(truncation)
        .into_iter()
        .filter(|&p| p != q && psi(p, q) == -1)
        .map(|p| (1.0 - 1.0 / (p as f64 * p as f64)).sqrt())
        .product();
    let value = (1.0 - 1.0 / q as f64).sqrt() * l.value.sqrt() * inert / PI.sqrt();
    let rel = l.error_estimate / (2.0 * l.value) + 1.0 / (2.0 * truncation as f64);
    Ok(ConstantReport {
        name: "D".into(),
        value,
        truncation_prime: truncation,
        error_estimate: value * rel,
        inputs: inputs(&[("q", q as i64)]),
    })
}

/// `E = 2 C_1 D / q^{3/2} prod_{psi(p) = 1} (1 - 1/(p(p+2)))`.
pub fn constant_e(q: u64, truncation: u64) -> Result<ConstantReport> {
    let c1 = euler_c_f(1, q, truncation)?;
    let d = constant_d(q, truncation)?;
    let split: f64 = primes_up_to(truncation)
        .into_iter()
        .filter(|&p| p != q && psi(p, q) == 1)
        .map(|p| 1.0 - 1.0 / (p as f64 * (p as f64 + 2.0)))
        .product();
    let value = 2.0 * c1.value * d.value / (q as f64).powf(1.5) * split;
    let rel = c1.error_estimate + d.error_estimate / d.value + 1.0 / truncation as f64;
    Ok(ConstantReport {
        name: "E".into(),
        value,
        truncation_prime: truncation,
        error_estimate: value * rel,
        inputs: inputs(&[("q", q as i64)]),
    })
}

/// `E(q)` at the default truncation, computed once per process.
pub fn constant_e_cached(q: u64) -> Option<f64> {
    static CACHE: OnceLock<Mutex<HashMap<u64, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().ok()?;
    if let Some(&v) = guard.get(&q) {
        return Some(v);
    }
    let v = constant_e(q, DEFAULT_TRUNCATION).ok()?.value;
    guard.insert(q, v);
    Some(v)
}
