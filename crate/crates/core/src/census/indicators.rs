//! Arithmetic indicator functions and their alternative encodings.

use num_integer::Integer;
use num_rational::Ratio;

use super::characters::CharacterTable;
use crate::arith::{self, distinct_primes, jacobi, jacobi_odd, moebius_tau, power_residue_class, ResidueClass};
use crate::error::{Error, Result};

/// `1` iff every prime `p | a` has `(p/q) = 1`.
pub fn indicator_alpha(a: u64, q: u64) -> bool {
    assert!(a >= 1, "indicator_alpha needs a >= 1");
    distinct_primes(a)
        .into_iter()
        .all(|p| jacobi_odd(p % q, q) == 1)
}

/// `alpha(a)` for all `a <= limit`, by striking out multiples of every prime with `(p/q) != 1`.
pub fn alpha_table(limit: usize, q: u64) -> Vec<bool> {
    let mut ok = vec![true; limit + 1];
    ok[0] = false;
    let mut composite = vec![false; limit + 1];
    for p in 2..=limit {
        if composite[p] {
            continue;
        }
        for m in (p * p..=limit).step_by(p) {
            composite[m] = true;
        }
        if jacobi_odd(p as u64 % q, q) != 1 {
            for m in (p..=limit).step_by(p) {
                ok[m] = false;
            }
        }
    }
    ok
}

/// Membership in the squares mod `q` that are not fourth powers.
pub fn indicator_s(a: i64, q: u64) -> Result<bool> {
    Ok(power_residue_class(a as i128, q)? == ResidueClass::SquareNotFourth)
}

/// The residues `S`, in increasing order.
pub fn s_set(q: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for r in 1..q {
        if indicator_s(r as i64, q)? {
            out.push(r);
        }
    }
    Ok(out)
}

/// `(1/(q-1)) sum_{s in S} sum_chi chi(s) chi(a)`, a real number equal to 0 or 1.
pub fn indicator_s_characters(a: i64, table: &CharacterTable) -> Result<f64> {
    let q = table.modulus();
    let s = s_set(q)?;
    let total: num_complex::Complex64 = s
        .iter()
        .flat_map(|&s| {
            (0..table.order()).map(move |j| table.value(j, s as i128) * table.value(j, a as i128))
        })
        .sum();
    Ok(total.re / table.order() as f64)
}

/// Pairwise coprimality of three positive integers.
pub fn indicator_beta(x: u64, y: u64, z: u64) -> bool {
    x.gcd(&y) == 1 && x.gcd(&z) == 1 && y.gcd(&z) == 1
}

fn divisors(n: u64) -> Vec<u64> {
    let mut d = vec![1u64];
    for (p, e) in arith::factor_u64(n) {
        let len = d.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                d.push(d[i] * pk);
            }
        }
    }
    d
}

/// `sum_{t|(x,y,z)} sum_{u|(x,y)} sum_{v|(x,z)} sum_{w|(y,z)} mu(uvwt) mu(t) tau(t)`.
pub fn beta_moebius(x: u64, y: u64, z: u64) -> i64 {
    let (gxy, gxz, gyz) = (x.gcd(&y), x.gcd(&z), y.gcd(&z));
    let gxyz = gxy.gcd(&z);
    let mut total = 0i64;
    for t in divisors(gxyz) {
        let (mt, tt) = moebius_tau(t);
        if mt == 0 {
            continue;
        }
        for u in divisors(gxy) {
            for v in divisors(gxz) {
                for w in divisors(gyz) {
                    let (m, _) = moebius_tau(u * v * w * t);
                    total += (m * mt) as i64 * tt as i64;
                }
            }
        }
    }
    total
}

/// `1` iff every prime dividing `v` divides `2n`.
pub fn indicator_epsilon(v: u64, n: i64) -> bool {
    assert!(v >= 1 && n != 0, "indicator_epsilon needs v >= 1, n != 0");
    let m = 2 * n.unsigned_abs();
    distinct_primes(v).into_iter().all(|p| m % p == 0)
}

/// `u` squarefree, odd, and `(v/p) = 1` for every `p | u`.
pub fn indicator_delta(u: u64, v: i64) -> bool {
    assert!(u >= 1 && v != 0, "indicator_delta needs u >= 1, v != 0");
    if u % 2 == 0 {
        return false;
    }
    let f = arith::factor_u64(u);
    f.iter().all(|&(p, e)| e == 1 && jacobi(v as i128, p as i128) == Ok(1))
}

/// `1_{(u,2v)=1} mu^2(u)/tau(u) sum_{d|u} (v/d)`.
pub fn delta_rewrite(u: u64, v: i64) -> Result<Ratio<i64>> {
    if u == 0 || v == 0 {
        return Err(Error::ZeroInput);
    }
    if u.gcd(&(2 * v.unsigned_abs())) != 1 {
        return Ok(Ratio::from_integer(0));
    }
    let (mu, tau) = moebius_tau(u);
    if mu == 0 {
        return Ok(Ratio::from_integer(0));
    }
    let s: i64 = divisors(u)
        .into_iter()
        .map(|d| jacobi(v as i128, d as i128).map(i64::from))
        .sum::<Result<i64>>()?;
    Ok(Ratio::new(s, tau as i64))
}
