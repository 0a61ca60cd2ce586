//! Direct evaluation of the triple sums `S(X,Y,Z; k,l,m)` and their weighted variant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::coprime::PrimeTable;
use crate::arith::jacobi_odd;
use crate::error::{Error, Result};

fn legendre(x: i64, p: u64) -> i32 {
    jacobi_odd(x.rem_euclid(p as i64) as u64, p)
}

/// `delta(u; v1 v2 v3)` given the primes of an odd squarefree `u`.
fn delta_product(u_primes: &[u64], factors: [i64; 3]) -> bool {
    u_primes
        .iter()
        .all(|&p| factors.iter().map(|&f| legendre(f, p)).product::<i32>() == 1)
}

/// `sum delta(u23; k u12 u13) delta(u13; l u12 u23) delta(u12; m u13 u23)` over
/// `u23 <= X, u13 <= Y, u12 <= Z`; each term is divided by `u12 u13 u23` when `weighted`.
pub fn sum_s_direct(bounds: [u64; 3], klm: [i64; 3], weighted: bool) -> Result<BigRational> {
    if bounds.contains(&0) {
        return Err(Error::OutOfRange("bounds must be >= 1".into()));
    }
    if klm.contains(&0) {
        return Err(Error::ZeroInput);
    }
    let [x, y, z] = bounds;
    let [k, l, m] = klm;
    let top = *bounds.iter().max().unwrap();
    let table = PrimeTable::new(top as usize);
    // odd squarefree candidates with their primes
    let cands: Vec<Option<Vec<u64>>> = (0..=top)
        .map(|u| {
            if u == 0 || u % 2 == 0 {
                return None;
            }
            let ps = table.primes(u);
            (ps.iter().product::<u64>() == u).then_some(ps)
        })
        .collect();
    let mut count = 0u64;
    let mut weight = BigRational::zero();
    for u23 in 1..=x {
        let Some(p23) = &cands[u23 as usize] else { continue };
        for u13 in 1..=y {
            let Some(p13) = &cands[u13 as usize] else { continue };
            for u12 in 1..=z {
                let Some(p12) = &cands[u12 as usize] else { continue };
                let (a, b, c) = (u12 as i64, u13 as i64, u23 as i64);
                if delta_product(p23, [k, a, b])
                    && delta_product(p13, [l, a, c])
                    && delta_product(p12, [m, b, c])
                {
                    count += 1;
                    if weighted {
                        weight += BigRational::new(1.into(), BigInt::from(u12 * u13 * u23));
                    }
                }
            }
        }
    }
    Ok(if weighted {
        weight
    } else {
        BigRational::from_integer(count.into())
    })
}
