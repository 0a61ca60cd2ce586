//! Quadratic Hilbert symbols over `Q` and the local invariant they define.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::arith::jacobi_odd;
use crate::error::{Error, Result};
use crate::local::Place;

/// Local invariant of a quaternion class, an element of `{0, 1/2}` in `Q/Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Invariant {
    #[default]
    Zero,
    Half,
}

impl Invariant {
    /// `+1 -> 0`, `-1 -> 1/2`.
    pub fn from_symbol(s: i32) -> Invariant {
        if s == 1 {
            Invariant::Zero
        } else {
            Invariant::Half
        }
    }

    pub fn symbol(self) -> i32 {
        match self {
            Invariant::Zero => 1,
            Invariant::Half => -1,
        }
    }
}

// addition in Z/2 is multiplication of the signs
impl Add for Invariant {
    type Output = Invariant;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Invariant) -> Invariant {
        Invariant::from_symbol(self.symbol() * rhs.symbol())
    }
}

impl std::iter::Sum for Invariant {
    fn sum<I: Iterator<Item = Invariant>>(iter: I) -> Invariant {
        iter.fold(Invariant::Zero, |a, b| a + b)
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Zero => "0",
            Invariant::Half => "1/2",
        })
    }
}

impl Serialize for Invariant {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn split_big(n: &BigInt, p: u64) -> (u32, BigInt) {
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

fn residue(n: &BigInt, m: u64) -> u64 {
    n.mod_floor(&BigInt::from(m)).to_u64().unwrap()
}

// A rational is equivalent to num*den modulo squares.
fn as_integer(u: &BigRational) -> BigInt {
    u.numer() * u.denom()
}

/// `(u, v)_place` as `+1` or `-1`.
pub fn hilbert_symbol(u: &BigRational, v: &BigRational, place: Place) -> Result<i32> {
    if u.is_zero() || v.is_zero() {
        return Err(Error::ZeroInput);
    }
    let (u, v) = (as_integer(u), as_integer(v));
    Ok(match place {
        Place::Real => {
            if u.is_negative() && v.is_negative() {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => {
            let (a, u1) = split_big(&u, 2);
            let (b, v1) = split_big(&v, 2);
            let (u8, v8) = (residue(&u1, 8), residue(&v1, 8));
            let eps = |x: u64| ((x - 1) / 2) % 2;
            let omega = |x: u64| ((x * x - 1) / 8) % 2;
            let e = eps(u8) * eps(v8) + a as u64 * omega(v8) + b as u64 * omega(u8);
            if e % 2 == 0 {
                1
            } else {
                -1
            }
        }
        Place::Prime(p) => {
            let (a, u1) = split_big(&u, p);
            let (b, v1) = split_big(&v, p);
            let mut s = if (a as u64 * b as u64 % 2 == 1) && p % 4 == 3 {
                -1
            } else {
                1
            };
            if b % 2 == 1 {
                s *= jacobi_odd(residue(&u1, p), p);
            }
            if a % 2 == 1 {
                s *= jacobi_odd(residue(&v1, p), p);
            }
            s
        }
    })
}

/// Integer convenience wrapper.
pub fn hilbert_symbol_int(u: i128, v: i128, place: Place) -> Result<i32> {
    hilbert_symbol(
        &BigRational::from_integer(u.into()),
        &BigRational::from_integer(v.into()),
        place,
    )
}

/// The real place and every prime dividing `2 * num * den` of both arguments.
pub fn relevant_places(u: &BigRational, v: &BigRational) -> Result<Vec<Place>> {
    let mut ps = vec![2u64];
    for x in [u.numer(), u.denom(), v.numer(), v.denom()] {
        let m = x
            .abs()
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("cannot factor {x}")))?;
        if m == 0 {
            return Err(Error::ZeroInput);
        }
        ps.extend(crate::arith::distinct_primes(m));
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(std::iter::once(Place::Real)
        .chain(ps.into_iter().map(Place::Prime))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    // Oracle: a primitive solution of z^2 = u x^2 + v y^2 mod p^k satisfying the
    // Hensel criterion, for squarefree u, v (so k = 3, or 5 at p = 2, suffices).
    fn brute(u: i64, v: i64, p: u64) -> i32 {
        let k = if p == 2 { 5 } else { 3 };
        let pm = p.pow(k) as i64;
        let coef = [u, v, -1];
        for x in 0..pm {
            for y in 0..pm {
                for z in 0..pm {
                    let pt = [x, y, z];
                    if pt.iter().all(|c| c % p as i64 == 0) {
                        continue;
                    }
                    let f: i64 = (0..3).map(|i| coef[i] * pt[i] * pt[i]).sum();
                    if f.rem_euclid(pm) != 0 {
                        continue;
                    }
                    let ok = (0..3).any(|i| {
                        let g = 2 * coef[i] * pt[i];
                        if g == 0 {
                            return false;
                        }
                        let mut v = 0;
                        let mut g = g.abs();
                        while g % p as i64 == 0 {
                            g /= p as i64;
                            v += 1;
                        }
                        2 * v < k
                    });
                    if ok {
                        return 1;
                    }
                }
            }
        }
        -1
    }

    #[test]
    fn against_brute_force() {
        let sqfree = [-15i64, -10, -7, -6, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10, 15];
        for p in [2u64, 3, 5] {
            for &u in &sqfree {
                for &v in &sqfree {
                    let s = hilbert_symbol_int(u as i128, v as i128, Place::Prime(p)).unwrap();
                    assert_eq!(s, brute(u, v, p), "({u},{v})_{p}");
                }
            }
        }
    }

    #[test]
    fn spec_examples() {
        for place in [Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(17)] {
            assert_eq!(hilbert_symbol(&r(1, 1), &r(-7, 3), place).unwrap(), 1);
        }
        for u in [-40i128, -3, 1, 6, 17 * 3 + 5, 1001] {
            assert_eq!(hilbert_symbol_int(u, 17, Place::Prime(2)).unwrap(), 1);
        }
        assert_eq!(hilbert_symbol_int(5, 3, Place::Prime(3)).unwrap(), -1);
        assert_eq!(hilbert_symbol_int(-1, -1, Place::Real).unwrap(), -1);
        assert_eq!(hilbert_symbol_int(-1, -1, Place::Prime(2)).unwrap(), -1);
        assert_eq!(
            hilbert_symbol(&r(0, 1), &r(1, 1), Place::Real),
            Err(Error::ZeroInput)
        );
    }

    #[test]
    fn rationals_reduce_modulo_squares() {
        let u = r(3, 4);
        let v = r(5, 9);
        for place in [Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
            assert_eq!(
                hilbert_symbol(&u, &v, place).unwrap(),
                hilbert_symbol_int(3, 5, place).unwrap()
            );
        }
        assert_eq!(
            hilbert_symbol(&r(2, 3), &r(5, 1), Place::Prime(5)).unwrap(),
            hilbert_symbol_int(6, 5, Place::Prime(5)).unwrap()
        );
    }

    #[test]
    fn invariant_arithmetic() {
        assert_eq!(Invariant::Half + Invariant::Half, Invariant::Zero);
        assert_eq!(Invariant::Half + Invariant::Zero, Invariant::Half);
        assert_eq!(Invariant::Half.to_string(), "1/2");
        assert_eq!(relevant_places(&r(6, 35), &r(-1, 1)).unwrap().len(), 5);
    }
}
