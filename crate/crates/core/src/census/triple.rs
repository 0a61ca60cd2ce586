//! Splitting a coefficient triple into its `2n`-part, shared odd primes and squares.
//!
//! ```text
//! a = v1 u12 u13 w12 w13 w21^2 w31^2 a1^2
//! b = v2 u12 u23 w21 w23 w12^2 w32^2 b1^2
//! c = v3 u13 u23 w31 w32 w13^2 w23^2 c1^2
//! ```

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::factor_u64;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TripleDecomposition {
    pub v1: i64,
    pub v2: i64,
    pub v3: i64,
    pub u12: u64,
    pub u13: u64,
    pub u23: u64,
    pub w12: u64,
    pub w13: u64,
    pub w21: u64,
    pub w23: u64,
    pub w31: u64,
    pub w32: u64,
    pub a1: u64,
    pub b1: u64,
    pub c1: u64,
}

/// Decomposes `(a, b, c)` relative to `n`.
///
/// A prime `p` not dividing `2n` with odd valuation in exactly one
/// coefficient `i` goes into `w_ij` for the first other coefficient `j` it
/// divides; if it divides neither, the triple has no obstruction witness form
/// and [`Error::NoDecomposition`] is returned. Odd valuation in all three
/// coefficients cannot be expressed and gives [`Error::OddInAllThree`].
pub fn decompose_triple(a: i64, b: i64, c: i64, n: i64) -> Result<TripleDecomposition> {
    if a == 0 || b == 0 || c == 0 || n == 0 {
        return Err(Error::ZeroInput);
    }
    let two_n = 2 * n.unsigned_abs();
    let coefs = [a, b, c];
    let mut v = [0i64; 3];
    let mut exps: BTreeMap<u64, [u32; 3]> = BTreeMap::new();
    for i in 0..3 {
        let mut vi = coefs[i].signum();
        for (p, e) in factor_u64(coefs[i].unsigned_abs()) {
            if two_n % p == 0 {
                vi *= (p as i64).pow(e);
            } else {
                exps.entry(p).or_default()[i] = e;
            }
        }
        v[i] = vi;
    }
    // witnesses first, so that the error names an obstruction-free certificate when one exists
    for (&p, e) in &exps {
        let odd: Vec<usize> = (0..3).filter(|&i| e[i] % 2 == 1).collect();
        if odd.len() == 1 && (0..3).all(|j| j == odd[0] || e[j] == 0) {
            return Err(Error::NoDecomposition(p));
        }
    }
    let mut u = [[1u64; 3]; 3];
    let mut w = [[1u64; 3]; 3];
    let mut sq = [1u64; 3];
    for (&p, e) in &exps {
        let mut rest = *e;
        let odd: Vec<usize> = (0..3).filter(|&i| e[i] % 2 == 1).collect();
        match odd.len() {
            0 => {}
            1 => {
                let i = odd[0];
                let j = (0..3).find(|&j| j != i && e[j] > 0).expect("checked above");
                w[i][j] *= p;
                rest[i] -= 1;
                rest[j] -= 2;
            }
            2 => {
                let (i, j) = (odd[0], odd[1]);
                u[i][j] *= p;
                rest[i] -= 1;
                rest[j] -= 1;
            }
            _ => return Err(Error::OddInAllThree(p)),
        }
        for i in 0..3 {
            debug_assert!(rest[i] % 2 == 0);
            sq[i] *= p.pow(rest[i] / 2);
        }
    }
    Ok(TripleDecomposition {
        v1: v[0],
        v2: v[1],
        v3: v[2],
        u12: u[0][1],
        u13: u[0][2],
        u23: u[1][2],
        w12: w[0][1],
        w13: w[0][2],
        w21: w[1][0],
        w23: w[1][2],
        w31: w[2][0],
        w32: w[2][1],
        a1: sq[0],
        b1: sq[1],
        c1: sq[2],
    })
}

pub fn recompose_triple(t: &TripleDecomposition) -> Result<(i64, i64, i64)> {
    let prod = |v: i64, parts: [u64; 4], squares: [u64; 3]| -> Result<i64> {
        let mut acc = v as i128;
        for x in parts {
            acc *= x as i128;
        }
        for x in squares {
            acc *= (x as i128) * (x as i128);
        }
        i64::try_from(acc).map_err(|_| Error::Overflow("recomposed coefficient".into()))
    };
    Ok((
        prod(t.v1, [t.u12, t.u13, t.w12, t.w13], [t.w21, t.w31, t.a1])?,
        prod(t.v2, [t.u12, t.u23, t.w21, t.w23], [t.w12, t.w32, t.b1])?,
        prod(t.v3, [t.u13, t.u23, t.w31, t.w32], [t.w13, t.w23, t.c1])?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let t = decompose_triple(18, 5, 7, 1);
        // 5 and 7 have odd valuation in one coefficient only
        assert_eq!(t, Err(Error::NoDecomposition(5)));
        let t = decompose_triple(18, 25, 49, 1).unwrap();
        assert_eq!((t.v1, t.a1, t.b1, t.c1), (2, 3, 5, 7));
        assert_eq!(decompose_triple(3, 1, 1, 1), Err(Error::NoDecomposition(3)));
        let t = decompose_triple(15, 21, 35, 1).unwrap();
        assert_eq!((t.u12, t.u13, t.u23), (3, 5, 7));
        assert_eq!((t.v1, t.v2, t.v3), (1, 1, 1));
        assert_eq!(recompose_triple(&t).unwrap(), (15, 21, 35));
        assert_eq!(decompose_triple(3, 3, 3, 1), Err(Error::OddInAllThree(3)));
        let t = decompose_triple(-3, 9, 5 * 4, 5).unwrap();
        assert_eq!((t.w12, t.v1, t.v3, t.b1), (3, -1, 20, 1));
        assert_eq!(recompose_triple(&t).unwrap(), (-3, 9, 20));
    }
}
