//! The quaternion class `(l1/t, d)` of an affine quadric with a rational point.
//!
//! Given `M` on `Q(x,y,z) = n t^2`, extend `e1 = M` to a hyperbolic pair,
//! diagonalise the orthogonal complement, and read off
//! `Q - n t^2 = l1 l2 + c0 (l3^2 - d l4^2)` with `l1` the tangent form at `M`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::local::QuadricInstance;

type Vec4 = [BigRational; 4];

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn zero4() -> Vec4 {
    std::array::from_fn(|_| BigRational::zero())
}

/// A nonzero point `(x : y : z : t)` of projective 3-space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectivePoint {
    pub coords: Vec4,
}

impl ProjectivePoint {
    pub fn new(coords: Vec4) -> Result<Self> {
        if coords.iter().all(Zero::is_zero) {
            return Err(Error::ZeroInput);
        }
        Ok(ProjectivePoint { coords })
    }

    pub fn from_ints(c: [i64; 4]) -> Result<Self> {
        Self::new(c.map(rat))
    }

    pub fn lies_on(&self, q: &QuadricInstance) -> bool {
        let g = gram(q);
        bil(&g, &self.coords, &self.coords).is_zero()
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.coords;
        write!(f, "({} : {} : {} : {})", c[0], c[1], c[2], c[3])
    }
}

/// A linear form in `(x, y, z, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub coeffs: Vec4,
}

impl LinearForm {
    pub fn eval(&self, x: &Vec4) -> BigRational {
        self.coeffs
            .iter()
            .zip(x)
            .map(|(a, b)| a * b)
            .fold(BigRational::zero(), |s, v| s + v)
    }

    pub fn scale(&self, r: &BigRational) -> LinearForm {
        LinearForm {
            coeffs: std::array::from_fn(|i| &self.coeffs[i] * r),
        }
    }

    /// Returns `(kappa, kappa * self)` where the product has coprime integer
    /// coefficients and a positive leading coefficient.
    pub fn primitive(&self) -> (BigRational, LinearForm) {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let gcd = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .fold(BigInt::zero(), |g, n| g.gcd(&n));
        assert!(!gcd.is_zero(), "zero linear form");
        let lead_neg = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative());
        let mut kappa = BigRational::new(lcm, gcd);
        if lead_neg {
            kappa = -kappa;
        }
        let form = self.scale(&kappa);
        (kappa, form)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z", "t"];
        let mut first = true;
        for (c, v) in self.coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if a.is_one() {
                write!(f, "{v}")?;
            } else {
                write!(f, "{a}*{v}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Serialize for LinearForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `a x^2 + b y^2 + c z^2 - n t^2 = l1 l2 + c0 (l3^2 - d l4^2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrauerDecomposition {
    pub l1: LinearForm,
    pub l2: LinearForm,
    pub l3: LinearForm,
    pub l4: LinearForm,
    pub c0: BigRational,
    pub d: i64,
}

impl BrauerDecomposition {
    /// Symmetric coefficient matrix of the expanded right-hand side.
    pub fn expanded_gram(&self) -> [[BigRational; 4]; 4] {
        let d = rat(self.d);
        std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let (a, b) = (&self.l1.coeffs, &self.l2.coeffs);
                let hyper = (&a[i] * &b[j] + &a[j] * &b[i]) / rat(2);
                let l3 = &self.l3.coeffs[i] * &self.l3.coeffs[j];
                let l4 = &self.l4.coeffs[i] * &self.l4.coeffs[j];
                hyper + &self.c0 * (l3 - &d * l4)
            })
        })
    }

    /// Coefficient-exact check of the decomposition identity against `q`.
    pub fn matches(&self, q: &QuadricInstance) -> bool {
        let g = gram(q);
        let e = self.expanded_gram();
        (0..4).all(|i| (0..4).all(|j| e[i][j] == if i == j { g[i].clone() } else { BigRational::zero() }))
    }

    pub fn forms_independent(&self) -> bool {
        let rows = [
            self.l1.coeffs.clone(),
            self.l2.coeffs.clone(),
            self.l3.coeffs.clone(),
            self.l4.coeffs.clone(),
        ];
        rank(rows) == 4
    }
}

fn rank(mut rows: [Vec4; 4]) -> usize {
    let mut r = 0;
    for col in 0..4 {
        let Some(piv) = (r..4).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, piv);
        for i in 0..4 {
            if i != r && !rows[i][col].is_zero() {
                let f = &rows[i][col] / &rows[r][col];
                for k in 0..4 {
                    let t = &f * &rows[r][k];
                    rows[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

fn gram(q: &QuadricInstance) -> Vec4 {
    [rat(q.a), rat(q.b), rat(q.c), rat(-q.n)]
}

fn bil(g: &Vec4, x: &Vec4, y: &Vec4) -> BigRational {
    (0..4).fold(BigRational::zero(), |s, i| s + &g[i] * &x[i] * &y[i])
}

// The linear form X -> B(X, v) / s.
fn pairing_form(g: &Vec4, v: &Vec4, s: &BigRational) -> LinearForm {
    LinearForm {
        coeffs: std::array::from_fn(|i| &g[i] * &v[i] / s),
    }
}

fn axpy(a: &BigRational, x: &Vec4, y: &Vec4) -> Vec4 {
    std::array::from_fn(|i| a * &x[i] + &y[i])
}

/// Squarefree representative of `-abc n` modulo squares.
pub fn discriminant_class(q: &QuadricInstance) -> Result<i64> {
    let mut parity: Vec<(u64, u32)> = Vec::new();
    let mut sign = -1i64;
    for k in [q.a, q.b, q.c, q.n] {
        let f = arith::factorize(k)?;
        sign *= f.sign as i64;
        parity.extend(f.pairs);
    }
    parity.sort_unstable();
    let mut d = sign as i128;
    for chunk in parity.chunk_by(|x, y| x.0 == y.0) {
        if chunk.iter().map(|x| x.1).sum::<u32>() % 2 == 1 {
            d *= chunk[0].0 as i128;
        }
    }
    i64::try_from(d).map_err(|_| Error::Overflow(format!("discriminant class of {q}")))
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let (n, d) = (r.numer().sqrt(), r.denom().sqrt());
    (&n * &n == *r.numer() && &d * &d == *r.denom()).then(|| BigRational::new(n, d))
}

fn squarefree_kernel_rational(r: &BigRational) -> Result<i64> {
    use num_traits::ToPrimitive;
    let v = (r.numer() * r.denom())
        .to_i64()
        .ok_or_else(|| Error::Overflow(format!("kernel of {r}")))?;
    arith::squarefree_kernel(v)
}

/// Decomposition with `l1` the tangent form at `m`; fails when `-abcn` is a square.
pub fn brauer_decomposition(q: &QuadricInstance, m: &ProjectivePoint) -> Result<BrauerDecomposition> {
    if discriminant_class(q)? == 1 {
        return Err(Error::NoNontrivialClass);
    }
    quadric_decomposition(q, m)
}

/// The same construction without the nontriviality check; `d = 1` is allowed.
pub fn quadric_decomposition(q: &QuadricInstance, m: &ProjectivePoint) -> Result<BrauerDecomposition> {
    let d = discriminant_class(q)?;
    let g = gram(q);
    let e1 = m.coords.clone();
    if !bil(&g, &e1, &e1).is_zero() {
        return Err(Error::PointNotOnQuadric);
    }
    // first basis vector off the tangent hyperplane
    let idx = (0..4)
        .find(|&i| !(&g[i] * &e1[i]).is_zero())
        .expect("nonzero point pairs nontrivially with a basis vector");
    let beta = &g[idx] * &e1[idx];
    let mut ei = zero4();
    ei[idx] = BigRational::one();
    let e2 = axpy(&(-&g[idx] / (rat(2) * &beta)), &e1, &ei);

    let project = |v: &Vec4| -> Vec4 {
        let y1 = bil(&g, v, &e2) / &beta;
        let y2 = bil(&g, v, &e1) / &beta;
        std::array::from_fn(|i| &v[i] - &y1 * &e1[i] - &y2 * &e2[i])
    };
    let proj: Vec<Vec4> = (0..4)
        .map(|i| {
            let mut v = zero4();
            v[i] = BigRational::one();
            project(&v)
        })
        .collect();
    let wa = proj
        .iter()
        .find(|v| v.iter().any(|c| !c.is_zero()))
        .expect("complement is two-dimensional")
        .clone();
    let wb = proj
        .iter()
        .find(|v| (0..4).any(|i| (0..4).any(|j| &wa[i] * &v[j] != &wa[j] * &v[i])))
        .expect("complement is two-dimensional")
        .clone();
    let sum: Vec4 = std::array::from_fn(|i| &wa[i] + &wb[i]);
    let (w3, other) = if !bil(&g, &wa, &wa).is_zero() {
        (wa, wb)
    } else if !bil(&g, &wb, &wb).is_zero() {
        (wb, wa)
    } else {
        (sum, wa)
    };
    let gamma3 = bil(&g, &w3, &w3);
    let w4 = axpy(&(-bil(&g, &other, &w3) / &gamma3), &w3, &other);
    let gamma4 = bil(&g, &w4, &w4);
    debug_assert!(!gamma4.is_zero());

    let y1 = pairing_form(&g, &e2, &beta);
    let tangent = pairing_form(&g, &e1, &BigRational::one());
    let (kappa1, l1) = tangent.primitive();
    // B(X, M) = beta y2, l1 = kappa1 beta y2, so 2 beta y1 y2 = l1 * (2/kappa1) y1
    let l2 = y1.scale(&(rat(2) / &kappa1));
    let y3 = pairing_form(&g, &w3, &gamma3);
    let (kappa3, l3) = y3.primitive();
    let c0 = &gamma3 / (&kappa3 * &kappa3);
    let y4 = pairing_form(&g, &w4, &gamma4);
    let r = rational_sqrt(&(-&gamma4 / (&c0 * rat(d))))
        .filter(|_| squarefree_kernel_rational(&(-&gamma4 / &c0)) == Ok(d))
        .ok_or_else(|| Error::Precondition("complement class disagrees with -abcn".into()))?;
    let l4 = y4.scale(&r);
    let dec = BrauerDecomposition {
        l1,
        l2,
        l3,
        l4,
        c0,
        d,
    };
    debug_assert!(dec.matches(q));
    Ok(dec)
}
