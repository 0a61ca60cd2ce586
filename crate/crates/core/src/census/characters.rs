//! Dirichlet characters modulo a prime, indexed through a primitive root.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::arith::{is_prime, mul_mod, primitive_root, reduce};
use crate::error::{Error, Result};

/// The `q - 1` characters `chi_j(g^k) = zeta^{jk}` with `zeta = exp(2 pi i / (q-1))`
/// and `g` the smallest primitive root.
#[derive(Debug, Clone)]
pub struct CharacterTable {
    q: u64,
    root: u64,
    index: Vec<u32>,
    zeta_pow: Vec<Complex64>,
}

impl CharacterTable {
    pub fn new(q: u64) -> Result<Self> {
        if q < 3 || !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        let root = primitive_root(q);
        let order = q - 1;
        let mut index = vec![u32::MAX; q as usize];
        let mut x = 1u64;
        for k in 0..order {
            index[x as usize] = k as u32;
            x = mul_mod(x, root, q);
        }
        let zeta_pow = (0..order)
            .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / order as f64))
            .collect();
        Ok(CharacterTable {
            q,
            root,
            index,
            zeta_pow,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn order(&self) -> u64 {
        self.q - 1
    }

    pub fn primitive_root(&self) -> u64 {
        self.root
    }

    pub fn len(&self) -> usize {
        (self.q - 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Discrete logarithm of a unit, `None` for multiples of `q`.
    pub fn ind(&self, a: i128) -> Option<u64> {
        let r = reduce(a, self.q);
        (r != 0).then(|| self.index[r as usize] as u64)
    }

    /// Exponent `k` with `chi_j(a) = zeta^k`.
    pub fn exponent(&self, j: u64, a: i128) -> Option<u64> {
        self.ind(a).map(|k| j * k % self.order())
    }

    /// `zeta^k`.
    pub fn zeta(&self, k: u64) -> Complex64 {
        self.zeta_pow[(k % self.order()) as usize]
    }

    pub fn value(&self, j: u64, a: i128) -> Complex64 {
        self.exponent(j, a)
            .map_or(Complex64::new(0.0, 0.0), |k| self.zeta(k))
    }

    pub fn principal(&self) -> u64 {
        0
    }

    /// Index of the Legendre symbol `(./q)`.
    pub fn legendre(&self) -> u64 {
        self.order() / 2
    }

    pub fn conjugate(&self, j: u64) -> u64 {
        (self.order() - j % self.order()) % self.order()
    }
}

/// Coefficients `t_k` of `sum_k t_k zeta^k`, an exact element of `Z[zeta]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicInteger {
    pub coeffs: Vec<i64>,
}

impl CyclotomicInteger {
    pub fn to_complex(&self, table: &CharacterTable) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, &t)| table.zeta(k as u64) * t as f64)
            .sum()
    }

    /// Image under `zeta -> zeta^{-1}`.
    pub fn conjugate(&self) -> CyclotomicInteger {
        let n = self.coeffs.len();
        let coeffs = (0..n).map(|k| self.coeffs[(n - k) % n]).collect();
        CyclotomicInteger { coeffs }
    }
}
