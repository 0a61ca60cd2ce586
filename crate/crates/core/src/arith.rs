//! Exact integer primitives: factorization, Jacobi symbols, valuations,
//! modular square roots with Hensel lifting and power-residue classes.
//!
//! Everything works on machine integers. Factorization accepts
//! `|n| < 2^63`; modular routines require moduli below `2^63` so that
//! products fit in `u128`.

use num_integer::Integer;

use crate::error::{Error, Result};

const TRIAL_LIMIT: u64 = 1_000_000;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
#[inline]
pub fn reduce(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let g = (a as i128).extended_gcd(&(m as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(reduce(g.x, m))
}

/// `p^k`, or `None` if it does not fit below `2^63`.
pub fn checked_pow(p: u64, k: u32) -> Option<u64> {
    let v = p.checked_pow(k)?;
    (v < 1 << 63).then_some(v)
}

/// Deterministic Miller-Rabin, exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

// Brent's variant of Pollard rho; `n` is odd, composite, free of small factors.
fn rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g, mut q) = (2u64, 2u64, 1u64, 1u64);
        let mut r = 1u64;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..std::cmp::min(128, r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = q.gcd(&n);
                k += 128;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = rho(n);
    split_into(d, out);
    split_into(n / d, out);
}

/// Signed prime factorization with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PrimeFactorization {
    pub sign: i8,
    pub pairs: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    pub fn exponent(&self, p: u64) -> u32 {
        self.pairs
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    /// Multiplies the factorization back out.
    pub fn value(&self) -> i128 {
        self.pairs
            .iter()
            .fold(self.sign as i128, |acc, &(p, e)| acc * (p as i128).pow(e))
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u64 {
        self.primes().product()
    }
}

pub fn factorize(n: i64) -> Result<PrimeFactorization> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    if n == i64::MIN {
        return Err(Error::OutOfRange(n.to_string()));
    }
    let sign = if n < 0 { -1 } else { 1 };
    Ok(PrimeFactorization {
        sign,
        pairs: factor_u64(n.unsigned_abs()),
    })
}

/// Unsigned factorization as `(prime, exponent)` pairs.
pub fn factor_u64(mut m: u64) -> Vec<(u64, u32)> {
    let mut pairs = Vec::new();
    let mut push = |p: u64, m: &mut u64| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    };
    push(2, &mut m);
    let mut p = 3;
    while p <= TRIAL_LIMIT && p * p <= m {
        push(p, &mut m);
        p += 2;
    }
    if m > 1 {
        let mut rest = Vec::new();
        split_into(m, &mut rest);
        rest.sort_unstable();
        for chunk in rest.chunk_by(|a, b| a == b) {
            pairs.push((chunk[0], chunk.len() as u32));
        }
    }
    pairs
}

/// Distinct prime divisors of `m`.
pub fn distinct_primes(m: u64) -> Vec<u64> {
    if m <= 1 {
        return Vec::new();
    }
    factor_u64(m).into_iter().map(|(p, _)| p).collect()
}

/// Jacobi symbol `(a/m)` for odd `m >= 1`; negative `a` is reduced mod `m`.
pub fn jacobi(a: i128, m: i128) -> Result<i32> {
    if m <= 0 || m % 2 == 0 {
        return Err(Error::InvalidModulus(m));
    }
    Ok(jacobi_odd(reduce(a, m as u64), m as u64))
}

/// Jacobi symbol for `a` already reduced and `m` odd.
pub fn jacobi_odd(mut a: u64, mut m: u64) -> i32 {
    debug_assert!(m % 2 == 1);
    a %= m;
    let mut t = 1;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (m % 8 == 3 || m % 8 == 5) {
            t = -t;
        }
        if a % 4 == 3 && m % 4 == 3 {
            t = -t;
        }
        std::mem::swap(&mut a, &mut m);
        a %= m;
    }
    if m == 1 {
        t
    } else {
        0
    }
}

/// `v_p(n)`; zero is rejected since its valuation is infinite.
pub fn valuation(n: i128, p: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    if p < 2 {
        return Err(Error::NotPrime(p));
    }
    let p = p as i128;
    let mut n = n;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    Ok(v)
}

/// Splits `n = p^v * w` with `p` not dividing `w`.
pub fn split_valuation(n: i128, p: u64) -> (u32, i128) {
    let p = p as i128;
    let (mut n, mut v) = (n, 0);
    while n != 0 && n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

// Tonelli-Shanks for an odd prime and a quadratic residue `a` (unit).
fn tonelli_shanks(a: u64, p: u64) -> u64 {
    if p % 4 == 3 {
        return pow_mod(a, (p + 1) / 4, p);
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    let mut z = 2;
    while jacobi_odd(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    r
}

// Square root of a unit modulo p^k (p odd): Tonelli-Shanks then Newton lifting.
fn sqrt_unit_odd(a: u64, p: u64, k: u32) -> Option<u64> {
    if jacobi_odd(a % p, p) != 1 {
        return None;
    }
    let mut r = tonelli_shanks(a % p, p);
    let mut pj = p;
    for _ in 1..k {
        let next = pj * p;
        // r <- r - (r^2 - a) / (2r) mod p^{j+1}
        let r2 = mul_mod(r, r, next);
        let diff = (r2 + next - a % next) % next;
        let inv2r = inv_mod(mul_mod(2, r, next), next).expect("2r is a unit");
        r = (r + next - mul_mod(diff, inv2r, next)) % next;
        pj = next;
    }
    Some(r)
}

// Square root of an odd `a` modulo 2^k.
fn sqrt_unit_two(a: u64, k: u32) -> Option<u64> {
    let m = 1u64 << k;
    let a = a % m;
    match k {
        1 => return Some(1),
        2 => return (a % 4 == 1).then_some(1),
        3 => return (a % 8 == 1).then_some(1),
        _ => {}
    }
    if a % 8 != 1 {
        return None;
    }
    // r^2 = a mod 2^j, j >= 3: either r or r + 2^{j-1} works mod 2^{j+1}.
    let mut r = 1u64;
    for j in 3..k {
        let next = 1u64 << (j + 1);
        if mul_mod(r, r, next) != a % next {
            r += 1 << (j - 1);
        }
    }
    Some(r % m)
}

/// Some `r` with `r^2 = a (mod p^k)`, or `None` if `a` is not a square mod `p^k`.
///
/// Requires `p^k < 2^63`.
pub fn sqrt_mod(a: i128, p: u64, k: u32) -> Option<u64> {
    assert!(k >= 1, "sqrt_mod needs k >= 1");
    let m = checked_pow(p, k).expect("p^k must be below 2^63");
    let a = reduce(a, m);
    if a == 0 {
        return Some(0);
    }
    let (v, w) = split_valuation(a as i128, p);
    if v % 2 == 1 {
        return None;
    }
    let rest = k - v;
    let root = if p == 2 {
        sqrt_unit_two(w as u64, rest)?
    } else {
        sqrt_unit_odd(w as u64, p, rest)?
    };
    Some(mul_mod(root, p.pow(v / 2), m))
}

/// Classification of a residue modulo a prime `q = 1 (mod 8)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ResidueClass {
    Zero,
    NonResidue,
    SquareNotFourth,
    FourthPower,
}

pub fn power_residue_class(a: i128, q: u64) -> Result<ResidueClass> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q % 8 != 1 {
        return Err(Error::NotOneModEight(q));
    }
    let r = reduce(a, q);
    Ok(if r == 0 {
        ResidueClass::Zero
    } else if pow_mod(r, (q - 1) / 2, q) != 1 {
        ResidueClass::NonResidue
    } else if pow_mod(r, (q - 1) / 4, q) != 1 {
        ResidueClass::SquareNotFourth
    } else {
        ResidueClass::FourthPower
    })
}

/// Möbius function and divisor count.
pub fn moebius_tau(n: u64) -> (i32, u32) {
    assert!(n >= 1, "moebius_tau needs n >= 1");
    let pairs = factor_u64(n);
    let mu = if pairs.iter().any(|&(_, e)| e > 1) {
        0
    } else if pairs.len() % 2 == 0 {
        1
    } else {
        -1
    };
    let tau = pairs.iter().map(|&(_, e)| e + 1).product();
    (mu, tau)
}

/// Smallest primitive root of an odd prime.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = distinct_primes(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&f| pow_mod(g, (p - 1) / f, p) != 1))
        .expect("primes have primitive roots")
}

pub fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Largest `x >= 0` with `k * x^2 <= bound`, for `k >= 1`.
pub fn max_with_square_at_most(k: u128, bound: u128) -> u128 {
    isqrt(bound / k)
}

/// Squarefree kernel of a nonzero integer (sign kept).
pub fn squarefree_kernel(n: i64) -> Result<i64> {
    let f = factorize(n)?;
    Ok(f
        .pairs
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .fold(f.sign as i64, |acc, &(p, _)| acc * p as i64))
}

/// Primes up to `n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Smallest-prime-factor table for fast factorization of small integers.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        let limit = limit.max(1);
        let mut spf = vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                let mut j = i;
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Distinct primes of `n`, ascending; `n` must be within the table.
    pub fn distinct_primes(&self, mut n: usize, out: &mut Vec<u64>) {
        out.clear();
        while n > 1 {
            let p = self.spf[n] as usize;
            out.push(p as u64);
            while n % p == 0 {
                n /= p;
            }
        }
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        let one = factorize(1).unwrap();
        assert_eq!((one.sign, one.pairs.len()), (1, 0));
        let f = factorize(-12).unwrap();
        assert_eq!(f.sign, -1);
        assert_eq!(f.pairs, vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(578).unwrap().pairs, vec![(2, 1), (17, 2)]);
        assert_eq!(factorize(0), Err(Error::ZeroInput));
    }

    #[test]
    fn factorize_large_semiprime() {
        let (p, q) = (1_000_000_007u64, 998_244_353u64);
        let f = factorize((p * q) as i64).unwrap();
        assert_eq!(f.pairs, vec![(q, 1), (p, 1)]);
        let big = 4_611_686_014_132_420_609i64; // (2^31 - 1)^2
        assert_eq!(factorize(big).unwrap().pairs, vec![(2_147_483_647, 2)]);
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(2, 17).unwrap(), 1);
        assert_eq!(jacobi(3, 17).unwrap(), -1);
        for m in (1..60).step_by(2) {
            assert_eq!(jacobi(1, m).unwrap(), 1);
        }
        assert_eq!(jacobi(-1, 17).unwrap(), 1);
        assert_eq!(jacobi(5, 15).unwrap(), 0);
        assert!(jacobi(3, 8).is_err());
        assert!(jacobi(3, -5).is_err());
    }

    #[test]
    fn jacobi_three_mod_seventeen_by_search() {
        assert!((0..17u64).all(|x| x * x % 17 != 3));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(valuation(578, 17).unwrap(), 2);
        assert_eq!(valuation(5, 7).unwrap(), 0);
        assert_eq!(valuation(-48, 2).unwrap(), 4);
        assert_eq!(valuation(0, 3), Err(Error::ZeroInput));
    }

    #[test]
    fn sqrt_mod_examples() {
        assert_eq!(sqrt_mod(1, 5, 3), Some(1));
        assert_eq!(sqrt_mod(17, 2, 3), Some(1));
        let r = sqrt_mod(2, 7, 2).unwrap();
        assert!(r == 10 || r == 39, "got {r}");
        assert_eq!(r * r % 49, 2);
        assert_eq!(sqrt_mod(3, 2, 3), None);
        assert_eq!(sqrt_mod(3, 17, 1), None);
    }

    #[test]
    fn sqrt_mod_matches_enumeration() {
        for (p, k) in [(2u64, 1u32), (2, 2), (2, 3), (2, 4), (2, 6), (3, 3), (5, 2), (7, 2), (17, 2), (3, 5)] {
            let m = p.pow(k);
            let squares: std::collections::HashSet<u64> = (0..m).map(|x| x * x % m).collect();
            for a in 0..m {
                match sqrt_mod(a as i128, p, k) {
                    Some(r) => assert_eq!(r * r % m, a, "p={p} k={k} a={a}"),
                    None => assert!(!squares.contains(&a), "p={p} k={k} a={a}"),
                }
            }
        }
    }

    #[test]
    fn residue_classes_mod_17() {
        use ResidueClass::*;
        assert_eq!(power_residue_class(13, 17).unwrap(), FourthPower);
        assert_eq!(power_residue_class(2, 17).unwrap(), SquareNotFourth);
        assert_eq!(power_residue_class(17, 17).unwrap(), Zero);
        assert_eq!(power_residue_class(3, 17).unwrap(), NonResidue);
        assert!(power_residue_class(2, 13).is_err());
        let s: Vec<i128> = (1..17)
            .filter(|&a| power_residue_class(a, 17).unwrap() == SquareNotFourth)
            .collect();
        assert_eq!(s, vec![2, 8, 9, 15]);
    }

    #[test]
    fn moebius_tau_examples() {
        assert_eq!(moebius_tau(1), (1, 1));
        assert_eq!(moebius_tau(30), (-1, 8));
        assert_eq!(moebius_tau(4), (0, 3));
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(17), 3);
        assert_eq!(primitive_root(41), 6);
        assert_eq!(primitive_root(7), 3);
    }

    #[test]
    fn spf_sieve_agrees_with_factor() {
        let s = SpfSieve::new(2000);
        let mut buf = Vec::new();
        for n in 1..=2000u64 {
            s.distinct_primes(n as usize, &mut buf);
            assert_eq!(buf, distinct_primes(n));
        }
    }

    #[test]
    fn squarefree_kernels() {
        assert_eq!(squarefree_kernel(-12).unwrap(), -3);
        assert_eq!(squarefree_kernel(289 * 17).unwrap(), 17);
        assert_eq!(squarefree_kernel(36).unwrap(), 1);
    }
}
