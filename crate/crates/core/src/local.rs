//! Local solvability of diagonal ternary quadrics `a x^2 + b y^2 + c z^2 = n`
//! over the reals and over every `Z_p`.
//!
//! The p-adic decider is an exhaustive, certified Hensel search. A point
//! `x mod p^M` lifts to `Z_p` as soon as `F(x) = 0 (mod p^M)` and some
//! partial derivative `2 a_k x_k` has valuation `v` with `2v + 1 <= M`.
//! Conversely every `Z_p`-point has such a reduction with
//! `v <= v_p(2) + max(v_p(a), v_p(b), v_p(c), v_p(n))`, so exhausting all
//! residues up to the certified depth `K_p` decides solvability.
//!
//! Rather than walking residues coordinate by coordinate, the search fixes
//! the coordinate `h` realising the minimal derivative valuation, the
//! valuation of every coordinate, and then only enumerates unit parts to
//! the precision that actually influences `F mod p^M`. Sums of the
//! remaining two terms are invariant under multiplication by unit squares,
//! so membership is memoised per square class.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::arith::{
    self, checked_pow, inv_mod, is_prime, jacobi, jacobi_odd, mul_mod, reduce, split_valuation,
    sqrt_mod,
};
use crate::error::{Error, Result};

/// A place of `Q`: the real place or a finite prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Real,
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => f.write_str("real"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// The surface `a x^2 + b y^2 + c z^2 = n` with nonzero integer data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct QuadricInstance {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub n: i64,
}

impl QuadricInstance {
    pub fn new(a: i64, b: i64, c: i64, n: i64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 || n == 0 {
            return Err(Error::ZeroInput);
        }
        Ok(QuadricInstance { a, b, c, n })
    }

    pub fn coefficients(&self) -> [i64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn is_indefinite(&self) -> bool {
        let pos = self.coefficients().iter().filter(|&&k| k > 0).count();
        pos != 0 && pos != 3
    }

    /// `H(a, b, c) = max(|a|, |b|, |c|)`.
    pub fn height(&self) -> u64 {
        self.coefficients()
            .iter()
            .map(|k| k.unsigned_abs())
            .max()
            .unwrap()
    }

    /// `a x^2 + b y^2 + c z^2 - n`.
    pub fn residual(&self, x: i128, y: i128, z: i128) -> i128 {
        self.a as i128 * x * x + self.b as i128 * y * y + self.c as i128 * z * z - self.n as i128
    }

    /// Distinct primes dividing `2abcn`.
    pub fn relevant_primes(&self) -> Vec<u64> {
        let mut ps = vec![2u64];
        for k in [self.a, self.b, self.c, self.n] {
            ps.extend(arith::distinct_primes(k.unsigned_abs()));
        }
        ps.sort_unstable();
        ps.dedup();
        ps
    }
}

impl fmt::Display for QuadricInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}x^2 + {}y^2 + {}z^2 = {}",
            self.a, self.b, self.c, self.n
        )
    }
}

/// Parameters `(q; a, c, d, e)` of `a q^2 c^2 x^2 - a d^2 y^2 + e^2 q z^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyInstance {
    pub q: u64,
    pub a: i64,
    pub c: i64,
    pub d: i64,
    pub e: i64,
}

impl FamilyInstance {
    pub fn new(q: u64, a: i64, c: i64, d: i64, e: i64) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q % 8 != 1 {
            return Err(Error::NotOneModEight(q));
        }
        if [a, c, d, e].contains(&0) {
            return Err(Error::ZeroInput);
        }
        let (uc, ud, ue) = (c.unsigned_abs(), d.unsigned_abs(), e.unsigned_abs());
        if uc.gcd(&ud) != 1 || uc.gcd(&ue) != 1 || ud.gcd(&ue) != 1 {
            return Err(Error::InvalidFamily(format!(
                "c={c}, d={d}, e={e} are not pairwise coprime"
            )));
        }
        let f = FamilyInstance { q, a, c, d, e };
        f.quadric()?;
        Ok(f)
    }

    /// The member surface `(a q^2 c^2, -a d^2, e^2 q; 1)`.
    pub fn quadric(&self) -> Result<QuadricInstance> {
        let q = self.q as i64;
        let of = || Error::Overflow(format!("family coefficients of {self:?}"));
        let a1 = self
            .a
            .checked_mul(q.checked_mul(q).ok_or_else(of)?)
            .and_then(|v| v.checked_mul(self.c * self.c))
            .ok_or_else(of)?;
        let b1 = self
            .a
            .checked_mul(self.d.checked_mul(self.d).ok_or_else(of)?)
            .and_then(|v| v.checked_neg())
            .ok_or_else(of)?;
        let c1 = self
            .e
            .checked_mul(self.e)
            .and_then(|v| v.checked_mul(q))
            .ok_or_else(of)?;
        QuadricInstance::new(a1, b1, c1, 1)
    }
}

/// A residue triple `x mod p^k` certified to lift to a `Z_p`-point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub point: [u64; 3],
    pub exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalVerdict {
    pub place: Place,
    pub solvable: bool,
    pub witness: Option<Witness>,
    /// Exponent `k` exhausted for a negative verdict (the certified bound `K_p`).
    pub searched_depth: u32,
}

pub fn solvable_real(q: &QuadricInstance) -> bool {
    q.is_indefinite() || q.a.signum() == q.n.signum()
}

/// `K_p = 2 max(v_p(a), v_p(b), v_p(c), v_p(n)) + 2 v_p(2) + 3`.
pub fn certified_depth(q: &QuadricInstance, p: u64) -> u32 {
    let vmax = [q.a, q.b, q.c, q.n]
        .iter()
        .map(|&k| split_valuation(k as i128, p).0)
        .max()
        .unwrap();
    2 * vmax + if p == 2 { 2 } else { 0 } + 3
}

pub fn solvable_at_prime(q: &QuadricInstance, p: u64) -> Result<LocalVerdict> {
    let depth = certified_depth(q, p);
    search_at_depth(q, p, depth)
}

/// Exhaustive Hensel search over every residue pattern of precision at most `p^depth`.
pub fn search_at_depth(q: &QuadricInstance, p: u64, depth: u32) -> Result<LocalVerdict> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let coefs = q.coefficients();
    let vals: [u32; 3] = coefs.map(|k| split_valuation(k as i128, p).0);
    let v2 = u32::from(p == 2);

    // (M, h, l_h) for every Hensel coordinate h and valuation l_h with M <= depth.
    let mut patterns = Vec::new();
    for h in 0..3 {
        let mut l = 0;
        loop {
            let m = 2 * (v2 + vals[h] + l) + 1;
            if m > depth {
                break;
            }
            patterns.push((m, h, l));
            l += 1;
        }
    }
    patterns.sort_unstable();

    for &(m, h, lh) in &patterns {
        let pm = checked_pow(p, m)
            .ok_or_else(|| Error::Overflow(format!("{p}^{m} exceeds 63 bits")))?;
        let ctx = Ctx { p, m, pm, v2 };
        let target = reduce(q.n as i128, pm);
        let others: Vec<usize> = (0..3).filter(|&k| k != h).collect();
        let opts: Vec<Vec<Option<u32>>> = others
            .iter()
            .map(|&k| {
                // argmin coordinate: v2 + e_k + l_k >= v2 + e_h + l_h
                let lo = (lh + vals[h]).saturating_sub(vals[k]);
                let mut o: Vec<Option<u32>> = (lo..)
                    .take_while(|&l| vals[k] + 2 * l < m)
                    .map(Some)
                    .collect();
                o.push(None);
                o
            })
            .collect();
        let th = Term::new(&ctx, coefs[h], vals[h], Some(lh));
        for &oj in &opts[0] {
            for &ok in &opts[1] {
                let tj = Term::new(&ctx, coefs[others[0]], vals[others[0]], oj);
                let tk = Term::new(&ctx, coefs[others[1]], vals[others[1]], ok);
                let mut terms = [(h, &th), (others[0], &tj), (others[1], &tk)];
                if let Some(coords) = solve_pattern(&ctx, &mut terms, target) {
                    let w = Witness {
                        point: coords,
                        exponent: m,
                    };
                    debug_assert!(witness_is_valid(q, p, &w));
                    return Ok(LocalVerdict {
                        place: Place::Prime(p),
                        solvable: true,
                        witness: Some(w),
                        searched_depth: m,
                    });
                }
            }
        }
    }
    Ok(LocalVerdict {
        place: Place::Prime(p),
        solvable: false,
        witness: None,
        searched_depth: depth,
    })
}

struct Ctx {
    p: u64,
    m: u32,
    pm: u64,
    v2: u32,
}

/// The value set `{ a p^{2l} u^2 mod p^M : u unit }`, or `{0}` when `l` is `None`.
struct Term {
    p: u64,
    pm: u64,
    m: u32,
    ell: Option<u32>,
    shift_val: u32,
    unit_inv: u64,
    shift: u64,
    scale: u64,
    precision: u64,
}

impl Term {
    fn new(ctx: &Ctx, coef: i64, val: u32, ell: Option<u32>) -> Term {
        let p = ctx.p;
        let (shift_val, unit_inv, shift, scale, precision) = match ell {
            None => (ctx.m, 0, 0, 0, 1),
            Some(l) => {
                let sv = val + 2 * l;
                debug_assert!(sv < ctx.m);
                let rest = ctx.m - sv;
                let s = std::cmp::max(rest.saturating_sub(ctx.v2), rest.div_ceil(2)).max(1);
                let unit = split_valuation(coef as i128, p).1;
                let rest_mod = p.pow(rest);
                let unit_inv = inv_mod(reduce(unit, rest_mod), rest_mod).expect("unit");
                let shift = mul_mod(reduce(coef as i128, ctx.pm), p.pow(2 * l) % ctx.pm, ctx.pm);
                (sv, unit_inv, shift, p.pow(l) % ctx.pm, p.pow(s))
            }
        };
        Term {
            p,
            pm: ctx.pm,
            m: ctx.m,
            ell,
            shift_val,
            unit_inv,
            shift,
            scale,
            precision,
        }
    }

    fn size(&self) -> u64 {
        if self.ell.is_none() {
            1
        } else {
            self.precision / 2
        }
    }

    /// Calls `f(value, coordinate)` until it returns true.
    fn find(&self, mut f: impl FnMut(u64, u64) -> bool) -> bool {
        if self.ell.is_none() {
            return f(0, 0);
        }
        let top = std::cmp::max(self.precision / 2, 1);
        for u in 1..=top {
            if u % self.p == 0 {
                continue;
            }
            let value = mul_mod(self.shift, mul_mod(u, u, self.pm), self.pm);
            if f(value, mul_mod(self.scale, u, self.pm)) {
                return true;
            }
        }
        false
    }

    /// A coordinate realising `w` as a value of this term, if any.
    fn root(&self, w: u64) -> Option<u64> {
        if self.ell.is_none() {
            return (w == 0).then_some(0);
        }
        if w == 0 {
            return None;
        }
        let (v, unit) = split_valuation(w as i128, self.p);
        if v != self.shift_val {
            return None;
        }
        let rest = self.m - self.shift_val;
        let rest_mod = self.p.pow(rest);
        let t = mul_mod(reduce(unit, rest_mod), self.unit_inv, rest_mod);
        let r = sqrt_mod(t as i128, self.p, rest)?;
        Some(mul_mod(self.scale, r, self.pm))
    }
}

// Square class of a residue mod p^M under multiplication by unit squares.
fn class_key(ctx: &Ctx, r: u64) -> (u32, u64) {
    if r == 0 {
        return (ctx.m, 0);
    }
    let (v, w) = split_valuation(r as i128, ctx.p);
    let w = w as u64;
    if ctx.p == 2 {
        (v, w % (1 << std::cmp::min(3, ctx.m - v)))
    } else {
        (v, jacobi_odd(w % ctx.p, ctx.p) as i64 as u64)
    }
}

fn solve_pattern(ctx: &Ctx, terms: &mut [(usize, &Term); 3], target: u64) -> Option<[u64; 3]> {
    terms.sort_by_key(|(_, t)| t.size());
    let [(i0, small), (i1, mid), (i2, large)] = *terms;
    let pm = ctx.pm;
    let sub = |a: u64, b: u64| (a + pm - b) % pm;

    let mut memo: HashMap<(u32, u64), bool> = HashMap::new();
    let mut hit = None;
    small.find(|t, x| {
        let r = sub(target, t);
        let ok = *memo
            .entry(class_key(ctx, r))
            .or_insert_with(|| mid.find(|tm, _| large.root(sub(r, tm)).is_some()));
        if ok {
            hit = Some((r, x));
        }
        ok
    });
    let (r, x0) = hit?;
    let mut rest = None;
    mid.find(|tm, xm| {
        if let Some(xl) = large.root(sub(r, tm)) {
            rest = Some((xm, xl));
            return true;
        }
        false
    });
    let (x1, x2) = rest.expect("memoised class must be realisable");
    let mut out = [0u64; 3];
    out[i0] = x0;
    out[i1] = x1;
    out[i2] = x2;
    Some(out)
}

/// Checks `F(w) = 0 mod p^k` and that some `2 a_i w_i` has valuation `<= (k-1)/2`.
pub fn witness_is_valid(q: &QuadricInstance, p: u64, w: &Witness) -> bool {
    let Some(pm) = checked_pow(p, w.exponent) else {
        return false;
    };
    let coefs = q.coefficients();
    let mut sum = 0u64;
    for i in 0..3 {
        let x = w.point[i] % pm;
        sum = (sum + mul_mod(reduce(coefs[i] as i128, pm), mul_mod(x, x, pm), pm)) % pm;
    }
    if sum != reduce(q.n as i128, pm) {
        return false;
    }
    (0..3).any(|i| {
        let x = w.point[i] % pm;
        if x == 0 {
            return false;
        }
        let v = split_valuation(2 * coefs[i] as i128, p).0 + split_valuation(x as i128, p).0;
        2 * v < w.exponent
    })
}

/// Real solvability, then every prime dividing `2abcn`; returns the failing places.
///
/// Primes not dividing `2abcn` always admit a smooth point mod `p`, which lifts.
pub fn solvable_everywhere(q: &QuadricInstance) -> Result<(bool, Vec<Place>)> {
    let mut failing = Vec::new();
    if !solvable_real(q) {
        failing.push(Place::Real);
    }
    for p in q.relevant_primes() {
        if !solvable_at_prime(q, p)?.solvable {
            failing.push(Place::Prime(p));
        }
    }
    Ok((failing.is_empty(), failing))
}

/// Closed-form local criterion for the family: `(a, eq) = 1`, `(d, q) = 1`
/// and `(q/p) = 1` for all odd primes `p | a`.
pub fn family_local_criterion(f: &FamilyInstance) -> bool {
    let q = f.q as i64;
    let a = f.a.unsigned_abs();
    if a.gcd(&(f.e.unsigned_abs())) != 1 || a.gcd(&f.q) != 1 || f.d.unsigned_abs().gcd(&f.q) != 1
    {
        return false;
    }
    arith::distinct_primes(a)
        .into_iter()
        .filter(|&p| p != 2)
        .all(|p| jacobi(q as i128, p as i128) == Ok(1))
}

/// Random residue triples mod `p^k` that satisfy the lifting criterion.
///
/// Each attempt fixes two coordinates at random and solves for the third.
pub fn sample_local_points<R: Rng>(
    q: &QuadricInstance,
    p: u64,
    k: u32,
    count: usize,
    rng: &mut R,
) -> Vec<Witness> {
    let Some(pm) = checked_pow(p, k) else {
        return Vec::new();
    };
    let coefs = q.coefficients();
    let mut out = Vec::new();
    let mut attempts = 0;
    while out.len() < count && attempts < 200 * count.max(1) {
        attempts += 1;
        let h = attempts % 3;
        let mut pt = [0u64; 3];
        let mut rest = reduce(q.n as i128, pm);
        for i in (0..3).filter(|&i| i != h) {
            pt[i] = rng.gen_range(0..pm);
            let term = mul_mod(reduce(coefs[i] as i128, pm), mul_mod(pt[i], pt[i], pm), pm);
            rest = (rest + pm - term) % pm;
        }
        if rest == 0 {
            continue;
        }
        let (ev, eu) = split_valuation(coefs[h] as i128, p);
        let (rv, ru) = split_valuation(rest as i128, p);
        if rv < ev || (rv - ev) % 2 == 1 || rv >= k {
            continue;
        }
        let prec = k - rv;
        let mod_prec = p.pow(prec);
        let Some(inv) = inv_mod(reduce(eu, mod_prec), mod_prec) else {
            continue;
        };
        let t = mul_mod(reduce(ru, mod_prec), inv, mod_prec);
        let Some(r) = sqrt_mod(t as i128, p, prec) else {
            continue;
        };
        pt[h] = mul_mod(p.pow((rv - ev) / 2) % pm, r, pm);
        let w = Witness {
            point: pt,
            exponent: k,
        };
        if witness_is_valid(q, p, &w) {
            out.push(w);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(a: i64, b: i64, c: i64, n: i64) -> QuadricInstance {
        QuadricInstance::new(a, b, c, n).unwrap()
    }

    // Independent oracle: full enumeration of residues mod p^k with the lifting criterion.
    fn brute_solvable(q: &QuadricInstance, p: u64, k: u32) -> bool {
        let pm = p.pow(k);
        for x in 0..pm {
            for y in 0..pm {
                for z in 0..pm {
                    let w = Witness {
                        point: [x, y, z],
                        exponent: k,
                    };
                    if witness_is_valid(q, p, &w) {
                        return true;
                    }
                }
            }
        }
        false
    }

    #[test]
    fn real_place_examples() {
        assert!(!solvable_real(&quad(1, 1, 1, -1)));
        assert!(solvable_real(&quad(2 * 289, -2, 17, 1)));
        assert!(solvable_real(&quad(1, 1, 1, 4)));
        assert!(solvable_real(&quad(-1, -2, -3, -5)));
    }

    #[test]
    fn prime_examples() {
        let v = solvable_at_prime(&quad(1, 1, 1, 1), 5).unwrap();
        assert!(v.solvable);
        assert!(witness_is_valid(&quad(1, 1, 1, 1), 5, &v.witness.unwrap()));

        let fam = quad(2 * 289, -2, 17, 1);
        assert!(solvable_at_prime(&fam, 3).unwrap().solvable);
        assert!(brute_solvable(&fam, 3, 1));

        let v = solvable_at_prime(&quad(4, 4, 4, 1), 2).unwrap();
        assert!(!v.solvable);
        assert_eq!(v.searched_depth, certified_depth(&quad(4, 4, 4, 1), 2));
        assert_eq!(v.searched_depth, 2 * 2 + 2 + 3);
    }

    #[test]
    fn everywhere_examples() {
        assert_eq!(QuadricInstance::new(1, 1, -1, 0), Err(Error::ZeroInput));
        assert_eq!(
            solvable_everywhere(&quad(2 * 289, -2, 17, 1)).unwrap(),
            (true, vec![])
        );
        assert_eq!(
            solvable_everywhere(&quad(1, 1, 1, -1)).unwrap(),
            (false, vec![Place::Real, Place::Prime(2)])
        );
        // x^2 + y^2 + z^2 = 7 fails only at 2.
        assert_eq!(
            solvable_everywhere(&quad(1, 1, 1, 7)).unwrap(),
            (false, vec![Place::Prime(2)])
        );
    }

    #[test]
    fn family_examples() {
        let f = |a, c, d, e| FamilyInstance::new(17, a, c, d, e).unwrap();
        assert!(family_local_criterion(&f(2, 1, 1, 1)));
        assert!(!family_local_criterion(&f(3, 1, 1, 1)));
        assert!(!family_local_criterion(&f(1, 1, 17, 1)));
        assert!(FamilyInstance::new(17, 1, 2, 4, 1).is_err());
        assert!(FamilyInstance::new(13, 1, 1, 1, 1).is_err());
        assert_eq!(f(2, 1, 1, 1).quadric().unwrap(), quad(578, -2, 17, 1));
    }

    #[test]
    fn search_agrees_with_brute_force_small() {
        // Full residue enumeration at the certified depth, small moduli only.
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                for c in [1i64, -3, 4] {
                    if a == 0 || b == 0 {
                        continue;
                    }
                    for n in [1i64, -2, 3] {
                        let q = quad(a, b, c, n);
                        for p in [3u64, 5] {
                            let k = certified_depth(&q, p);
                            if p.pow(3 * k) > 4_000_000 {
                                continue;
                            }
                            let fast = solvable_at_prime(&q, p).unwrap();
                            assert_eq!(fast.solvable, brute_solvable(&q, p, k), "{q} at {p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn two_adic_brute_force() {
        for a in [1i64, 2, 3, 5, 6, -1, -2, 4] {
            for b in [1i64, 3, -1, 2] {
                for c in [1i64, 7, -5] {
                    for n in [1i64, 3, 7, -1, 2] {
                        let q = quad(a, b, c, n);
                        let k = certified_depth(&q, 2);
                        if 1u64 << (3 * k) > 1 << 24 {
                            continue;
                        }
                        let fast = solvable_at_prime(&q, 2).unwrap();
                        assert_eq!(fast.solvable, brute_solvable(&q, 2, k), "{q} at 2");
                    }
                }
            }
        }
    }

    #[test]
    fn unramified_primes_always_solvable() {
        let primes = arith::primes_up_to(50);
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                for c in -10i64..=10 {
                    if a * b * c == 0 {
                        continue;
                    }
                    let q = quad(a, b, c, 1);
                    for &p in &primes {
                        if (2 * a * b * c) % p as i64 == 0 {
                            continue;
                        }
                        assert!(solvable_at_prime(&q, p).unwrap().solvable, "{q} at {p}");
                    }
                }
            }
        }
    }

    #[test]
    fn sampled_points_are_valid() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let q = quad(578, -2, 17, 1);
        for p in [2u64, 3, 17] {
            let pts = sample_local_points(&q, p, 3, 20, &mut rng);
            assert!(!pts.is_empty(), "no samples at {p}");
            assert!(pts.iter().all(|w| witness_is_valid(&q, p, w)));
        }
    }
}
