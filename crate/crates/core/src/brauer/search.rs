//! Exhaustive point searches on `k0 x^2 + k1 y^2 + k2 z^2 = n`.
//!
//! One variable runs in an outer loop, one in an inner loop and the third is
//! solved for with a square test. The loop order is picked from a cost
//! estimate, outer values are filtered by `gcd(k_i, k_s) | n - k_o o^2`, and
//! inner values are restricted to the residue classes modulo
//! `|k_s| / gcd(k_i, k_s)` that make the solved variable integral. Along such
//! a class the solved square changes by an arithmetic progression, so the hot
//! loop has no divisions.

use std::collections::HashMap;
use std::ops::ControlFlow;

use num_integer::Integer;

use super::decomposition::ProjectivePoint;
use crate::arith::isqrt;
use crate::local::QuadricInstance;

const MAX_FILTER_MODULUS: i128 = 1 << 16;
const MAX_OUTER_FILTER: i128 = 1 << 22;

fn ceil_div(a: i128, b: i128) -> i128 {
    -Integer::div_floor(&-a, &b)
}

fn ceil_sqrt(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let r = isqrt(n as u128) as i128;
    if r * r == n {
        r
    } else {
        r + 1
    }
}

const SQUARE_MOD64: u64 = {
    let mut mask = 0u64;
    let mut r = 0;
    while r < 64 {
        mask |= 1 << ((r * r) % 64);
        r += 1;
    }
    mask
};

#[inline]
fn square_root(t: i128) -> Option<i128> {
    if t < 0 || SQUARE_MOD64 >> (t as u64 & 63) & 1 == 0 {
        return None;
    }
    let r = isqrt(t as u128) as i128;
    (r * r == t).then_some(r)
}

#[derive(Debug, Clone, Copy)]
struct Plan {
    outer: usize,
    inner: usize,
    solved: usize,
}

struct Scanner {
    k: [i128; 3],
    n: i128,
    bound: i128,
    plan: Plan,
    g: i128,
    m: i128,
    kig: i128,
    outer_ok: Option<Vec<bool>>,
    residue_sq: Vec<i128>,
    roots: HashMap<i128, Vec<i128>>,
}

impl Scanner {
    fn new(k: [i128; 3], n: i128, bound: i128, plan: Plan) -> Scanner {
        let (ki, ks) = (k[plan.inner], k[plan.solved]);
        let g = ki.gcd(&ks);
        let m = ks.abs() / g;
        let kig = ki / g;
        let outer_ok = (g > 1 && g <= MAX_OUTER_FILTER).then(|| {
            (0..g)
                .map(|r| (n - k[plan.outer] * r * r).rem_euclid(g) == 0)
                .collect()
        });
        let residue_sq = if m > 1 && m <= MAX_FILTER_MODULUS {
            (0..m).map(|r| (kig * r * r).rem_euclid(m)).collect()
        } else {
            Vec::new()
        };
        Scanner {
            k,
            n,
            bound,
            plan,
            g,
            m,
            kig,
            outer_ok,
            residue_sq,
            roots: HashMap::new(),
        }
    }

    fn outer_passes(&self, o: i128) -> bool {
        match &self.outer_ok {
            Some(ok) => ok[(o % self.g) as usize],
            None => (self.n - self.k[self.plan.outer] * o * o) % self.g == 0,
        }
    }

    /// Inclusive range of inner values compatible with both other bounds.
    fn inner_range(&self, r: i128) -> Option<(i128, i128)> {
        let (ki, ks) = (self.k[self.plan.inner], self.k[self.plan.solved]);
        let n2 = self.bound * self.bound;
        let (p1, p2) = {
            let a = r;
            let b = r - ks * n2;
            (a.min(b), a.max(b))
        };
        // ki * i^2 in [p1, p2]
        let (lo2, hi2) = if ki > 0 {
            (ceil_div(p1, ki), Integer::div_floor(&p2, &ki))
        } else {
            (ceil_div(p2, ki), Integer::div_floor(&p1, &ki))
        };
        let hi2 = hi2.min(n2);
        if hi2 < 0 || hi2 < lo2 {
            return None;
        }
        let lo = ceil_sqrt(lo2.max(0));
        let hi = (isqrt(hi2 as u128) as i128).min(self.bound);
        (lo <= hi).then_some((lo, hi))
    }

    fn filtered(&self, lo: i128, hi: i128) -> bool {
        !self.residue_sq.is_empty() && hi - lo >= 2 * self.m
    }

    fn residues(&mut self, rg: i128) -> &Vec<i128> {
        let key = rg.rem_euclid(self.m);
        let table = &self.residue_sq;
        self.roots.entry(key).or_insert_with(|| {
            (0..table.len() as i128)
                .filter(|&r| table[r as usize] == key)
                .collect()
        })
    }

    /// Walks `i = start, start + m, ... <= hi`, calling `f(i, s)` for integral solutions.
    fn walk(
        &self,
        r: i128,
        start: i128,
        hi: i128,
        f: &mut impl FnMut(i128, i128) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let (ki, ks) = (self.k[self.plan.inner], self.k[self.plan.solved]);
        let num = r - ki * start * start;
        if num % ks != 0 {
            return ControlFlow::Continue(());
        }
        let mut t = num / ks;
        // t(i + m) - t(i) = -ki (2 i m + m^2) / ks = -sign(ks) kig (2 i + m)
        let step = self.m;
        let sign = if ks > 0 { 1 } else { -1 };
        let mut delta = sign * self.kig * (2 * start + step);
        let dd = sign * self.kig * 2 * step;
        let mut i = start;
        while i <= hi {
            if let Some(s) = square_root(t) {
                if s <= self.bound {
                    f(i, s)?;
                }
            }
            t -= delta;
            delta += dd;
            i += step;
        }
        ControlFlow::Continue(())
    }

    fn scan_outer(
        &mut self,
        o: i128,
        f: &mut impl FnMut(i128, i128) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if !self.outer_passes(o) {
            return ControlFlow::Continue(());
        }
        let r = self.n - self.k[self.plan.outer] * o * o;
        let Some((lo, hi)) = self.inner_range(r) else {
            return ControlFlow::Continue(());
        };
        if self.filtered(lo, hi) {
            let m = self.m;
            let roots = self.residues(r / self.g).clone();
            for res in roots {
                let start = lo + (res - lo).rem_euclid(m);
                self.walk(r, start, hi, f)?;
            }
            ControlFlow::Continue(())
        } else if self.m == 1 {
            self.walk(r, lo, hi, f)
        } else {
            for start in lo..(lo + self.m).min(hi + 1) {
                self.walk(r, start, hi, f)?;
            }
            ControlFlow::Continue(())
        }
    }

    fn estimated_cost(&self) -> f64 {
        let samples = 24;
        let mut total = 0.0;
        for j in 0..samples {
            let o = self.bound * j / (samples - 1).max(1);
            let r = self.n - self.k[self.plan.outer] * o * o;
            if let Some((lo, hi)) = self.inner_range(r) {
                let len = (hi - lo + 1) as f64;
                total += if self.filtered(lo, hi) {
                    let key = (r / self.g).rem_euclid(self.m);
                    let roots = self.residue_sq.iter().filter(|&&v| v == key).count();
                    len * roots as f64 / self.m as f64 + roots as f64
                } else {
                    len
                };
            }
        }
        let outer_frac = match &self.outer_ok {
            Some(ok) => ok.iter().filter(|&&b| b).count() as f64 / ok.len() as f64,
            None => 1.0,
        };
        outer_frac * (self.bound + 1) as f64 * (total / samples as f64 + 1.0)
    }
}

const ORDERS: [(usize, usize, usize); 6] = [
    (0, 1, 2),
    (0, 2, 1),
    (1, 0, 2),
    (1, 2, 0),
    (2, 0, 1),
    (2, 1, 0),
];

fn best_scanner(k: [i128; 3], n: i128, bound: i128) -> Scanner {
    ORDERS
        .iter()
        .map(|&(outer, inner, solved)| {
            let s = Scanner::new(k, n, bound, Plan { outer, inner, solved });
            let c = s.estimated_cost();
            (c, s)
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .unwrap()
        .1
}

/// Calls `f` on every nonnegative solution with all coordinates `<= bound`.
///
/// Solutions arrive grouped by the outer variable in increasing order; the
/// returned index names that variable.
pub(crate) fn scan_nonnegative(
    k: [i64; 3],
    n: i64,
    bound: u64,
    mut f: impl FnMut(usize, [u64; 3]) -> ControlFlow<()>,
) {
    let k = k.map(i128::from);
    let bound = bound as i128;
    let mut sc = best_scanner(k, n as i128, bound);
    let plan = sc.plan;
    for o in 0..=bound {
        let mut cb = |i: i128, s: i128| {
            let mut pt = [0u64; 3];
            pt[plan.outer] = o as u64;
            pt[plan.inner] = i as u64;
            pt[plan.solved] = s as u64;
            f(plan.outer, pt)
        };
        if sc.scan_outer(o, &mut cb).is_break() {
            return;
        }
    }
}

/// First integral point in the order (|x|, x, y, z) with coordinates bounded by `bound`.
pub fn integral_point_search(q: &QuadricInstance, bound: u64) -> Option<[i64; 3]> {
    // Among solutions with minimal |x| the first has x = -x0, then the most negative y, then z.
    let mut best: Option<[u64; 3]> = None;
    scan_nonnegative(q.coefficients(), q.n, bound, |outer, pt| {
        if outer == 0 && best.is_some_and(|b| pt[0] > b[0]) {
            return ControlFlow::Break(());
        }
        let better = match best {
            None => true,
            Some(b) => (pt[0], std::cmp::Reverse(pt[1]), std::cmp::Reverse(pt[2]))
                < (b[0], std::cmp::Reverse(b[1]), std::cmp::Reverse(b[2])),
        };
        if better {
            best = Some(pt);
        }
        ControlFlow::Continue(())
    });
    best.map(|p| p.map(|c| -(c as i64)))
}

/// Some nonzero rational point of `Q(x,y,z) = n t^2` with coordinates of height `<= bound`.
///
/// Hyperplane sections `x_k = 0` are searched completely, points with all
/// coordinates nonzero only up to a small shell.
pub fn find_rational_point(q: &QuadricInstance, bound: u64) -> Option<ProjectivePoint> {
    let g = [q.a, q.b, q.c, -q.n];
    let mut h = 10u64.min(bound);
    loop {
        for zero in [3usize, 2, 1, 0] {
            let idx: Vec<usize> = (0..4).filter(|&i| i != zero).collect();
            let k = [g[idx[0]], g[idx[1]], g[idx[2]]];
            let mut found = None;
            scan_nonnegative(k, 0, h, |_, pt| {
                if pt == [0, 0, 0] {
                    return ControlFlow::Continue(());
                }
                found = Some(pt);
                ControlFlow::Break(())
            });
            if let Some(pt) = found {
                let mut c = [0i64; 4];
                for (j, &i) in idx.iter().enumerate() {
                    c[i] = pt[j] as i64;
                }
                return ProjectivePoint::from_ints(c).ok();
            }
        }
        let shell = h.min(40);
        for t in 1..=shell {
            let Some(nt) = q.n.checked_mul((t * t) as i64) else {
                break;
            };
            if let Some(pt) = integral_point_search(&QuadricInstance { n: nt, ..*q }, shell) {
                return ProjectivePoint::from_ints([pt[0], pt[1], pt[2], t as i64]).ok();
            }
        }
        if h >= bound {
            return None;
        }
        h = (h * 10).min(bound);
    }
}
