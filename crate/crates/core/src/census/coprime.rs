//! Counting pairwise coprime triples in a box with side coprimality conditions.

use crate::arith::{distinct_primes, SpfSieve};

/// Factors every integer up to a fixed limit into distinct primes.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    sieve: SpfSieve,
}

impl PrimeTable {
    pub fn new(limit: usize) -> Self {
        PrimeTable {
            sieve: SpfSieve::new(limit.max(2)),
        }
    }

    pub fn limit(&self) -> usize {
        self.sieve.limit()
    }

    pub fn primes_into(&self, n: u64, out: &mut Vec<u64>) {
        out.clear();
        if n as usize <= self.sieve.limit() {
            self.sieve.distinct_primes(n as usize, out);
        } else {
            out.extend(distinct_primes(n));
        }
    }

    pub fn primes(&self, n: u64) -> Vec<u64> {
        let mut v = Vec::new();
        self.primes_into(n, &mut v);
        v
    }
}

/// `L_{a,b,c}(X,Y,Z)`: triples `x <= X, y <= Y, z <= Z`, pairwise coprime, with
/// `(x,a) = (y,b) = (z,c) = 1`.
pub fn coprime_triple_count(bounds: [u64; 3], coefs: [u64; 3]) -> u64 {
    let table = PrimeTable::new(*bounds.iter().max().unwrap() as usize);
    count_with(&table, bounds, coefs)
}

/// Same as [`coprime_triple_count`] with a caller-supplied prime table.
///
/// The smallest bound is the outer variable. For each admissible `x` the
/// counts `N(t) = #{z <= t : (z, cx) = 1}` are tabulated once, and each `y`
/// contributes `sum_{g | rad(y)} mu(g) N(Z/g)` over primes of `y` not in `c`.
pub fn count_with(table: &PrimeTable, bounds: [u64; 3], coefs: [u64; 3]) -> u64 {
    if bounds.contains(&0) {
        return 0;
    }
    let mut idx = [0usize, 1, 2];
    idx.sort_by_key(|&i| bounds[i]);
    let [ix, iy, iz] = idx;
    let (xb, yb, zb) = (bounds[ix], bounds[iy], bounds[iz] as usize);
    let (ca, cb, cc) = (coefs[ix], coefs[iy], coefs[iz]);
    let pc = table.primes(cc);

    // y <= Y coprime to b, with their primes outside c
    let mut y_primes: Vec<u64> = Vec::new();
    let mut y_all: Vec<u64> = Vec::new();
    let mut y_spans = Vec::new();
    let mut buf = Vec::new();
    for y in 1..=yb {
        table.primes_into(y, &mut buf);
        if buf.iter().any(|&p| cb % p == 0) {
            continue;
        }
        let all_start = y_all.len();
        y_all.extend_from_slice(&buf);
        let start = y_primes.len();
        y_primes.extend(buf.iter().filter(|&&p| cc % p != 0));
        y_spans.push((all_start, y_all.len(), start, y_primes.len()));
    }

    let mut alive = vec![true; zb + 1];
    let mut prefix = vec![0u32; zb + 1];
    let mut xp = Vec::new();
    let mut total = 0u64;
    for x in 1..=xb {
        table.primes_into(x, &mut xp);
        if xp.iter().any(|&p| ca % p == 0) {
            continue;
        }
        alive.fill(true);
        for &p in xp.iter().chain(&pc) {
            for m in (p as usize..=zb).step_by(p as usize) {
                alive[m] = false;
            }
        }
        let mut run = 0;
        for t in 1..=zb {
            run += u32::from(alive[t]);
            prefix[t] = run;
        }
        for &(all_start, all_end, start, end) in &y_spans {
            if y_all[all_start..all_end].iter().any(|&p| x % p == 0) {
                continue;
            }
            let ps = &y_primes[start..end];
            let mut s = 0i64;
            for mask in 0u32..(1 << ps.len()) {
                let mut g = 1usize;
                for (b, &p) in ps.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        g = g.saturating_mul(p as usize);
                    }
                }
                if g > zb {
                    continue;
                }
                let term = prefix[zb / g] as i64;
                s += if mask.count_ones() % 2 == 0 { term } else { -term };
            }
            total += s as u64;
        }
    }
    total
}
