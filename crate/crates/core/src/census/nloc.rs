//! `N_loc(B)`: everywhere locally soluble indefinite members of `a x^2 + b y^2 + c z^2 = n`.

use std::collections::HashMap;
use std::time::Instant;

use rayon::prelude::*;

use super::nbr::{pool, CountReport, Route};
use crate::arith::{self, jacobi_odd, split_valuation};
use crate::error::{Error, Result};
use crate::local::{solvable_at_prime, QuadricInstance};

// Z_p-solubility only depends on each of a, b, c, n up to unit squares.
type Key = (u64, [(u32, u64); 4]);

fn class_key(p: u64, k: [i64; 4]) -> Key {
    (
        p,
        k.map(|x| {
            let (v, u) = split_valuation(x as i128, p);
            let c = if p == 2 {
                u.rem_euclid(8) as u64
            } else {
                jacobi_odd(u.rem_euclid(p as i128) as u64, p) as i64 as u64
            };
            (v, c)
        }),
    )
}

struct Memo<'a> {
    primes: &'a [Vec<u64>],
    cache: HashMap<Key, bool>,
}

impl Memo<'_> {
    fn primes_of(&self, x: i64) -> &[u64] {
        &self.primes[(x.unsigned_abs()) as usize]
    }

    fn solvable(&mut self, q: &QuadricInstance, n_primes: &[u64]) -> Result<bool> {
        let mut ps: Vec<u64> = vec![2];
        for k in [q.a, q.b, q.c] {
            ps.extend_from_slice(self.primes_of(k));
        }
        ps.extend_from_slice(n_primes);
        ps.sort_unstable();
        ps.dedup();
        for p in ps {
            let key = class_key(p, [q.a, q.b, q.c, q.n]);
            let ok = match self.cache.get(&key) {
                Some(&v) => v,
                None => {
                    let v = solvable_at_prime(q, p)?.solvable;
                    self.cache.insert(key, v);
                    v
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Ordered triples in `[-B, B]^3` with nonzero entries, indefinite, soluble at every place.
pub fn count_nloc(b: u64, n: i64, threads: usize) -> Result<CountReport> {
    let start = Instant::now();
    if b == 0 {
        return Err(Error::OutOfRange("B = 0".into()));
    }
    if n == 0 {
        return Err(Error::ZeroInput);
    }
    let bi = i64::try_from(b).map_err(|_| Error::OutOfRange(b.to_string()))?;
    let primes: Vec<Vec<u64>> = (0..=b).map(|k| if k == 0 { vec![] } else { arith::distinct_primes(k) }).collect();
    let n_primes = arith::distinct_primes(n.unsigned_abs());
    let coords: Vec<i64> = (-bi..=bi).filter(|&x| x != 0).collect();
    let total: Result<u64> = pool(threads)?.install(|| {
        coords
            .par_iter()
            .map(|&a| {
                let mut memo = Memo {
                    primes: &primes,
                    cache: HashMap::new(),
                };
                let mut count = 0u64;
                for &bb in &coords {
                    for &c in &coords {
                        let q = QuadricInstance { a, b: bb, c, n };
                        if q.is_indefinite() && memo.solvable(&q, &n_primes)? {
                            count += 1;
                        }
                    }
                }
                Ok(count)
            })
            .sum()
    });
    Ok(CountReport {
        b,
        q: None,
        n: Some(n),
        count: total?,
        predicted: None,
        elapsed_s: start.elapsed().as_secs_f64(),
        route: Route::Nloc,
        threads,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local::solvable_everywhere;

    fn oracle(b: i64, n: i64) -> u64 {
        let mut c = 0;
        for x in -b..=b {
            for y in -b..=b {
                for z in -b..=b {
                    if x * y * z == 0 {
                        continue;
                    }
                    let q = QuadricInstance::new(x, y, z, n).unwrap();
                    if q.is_indefinite() && solvable_everywhere(&q).unwrap().0 {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn matches_per_triple_decider() {
        for b in 1..=6 {
            assert_eq!(count_nloc(b, 1, 1).unwrap().count, oracle(b as i64, 1), "B={b}");
        }
        assert_eq!(count_nloc(4, 3, 2).unwrap().count, oracle(4, 3));
        assert_eq!(count_nloc(4, -10, 1).unwrap().count, oracle(4, -10));
    }

    #[test]
    fn small_values_and_monotonicity() {
        // every indefinite sign pattern of (+-1, +-1, +-1) represents 1
        assert_eq!(count_nloc(1, 1, 1).unwrap().count, 6);
        let mut prev = 0;
        for b in 1..=8 {
            let c = count_nloc(b, 1, 1).unwrap().count;
            assert!(c >= prev);
            prev = c;
        }
    }
}
