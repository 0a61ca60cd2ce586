//! Self-check suites: algebraic identities and cross-route oracles.

use num_complex::Complex64;
use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{power_residue_class, ResidueClass};
use crate::brauer::{hilbert_symbol, relevant_places, Invariant};
use crate::census::{
    beta_moebius, count_nbr_characters, count_nbr_direct, count_nbr_rearranged, decompose_triple,
    delta_rewrite, indicator_beta, indicator_delta, recompose_triple, sum_s_direct, CharacterTable,
};
use crate::constants::dirichlet_l1;
use crate::error::{Error, Result};
use crate::local::{family_local_criterion, solvable_everywhere, FamilyInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Oracles,
    All,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub cases: u64,
    pub detail: String,
}

fn check(name: &str, cases: u64, failures: Vec<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed: failures.is_empty(),
        cases,
        detail: failures.into_iter().take(3).collect::<Vec<_>>().join("; "),
    }
}

/// Four-fold Moebius encoding of pairwise coprimality on `[1, n]^3`.
pub fn beta_encoding(n: u64) -> CheckResult {
    let bad: Vec<String> = (1..=n)
        .into_par_iter()
        .flat_map_iter(|x| {
            (1..=n).flat_map(move |y| {
                (1..=n).filter_map(move |z| {
                    (beta_moebius(x, y, z) != i64::from(indicator_beta(x, y, z)))
                        .then(|| format!("({x},{y},{z})"))
                })
            })
        })
        .collect();
    check("beta_encoding", n * n * n, bad)
}

/// Character rewrite of `delta(u; v)` for `u <= n`, `0 < |v| <= n`.
pub fn delta_rewrite_check(n: u64) -> Result<CheckResult> {
    let mut bad = Vec::new();
    let mut cases = 0;
    for u in 1..=n {
        for v in -(n as i64)..=(n as i64) {
            if v == 0 {
                continue;
            }
            cases += 1;
            if delta_rewrite(u, v)? != Ratio::from_integer(i64::from(indicator_delta(u, v))) {
                bad.push(format!("({u},{v})"));
            }
        }
    }
    Ok(check("delta_rewrite", cases, bad))
}

/// `sum_chi conj(chi(s)) chi(a) = (q-1) [a = s]` for all units.
pub fn character_orthogonality(q: u64) -> Result<CheckResult> {
    let t = CharacterTable::new(q)?;
    let mut bad = Vec::new();
    let order = t.order();
    for a in 1..q as i128 {
        for s in 1..q as i128 {
            let sum: Complex64 = (0..order).map(|j| t.value(j, s).conj() * t.value(j, a)).sum();
            let expect = if a == s { order as f64 } else { 0.0 };
            if (sum - Complex64::new(expect, 0.0)).norm() > 1e-9 {
                bad.push(format!("(a={a}, s={s})"));
            }
        }
    }
    if t.len() as u64 != q - 1 {
        bad.push(format!("{} characters", t.len()));
    }
    Ok(check("character_orthogonality", (q - 1) * (q - 1), bad))
}

/// `S(X,Y,Z;k,l,m)` under the six simultaneous permutations of `(X,k), (Y,l), (Z,m)`.
pub fn sum_s_symmetry(samples: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for _ in 0..samples {
        let b: [u64; 3] = std::array::from_fn(|_| rng.gen_range(1..=15));
        let k: [i64; 3] = std::array::from_fn(|_| {
            let v = rng.gen_range(1..=12i64);
            if rng.gen_bool(0.5) { v } else { -v }
        });
        let base = sum_s_direct(b, k, false)?;
        let wbase = sum_s_direct(b, k, true)?;
        for p in PERMS {
            let pb = p.map(|i| b[i]);
            let pk = p.map(|i| k[i]);
            if sum_s_direct(pb, pk, false)? != base || sum_s_direct(pb, pk, true)? != wbase {
                bad.push(format!("{b:?} {k:?} -> {p:?}"));
            }
        }
    }
    Ok(check("sum_s_symmetry", samples as u64, bad))
}

/// Round trip over all triples with `|a|, |b|, |c| <= n`, `n = 1` and a decomposition.
pub fn triple_round_trip(n: i64) -> CheckResult {
    let mut bad = Vec::new();
    let mut cases = 0;
    for a in -n..=n {
        for b in -n..=n {
            for c in -n..=n {
                if a * b * c == 0 {
                    continue;
                }
                match decompose_triple(a, b, c, 1) {
                    Ok(t) => {
                        cases += 1;
                        let odd_sqfree = [t.u12, t.u13, t.u23]
                            .iter()
                            .all(|&u| u % 2 == 1 && crate::arith::moebius_tau(u).0 != 0);
                        if recompose_triple(&t) != Ok((a, b, c)) || !odd_sqfree {
                            bad.push(format!("({a},{b},{c})"));
                        }
                    }
                    Err(Error::NoDecomposition(_)) | Err(Error::OddInAllThree(_)) => {}
                    Err(e) => bad.push(format!("({a},{b},{c}): {e}")),
                }
            }
        }
    }
    check("triple_round_trip", cases, bad)
}

/// Hilbert reciprocity on random rational pairs with parts `<= 100`.
pub fn hilbert_product_formula(samples: usize, seed: u64) -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let draw = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(1..=100i64) * if rng.gen_bool(0.5) { 1 } else { -1 };
        BigRational::new(n.into(), rng.gen_range(1..=100i64).into())
    };
    for _ in 0..samples {
        let (u, v) = (draw(&mut rng), draw(&mut rng));
        let mut total = Invariant::Zero;
        for place in relevant_places(&u, &v)? {
            total = total + Invariant::from_symbol(hilbert_symbol(&u, &v, place)?);
        }
        if total != Invariant::Zero {
            bad.push(format!("({u}, {v})"));
        }
    }
    Ok(check("hilbert_product_formula", samples as u64, bad))
}

/// Direct, rearranged and character routes agree exactly.
pub fn route_equality(bs: &[u64], qs: &[u64]) -> Result<CheckResult> {
    let mut bad = Vec::new();
    for &q in qs {
        for &b in bs {
            let d = count_nbr_direct(b, q, 1)?.count;
            let r = count_nbr_rearranged(b, q, 1)?.count;
            let c = count_nbr_characters(b, q, 1)?.count;
            if d != r || d != c {
                bad.push(format!("B={b} q={q}: {d} {r} {c}"));
            }
        }
    }
    Ok(check("route_equality", (bs.len() * qs.len()) as u64, bad))
}

/// Closed-form family criterion against the exhaustive local decider.
pub fn family_criterion_oracle(q: u64, max: i64) -> Result<CheckResult> {
    let mut bad = Vec::new();
    let mut cases = 0;
    for a in 1..=max {
        for c in 1..=max {
            for d in 1..=max {
                for e in 1..=max {
                    let Ok(f) = FamilyInstance::new(q, a, c, d, e) else { continue };
                    cases += 1;
                    if family_local_criterion(&f) != solvable_everywhere(&f.quadric()?)?.0 {
                        bad.push(format!("{f:?}"));
                    }
                }
            }
        }
    }
    Ok(check("family_criterion_oracle", cases, bad))
}

/// `S mod q` has `(q-1)/4` elements.
pub fn s_set_size(q: u64) -> Result<CheckResult> {
    let mut n = 0;
    for r in 0..q {
        if power_residue_class(r as i128, q)? == ResidueClass::SquareNotFourth {
            n += 1;
        }
    }
    let bad = if n == (q - 1) / 4 { vec![] } else { vec![format!("|S| = {n}")] };
    Ok(check("s_set_size", q, bad))
}

/// `L(psi, 1)` for `q = 17` against `2 log(4 + sqrt 17) / sqrt 17`.
pub fn l_value_oracle() -> Result<CheckResult> {
    let l = dirichlet_l1(17)?.value;
    let exact = 2.0 * (4.0 + 17f64.sqrt()).ln() / 17f64.sqrt();
    let bad = if (l - exact).abs() < 1e-8 { vec![] } else { vec![format!("{l} vs {exact}")] };
    Ok(check("l_value_oracle", 1, bad))
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    if matches!(suite, Suite::Identities | Suite::All) {
        out.push(beta_encoding(200));
        out.push(delta_rewrite_check(200)?);
        out.push(character_orthogonality(17)?);
        out.push(sum_s_symmetry(50, seed)?);
        out.push(triple_round_trip(60));
    }
    if matches!(suite, Suite::Oracles | Suite::All) {
        out.push(s_set_size(17)?);
        out.push(hilbert_product_formula(1000, seed)?);
        out.push(route_equality(&[100, 578, 1000, 10_000], &[17, 41])?);
        out.push(family_criterion_oracle(17, 6)?);
        out.push(l_value_oracle()?);
    }
    Ok(out)
}
