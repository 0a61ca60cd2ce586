//! Quaternion Brauer classes on affine quadrics and the Brauer–Manin pairing.

mod decomposition;
mod hilbert;
mod search;

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;

pub use decomposition::{
    brauer_decomposition, discriminant_class, quadric_decomposition, BrauerDecomposition,
    LinearForm, ProjectivePoint,
};
pub use hilbert::{hilbert_symbol, hilbert_symbol_int, relevant_places, Invariant};
pub use search::{find_rational_point, integral_point_search};

use crate::arith::{self, power_residue_class, split_valuation, ResidueClass};
use crate::error::{Error, Result};
use crate::local::{family_local_criterion, sample_local_points, FamilyInstance, Place, QuadricInstance};

/// Which affine chart the class `(l1/t, d)` is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    L1,
    L2,
}

/// The invariant on a given chart, or `None` when that chart's form vanishes.
///
/// On the surface `l1 l2 = -c0 (l3^2 - d l4^2)`, and the second factor is a
/// norm from `Q(sqrt d)`, so `(l1, d) = (l2, d) (-c0, d)`.
pub fn evaluate_on_chart(
    dec: &BrauerDecomposition,
    point: &[BigRational; 3],
    place: Place,
    chart: Chart,
) -> Result<Option<Invariant>> {
    let x = [
        point[0].clone(),
        point[1].clone(),
        point[2].clone(),
        BigRational::from_integer(1.into()),
    ];
    let d = BigRational::from_integer(dec.d.into());
    let (form, extra) = match chart {
        Chart::L1 => (&dec.l1, None),
        Chart::L2 => (&dec.l2, Some(-dec.c0.clone())),
    };
    let v = form.eval(&x);
    if v.is_zero() {
        return Ok(None);
    }
    let mut s = hilbert_symbol(&v, &d, place)?;
    if let Some(c) = extra {
        s *= hilbert_symbol(&c, &d, place)?;
    }
    Ok(Some(Invariant::from_symbol(s)))
}

/// `inv_v` of the class at an affine point, trying the `l1` chart first.
pub fn evaluate_invariant(
    dec: &BrauerDecomposition,
    point: &[BigRational; 3],
    place: Place,
) -> Result<Invariant> {
    for chart in [Chart::L1, Chart::L2] {
        if let Some(v) = evaluate_on_chart(dec, point, place, chart)? {
            return Ok(v);
        }
    }
    Err(Error::ChartFailure)
}

/// Local invariants of a family member, listed at the real place, 2, q and the
/// primes dividing `acde`; every other place carries `default`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantProfile {
    pub values: BTreeMap<Place, Invariant>,
    pub default: Invariant,
}

impl InvariantProfile {
    pub fn get(&self, place: Place) -> Invariant {
        self.values.get(&place).copied().unwrap_or(self.default)
    }

    /// Sum of all local invariants (the profile is zero away from the listed places).
    pub fn total(&self) -> Invariant {
        self.values.values().copied().sum()
    }

    /// Places with invariant `1/2`, keyed by their display name.
    pub fn nonzero(&self) -> BTreeMap<String, Invariant> {
        self.values
            .iter()
            .filter(|(_, &v)| v == Invariant::Half)
            .map(|(p, &v)| (p.to_string(), v))
            .collect()
    }
}

/// The rational point `(d : -qc : 0 : 0)` on every member of the family.
pub fn family_point(f: &FamilyInstance) -> ProjectivePoint {
    ProjectivePoint::from_ints([f.d, -(f.q as i64) * f.c, 0, 0]).expect("d is nonzero")
}

pub fn family_decomposition(f: &FamilyInstance) -> Result<BrauerDecomposition> {
    brauer_decomposition(&f.quadric()?, &family_point(f))
}

fn require_local(f: &FamilyInstance) -> Result<()> {
    if family_local_criterion(f) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{f:?} is not everywhere locally solvable")))
    }
}

/// Closed-form profile: only the place `q` can carry `1/2`, exactly when `a`
/// is a square but not a fourth power modulo `q`.
pub fn family_invariant_profile(f: &FamilyInstance) -> Result<InvariantProfile> {
    require_local(f)?;
    let at_q = match power_residue_class(f.a as i128, f.q)? {
        ResidueClass::SquareNotFourth => Invariant::Half,
        _ => Invariant::Zero,
    };
    let mut values = BTreeMap::new();
    values.insert(Place::Real, Invariant::Zero);
    values.insert(Place::Prime(2), Invariant::Zero);
    for k in [f.a, f.c, f.d, f.e] {
        for p in arith::distinct_primes(k.unsigned_abs()) {
            values.insert(Place::Prime(p), Invariant::Zero);
        }
    }
    values.insert(Place::Prime(f.q), at_q);
    Ok(InvariantProfile {
        values,
        default: Invariant::Zero,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Obstructed,
    NoObstruction,
}

pub fn obstruction_decision(f: &FamilyInstance) -> Result<Decision> {
    require_local(f)?;
    Ok(
        if power_residue_class(f.a as i128, f.q)? == ResidueClass::SquareNotFourth {
            Decision::Obstructed
        } else {
            Decision::NoObstruction
        },
    )
}

/// An odd prime with odd valuation in one coefficient that divides neither
/// of the other two coefficients nor `n`.
pub fn no_obstruction_witness(q: &QuadricInstance) -> Option<u64> {
    let coefs = q.coefficients();
    let mut best: Option<u64> = None;
    for i in 0..3 {
        for p in arith::distinct_primes(coefs[i].unsigned_abs()) {
            if p == 2 || split_valuation(coefs[i] as i128, p).0 % 2 == 0 {
                continue;
            }
            let clean = (0..3)
                .filter(|&j| j != i)
                .map(|j| coefs[j])
                .chain([q.n])
                .all(|k| k % p as i64 != 0);
            if clean && best.is_none_or(|b| p < b) {
                best = Some(p);
            }
        }
    }
    best
}

/// Invariants at sampled `Z_p`-points, each evaluated on a residue
/// representative precise enough to fix the square class of the chart form.
///
/// Precision starts at `p^3` and escalates to `p^5` and `p^7`.
pub fn sample_invariants<R: Rng>(
    q: &QuadricInstance,
    dec: &BrauerDecomposition,
    p: u64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Invariant>> {
    let mut out = Vec::new();
    let margin = if p == 2 { 3 } else { 1 };
    for k in [3u32, 5, 7] {
        if out.len() >= count {
            break;
        }
        for w in sample_local_points(q, p, k, 4 * count, rng) {
            if out.len() >= count {
                break;
            }
            let pt = w.point.map(|c| BigRational::from_integer(c.into()));
            for chart in [Chart::L1, Chart::L2] {
                let form = if chart == Chart::L1 { &dec.l1 } else { &dec.l2 };
                let x = [pt[0].clone(), pt[1].clone(), pt[2].clone(), BigRational::from_integer(1.into())];
                let v = form.eval(&x);
                if v.is_zero() {
                    continue;
                }
                // valuation of the primitive integer multiple of the chart form
                let (kappa, _) = form.primitive();
                let scaled = &v * &kappa;
                let val = split_valuation_big(&scaled, p);
                if val + margin <= k {
                    let inv = evaluate_on_chart(dec, &pt, Place::Prime(p), chart)?
                        .expect("nonzero chart form");
                    out.push(inv);
                    break;
                }
            }
        }
    }
    Ok(out)
}

fn split_valuation_big(r: &BigRational, p: u64) -> u32 {
    use num_traits::ToPrimitive;
    let n = r.numer();
    match n.to_i128() {
        Some(v) => split_valuation(v, p).0,
        None => {
            let mut v = 0;
            let mut m = n.clone();
            let pb = num_bigint::BigInt::from(p);
            while (&m % &pb).is_zero() {
                m /= &pb;
                v += 1;
            }
            v
        }
    }
}
