use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quadric_bm::arith::{factorize, is_prime, jacobi, sqrt_mod};
use quadric_bm::brauer::{
    evaluate_on_chart, family_decomposition, family_invariant_profile, find_rational_point,
    hilbert_symbol, hilbert_symbol_int, obstruction_decision, quadric_decomposition,
    relevant_places, sample_invariants, BrauerDecomposition, Chart, Decision, Invariant,
    ProjectivePoint,
};
use quadric_bm::census::{coprime_triple_count, count_nbr_direct, count_nloc};
use quadric_bm::constants::{constant_d, euler_c};
use quadric_bm::local::{
    certified_depth, search_at_depth, solvable_at_prime, witness_is_valid, FamilyInstance, Place,
    QuadricInstance,
};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn nonzero(r: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = i64> {
    r.prop_filter("nonzero", |v| *v != 0)
}

fn small_prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])
}

// Second intersections of lines through `m` with the quadric, dehomogenised.
fn rational_points(q: &QuadricInstance, m: &ProjectivePoint, dirs: &[[i64; 4]]) -> Vec<[BigRational; 3]> {
    let g = [q.a, q.b, q.c, -q.n].map(rat);
    let mut out = Vec::new();
    for v in dirs {
        let v = v.map(rat);
        let bmv: BigRational = (0..4).map(|i| &g[i] * &m.coords[i] * &v[i]).sum();
        let qv: BigRational = (0..4).map(|i| &g[i] * &v[i] * &v[i]).sum();
        if qv.is_zero() {
            continue;
        }
        let p: [BigRational; 4] = std::array::from_fn(|i| &qv * &m.coords[i] - rat(2) * &bmv * &v[i]);
        if p[3].is_zero() {
            continue;
        }
        out.push(std::array::from_fn(|i| &p[i] / &p[3]));
    }
    out
}

fn places_for(dec: &BrauerDecomposition) -> Vec<Place> {
    let mut out = vec![Place::Real];
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19] {
        out.push(Place::Prime(p));
    }
    for p in quadric_bm::arith::distinct_primes(dec.d.unsigned_abs()) {
        if p > 19 {
            out.push(Place::Prime(p));
        }
    }
    out
}

fn odd_prime() -> impl Strategy<Value = u64> {
    prop::sample::select((3..1000u64).filter(|&p| is_prime(p)).collect::<Vec<_>>())
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

fn quadric_with_point() -> impl Strategy<Value = (QuadricInstance, ProjectivePoint)> {
    (nonzero(-12..=12), nonzero(-12..=12), nonzero(-12..=12), nonzero(-12..=12)).prop_filter_map(
        "needs a rational point",
        |(a, b, c, n)| {
            let q = QuadricInstance::new(a, b, c, n).ok()?;
            let m = find_rational_point(&q, 200)?;
            Some((q, m))
        },
    )
}

fn family() -> impl Strategy<Value = FamilyInstance> {
    (1..=16i64, 1..=8i64, 1..=8i64, 1..=8i64)
        .prop_filter_map("valid locally solvable member", |(a, c, d, e)| {
            FamilyInstance::new(17, a, c, d, e).ok().filter(quadric_bm::local::family_local_criterion)
        })
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn jacobi_multiplicative(a in -1000i128..=1000, b in -1000i128..=1000, m in (0i128..500).prop_map(|k| 2 * k + 1)) {
        prop_assert_eq!(jacobi(a * b, m).unwrap(), jacobi(a, m).unwrap() * jacobi(b, m).unwrap());
    }

    #[test]
    fn quadratic_reciprocity(p in odd_prime(), r in odd_prime()) {
        prop_assume!(p != r);
        let sign = if ((p - 1) / 2 * ((r - 1) / 2)) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(jacobi(p as i128, r as i128).unwrap() * jacobi(r as i128, p as i128).unwrap(), sign);
    }

    #[test]
    fn sqrt_mod_matches_enumeration(p in small_prime(), k in 1u32..=4, a in 0i128..100_000) {
        let pk = p.pow(k);
        prop_assume!(pk <= 20_000);
        let a = a % pk as i128;
        let exists = (0..pk).any(|x| (x * x % pk) as i128 == a);
        match sqrt_mod(a, p, k) {
            Some(r) => prop_assert_eq!(((r % pk) * (r % pk) % pk) as i128, a),
            None => prop_assert!(!exists),
        }
        prop_assert_eq!(sqrt_mod(a, p, k).is_some(), exists);
    }

    #[test]
    fn factorize_round_trip(n in nonzero(-1_000_000_000_000..=1_000_000_000_000)) {
        let f = factorize(n).unwrap();
        let mut prod = f.sign as i64;
        for &(p, e) in &f.pairs {
            prop_assert!(is_prime(p) && e >= 1);
            prod *= (p as i64).pow(e);
        }
        prop_assert_eq!(prod, n);
        prop_assert!(f.pairs.windows(2).all(|w| w[0].0 < w[1].0));
    }

    #[test]
    fn witness_soundness(a in nonzero(-30..=30), b in nonzero(-30..=30), c in nonzero(-30..=30), n in nonzero(-30..=30), p in small_prime()) {
        let q = QuadricInstance::new(a, b, c, n).unwrap();
        let v = solvable_at_prime(&q, p).unwrap();
        if v.solvable {
            let w = v.witness.expect("positive verdicts carry a witness");
            prop_assert!(witness_is_valid(&q, p, &w));
        } else {
            prop_assert!(v.witness.is_none());
        }
    }

    #[test]
    fn hilbert_symmetric_and_bimultiplicative(u in nonzero(-50..=50), v in nonzero(-50..=50), w in nonzero(-50..=50), p in prop::sample::select(vec![0u64, 2, 3, 5, 7, 11, 13, 47])) {
        let place = if p == 0 { Place::Real } else { Place::Prime(p) };
        let (u, v, w) = (u as i128, v as i128, w as i128);
        let h = |x, y| hilbert_symbol_int(x, y, place).unwrap();
        prop_assert_eq!(h(u, v), h(v, u));
        prop_assert_eq!(h(u * w, v), h(u, v) * h(w, v));
        prop_assert_eq!(h(u, v * w), h(u, v) * h(u, w));
    }

    #[test]
    fn coprime_count_symmetric(x in 1u64..60, y in 1u64..60, z in 1u64..60, a in 1u64..40, b in 1u64..40, c in 1u64..40) {
        let base = coprime_triple_count([x, y, z], [a, b, c]);
        for p in [[1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]] {
            let bounds = [x, y, z];
            let coefs = [a, b, c];
            prop_assert_eq!(coprime_triple_count(p.map(|i| bounds[i]), p.map(|i| coefs[i])), base);
        }
    }

    #[test]
    fn euler_c_depends_on_prime_support(a in 1i64..50, b in 1i64..50, c in 1i64..50) {
        let base = euler_c(a, b, c, 10_000).unwrap().value;
        for p in quadric_bm::arith::distinct_primes(a as u64) {
            let bumped = euler_c(a * (p * p) as i64, b, c, 10_000).unwrap().value;
            prop_assert_eq!(bumped, base);
        }
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn chart_independence((q, m) in quadric_with_point(), dirs in prop::collection::vec(prop::array::uniform4(-5i64..=5), 6)) {
        let dec = quadric_decomposition(&q, &m).unwrap();
        for pt in rational_points(&q, &m, &dirs) {
            for place in places_for(&dec) {
                let on1 = evaluate_on_chart(&dec, &pt, place, Chart::L1).unwrap();
                let on2 = evaluate_on_chart(&dec, &pt, place, Chart::L2).unwrap();
                if let (Some(x), Some(y)) = (on1, on2) {
                    prop_assert_eq!(x, y, "{} at {:?}", q, place);
                }
            }
        }
    }

    #[test]
    fn scaling_shifts_by_r_d((q, m) in quadric_with_point(), dirs in prop::collection::vec(prop::array::uniform4(-5i64..=5), 4), rn in nonzero(-30..=30), rd in 1i64..=30) {
        let dec = quadric_decomposition(&q, &m).unwrap();
        let r = BigRational::new(rn.into(), rd.into());
        let scaled = BrauerDecomposition { l1: dec.l1.scale(&r), ..dec.clone() };
        let d = rat(dec.d);
        for pt in rational_points(&q, &m, &dirs) {
            let x = [pt[0].clone(), pt[1].clone(), pt[2].clone(), BigRational::one()];
            let v = dec.l1.eval(&x);
            if v.is_zero() {
                continue;
            }
            let mut places = relevant_places(&v, &d).unwrap();
            places.extend(relevant_places(&(&v * &r), &d).unwrap());
            places.sort();
            places.dedup();
            let (mut before, mut after) = (Invariant::Zero, Invariant::Zero);
            for &place in &places {
                let i0 = evaluate_on_chart(&dec, &pt, place, Chart::L1).unwrap().unwrap();
                let i1 = evaluate_on_chart(&scaled, &pt, place, Chart::L1).unwrap().unwrap();
                let shift = Invariant::from_symbol(hilbert_symbol(&r, &d, place).unwrap());
                prop_assert_eq!(i1, i0 + shift);
                before = before + i0;
                after = after + i1;
            }
            prop_assert_eq!(before, Invariant::Zero);
            prop_assert_eq!(after, Invariant::Zero);
        }
    }

    #[test]
    fn decomposition_identity((q, m) in quadric_with_point()) {
        prop_assert!(quadric_decomposition(&q, &m).unwrap().matches(&q));
    }
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn profile_constancy(f in family(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = f.quadric().unwrap();
        let dec = family_decomposition(&f).unwrap();
        let profile = family_invariant_profile(&f).unwrap();
        for p in [2u64, 17, 3, 5, 7] {
            let invs = sample_invariants(&q, &dec, p, 50, &mut rng).unwrap();
            prop_assert!(!invs.is_empty(), "no local points sampled at {}", p);
            for inv in invs {
                prop_assert_eq!(inv, profile.get(Place::Prime(p)), "{:?} at {}", f, p);
            }
        }
    }

    #[test]
    fn count_monotone_in_b(b1 in 1u64..3000, extra in 0u64..3000) {
        let small = count_nbr_direct(b1, 17, 1).unwrap().count;
        let large = count_nbr_direct(b1 + extra, 17, 1).unwrap().count;
        prop_assert!(small <= large);
        let (s, l) = (b1.min(12), (b1 + extra).min(12) + 1);
        prop_assert!(count_nloc(s, 1, 1).unwrap().count <= count_nloc(l, 1, 1).unwrap().count);
    }
}

#[test]
fn unramified_primes_always_solvable() {
    let primes: Vec<u64> = (3..=50).filter(|&p| is_prime(p)).collect();
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            for c in -10i64..=10 {
                for n in -10i64..=10 {
                    if a * b * c * n == 0 {
                        continue;
                    }
                    let q = QuadricInstance::new(a, b, c, n).unwrap();
                    let m = 2 * (a * b * c * n).unsigned_abs();
                    for &p in primes.iter().filter(|&&p| m % p != 0) {
                        assert!(solvable_at_prime(&q, p).unwrap().solvable, "{q} at {p}");
                    }
                }
            }
        }
    }
}

#[test]
fn unobstructed_small_members_have_zero_total() {
    for a in -5i64..=5 {
        for c in -5i64..=5 {
            for d in -5i64..=5 {
                for e in -5i64..=5 {
                    let Ok(f) = FamilyInstance::new(17, a, c, d, e) else { continue };
                    if obstruction_decision(&f) == Ok(Decision::NoObstruction) {
                        assert_eq!(family_invariant_profile(&f).unwrap().total(), Invariant::Zero, "{f:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn constants_deterministic_and_tightening() {
    let a = constant_d(17, 100_000).unwrap();
    assert_eq!(a, constant_d(17, 100_000).unwrap());
    let b = constant_d(17, 1_000_000).unwrap();
    assert!(b.error_estimate < a.error_estimate);
}

#[test]
fn monotone_depth_on_negative_instances() {
    let mut negatives = 0;
    'outer: for a in 1i64..=12 {
        for b in 1i64..=12 {
            for c in -12i64..=12 {
                for n in 1i64..=12 {
                    if c == 0 {
                        continue;
                    }
                    let q = QuadricInstance::new(a, b, c, n).unwrap();
                    for p in [2u64, 3, 5] {
                        if solvable_at_prime(&q, p).unwrap().solvable {
                            continue;
                        }
                        let deeper = search_at_depth(&q, p, certified_depth(&q, p) + 2).unwrap();
                        assert!(!deeper.solvable, "{q} at {p}");
                        negatives += 1;
                        if negatives == 100 {
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    assert_eq!(negatives, 100);
}
