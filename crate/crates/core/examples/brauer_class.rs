//! Builds the quaternion class (l1/t, d) on a quadric and evaluates its local
//! invariants at rational points on both charts.
//!
//! cargo run --example brauer_class -- 1 1 1 3

use num_rational::BigRational;
use num_traits::Zero;
use quadric_bm::brauer::{brauer_decomposition, evaluate_on_chart, find_rational_point, Chart};
use quadric_bm::local::{Place, QuadricInstance};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let v: Vec<i64> = std::env::args().skip(1).map(|s| s.parse()).collect::<Result<_, _>>()?;
    let [a, b, c, n] = v[..] else {
        return Err("expected four integers a b c n".into());
    };
    let q = QuadricInstance::new(a, b, c, n)?;
    let m = find_rational_point(&q, 1000).ok_or("no rational point of height <= 1000")?;
    let dec = brauer_decomposition(&q, &m)?;
    println!("{q} through {m}");
    println!("  l1 = {}\n  l2 = {}\n  l3 = {}\n  l4 = {}", dec.l1, dec.l2, dec.l3, dec.l4);
    println!("  c0 = {}, d = {}, identity holds: {}", dec.c0, dec.d, dec.matches(&q));

    // more points: second intersections of lines through m
    let g = [q.a, q.b, q.c, -q.n].map(|k| BigRational::from_integer(k.into()));
    for dir in [[1i64, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 1], [2, -1, 1, 0]] {
        let v = dir.map(|k| BigRational::from_integer(k.into()));
        let bmv: BigRational = (0..4).map(|i| &g[i] * &m.coords[i] * &v[i]).sum();
        let qv: BigRational = (0..4).map(|i| &g[i] * &v[i] * &v[i]).sum();
        if qv.is_zero() {
            continue;
        }
        let p: Vec<BigRational> = (0..4).map(|i| &qv * &m.coords[i] - BigRational::from_integer(2.into()) * &bmv * &v[i]).collect();
        if p[3].is_zero() {
            continue;
        }
        let pt = [&p[0] / &p[3], &p[1] / &p[3], &p[2] / &p[3]];
        print!("  ({}, {}, {}):", pt[0], pt[1], pt[2]);
        for place in [Place::Real, Place::Prime(2), Place::Prime(3), Place::Prime(5)] {
            let l1 = evaluate_on_chart(&dec, &pt, place, Chart::L1)?;
            let l2 = evaluate_on_chart(&dec, &pt, place, Chart::L2)?;
            let show = |x: Option<_>| x.map_or("-".to_string(), |i: quadric_bm::brauer::Invariant| i.to_string());
            print!(" {place}[{} {}]", show(l1), show(l2));
        }
        println!();
    }
    Ok(())
}
