use std::f64::consts::TAU;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use symflow::hyperbolic::*;

fn point() -> impl Strategy<Value = HPoint> {
    (-3.0..3.0f64, -1.5..1.5f64).prop_map(|(x, ly)| HPoint::new(x, ly.exp()).unwrap())
}

fn tangent() -> impl Strategy<Value = UnitTangent> {
    (point(), 0.0..TAU).prop_map(|(p, th)| UnitTangent::new(p, th).unwrap())
}

fn boundary() -> impl Strategy<Value = BoundaryPoint> {
    prop_oneof![
        9 => (-1.5..1.5f64).prop_map(|a| BoundaryPoint::Real(a.tan())),
        1 => Just(BoundaryPoint::Infinity),
    ]
}

fn same_vector(a: &UnitTangent, b: &UnitTangent, tol: f64) -> bool {
    let dt = (a.theta() - b.theta()).rem_euclid(TAU);
    hyp_dist(a.base(), b.base()) < tol && dt.min(TAU - dt) < tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn busemann_cocycle(x in point(), y in point(), z in point(), xi in boundary()) {
        let r = busemann(x, z, xi) - busemann(x, y, xi) - busemann(y, z, xi);
        prop_assert!(r.abs() < 1e-9);
    }

    #[test]
    fn distance_is_a_metric(p in point(), q in point(), r in point()) {
        prop_assert!((hyp_dist(p, q) - hyp_dist(q, p)).abs() < 1e-12);
        prop_assert!(hyp_dist(p, r) <= hyp_dist(p, q) + hyp_dist(q, r) + 1e-12);
        let arcosh = (1.0 + ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)) / (2.0 * p.y * q.y)).acosh();
        prop_assert!((hyp_dist(p, q) - arcosh).abs() < 1e-7 * (1.0 + arcosh));
    }

    #[test]
    fn flow_is_a_group_action(v in tangent(), s in -4.0..4.0f64, t in -4.0..4.0f64) {
        let a = geodesic_flow(&geodesic_flow(&v, s), t);
        let b = geodesic_flow(&v, s + t);
        prop_assert!(same_vector(&a, &b, 1e-10));
        prop_assert!(same_vector(&geodesic_flow(&geodesic_flow(&v, t), -t), &v, 1e-10));
    }

    #[test]
    fn hopf_round_trip_translation_flip(v in tangent(), t in -5.0..5.0f64) {
        let h = to_hopf(&v);
        prop_assert!(same_vector(&from_hopf(&h).unwrap(), &v, 1e-9));
        let ht = to_hopf(&geodesic_flow(&v, t));
        prop_assert!((ht.s - h.s - t).abs() < 1e-9);
        prop_assert!(ht.v_plus.separation(h.v_plus) < 1e-9 && ht.v_minus.separation(h.v_minus) < 1e-9);
        let hf = to_hopf(&v.flip());
        let expect = flip_hopf(&h);
        prop_assert!(hf.v_minus.separation(expect.v_minus) < 1e-9);
        prop_assert!(hf.v_plus.separation(expect.v_plus) < 1e-9);
        prop_assert!((hf.s - expect.s).abs() < 1e-9);
    }

    #[test]
    fn isometries_commute_with_the_flow(v in tangent(), t in -3.0..3.0f64, a in -2.0..2.0f64, b in -1.0..1.0f64, c in -1.0..1.0f64) {
        let h = MobiusMap::new(1.0 + a.abs(), b, c, (1.0 + b * c) / (1.0 + a.abs())).unwrap();
        let lhs = geodesic_flow(&v.transform(&h), t);
        let rhs = geodesic_flow(&v, t).transform(&h);
        prop_assert!(same_vector(&lhs, &rhs, 1e-9));
    }

    #[test]
    fn hamenstadt_scales_exactly(u in tangent(), da in -1.0..1.0f64, db in -1.0..1.0f64, s in -3.0..3.0f64) {
        let shift = |d: f64| BoundaryPoint::Real(((u.plus().angle() + d) / 2.0).tan());
        let v = unstable_leaf_vector(&u, shift(da)).unwrap();
        let w = unstable_leaf_vector(&u, shift(db)).unwrap();
        let d0 = hamenstadt_uu(&u, &v, &w).unwrap();
        let (us, vs, ws) = (geodesic_flow(&u, s), geodesic_flow(&v, s), geodesic_flow(&w, s));
        let ds = hamenstadt_uu(&us, &vs, &ws).unwrap();
        prop_assert!((ds - s.exp() * d0).abs() < 1e-8 * (1.0 + ds), "{} vs {}", ds, s.exp() * d0);
    }

    #[test]
    fn hamenstadt_matches_the_horocycle_chart(u in tangent(), da in -1.0..1.0f64) {
        // conjugate u⁻ to ∞: W^uu(u) becomes a horizontal line y = Y of
        // downward vectors, on which the leaf distance is |Δx|/Y
        let v = unstable_leaf_vector(&u, BoundaryPoint::Real(((u.plus().angle() + da) / 2.0).tan())).unwrap();
        let m = match u.minus() {
            BoundaryPoint::Infinity => MobiusMap::IDENTITY,
            BoundaryPoint::Real(x) => MobiusMap::new(0.0, -1.0, 1.0, -x).unwrap(),
        };
        let (pu, pv) = (m.apply(u.base()), m.apply(v.base()));
        prop_assert!((pu.y - pv.y).abs() < 1e-8 * pu.y);
        let expect = (pu.x - pv.x).abs() / pu.y;
        let d = hamenstadt_uu(&u, &u, &v).unwrap();
        prop_assert!((d - expect).abs() < 1e-6 * (1.0 + expect));
    }

    #[test]
    fn gaussian_distance_error_estimate(v in tangent(), w in tangent()) {
        let d = gaussian_distance(&v, &w);
        prop_assert!(d.error <= 1e-8);
        prop_assert!((d.value - gaussian_distance(&w, &v).value).abs() < 1e-8);
        // the time-0 distance never exceeds the weighted one by more than the
        // mean of 2|t|, and vice versa
        let base = hyp_dist(v.base(), w.base());
        prop_assert!((d.value - base).abs() <= 2.0 / 1.772_453_850_905_516 + 1e-8);
    }
}

#[test]
fn greedy_set_is_separated_and_covering() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let window = sample::Window { half_width: 0.5, y_spread: 1.5 };
    let pts: Vec<UnitTangent> = (0..100).map(|_| sample::tangent(&mut rng, window)).collect();
    let (n, alpha) = (3, 0.1);
    let kept = greedy_separated_set(&pts, n, alpha, symflow::Exec::default()).unwrap();
    for (a, &i) in kept.iter().enumerate() {
        for &j in &kept[a + 1..] {
            assert!(dynamical_distance(&pts[i], &pts[j], n) >= alpha);
        }
    }
    for p in &pts {
        assert!(kept.iter().any(|&k| dynamical_distance(p, &pts[k], n) < alpha || pts[k] == *p));
    }
    let seq = greedy_separated_set(&pts, n, alpha, symflow::Exec::Sequential).unwrap();
    assert_eq!(seq, kept);
}

#[test]
fn leaf_distance_bounds_with_calibrated_constant() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let w = sample::Window::default();
    let mut triple = || {
        let u = sample::tangent(&mut rng, w);
        let v = unstable_leaf_vector(&u, sample::perturb_boundary(&mut rng, u.plus(), 0.8)).unwrap();
        let x = unstable_leaf_vector(&u, sample::perturb_boundary(&mut rng, u.plus(), 0.8)).unwrap();
        (u, v, x)
    };
    let calib: Vec<_> = (0..300).map(|_| triple()).collect();
    let c = calibrate_leaf_constant(&calib, 0.25).unwrap();
    assert!(c.c.is_finite() && c.c > 0.0);
    // d(π g^t v, π g^t v′) ≤ e^t d^u, so the weighted distance is at most
    // (1/√π)∫e^t e^{−t²} dt · d^u = e^{1/4} d^u
    assert!(c.worst_ratio <= 0.25f64.exp() + 1e-9, "{c:?}");
    for _ in 0..1000 {
        let (u, v, x) = triple();
        let du = hamenstadt_uu(&u, &v, &x).unwrap();
        assert!(leaf_bounds_hold(&v, &x, du, c.c), "c = {}, du = {du}", c.c);
    }
}
