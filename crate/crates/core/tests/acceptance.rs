//! End-to-end acceptance checks. Each criterion prints one line
//! `criterion N: PASS|FAIL  …` and the test fails if any line fails.
//! Run with `cargo test -p symflow --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symflow::exceptional::{theorem_b_certificate, AvoidTarget};
use symflow::hyperbolic::*;
use symflow::karp::simple_cycle_mean_range;
use symflow::katok::{approximate_sft, KatokConfig};
use symflow::measures::{LocallyConstantFn, MarkovMeasure};
use symflow::schottky::{coded_system, critical_exponent, SchottkyGroup};
use symflow::shift::{forbid_words, CylinderUnion, Sft, Word};
use symflow::suspension::{abramov_entropy, SuspensionSpace};
use symflow::Exec;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

/// Largest root in `(1, 2]` of `f`, by bisection.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (lo + hi);
        if f(m) > 0.0 {
            hi = m;
        } else {
            lo = m;
        }
    }
    0.5 * (lo + hi)
}

fn golden_words(n: usize) -> u64 {
    (0u64..1 << n).filter(|w| w & (w >> 1) == 0).count() as u64
}

fn c1_entropy_anchors() -> Verdict {
    let mut worst_full: f64 = 0.0;
    for n in 1..=12 {
        let h = Sft::full(n).unwrap().entropy();
        worst_full = worst_full.max((h - (n as f64).ln()).abs());
    }
    // brute-force growth ratios at n = 18, 19, 20, accelerated by Aitken's Δ²
    let counts: Vec<f64> = (18..=21).map(|n| golden_words(n) as f64).collect();
    let r: Vec<f64> = counts.windows(2).map(|p| p[1] / p[0]).collect();
    let aitken = r[2] - (r[2] - r[1]).powi(2) / (r[2] - 2.0 * r[1] + r[0]);
    let oracle = aitken.ln();
    let h = Sft::golden_mean().entropy();
    let err = (h - oracle).abs();
    verdict(
        worst_full < 1e-12 && err < 1e-10,
        format!("full-shift max |h − log N| = {worst_full:.1e}; golden mean h = {h:.12}, |h − oracle| = {err:.1e}"),
    )
}

fn c2_avoidance_family() -> Verdict {
    let full = Sft::full(2).unwrap();
    let mut prev = f64::NEG_INFINITY;
    let mut worst: f64 = 0.0;
    let mut increasing = true;
    let mut last = 0.0;
    for k in 2..=10 {
        let h = forbid_words(&full, &CylinderUnion::new([Word::repeat(0, k)])).unwrap().entropy();
        // words avoiding 0^k obey a_n = a_{n−1} + … + a_{n−k}
        let root = bisect(|x| x.powi(k as i32) - (0..k).map(|j| x.powi(j as i32)).sum::<f64>(), 1.0, 2.0);
        worst = worst.max((h - root.ln()).abs());
        increasing &= h > prev;
        prev = h;
        last = h;
    }
    let gap = 2f64.ln() - last;
    verdict(
        worst < 1e-9 && increasing && gap < 0.01,
        format!("max |h_k − oracle| = {worst:.1e}, increasing = {increasing}, log 2 − h_10 = {gap:.5}"),
    )
}

fn c3_katok_certificate() -> Verdict {
    let nu = MarkovMeasure::bernoulli(&[0.7, 0.3]).unwrap();
    let tau = LocallyConstantFn::by_symbol(nu.base(), &[1.0, 2.0]).unwrap();
    let mut cfg = KatokConfig::new(0.1);
    cfg.n_max = 24;
    let r = approximate_sft(&nu, &tau, &cfg).unwrap();
    let c = r.certificate;
    let a = r.approximation.expect("a candidate was built");
    let graphs = a.xi.class_graphs(&tau).unwrap();
    let n = c.n as f64;
    let (lo, _) = simple_cycle_mean_range(&graphs.min.0, 64).unwrap().unwrap();
    let (_, hi) = simple_cycle_mean_range(&graphs.max.0, 64).unwrap().unwrap();
    let exhaustive = ((lo / n - c.birkhoff_min).abs() < 1e-12) && ((hi / n - c.birkhoff_max).abs() < 1e-12);
    let entropy_ok = (c.h_xi - 0.610864).abs() < 0.1;
    let range_ok = c.birkhoff_min >= 1.2 && c.birkhoff_max <= 1.4;
    verdict(
        c.pass && entropy_ok && range_ok && exhaustive && c.n <= 24,
        format!(
            "pass = {}, n = {}, M = {}, h(Ξ) = {:.6}, range = [{:.4}, {:.4}], simple cycles agree = {exhaustive}",
            c.pass, c.n, c.m, c.h_xi, c.birkhoff_min, c.birkhoff_max
        ),
    )
}

fn c4_suspension_entropy() -> Verdict {
    let full = Sft::full(2).unwrap();
    let roof = LocallyConstantFn::by_symbol(&full, &[1.0, 2.0]).unwrap();
    let s = SuspensionSpace::new(full.clone(), roof.clone()).unwrap();
    let report = s.flow_entropy_report().unwrap();
    let oracle = bisect(|s| 1.0 - (-s).exp() - (-2.0 * s).exp(), 0.0, 2.0);
    let root_err = (report.entropy - oracle).abs();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sup = f64::NEG_INFINITY;
    for _ in 0..200 {
        let nu = MarkovMeasure::random(&full, &mut rng).unwrap();
        sup = sup.max(abramov_entropy(&nu, &roof).unwrap());
    }
    let eq = report.equilibrium.expect("irreducible base");
    let attained = (eq.abramov - report.entropy).abs();
    verdict(
        root_err < 1e-9 && sup <= report.entropy + 1e-8 && attained < 1e-6,
        format!(
            "s* = {:.12}, |s* − oracle| = {root_err:.1e}; sup over 200 measures = {sup:.6}; equilibrium gap = {attained:.1e}",
            report.entropy
        ),
    )
}

fn c5_theorem_b() -> Verdict {
    let full = Sft::full(2).unwrap();
    let s = SuspensionSpace::new(full.clone(), LocallyConstantFn::constant(&full, 1.0).unwrap()).unwrap();
    let mut prev = f64::NEG_INFINITY;
    let mut all_pass = true;
    let mut increasing = true;
    let mut bounds = Vec::new();
    for k in 2..=10 {
        let a = AvoidTarget::Cylinders(CylinderUnion::new([Word::repeat(0, k)]));
        let t = theorem_b_certificate(&s, &a, &KatokConfig::new(0.05)).unwrap();
        all_pass &= t.certificate.pass && t.certificate.replay();
        increasing &= t.bound > prev;
        prev = t.bound;
        bounds.push(format!("{:.4}", t.bound));
    }
    let gap = 2f64.ln() - prev;
    verdict(
        all_pass && increasing && gap < 0.01,
        format!("all pass = {all_pass}, increasing = {increasing}, terminal gap = {gap:.5}, bounds = [{}]", bounds.join(", ")),
    )
}

fn c6_geometry() -> Verdict {
    const TRIALS: usize = 1000;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let w = sample::Window::default();

    let mut cocycle: f64 = 0.0;
    for i in 0..TRIALS {
        let (x, y, z) = (sample::point(&mut rng, w), sample::point(&mut rng, w), sample::point(&mut rng, w));
        let xi = if i % 10 == 0 { BoundaryPoint::Infinity } else { sample::boundary(&mut rng) };
        cocycle = cocycle.max((busemann(x, z, xi) - busemann(x, y, xi) - busemann(y, z, xi)).abs());
    }

    let mut hopf: f64 = 0.0;
    for _ in 0..TRIALS {
        let v = sample::tangent(&mut rng, w);
        let t: f64 = rng.random_range(-5.0..5.0);
        let (h, ht, hf) = (to_hopf(&v), to_hopf(&geodesic_flow(&v, t)), to_hopf(&v.flip()));
        let f = flip_hopf(&h);
        hopf = hopf
            .max((ht.s - h.s - t).abs())
            .max(ht.v_minus.separation(h.v_minus))
            .max(ht.v_plus.separation(h.v_plus))
            .max((hf.s - f.s).abs())
            .max(hf.v_minus.separation(f.v_minus))
            .max(hf.v_plus.separation(f.v_plus));
    }

    let mut scaling: f64 = 0.0;
    for _ in 0..TRIALS {
        let u = sample::tangent(&mut rng, w);
        let v = unstable_leaf_vector(&u, sample::perturb_boundary(&mut rng, u.plus(), 1.0)).unwrap();
        let x = unstable_leaf_vector(&u, sample::perturb_boundary(&mut rng, u.plus(), 1.0)).unwrap();
        let s: f64 = rng.random_range(-3.0..3.0);
        let d0 = hamenstadt_uu(&u, &v, &x).unwrap();
        let ds = hamenstadt_uu(&geodesic_flow(&u, s), &geodesic_flow(&v, s), &geodesic_flow(&x, s)).unwrap();
        scaling = scaling.max((ds - s.exp() * d0).abs());
    }

    let mut shadow_violations = 0;
    let mut shadow_trials = 0;
    let mut worst_ratio: f64 = 0.0;
    while shadow_trials < TRIALS {
        let v = sample::tangent(&mut rng, w);
        let s: f64 = rng.random_range(2.0..8.0);
        let eps: f64 = rng.random_range(0.05..1.0);
        let delta = eps * (-s).exp() * rng.random_range(0.0..4.0);
        let g1 = Geodesic::through(&v);
        let minus = sample::perturb_boundary(&mut rng, g1.minus(), delta);
        let plus = sample::perturb_boundary(&mut rng, g1.plus(), delta);
        let Ok(g2) = Geodesic::new(minus, plus) else { continue };
        match shadowing_gap(&g1, &g2, eps, s) {
            Ok(sh) => {
                shadow_trials += 1;
                worst_ratio = worst_ratio.max(sh.hausdorff / sh.bound);
                if !sh.holds() {
                    shadow_violations += 1;
                }
            }
            // the pair is not ε-close over the window: not a trial
            Err(symflow::Error::Precondition(_)) => continue,
            Err(e) => panic!("shadowing: {e}"),
        }
    }

    let eps = 0.1;
    let calib: Vec<(UnitTangent, UnitTangent)> = (0..200)
        .map(|_| {
            let u = sample::tangent(&mut rng, w);
            let r = rng.random_range(0.0..0.05);
            (u, sample::nearby(&mut rng, &u, r))
        })
        .collect();
    let cal = calibrate_bracket(eps, &calib).unwrap();
    let mut bracket_failures = 0;
    let mut done = 0;
    while done < TRIALS {
        let u = sample::tangent(&mut rng, w);
        let v = sample::nearby(&mut rng, &u, cal.beta);
        if phase_distance(&u, &v) >= cal.beta {
            continue;
        }
        done += 1;
        match bracket(&u, &v, eps) {
            Ok(b) => {
                let vt = geodesic_flow(&v, b.t);
                let members = on_stable_leaf(&u, &b.w, LEAF_TOL) && on_unstable_leaf(&vt, &b.w, LEAF_TOL);
                if !(b.local && members) {
                    bracket_failures += 1;
                }
            }
            Err(_) => bracket_failures += 1,
        }
    }

    verdict(
        cocycle < 1e-9 && hopf < 1e-9 && scaling < 1e-8 && shadow_violations == 0 && bracket_failures == 0,
        format!(
            "cocycle {cocycle:.1e}, Hopf {hopf:.1e}, Hamenstädt scaling {scaling:.1e}, shadowing violations {shadow_violations}/{TRIALS} (worst ratio {worst_ratio:.3}), bracket failures {bracket_failures}/{TRIALS} at β = {:.2e}",
            cal.beta
        ),
    )
}

fn c7_schottky() -> Verdict {
    let g = SchottkyGroup::symmetric(2, 2.5).unwrap();
    let full = critical_exponent(&g, 14.0).unwrap();
    let sub = critical_exponent(&g.subgroup(&[0]).unwrap(), 14.0).unwrap();
    let h = coded_system(&g).unwrap().flow_entropy().unwrap();
    let diff = (full.delta - h).abs();
    let drop = full.delta - sub.delta;
    verdict(
        diff < 0.05 && drop >= 0.1,
        format!(
            "δ̂ = {:.4} ± {:.4}, h(coded) = {h:.4}, |δ̂ − h| = {diff:.4}; one-generator δ̂ = {:.4}, drop = {drop:.4}",
            full.delta, full.std_error, sub.delta
        ),
    )
}

/// One seeded report spanning the sampling paths, serialized to JSON.
fn seeded_report(seed: u64, exec: Exec) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full = Sft::full(2).unwrap();
    let measures: Vec<MarkovMeasure> = (0..5).map(|_| MarkovMeasure::random(&full, &mut rng).unwrap()).collect();
    let nu = &measures[0];
    let tau = LocallyConstantFn::by_symbol(&full, &[1.0, 1.5]).unwrap();
    let mut cfg = KatokConfig::new(0.2);
    cfg.exec = exec;
    let katok = approximate_sft(nu, &tau, &cfg).unwrap().certificate;
    let pts: Vec<UnitTangent> = (0..40).map(|_| sample::tangent(&mut rng, sample::Window::default())).collect();
    let kept = greedy_separated_set(&pts, 2, 0.3, exec).unwrap();
    let g = SchottkyGroup::symmetric(2, 3.0).unwrap();
    let est = symflow::schottky::critical_exponent_with(&g, 10.0, 1_000_000, exec).unwrap();
    let sample_word = nu.sample(64, seed).unwrap();
    serde_json::to_string(&serde_json::json!({
        "measures": measures.iter().map(|m| m.to_text()).collect::<Vec<_>>(),
        "katok": katok,
        "separated": kept,
        "schottky": est,
        "sample": sample_word.to_string(),
    }))
    .unwrap()
}

fn c8_determinism() -> Verdict {
    let a = seeded_report(2024, Exec::default());
    let b = seeded_report(2024, Exec::default());
    let c = seeded_report(2024, Exec::Sequential);
    let other = seeded_report(7, Exec::default());
    verdict(
        a == b && a == c && a != other,
        format!("{} bytes; repeat identical = {}, sequential identical = {}, other seed differs = {}", a.len(), a == b, a == c, a != other),
    )
}

#[test]
fn acceptance() {
    type Criterion = (u32, &'static str, Duration, fn() -> Verdict);
    let criteria: [Criterion; 8] = [
        (1, "entropy anchors", Duration::from_secs(1), c1_entropy_anchors),
        (2, "avoidance family", Duration::from_secs(5), c2_avoidance_family),
        (3, "approximation certificate", Duration::from_secs(30), c3_katok_certificate),
        (4, "suspension entropy", Duration::from_secs(60), c4_suspension_entropy),
        (5, "exceptional-set pipeline", Duration::from_secs(120), c5_theorem_b),
        (6, "geometry suite", Duration::from_secs(60), c6_geometry),
        (7, "Schottky cross-check", Duration::from_secs(120), c7_schottky),
        (8, "determinism", Duration::from_secs(120), c8_determinism),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let v = run();
        let elapsed = start.elapsed();
        let pass = v.pass && elapsed <= limit;
        println!(
            "criterion {id}: {}  {name}: {} [{:.2}s / limit {}s]",
            if pass { "PASS" } else { "FAIL" },
            v.detail,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
        if !pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
