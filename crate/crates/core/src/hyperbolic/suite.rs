//! Seeded sampled-invariant suite behind `hyperbolic-verify`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::distance::{hamenstadt_uu, LEAF_TOL};
use super::point::{busemann, BoundaryPoint};
use super::product::{bracket, calibrate_bracket, sample, shadowing_gap, BracketCalibration};
use super::tangent::{
    flip_hopf, geodesic_flow, on_stable_leaf, on_unstable_leaf, to_hopf, unstable_leaf_vector, Geodesic, UnitTangent,
};
use super::phase_distance;
use crate::error::{Error, Result};

pub const COCYCLE_TOL: f64 = 1e-9;
pub const HOPF_TOL: f64 = 1e-9;
pub const SCALING_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    /// Bracket locality scale.
    pub eps: f64,
    pub calibration_samples: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub cocycle_max_error: f64,
    pub hopf_max_error: f64,
    pub scaling_max_error: f64,
    pub shadowing_violations: usize,
    pub shadowing_worst_ratio: f64,
    /// Sampled pairs rejected because they were not ε-close over the window.
    pub shadowing_rejected: usize,
    pub bracket: BracketCalibration,
    pub bracket_failures: usize,
    pub pass: bool,
}

pub fn run_suite(cfg: SuiteConfig) -> Result<SuiteReport> {
    if cfg.trials == 0 || cfg.calibration_samples == 0 {
        return Err(Error::Input("trials and calibration samples must be positive".into()));
    }
    if !(cfg.eps > 0.0 && cfg.eps <= 1.0) {
        return Err(Error::Input(format!("eps = {} must lie in (0, 1]", cfg.eps)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let w = sample::Window::default();
    let n = cfg.trials;

    let mut cocycle: f64 = 0.0;
    for i in 0..n {
        let (x, y, z) = (sample::point(&mut rng, w), sample::point(&mut rng, w), sample::point(&mut rng, w));
        let xi = if i % 10 == 0 { BoundaryPoint::Infinity } else { sample::boundary(&mut rng) };
        cocycle = cocycle.max((busemann(x, z, xi) - busemann(x, y, xi) - busemann(y, z, xi)).abs());
    }

    let mut hopf: f64 = 0.0;
    for _ in 0..n {
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
    for _ in 0..n {
        let u = sample::tangent(&mut rng, w);
        let v = unstable_leaf_vector(&u, sample::perturb_boundary(&mut rng, u.plus(), 1.0))?;
        let x = unstable_leaf_vector(&u, sample::perturb_boundary(&mut rng, u.plus(), 1.0))?;
        let s: f64 = rng.random_range(-3.0..3.0);
        let d0 = hamenstadt_uu(&u, &v, &x)?;
        let ds = hamenstadt_uu(&geodesic_flow(&u, s), &geodesic_flow(&v, s), &geodesic_flow(&x, s))?;
        scaling = scaling.max((ds - s.exp() * d0).abs());
    }

    let (mut violations, mut trials, mut rejected) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    while trials < n {
        let v = sample::tangent(&mut rng, w);
        let s: f64 = rng.random_range(2.0..8.0);
        let eps: f64 = rng.random_range(0.05..1.0);
        let delta = eps * (-s).exp() * rng.random_range(0.0..4.0);
        let g1 = Geodesic::through(&v);
        let minus = sample::perturb_boundary(&mut rng, g1.minus(), delta);
        let plus = sample::perturb_boundary(&mut rng, g1.plus(), delta);
        let Ok(g2) = Geodesic::new(minus, plus) else {
            rejected += 1;
            continue;
        };
        match shadowing_gap(&g1, &g2, eps, s) {
            Ok(sh) => {
                trials += 1;
                worst = worst.max(sh.hausdorff / sh.bound);
                violations += usize::from(!sh.holds());
            }
            Err(Error::Precondition(_)) => rejected += 1,
            Err(e) => return Err(e),
        }
    }

    let calib: Vec<(UnitTangent, UnitTangent)> = (0..cfg.calibration_samples)
        .map(|_| {
            let u = sample::tangent(&mut rng, w);
            let r = rng.random_range(0.0..0.05);
            (u, sample::nearby(&mut rng, &u, r))
        })
        .collect();
    let cal = calibrate_bracket(cfg.eps, &calib)?;
    let mut failures = 0;
    let mut done = 0;
    while done < n {
        let u = sample::tangent(&mut rng, w);
        let v = sample::nearby(&mut rng, &u, cal.beta);
        if phase_distance(&u, &v) >= cal.beta {
            continue;
        }
        done += 1;
        let ok = bracket(&u, &v, cfg.eps).is_ok_and(|b| {
            let vt = geodesic_flow(&v, b.t);
            b.local && on_stable_leaf(&u, &b.w, LEAF_TOL) && on_unstable_leaf(&vt, &b.w, LEAF_TOL)
        });
        failures += usize::from(!ok);
    }

    let pass = cocycle < COCYCLE_TOL
        && hopf < HOPF_TOL
        && scaling < SCALING_TOL
        && violations == 0
        && failures == 0;
    Ok(SuiteReport {
        config: cfg,
        cocycle_max_error: cocycle,
        hopf_max_error: hopf,
        scaling_max_error: scaling,
        shadowing_violations: violations,
        shadowing_worst_ratio: worst,
        shadowing_rejected: rejected,
        bracket: cal,
        bracket_failures: failures,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes_and_repeats() {
        let cfg = SuiteConfig { seed: 3, trials: 50, eps: 0.1, calibration_samples: 20 };
        let a = run_suite(cfg).unwrap();
        assert!(a.pass, "{a:?}");
        let b = run_suite(cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(run_suite(SuiteConfig { trials: 0, ..cfg }).is_err());
    }
}
