use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::hermite::GaussHermite;
use serde::Serialize;

use super::point::{hyp_dist, MobiusMap};
use super::tangent::{footpoint, on_unstable_leaf, UnitTangent};
use crate::error::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Tolerance on `|GH64 − GH48|` below which the Gauss–Hermite value is
/// trusted; otherwise the integrand has a kink and adaptive quadrature runs.
const GH_AGREEMENT: f64 = 1e-10;
/// Half-width of the adaptive window; the tail beyond it is below `1e−20`.
const ADAPTIVE_HALF_WIDTH: f64 = 7.0;
const ADAPTIVE_TOL: f64 = 1e-11;

/// Leaf-membership tolerance on Hopf data.
pub const LEAF_TOL: f64 = 1e-8;
/// Cauchy stopping threshold for the Hamenstädt limit.
pub const CAUCHY_TOL: f64 = 1e-10;
const MAX_LIMIT_TIME: f64 = 600.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrature {
    GaussHermite,
    Adaptive,
}

/// Value of the Gaussian-weighted distance with an error estimate and the
/// rule that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianDistance {
    pub value: f64,
    pub error: f64,
    pub method: Quadrature,
}

fn hermite(n: usize) -> &'static GaussHermite {
    static GH64: OnceLock<GaussHermite> = OnceLock::new();
    static GH48: OnceLock<GaussHermite> = OnceLock::new();
    let cell = if n == 64 { &GH64 } else { &GH48 };
    cell.get_or_init(|| GaussHermite::new(NonZeroUsize::new(n).expect("nonzero")))
}

/// `d(v, w) = (1/√π) ∫ d(π g^t v, π g^t w) e^{−t²} dt`.
pub fn gaussian_distance(v: &UnitTangent, w: &UnitTangent) -> GaussianDistance {
    gaussian_distance_frames(&v.frame(), &w.frame())
}

/// Plain value of [`gaussian_distance`].
pub fn phase_distance(v: &UnitTangent, w: &UnitTangent) -> f64 {
    gaussian_distance(v, w).value
}

pub(crate) fn gaussian_distance_frames(fv: &MobiusMap, fw: &MobiusMap) -> GaussianDistance {
    let f = |t: f64| hyp_dist(footpoint(fv, t), footpoint(fw, t));
    let q64 = hermite(64).integrate(f) / SQRT_PI;
    let q48 = hermite(48).integrate(f) / SQRT_PI;
    if (q64 - q48).abs() <= GH_AGREEMENT {
        return GaussianDistance { value: q64, error: (q64 - q48).abs(), method: Quadrature::GaussHermite };
    }
    let (value, err) = adaptive_weighted(&f);
    // d(t) ≤ d(0) + 2|t| bounds the discarded tails
    let t = ADAPTIVE_HALF_WIDTH;
    let tail = (f(0.0) / (t * SQRT_PI) + 2.0 / SQRT_PI) * (-t * t).exp();
    GaussianDistance { value, error: err + tail, method: Quadrature::Adaptive }
}

/// Adaptive Simpson for `(1/√π) ∫_{−T}^{T} f(t) e^{−t²} dt`.
fn adaptive_weighted(f: &impl Fn(f64) -> f64) -> (f64, f64) {
    let g = |t: f64| f(t) * (-t * t).exp() / SQRT_PI;
    let panels = 56;
    let h = 2.0 * ADAPTIVE_HALF_WIDTH / panels as f64;
    let mut total = 0.0;
    let mut err = 0.0;
    for k in 0..panels {
        let a = -ADAPTIVE_HALF_WIDTH + k as f64 * h;
        let b = a + h;
        let (fa, fm, fb) = (g(a), g((a + b) / 2.0), g(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        let (v, e) = simpson(&g, a, b, fa, fm, fb, whole, ADAPTIVE_TOL / panels as f64, 48);
        total += v;
        err += e;
    }
    (total, err)
}

#[allow(clippy::too_many_arguments)]
fn simpson(g: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> (f64, f64) {
    let m = (a + b) / 2.0;
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (g(lm), g(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return (left + right + delta / 15.0, delta.abs() / 15.0);
    }
    let (l, el) = simpson(g, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
    let (r, er) = simpson(g, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    (l + r, el + er)
}

/// `d_n(x, y) = max_{0 ≤ k < n} d(g^k x, g^k y)` with the Gaussian distance.
pub fn dynamical_distance(x: &UnitTangent, y: &UnitTangent, n: usize) -> f64 {
    let (fx, fy) = (x.frame(), y.frame());
    (0..n)
        .map(|k| {
            let a = MobiusMap::dilation(k as f64);
            gaussian_distance_frames(&fx.compose(&a), &fy.compose(&a)).value
        })
        .fold(0.0, f64::max)
}

/// Hamenstädt distance `d^u_u(v, v′) = lim_{t→∞} e^{d(π v(t), π v′(t))/2 − t}`
/// on the strong unstable leaf of `u`, evaluated at `t = 0, 1, 2, …` until
/// consecutive values differ by less than [`CAUCHY_TOL`].
pub fn hamenstadt_uu(u: &UnitTangent, v: &UnitTangent, w: &UnitTangent) -> Result<f64> {
    for x in [v, w] {
        if !on_unstable_leaf(u, x, LEAF_TOL) {
            return Err(Error::Precondition("vectors are not on the strong unstable leaf of u".into()));
        }
    }
    if v == w {
        // d ≡ 0 along the orbit, the limit of e^{−t}
        return Ok(0.0);
    }
    leaf_limit(&v.frame(), &w.frame())
}

/// Stable counterpart `d^s_u(w, w′) = lim e^{d(π w(−t), π w′(−t))/2 − t}`,
/// computed as `d^u_{−u}(−w, −w′)`.
pub fn hamenstadt_ss(u: &UnitTangent, v: &UnitTangent, w: &UnitTangent) -> Result<f64> {
    hamenstadt_uu(&u.flip(), &v.flip(), &w.flip())
}

fn leaf_limit(fv: &MobiusMap, fw: &MobiusMap) -> Result<f64> {
    let f = |t: f64| (0.5 * hyp_dist(footpoint(fv, t), footpoint(fw, t)) - t).exp();
    let mut prev = f(0.0);
    let mut t = 1.0;
    while t <= MAX_LIMIT_TIME {
        let cur = f(t);
        if (cur - prev).abs() < CAUCHY_TOL {
            return Ok(cur);
        }
        prev = cur;
        t += 1.0;
    }
    Err(Error::Numerical(format!("Hamenstädt limit not settled by t = {MAX_LIMIT_TIME}")))
}

/// Empirical constant for the two-sided comparison
/// `max{d(v,v′)/c, d(πv,πv′)} ≤ d^u ≤ e^{d(πv,πv′)/2}`: the largest ratio
/// `d(v, v′)/d^u(v, v′)` over the sample, widened by `margin`. An estimate,
/// not a proved constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeafConstant {
    pub c: f64,
    pub worst_ratio: f64,
    pub margin: f64,
    pub samples: usize,
}

pub fn calibrate_leaf_constant(triples: &[(UnitTangent, UnitTangent, UnitTangent)], margin: f64) -> Result<LeafConstant> {
    let mut worst: f64 = 0.0;
    for (u, v, w) in triples {
        let du = hamenstadt_uu(u, v, w)?;
        if du > 0.0 {
            worst = worst.max(phase_distance(v, w) / du);
        }
    }
    Ok(LeafConstant { c: worst * (1.0 + margin), worst_ratio: worst, margin, samples: triples.len() })
}

/// Whether one pair satisfies the two-sided comparison with constant `c`.
pub fn leaf_bounds_hold(v: &UnitTangent, w: &UnitTangent, du: f64, c: f64) -> bool {
    let base = hyp_dist(v.base(), w.base());
    let lower = (phase_distance(v, w) / c).max(base);
    lower <= du * (1.0 + 1e-9) && du <= (base / 2.0).exp() * (1.0 + 1e-9)
}
