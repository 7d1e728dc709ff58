use serde::Serialize;

use super::distance::{dynamical_distance, phase_distance, LEAF_TOL};
use super::point::{busemann, hyp_dist, BoundaryPoint, HPoint};
use super::tangent::{
    from_hopf, geodesic_flow, on_stable_leaf, on_unstable_leaf, to_hopf, unstable_coordinate, Geodesic, HopfCoords,
    UnitTangent,
};
use crate::error::{Error, Result};
use crate::Exec;

/// Local product `[u, v] = w` with `w ∈ W^{ss}(u) ∩ W^{uu}(g^t v)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub w: UnitTangent,
    pub t: f64,
    /// `|t| < ε`, `d(w, u) < ε` and `d(w, g^t v) < ε`.
    pub local: bool,
}

/// `w = (v⁻, u⁺, s_u)`; `t` is the shift of unstable coordinates that puts
/// `w` on the unstable leaf of `g^t v`. Both memberships are re-checked.
pub fn bracket(u: &UnitTangent, v: &UnitTangent, eps: f64) -> Result<Bracket> {
    let hu = to_hopf(u);
    let v_minus = v.minus();
    if v_minus.separation(hu.v_plus) < 1e-12 {
        return Err(Error::Singular("v⁻ = u⁺: the leaves W^ss(u) and W^uu(v) do not meet".into()));
    }
    let w = from_hopf(&HopfCoords { v_minus, v_plus: hu.v_plus, s: hu.s })?;
    let t = unstable_coordinate(&w) - unstable_coordinate(v);
    let vt = geodesic_flow(v, t);
    if !on_stable_leaf(u, &w, LEAF_TOL) || !on_unstable_leaf(&vt, &w, LEAF_TOL) {
        return Err(Error::Numerical("bracket postconditions failed".into()));
    }
    let local = t.abs() < eps && phase_distance(&w, u) < eps && phase_distance(&w, &vt) < eps;
    Ok(Bracket { w, t, local })
}

/// `β(ε) = ε / (2L)`, with `L` the largest observed ratio of
/// `max{|t|, d(w,u), d(w, g^t v)}` to `d(u, v)` over sample pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BracketCalibration {
    pub eps: f64,
    pub lipschitz: f64,
    pub beta: f64,
    pub samples: usize,
}

pub fn calibrate_bracket(eps: f64, pairs: &[(UnitTangent, UnitTangent)]) -> Result<BracketCalibration> {
    let mut l: f64 = 0.0;
    for (u, v) in pairs {
        let d = phase_distance(u, v);
        if d == 0.0 {
            continue;
        }
        let b = bracket(u, v, eps)?;
        let vt = geodesic_flow(v, b.t);
        let m = b.t.abs().max(phase_distance(&b.w, u)).max(phase_distance(&b.w, &vt));
        l = l.max(m / d);
    }
    if !(l > 0.0) {
        return Err(Error::Input("no distinct pairs to calibrate on".into()));
    }
    Ok(BracketCalibration { eps, lipschitz: l, beta: eps / (2.0 * l), samples: pairs.len() })
}

/// Outcome of the shadowing comparison for two lines that stay `ε`-close
/// over a window of length `2s`.
///
/// Two distinct lines are at infinite Hausdorff distance as sets, so the
/// quantity compared with the bound is the distance realized at the centre of
/// the close window: from the point `p` of the first line nearest to the
/// second, to that line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Shadowing {
    pub hausdorff: f64,
    pub bound: f64,
    /// Parameter of `p` on the first line.
    pub center: f64,
    /// Largest sampled distance over the window.
    pub window_gap: f64,
}

impl Shadowing {
    pub fn holds(&self) -> bool {
        self.hausdorff <= self.bound
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Minimizer of a convex function on `[a, b]`.
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2);
        }
    }
    let m = (a + b) / 2.0;
    (m, f(m))
}

/// Distance from `p` to the line `g`, and the parameter of the nearest point,
/// by golden-section search (the distance to a geodesic is convex along it).
pub fn distance_to_line(p: HPoint, g: &Geodesic) -> (f64, f64) {
    // the horosphere of g⁺ through p crosses g at parameter t0
    let t0 = busemann(HPoint::ORIGIN, p, g.plus());
    let r = 2.0 * hyp_dist(p, g.point(t0)) + 1e-9;
    let (t, d) = golden_min(|t| hyp_dist(p, g.point(t)), t0 - r, t0 + r, 1e-12 * (1.0 + t0.abs()));
    (d, t)
}

const CENTER_RANGE: f64 = 30.0;

/// Shadowing check: `ε ∈ (0, 1]`, `s ≥ 2`, and the lines must stay within
/// `ε` over parameter length `2s` around the centre (checked at `20s` points).
/// Returns the centre distance and the bound `8 e^ε e^{−s}`.
pub fn shadowing_gap(g1: &Geodesic, g2: &Geodesic, eps: f64, s: f64) -> Result<Shadowing> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::Input(format!("eps = {eps} must lie in (0, 1]")));
    }
    if !(s >= 2.0) {
        return Err(Error::Input(format!("s = {s} must be at least 2")));
    }
    let (center, _) = golden_min(|t| distance_to_line(g1.point(t), g2).0, -CENTER_RANGE, CENTER_RANGE, 1e-9);
    let p = g1.point(center);
    let (hausdorff, t2) = distance_to_line(p, g2);
    let samples = (20.0 * s).ceil() as usize;
    let mut window_gap: f64 = 0.0;
    for j in 0..=samples {
        let tau = -s + 2.0 * s * j as f64 / samples as f64;
        window_gap = window_gap.max(hyp_dist(g1.point(center + tau), g2.point(t2 + tau)));
    }
    if window_gap > eps {
        return Err(Error::Precondition(format!(
            "the lines separate by {window_gap:.3e} > eps = {eps} within the window of length {}",
            2.0 * s
        )));
    }
    Ok(Shadowing { hausdorff, bound: 8.0 * eps.exp() * (-s).exp(), center, window_gap })
}

/// Greedy `(n, α)`-separated subset: scan the points in order and keep one
/// when its `d_n`-distance to every kept point is at least `α`. Returns the
/// kept indices; every rejected point is within `α` of a kept one.
pub fn greedy_separated_set(points: &[UnitTangent], n: usize, alpha: f64, exec: Exec) -> Result<Vec<usize>> {
    if n == 0 || !(alpha > 0.0) {
        return Err(Error::Input(format!("need n >= 1 and alpha > 0, got n = {n}, alpha = {alpha}")));
    }
    let mut kept: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let far = exec.map(&kept, |&j| dynamical_distance(p, &points[j], n) >= alpha);
        if far.iter().all(|&f| f) {
            kept.push(i);
        }
    }
    Ok(kept)
}

/// Random vectors in a box of base points, for sampled invariants.
pub mod sample {
    use rand::Rng;

    use super::*;

    /// Base points with `|x| ≤ half_width` and `y` log-uniform in `[1/y_spread, y_spread]`.
    #[derive(Debug, Clone, Copy)]
    pub struct Window {
        pub half_width: f64,
        pub y_spread: f64,
    }

    impl Default for Window {
        fn default() -> Self {
            Self { half_width: 2.0, y_spread: 2.0 }
        }
    }

    pub fn point(rng: &mut impl Rng, w: Window) -> HPoint {
        let ly = w.y_spread.ln();
        HPoint { x: rng.random_range(-w.half_width..=w.half_width), y: rng.random_range(-ly..=ly).exp() }
    }

    pub fn tangent(rng: &mut impl Rng, w: Window) -> UnitTangent {
        UnitTangent::new(point(rng, w), rng.random_range(0.0..std::f64::consts::TAU)).expect("finite angle")
    }

    /// A vector near `v`: base moved by up to `r` (hyperbolically, roughly)
    /// and direction turned by up to `r`.
    pub fn nearby(rng: &mut impl Rng, v: &UnitTangent, r: f64) -> UnitTangent {
        let b = v.base();
        let base = HPoint { x: b.x + b.y * rng.random_range(-r..=r), y: b.y * rng.random_range(-r..=r).exp() };
        UnitTangent::new(base, v.theta() + rng.random_range(-r..=r)).expect("finite angle")
    }

    /// A boundary point at angular position uniform on the circle.
    pub fn boundary(rng: &mut impl Rng) -> BoundaryPoint {
        BoundaryPoint::Real((rng.random_range(-1.0..1.0f64) * std::f64::consts::FRAC_PI_2).tan())
    }

    /// `ξ` moved along the circle by an angle in `[−r, r]`.
    pub fn perturb_boundary(rng: &mut impl Rng, xi: BoundaryPoint, r: f64) -> BoundaryPoint {
        let a = xi.angle() + rng.random_range(-r..=r);
        BoundaryPoint::Real((a / 2.0).tan())
    }
}
