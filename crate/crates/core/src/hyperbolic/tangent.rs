use std::f64::consts::{FRAC_PI_2, PI};

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use super::point::{busemann, gromov_product, BoundaryPoint, HPoint, MobiusMap};
use crate::error::{Error, Result};

/// Unit tangent vector: base point and the Euclidean direction angle
/// `θ ∈ [0, 2π)` (`π/2` points straight up). Serialized as `[x, y, θ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitTangent {
    base: HPoint,
    theta: f64,
}

impl TryFrom<[f64; 3]> for UnitTangent {
    type Error = Error;
    fn try_from(v: [f64; 3]) -> Result<Self> {
        UnitTangent::new(HPoint::new(v[0], v[1])?, v[2])
    }
}

impl From<UnitTangent> for [f64; 3] {
    fn from(v: UnitTangent) -> Self {
        [v.base.x, v.base.y, v.theta]
    }
}

impl UnitTangent {
    pub fn new(base: HPoint, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::Input(format!("direction angle {theta} is not finite")));
        }
        Ok(Self { base, theta: theta.rem_euclid(2.0 * PI) })
    }

    /// The upward vector at `o`.
    pub fn reference() -> Self {
        Self { base: HPoint::ORIGIN, theta: FRAC_PI_2 }
    }

    pub fn base(&self) -> HPoint {
        self.base
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// The isometry `g = N_x A_y K((θ − π/2)/2)` carrying the reference
    /// vector to `self`.
    pub fn frame(&self) -> MobiusMap {
        let n = MobiusMap::translation(self.base.x);
        let a = MobiusMap::dilation(self.base.y.ln());
        let k = MobiusMap::rotation((self.theta - FRAC_PI_2) / 2.0);
        n.compose(&a).compose(&k)
    }

    /// Image of the reference vector under `g`: base `g·i`, direction of
    /// `g′(i)·i = i/(ci + d)²`.
    pub fn from_frame(g: &MobiusMap) -> Self {
        let [[_, _], [c, d]] = g.matrix();
        let base = g.apply(HPoint::ORIGIN);
        let w = Complex64::new(d, c);
        Self { base, theta: (FRAC_PI_2 - 2.0 * w.arg()).rem_euclid(2.0 * PI) }
    }

    /// The vector `−v`.
    pub fn flip(&self) -> Self {
        Self { base: self.base, theta: (self.theta + PI).rem_euclid(2.0 * PI) }
    }

    pub fn plus(&self) -> BoundaryPoint {
        self.frame().apply_boundary(BoundaryPoint::Infinity)
    }

    pub fn minus(&self) -> BoundaryPoint {
        self.frame().apply_boundary(BoundaryPoint::Real(0.0))
    }

    /// Isometric image `h·v`.
    pub fn transform(&self, h: &MobiusMap) -> Self {
        Self::from_frame(&h.compose(&self.frame()))
    }
}

/// `g^t`, evaluated exactly as `frame · diag(e^{t/2}, e^{−t/2})`.
pub fn geodesic_flow(v: &UnitTangent, t: f64) -> UnitTangent {
    UnitTangent::from_frame(&v.frame().compose(&MobiusMap::dilation(t)))
}

/// Footpoint of `g^t v` for a fixed frame; the hot path of the integrals.
pub(crate) fn footpoint(frame: &MobiusMap, t: f64) -> HPoint {
    frame.apply(HPoint { x: 0.0, y: t.exp() })
}

/// Hopf coordinates `(v⁻, v⁺, s)` with `s = β_{v⁺}(o, π(v))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HopfCoords {
    pub v_minus: BoundaryPoint,
    pub v_plus: BoundaryPoint,
    pub s: f64,
}

pub fn to_hopf(v: &UnitTangent) -> HopfCoords {
    let g = v.frame();
    let v_plus = g.apply_boundary(BoundaryPoint::Infinity);
    HopfCoords {
        v_minus: g.apply_boundary(BoundaryPoint::Real(0.0)),
        v_plus,
        s: busemann(HPoint::ORIGIN, v.base, v_plus),
    }
}

/// The vector on the line `(v⁻, v⁺)`, pointing at `v⁺`, whose footpoint
/// has `β_{v⁺}(o, ·) = s`.
pub fn from_hopf(h: &HopfCoords) -> Result<UnitTangent> {
    let g0 = MobiusMap::with_endpoints(h.v_minus, h.v_plus)?;
    let s0 = busemann(HPoint::ORIGIN, g0.apply(HPoint::ORIGIN), h.v_plus);
    Ok(UnitTangent::from_frame(&g0.compose(&MobiusMap::dilation(h.s - s0))))
}

/// The coordinate `−β_{v⁻}(o, π(v))`. Like `s` it grows by `t` under `g^t`;
/// it is constant on strong unstable leaves, as `s` is on strong stable ones.
pub fn unstable_coordinate(v: &UnitTangent) -> f64 {
    -busemann(HPoint::ORIGIN, v.base, v.minus())
}

/// Hopf coordinates of `−v`: `(v⁺, v⁻, −s + 2(v⁻|v⁺)_o)`. The Gromov
/// product term vanishes exactly when the line through `v` passes through `o`.
pub fn flip_hopf(h: &HopfCoords) -> HopfCoords {
    HopfCoords { v_minus: h.v_plus, v_plus: h.v_minus, s: -h.s + 2.0 * gromov_product(h.v_minus, h.v_plus) }
}

/// Strong stable leaf of `u`: same `u⁺`, same `s`.
pub fn on_stable_leaf(u: &UnitTangent, w: &UnitTangent, tol: f64) -> bool {
    let (hu, hw) = (to_hopf(u), to_hopf(w));
    hu.v_plus.separation(hw.v_plus) <= tol && (hu.s - hw.s).abs() <= tol
}

/// Strong unstable leaf of `u`, the flip of the stable leaf of `−u`: same
/// `u⁻`, same unstable coordinate.
pub fn on_unstable_leaf(u: &UnitTangent, v: &UnitTangent, tol: f64) -> bool {
    u.minus().separation(v.minus()) <= tol && (unstable_coordinate(u) - unstable_coordinate(v)).abs() <= tol
}

/// The vector of `W^{uu}(u)` whose forward endpoint is `plus`.
pub fn unstable_leaf_vector(u: &UnitTangent, plus: BoundaryPoint) -> Result<UnitTangent> {
    let minus = u.minus();
    let s = unstable_coordinate(u) + 2.0 * gromov_product(minus, plus);
    from_hopf(&HopfCoords { v_minus: minus, v_plus: plus, s })
}

/// The vector of `W^{ss}(u)` whose backward endpoint is `minus`.
pub fn stable_leaf_vector(u: &UnitTangent, minus: BoundaryPoint) -> Result<UnitTangent> {
    let h = to_hopf(u);
    from_hopf(&HopfCoords { v_minus: minus, v_plus: h.v_plus, s: h.s })
}

/// Oriented geodesic line given by its endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "(BoundaryPoint, BoundaryPoint)", into = "(BoundaryPoint, BoundaryPoint)")]
pub struct Geodesic {
    minus: BoundaryPoint,
    plus: BoundaryPoint,
    frame: MobiusMap,
}

impl TryFrom<(BoundaryPoint, BoundaryPoint)> for Geodesic {
    type Error = Error;
    fn try_from((minus, plus): (BoundaryPoint, BoundaryPoint)) -> Result<Self> {
        Geodesic::new(minus, plus)
    }
}

impl From<Geodesic> for (BoundaryPoint, BoundaryPoint) {
    fn from(g: Geodesic) -> Self {
        (g.minus, g.plus)
    }
}

impl Geodesic {
    pub fn new(minus: BoundaryPoint, plus: BoundaryPoint) -> Result<Self> {
        let v = from_hopf(&HopfCoords { v_minus: minus, v_plus: plus, s: 0.0 })?;
        Ok(Self { minus, plus, frame: v.frame() })
    }

    pub fn through(v: &UnitTangent) -> Self {
        Self { minus: v.minus(), plus: v.plus(), frame: geodesic_flow(v, -to_hopf(v).s).frame() }
    }

    pub fn minus(&self) -> BoundaryPoint {
        self.minus
    }

    pub fn plus(&self) -> BoundaryPoint {
        self.plus
    }

    /// Unit-speed parametrization, `t = 0` on the horosphere of `plus` through `o`.
    pub fn point(&self, t: f64) -> HPoint {
        footpoint(&self.frame, t)
    }

    pub fn tangent(&self, t: f64) -> UnitTangent {
        UnitTangent::from_frame(&self.frame.compose(&MobiusMap::dilation(t)))
    }
}

/// CSV of the orbit `g^t v` at the given times.
pub fn flow_trace_csv(v: &UnitTangent, times: &[f64]) -> String {
    let mut out = String::from("t,x,y,theta,v_minus,v_plus,s\n");
    for &t in times {
        let w = geodesic_flow(v, t);
        let h = to_hopf(&w);
        out.push_str(&format!(
            "{t},{},{},{},{},{},{}\n",
            w.base.x, w.base.y, w.theta, h.v_minus, h.v_plus, h.s
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::point::hyp_dist;

    fn close(a: &UnitTangent, b: &UnitTangent, tol: f64) -> bool {
        let dt = (a.theta - b.theta).rem_euclid(2.0 * PI);
        hyp_dist(a.base, b.base) < tol && dt.min(2.0 * PI - dt) < tol
    }

    #[test]
    fn frame_round_trip() {
        for (x, y, th) in [(0.3, 0.4, 0.1), (-2.0, 3.0, 4.0), (0.0, 1.0, FRAC_PI_2), (1.0, 0.01, 6.2)] {
            let v = UnitTangent::new(HPoint::new(x, y).unwrap(), th).unwrap();
            assert!(close(&UnitTangent::from_frame(&v.frame()), &v, 1e-12));
        }
    }

    #[test]
    fn vertical_flow() {
        let v = UnitTangent::reference();
        let w = geodesic_flow(&v, 1.0);
        assert!((w.base.x).abs() < 1e-15 && (w.base.y - std::f64::consts::E).abs() < 1e-14);
        assert!((w.theta - FRAC_PI_2).abs() < 1e-14);
        assert!(close(&geodesic_flow(&v, 0.0), &v, 1e-15));
    }

    #[test]
    fn flow_moves_at_unit_speed() {
        let v = UnitTangent::new(HPoint::new(0.7, 0.3).unwrap(), 2.2).unwrap();
        for t in [0.1, 1.0, 3.0] {
            assert!((hyp_dist(v.base, geodesic_flow(&v, t).base) - t).abs() < 1e-12);
        }
    }

    #[test]
    fn reference_hopf() {
        let h = to_hopf(&UnitTangent::reference());
        assert_eq!(h.v_minus, BoundaryPoint::Real(0.0));
        assert_eq!(h.v_plus, BoundaryPoint::Infinity);
        assert_eq!(h.s, 0.0);
        let back = from_hopf(&h).unwrap();
        assert!(close(&back, &UnitTangent::reference(), 1e-15));
    }

    #[test]
    fn flip_of_a_line_through_o_negates_s() {
        let v = geodesic_flow(&UnitTangent::new(HPoint::ORIGIN, 0.4).unwrap(), 1.3);
        let (h, hf) = (to_hopf(&v), to_hopf(&v.flip()));
        assert!((hf.s + h.s).abs() < 1e-12);
        assert!(hf.v_plus.separation(h.v_minus) < 1e-12);
    }

    #[test]
    fn geodesic_serializes_as_endpoints() {
        let g = Geodesic::new(BoundaryPoint::Real(-1.0), BoundaryPoint::Infinity).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, "[-1.0,\"inf\"]");
        let back: Geodesic = serde_json::from_str(&s).unwrap();
        assert!(hyp_dist(back.point(0.7), g.point(0.7)) < 1e-15);
        assert!(serde_json::from_str::<Geodesic>("[2.0, 2.0]").is_err());
        let v: UnitTangent = serde_json::from_str("[0.5, 2.0, 1.0]").unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap(), "[0.5,2.0,1.0]");
    }

    #[test]
    fn trace_has_a_row_per_time() {
        let csv = flow_trace_csv(&UnitTangent::reference(), &[0.0, 1.0]);
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.lines().nth(1).unwrap().starts_with("0,0,1,"));
    }
}
