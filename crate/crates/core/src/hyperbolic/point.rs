use std::f64::consts::PI;
use std::fmt;

use num::complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Point of the upper half-plane, `y > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite() && y > 0.0) {
            return Err(Error::Input(format!("({x}, {y}) is not in the upper half-plane")));
        }
        Ok(Self { x, y })
    }

    /// The base point `o = i` all Hopf data refer to.
    pub const ORIGIN: HPoint = HPoint { x: 0.0, y: 1.0 };

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    pub(crate) fn from_complex(z: Complex64) -> Self {
        Self { x: z.re, y: z.im }
    }
}

/// Point of `∂ℍ² = ℝ ∪ {∞}`. Serialized as a number, or the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Real(f64),
    Infinity,
}

impl BoundaryPoint {
    pub fn is_infinite(self) -> bool {
        matches!(self, BoundaryPoint::Infinity)
    }

    /// Position on the circle `∂ℍ² ≅ S¹` via `ξ ↦ 2 atan ξ`, with `∞ ↦ π`.
    pub fn angle(self) -> f64 {
        match self {
            BoundaryPoint::Real(v) => 2.0 * v.atan(),
            BoundaryPoint::Infinity => PI,
        }
    }

    /// Angular separation on the circle, in `[0, π]`.
    pub fn separation(self, other: BoundaryPoint) -> f64 {
        let d = (self.angle() - other.angle()).rem_euclid(2.0 * PI);
        d.min(2.0 * PI - d)
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryPoint::Real(v) => write!(f, "{v}"),
            BoundaryPoint::Infinity => f.write_str("inf"),
        }
    }
}

impl Serialize for BoundaryPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BoundaryPoint::Real(v) => s.serialize_f64(*v),
            BoundaryPoint::Infinity => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for BoundaryPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) if v.is_finite() => Ok(BoundaryPoint::Real(v)),
            Repr::Str(s) if s == "inf" => Ok(BoundaryPoint::Infinity),
            _ => Err(serde::de::Error::custom("expected a finite number or \"inf\"")),
        }
    }
}

/// Orientation-preserving isometry `z ↦ (az+b)/(cz+d)`, kept at determinant 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusMap {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl MobiusMap {
    /// Normalizes by `√det`; the determinant must be positive.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0 && det.is_finite()) {
            return Err(Error::Input(format!("matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}, need > 0")));
        }
        let r = det.sqrt();
        Ok(Self { a: a / r, b: b / r, c: c / r, d: d / r })
    }

    pub const IDENTITY: MobiusMap = MobiusMap { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// `diag(e^{ℓ/2}, e^{−ℓ/2})`: translation by `ℓ` along the imaginary axis.
    pub fn dilation(l: f64) -> Self {
        Self { a: (l / 2.0).exp(), b: 0.0, c: 0.0, d: (-l / 2.0).exp() }
    }

    /// Rotation about `i` fixing it, `[[cos φ, sin φ], [−sin φ, cos φ]]`.
    pub fn rotation(phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self { a: c, b: s, c: -s, d: c }
    }

    pub fn translation(x: f64) -> Self {
        Self { a: 1.0, b: x, c: 0.0, d: 1.0 }
    }

    pub fn matrix(&self) -> [[f64; 2]; 2] {
        [[self.a, self.b], [self.c, self.d]]
    }

    /// `ad − bc` with a compensated product, accurate even when the
    /// entries are large and the terms nearly cancel.
    pub fn det(&self) -> f64 {
        let w = self.b * self.c;
        let e = (-self.b).mul_add(self.c, w);
        self.a.mul_add(self.d, -w) + e
    }

    /// `self ∘ other`, renormalized to determinant 1.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let m = Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        };
        m.renormalized()
    }

    pub fn inverse(&self) -> MobiusMap {
        Self { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Rescales to determinant 1 when the deviation exceeds what rounding
    /// of the entries explains; below that the entries are the better data.
    fn renormalized(self) -> Self {
        let det = self.det();
        let noise = 64.0 * f64::EPSILON * ((self.a * self.d).abs() + (self.b * self.c).abs());
        if (det - 1.0).abs() <= noise {
            return self;
        }
        let r = det.sqrt();
        Self { a: self.a / r, b: self.b / r, c: self.c / r, d: self.d / r }
    }

    pub fn apply(&self, p: HPoint) -> HPoint {
        HPoint::from_complex(self.apply_complex(p.to_complex()))
    }

    pub(crate) fn apply_complex(&self, z: Complex64) -> Complex64 {
        // Im = Im z / |cz + d|² at determinant 1, avoiding the cancellation
        // in ad − bc for large entries
        let den = z * self.c + self.d;
        let n2 = den.norm_sqr();
        let re = self.a * self.c * z.norm_sqr() + (self.a * self.d + self.b * self.c) * z.re + self.b * self.d;
        Complex64::new(re / n2, z.im / n2)
    }

    pub fn apply_boundary(&self, xi: BoundaryPoint) -> BoundaryPoint {
        let (num, den) = match xi {
            BoundaryPoint::Real(v) => (self.a * v + self.b, self.c * v + self.d),
            BoundaryPoint::Infinity => (self.a, self.c),
        };
        if den == 0.0 {
            BoundaryPoint::Infinity
        } else {
            BoundaryPoint::Real(num / den)
        }
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// `2 arcosh(|tr|/2)` for hyperbolic maps, 0 otherwise.
    pub fn translation_length(&self) -> f64 {
        let t = self.trace().abs() / 2.0;
        if t > 1.0 {
            2.0 * t.acosh()
        } else {
            0.0
        }
    }

    /// An isometry with `self·0 = minus` and `self·∞ = plus`; the endpoints
    /// must differ.
    pub fn with_endpoints(minus: BoundaryPoint, plus: BoundaryPoint) -> Result<Self> {
        use BoundaryPoint::*;
        match (minus, plus) {
            (Infinity, Infinity) => Err(Error::Singular("both endpoints at infinity".into())),
            (Real(m), Infinity) => Ok(Self::translation(m)),
            (Infinity, Real(p)) => Ok(Self { a: p, b: -1.0, c: 1.0, d: 0.0 }),
            (Real(m), Real(p)) => {
                if m == p {
                    return Err(Error::Singular(format!("coincident endpoints {m}")));
                }
                let sigma = (p - m).signum();
                Self::new(p, sigma * m, 1.0, sigma)
            }
        }
    }
}

/// `d(p, q) = 2 asinh(|p − q| / (2√(y_p y_q)))`, equal to
/// `arcosh(1 + |p − q|²/(2 y_p y_q))` but accurate for nearby points.
pub fn hyp_dist(p: HPoint, q: HPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    2.0 * ((dx * dx + dy * dy).sqrt() / (2.0 * (p.y * q.y).sqrt())).asinh()
}

/// Busemann cocycle `β_ξ(x, y)`: `log(y.y / x.y)` for `ξ = ∞`, otherwise
/// read through `z ↦ −1/(z − ξ)`, which sends `ξ` to `∞`.
pub fn busemann(x: HPoint, y: HPoint, xi: BoundaryPoint) -> f64 {
    match xi {
        BoundaryPoint::Infinity => (y.y / x.y).ln(),
        BoundaryPoint::Real(v) => {
            let nx = (x.x - v).powi(2) + x.y * x.y;
            let ny = (y.x - v).powi(2) + y.y * y.y;
            (y.y / x.y).ln() + (nx / ny).ln()
        }
    }
}

/// Gromov product `(ξ|η)_o` of two boundary points seen from `o = i`:
/// `log(√((1+ξ²)(1+η²)) / |ξ − η|)`, with `∞` handled as a limit.
pub fn gromov_product(xi: BoundaryPoint, eta: BoundaryPoint) -> f64 {
    use BoundaryPoint::*;
    match (xi, eta) {
        (Infinity, Infinity) => f64::INFINITY,
        (Real(v), Infinity) | (Infinity, Real(v)) => 0.5 * (1.0 + v * v).ln(),
        (Real(a), Real(b)) => 0.5 * ((1.0 + a * a) * (1.0 + b * b)).ln() - (a - b).abs().ln(),
    }
}
