use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperbolic::{hyp_dist, BoundaryPoint, HPoint, MobiusMap};
use crate::shift::Symbol;

const PING_PONG_TOL: f64 = 1e-9;

/// Closed arc of the boundary circle, in the angle coordinate
/// `θ = 2 atan ξ` (so `0 ↦ 0`, `∞ ↦ π`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Arc {
    pub centre: f64,
    pub half_width: f64,
}

impl Arc {
    pub fn new(centre: f64, half_width: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width < PI / 2.0) || !centre.is_finite() {
            return Err(Error::Input(format!("arc half-width {half_width} must lie in (0, π/2)")));
        }
        Ok(Self { centre: centre.rem_euclid(TAU), half_width })
    }

    /// Signed offset of `theta` from the centre, in `(−π, π]`.
    fn offset(&self, theta: f64) -> f64 {
        let d = (theta - self.centre).rem_euclid(TAU);
        if d > PI {
            d - TAU
        } else {
            d
        }
    }

    pub fn contains(&self, theta: f64, tol: f64) -> bool {
        self.offset(theta).abs() <= self.half_width + tol
    }

    pub fn endpoints(&self) -> (f64, f64) {
        (self.centre - self.half_width, self.centre + self.half_width)
    }

    /// Angular gap to another arc; negative when they overlap.
    pub fn gap(&self, other: &Arc) -> f64 {
        let d = self.offset(other.centre).abs();
        d - self.half_width - other.half_width
    }
}

fn boundary_at(theta: f64) -> BoundaryPoint {
    let t = theta.rem_euclid(TAU);
    if (t - PI).abs() < 1e-15 {
        BoundaryPoint::Infinity
    } else {
        BoundaryPoint::Real((t / 2.0).tan())
    }
}

/// Inverse symbol: `2i ↔ 2i+1`.
pub fn inverse_symbol(s: Symbol) -> Symbol {
    s ^ 1
}

/// Free group on `k` hyperbolic generators with ping-pong data. Symbol `2i`
/// stands for `g_i` and `2i+1` for `g_i⁻¹`; `disks[s]` is the attracting arc
/// of symbol `s`, so `s` maps the complement of `disks[s ^ 1]` into `disks[s]`.
#[derive(Debug, Clone, Serialize)]
pub struct SchottkyGroup {
    symbols: Vec<MobiusMap>,
    disks: Vec<Arc>,
    gromov_constant: f64,
}

impl SchottkyGroup {
    /// `generators[i]` with its attracting arc `plus[i]` and repelling arc
    /// `minus[i]`; disjointness and the ping-pong inclusions are verified.
    pub fn new(generators: &[(MobiusMap, Arc, Arc)]) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Input("a Schottky group needs at least one generator".into()));
        }
        let mut symbols = Vec::new();
        let mut disks = Vec::new();
        for (g, plus, minus) in generators {
            symbols.extend([*g, g.inverse()]);
            disks.extend([*plus, *minus]);
        }
        for i in 0..disks.len() {
            for j in i + 1..disks.len() {
                if disks[i].gap(&disks[j]) <= 0.0 {
                    return Err(Error::Input(format!("ping-pong arcs {i} and {j} intersect")));
                }
            }
        }
        for (s, g) in symbols.iter().enumerate() {
            check_ping_pong(g, &disks[s ^ 1], &disks[s]).map_err(|e| Error::Input(format!("symbol {s}: {e}")))?;
        }
        // (ξ|η)_o = −ln sin(θ/2) for boundary points at visual angle θ; the
        // supremum over points in distinct shadows bounds the cancellation
        // d(o,v o) + d(o,w o) − d(o,vw o) for reduced products
        let mut min_gap = f64::INFINITY;
        for i in 0..disks.len() {
            for j in i + 1..disks.len() {
                min_gap = min_gap.min(disks[i].gap(&disks[j]));
            }
        }
        let gromov_constant = -2.0 * (min_gap / 2.0).sin().ln();
        Ok(Self { symbols, disks, gromov_constant })
    }

    /// `k` conjugates of `dilation(ℓ)` by rotations about `o`, with axes
    /// through `o` at equal angles; arcs of half-width `2 atan e^{−ℓ/2}`.
    pub fn symmetric(k: usize, ell: f64) -> Result<Self> {
        if k == 0 || !(ell > 0.0 && ell.is_finite()) {
            return Err(Error::Input(format!("symmetric group needs k ≥ 1 and ℓ > 0, got k = {k}, ℓ = {ell}")));
        }
        let alpha = 2.0 * (-ell / 2.0).exp().atan();
        let gens = (0..k)
            .map(|j| {
                let turn = PI * j as f64 / k as f64;
                let r = MobiusMap::rotation(turn / 2.0);
                let g = r.compose(&MobiusMap::dilation(ell)).compose(&r.inverse());
                Ok((g, Arc::new(PI + turn, alpha)?, Arc::new(turn, alpha)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&gens)
    }

    /// Subgroup generated by the listed generators, with their arcs.
    pub fn subgroup(&self, generators: &[usize]) -> Result<Self> {
        let gens = generators
            .iter()
            .map(|&i| {
                if i >= self.rank() {
                    return Err(Error::Input(format!("generator {i} out of range for rank {}", self.rank())));
                }
                Ok((self.symbols[2 * i], self.disks[2 * i], self.disks[2 * i + 1]))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&gens)
    }

    pub fn rank(&self) -> usize {
        self.symbols.len() / 2
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn symbol(&self, s: Symbol) -> &MobiusMap {
        &self.symbols[s as usize]
    }

    pub fn disks(&self) -> &[Arc] {
        &self.disks
    }

    /// `C` with `d(o, vw·o) ≥ d(o, v·o) + d(o, w·o) − C` for reduced `vw`.
    pub fn gromov_constant(&self) -> f64 {
        self.gromov_constant
    }

    pub fn min_displacement(&self) -> f64 {
        self.symbols.iter().map(|g| displacement(g)).fold(f64::INFINITY, f64::min)
    }

    pub fn word_to_isometry(&self, w: &[Symbol]) -> Result<MobiusMap> {
        let n = self.symbol_count() as Symbol;
        if let Some(&s) = w.iter().find(|&&s| s >= n) {
            return Err(Error::SymbolOutOfRange { symbol: s as usize, size: n as usize });
        }
        if let Some(i) = w.windows(2).position(|p| p[1] == inverse_symbol(p[0])) {
            return Err(Error::Input(format!("word is not reduced: cancellation at position {i}")));
        }
        Ok(w.iter().fold(MobiusMap::IDENTITY, |acc, &s| acc.compose(&self.symbols[s as usize])))
    }
}

fn check_ping_pong(g: &MobiusMap, repelling: &Arc, attracting: &Arc) -> std::result::Result<(), String> {
    // the complement of the repelling arc is an arc; its image is the arc
    // through the images of its endpoints and of its midpoint
    let (lo, hi) = repelling.endpoints();
    let image = |t: f64| g.apply_boundary(boundary_at(t)).angle();
    let (a, m, b) = (image(lo), image(repelling.centre + PI), image(hi));
    if ![a, m, b].iter().all(|&t| attracting.contains(t, PING_PONG_TOL)) {
        return Err("does not map the complement of its repelling arc into its attracting arc".into());
    }
    let (oa, om, ob) = (attracting.offset(a), attracting.offset(m), attracting.offset(b));
    if !(oa.min(ob) - PING_PONG_TOL <= om && om <= oa.max(ob) + PING_PONG_TOL) {
        return Err("image of the complementary arc wraps around the attracting arc".into());
    }
    Ok(())
}

/// `d(o, g·o)`.
pub fn displacement(g: &MobiusMap) -> f64 {
    hyp_dist(HPoint::ORIGIN, g.apply(HPoint::ORIGIN))
}

/// Group files: `#` comments, then either one line `symmetric <k> <ℓ>` or
/// one line per generator `gen a b c d  θ⁺ w⁺  θ⁻ w⁻` (matrix entries, then
/// centre and half-width of the attracting and repelling arcs in radians).
pub fn parse_group(text: &str) -> Result<SchottkyGroup> {
    let mut gens = Vec::new();
    let mut symmetric = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let mut tok = line.split_whitespace();
        let head = tok.next().unwrap_or("");
        let nums = tok
            .map(|t| t.parse::<f64>().map_err(|_| err(format!("'{t}' is not a number"))))
            .collect::<Result<Vec<_>>>()?;
        match head {
            "symmetric" => {
                if nums.len() != 2 || nums[0] < 1.0 || nums[0].fract() != 0.0 {
                    return Err(err("expected 'symmetric <k> <ell>'".into()));
                }
                symmetric = Some((nums[0] as usize, nums[1]));
            }
            "gen" => {
                if nums.len() != 8 {
                    return Err(err(format!("expected 8 numbers after 'gen', found {}", nums.len())));
                }
                let g = MobiusMap::new(nums[0], nums[1], nums[2], nums[3]).map_err(|e| err(e.to_string()))?;
                let plus = Arc::new(nums[4], nums[5]).map_err(|e| err(e.to_string()))?;
                let minus = Arc::new(nums[6], nums[7]).map_err(|e| err(e.to_string()))?;
                gens.push((g, plus, minus));
            }
            other => return Err(err(format!("unknown directive '{other}'"))),
        }
    }
    match (symmetric, gens.is_empty()) {
        (Some((k, ell)), true) => SchottkyGroup::symmetric(k, ell),
        (None, false) => SchottkyGroup::new(&gens),
        (Some(_), false) => Err(Error::Input("a group file uses either 'symmetric' or 'gen' lines, not both".into())),
        (None, true) => Err(Error::Input("group file defines no generators".into())),
    }
}
