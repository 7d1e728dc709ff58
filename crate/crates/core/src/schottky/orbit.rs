use serde::Serialize;

use super::group::{displacement, inverse_symbol, SchottkyGroup};
use crate::error::{Error, Result};
use crate::hyperbolic::{hyp_dist, HPoint, MobiusMap};
use crate::shift::Symbol;
use crate::Exec;

/// Default cap on tree nodes visited by one orbit search.
pub const DEFAULT_ORBIT_BUDGET: usize = 20_000_000;
/// Grid spacing of the radii used by [`critical_exponent`].
pub const RADIUS_STEP: f64 = 0.25;

/// Displacements `d(o, h·o) ≤ r` of all group elements, sorted. Depth-first
/// over reduced words, one subtree per first letter; a subtree is cut once
/// `d(o, w·o) > r + C`, since every extension then exceeds `r`.
pub fn orbit_displacements(g: &SchottkyGroup, r: f64, budget: usize, exec: Exec) -> Result<Vec<f64>> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Input(format!("radius {r} must be finite and nonnegative")));
    }
    let cut = r + g.gromov_constant();
    let letters: Vec<Symbol> = (0..g.symbol_count() as Symbol).collect();
    let per_budget = budget / letters.len().max(1);
    let parts = exec.map(&letters, |&s| subtree(g, s, r, cut, per_budget));
    let mut out = vec![0.0];
    for p in parts {
        out.extend(p?);
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

fn subtree(g: &SchottkyGroup, first: Symbol, r: f64, cut: f64, budget: usize) -> Result<Vec<f64>> {
    let n = g.symbol_count() as Symbol;
    let mut found = Vec::new();
    let mut stack: Vec<(MobiusMap, Symbol)> = vec![(*g.symbol(first), first)];
    let mut visited = 0usize;
    while let Some((m, last)) = stack.pop() {
        visited += 1;
        if visited > budget {
            return Err(Error::Budget(format!("orbit search at radius {r} exceeds {budget} nodes per first letter")));
        }
        let d = hyp_dist(HPoint::ORIGIN, m.apply(HPoint::ORIGIN));
        if d <= r {
            found.push(d);
        }
        if d > cut {
            continue;
        }
        for s in (0..n).rev().filter(|&s| s != inverse_symbol(last)) {
            stack.push((m.compose(g.symbol(s)), s));
        }
    }
    Ok(found)
}

/// `card{h : d(o, h·o) ≤ r}`.
pub fn orbit_count(g: &SchottkyGroup, r: f64) -> Result<usize> {
    Ok(orbit_displacements(g, r, DEFAULT_ORBIT_BUDGET, Exec::default())?.len())
}

/// Unpruned oracle: all reduced words of length `L` are generated level by
/// level until a whole level lies beyond `r + C`.
pub fn orbit_count_brute_force(g: &SchottkyGroup, r: f64, budget: usize) -> Result<usize> {
    let cut = r + g.gromov_constant();
    let n = g.symbol_count() as Symbol;
    let mut count = 1;
    let mut level: Vec<(Vec<Symbol>, MobiusMap)> = vec![(Vec::new(), MobiusMap::IDENTITY)];
    let mut total = 0usize;
    loop {
        let mut next = Vec::new();
        for (w, _) in &level {
            for s in 0..n {
                if w.last().is_some_and(|&l| s == inverse_symbol(l)) {
                    continue;
                }
                let mut v = w.clone();
                v.push(s);
                let m = g.word_to_isometry(&v)?;
                next.push((v, m));
            }
        }
        total += next.len();
        if total > budget {
            return Err(Error::Budget(format!("brute-force enumeration exceeds {budget} words")));
        }
        let ds: Vec<f64> = next.iter().map(|(_, m)| displacement(m)).collect();
        count += ds.iter().filter(|&&d| d <= r).count();
        if ds.iter().all(|&d| d > cut) {
            return Ok(count);
        }
        level = next;
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentEstimate {
    pub delta: f64,
    pub std_error: f64,
    pub r_max: f64,
    /// `(R, card{h : d(o,h·o) ≤ R})` on the fitted upper half of the grid.
    pub points: Vec<(f64, usize)>,
}

/// Least-squares slope of `log card{h : d(o,h·o) ≤ R}` against `R` over the
/// grid points `R ∈ [R_max/2, R_max]` with spacing [`RADIUS_STEP`].
pub fn critical_exponent(g: &SchottkyGroup, r_max: f64) -> Result<ExponentEstimate> {
    critical_exponent_with(g, r_max, DEFAULT_ORBIT_BUDGET, Exec::default())
}

pub fn critical_exponent_with(g: &SchottkyGroup, r_max: f64, budget: usize, exec: Exec) -> Result<ExponentEstimate> {
    let ds = orbit_displacements(g, r_max, budget, exec)?;
    let steps = (r_max / RADIUS_STEP + 1e-9).floor() as usize;
    let points: Vec<(f64, usize)> = (1..=steps)
        .map(|j| j as f64 * RADIUS_STEP)
        .filter(|&r| r >= r_max / 2.0)
        .map(|r| (r, ds.partition_point(|&d| d <= r)))
        .collect();
    if points.len() < 3 {
        return Err(Error::Input(format!("R_max = {r_max} leaves {} grid points; need at least 3", points.len())));
    }
    let xy: Vec<(f64, f64)> = points.iter().map(|&(r, c)| (r, (c as f64).ln())).collect();
    let (delta, std_error) = slope(&xy);
    Ok(ExponentEstimate { delta, std_error, r_max, points })
}

/// Ordinary least-squares slope and its standard error.
fn slope(xy: &[(f64, f64)]) -> (f64, f64) {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    let rss: f64 = xy.iter().map(|p| (p.1 - my - b * (p.0 - mx)).powi(2)).sum();
    let se = if xy.len() > 2 { (rss / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    (b, se)
}

#[derive(Debug, Clone, Serialize)]
pub struct PoincarePartial {
    pub s: f64,
    pub r: f64,
    pub value: f64,
    pub terms: usize,
    /// Fitted exponential rate of the unit-shell increments over the upper
    /// half of `[0, R]`; about `δ − s`.
    pub increment_rate: f64,
    /// Rate above zero: the partial sums grow super-linearly in `R`. A
    /// numerical flag, not a divergence proof.
    pub diverging: bool,
}

/// `Σ_{d(o,h·o) ≤ R} e^{−s d(o, h·o)}`.
pub fn poincare_partial(g: &SchottkyGroup, s: f64, r: f64) -> Result<PoincarePartial> {
    let ds = orbit_displacements(g, r, DEFAULT_ORBIT_BUDGET, Exec::default())?;
    let value = ds.iter().map(|&d| (-s * d).exp()).sum();
    let lo = (r / 2.0).ceil().max(1.0) as usize;
    let hi = r.floor() as usize;
    let shells: Vec<(f64, f64)> = (lo..=hi)
        .filter_map(|j| {
            let inc: f64 = ds.iter().filter(|&&d| d > j as f64 - 1.0 && d <= j as f64).map(|&d| (-s * d).exp()).sum();
            (inc > 0.0).then(|| (j as f64, inc.ln()))
        })
        .collect();
    let increment_rate = if shells.len() >= 2 { slope(&shells).0 } else { f64::NEG_INFINITY };
    Ok(PoincarePartial { s, r, value, terms: ds.len(), increment_rate, diverging: increment_rate > 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_only_below_the_shortest_displacement() {
        let g = SchottkyGroup::symmetric(2, 2.5).unwrap();
        assert_eq!(orbit_count(&g, 2.0).unwrap(), 1);
        let p = poincare_partial(&g, 1.0, 2.0).unwrap();
        assert_eq!(p.value, 1.0);
        assert_eq!(orbit_count(&g, 2.5 + 1e-9).unwrap(), 5);
    }

    #[test]
    fn cyclic_count_formula() {
        let ell = 2.5;
        let g = SchottkyGroup::symmetric(1, ell).unwrap();
        for r in [0.0, 1.0, 2.5001, 7.4, 7.6, 19.9, 30.0] {
            let expect = 2 * (r / ell).floor() as usize + 1;
            assert_eq!(orbit_count(&g, r).unwrap(), expect, "R = {r}");
        }
    }

    #[test]
    fn pruned_matches_brute_force() {
        for (k, ell) in [(1, 2.5), (2, 2.5), (2, 3.5), (3, 4.0)] {
            let g = SchottkyGroup::symmetric(k, ell).unwrap();
            for r in [3.0, 6.0, 8.0] {
                assert_eq!(orbit_count(&g, r).unwrap(), orbit_count_brute_force(&g, r, 5_000_000).unwrap());
            }
        }
        let g = SchottkyGroup::symmetric(2, 2.5).unwrap();
        assert_eq!(orbit_count(&g, 10.0).unwrap(), orbit_count_brute_force(&g, 10.0, 5_000_000).unwrap());
    }

    #[test]
    fn modes_agree_and_budget_refuses() {
        let g = SchottkyGroup::symmetric(2, 2.5).unwrap();
        let a = orbit_displacements(&g, 9.0, DEFAULT_ORBIT_BUDGET, Exec::Sequential).unwrap();
        let b = orbit_displacements(&g, 9.0, DEFAULT_ORBIT_BUDGET, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(matches!(orbit_displacements(&g, 12.0, 1000, Exec::Sequential), Err(Error::Budget(_))));
        assert!(matches!(critical_exponent(&g, 0.5), Err(Error::Input(_))));
    }

    #[test]
    fn poincare_growth_flag() {
        let g = SchottkyGroup::symmetric(2, 2.5).unwrap();
        let est = critical_exponent(&g, 12.0).unwrap();
        let below = poincare_partial(&g, est.delta - 0.1, 12.0).unwrap();
        assert!(below.diverging);
        let above = poincare_partial(&g, est.delta + 0.3, 12.0).unwrap();
        assert!(!above.diverging && above.increment_rate < 0.0);
        let big = poincare_partial(&g, 50.0, 12.0).unwrap();
        assert!((big.value - 1.0).abs() < 1e-40);
        let mut last = 0.0;
        for r in [4.0, 6.0, 8.0, 10.0] {
            let v = poincare_partial(&g, 0.8, r).unwrap().value;
            assert!(v >= last);
            last = v;
        }
    }
}
