use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{LocallyConstantFn, MarkovMeasure};
use crate::shift::{words, Sft, Symbol, Word};
use crate::Exec;

/// Mass and periodic Birkhoff average of one candidate cylinder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WordDiagnostics {
    pub mass: f64,
    pub average: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoodCylinderSet {
    pub n: usize,
    pub words: Vec<Word>,
    pub diagnostics: Vec<WordDiagnostics>,
    /// Target entropy `h_ν`.
    pub h: f64,
    pub eps: f64,
    pub tau_int: f64,
    pub mass_bounds: (f64, f64),
    pub ambient: Sft,
    /// State every selected word starts at and returns to (proper ambient SFTs).
    pub marker: Option<Symbol>,
    /// Candidates enumerated before filtering.
    pub candidates: usize,
}

impl GoodCylinderSet {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// `e^{n(h−ε)} ≤ M ≤ e^{n(h+ε)}`.
    pub fn count_within_bounds(&self) -> bool {
        let n = self.n as f64;
        let m = (self.len() as f64).ln();
        n * (self.h - self.eps) <= m && m <= n * (self.h + self.eps)
    }

    /// Distinct words of one length name disjoint cylinders, so the greedy
    /// disjointification keeps every selected word.
    pub fn disjoint(&self) -> bool {
        self.words.windows(2).all(|p| p[0] != p[1])
    }
}

/// State of maximal stationary mass (lowest index on ties).
pub fn marker_state(nu: &MarkovMeasure) -> Symbol {
    let pi = nu.pi();
    (0..pi.len()).fold(0, |best, i| if pi[i] > pi[best] { i } else { best }) as Symbol
}

/// Keeps the admissible `n`-words whose mass lies in
/// `[e^{−n(h+ε)}, e^{−n(h−ε)}]` and whose periodic Birkhoff average of `τ` is
/// within `ε/2` of `∫τ dν`. On a proper ambient SFT only words that start at
/// the marker state and may be followed by it are candidates.
pub fn select_good_cylinders(
    nu: &MarkovMeasure,
    tau: &LocallyConstantFn,
    eps: f64,
    n: usize,
    exec: Exec,
    budget: u128,
) -> Result<GoodCylinderSet> {
    if !(eps > 0.0) {
        return Err(Error::Input(format!("tolerance must be positive, got {eps}")));
    }
    if n < tau.depth() {
        return Err(Error::Input(format!("depth n = {n} is below the function depth {}", tau.depth())));
    }
    let x = nu.base();
    if !x.is_irreducible() {
        return Err(Error::Reducible { op: "select_good_cylinders" });
    }
    let h = nu.entropy();
    let tau_int = nu.integrate(tau)?;
    let nf = n as f64;
    let lo = (-nf * (h + eps)).exp();
    let hi = (-nf * (h - eps)).exp();
    let marker = (!x.is_full_shift()).then(|| marker_state(nu));
    let candidates = std::sync::atomic::AtomicUsize::new(0);
    let fast = tau.indexed(x.size());
    let kept = words::enumerate(x, n, marker, exec, budget, |w| {
        if let Some(m) = marker {
            if !x.transition(w[n - 1], m) {
                return None;
            }
        }
        candidates.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
        let mass = nu.cylinder(w);
        if mass < lo || mass > hi {
            return None;
        }
        let sum = match &fast {
            Some(f) => f.cyclic_birkhoff_sum(w),
            None => tau.cyclic_birkhoff_sum(w),
        };
        let average = sum / nf;
        ((average - tau_int).abs() <= eps / 2.0).then(|| (Word::from(w), WordDiagnostics { mass, average }))
    })?;
    if kept.is_empty() {
        return Err(Error::NoGoodCylinders { n });
    }
    let (words, diagnostics) = kept.into_iter().unzip();
    Ok(GoodCylinderSet {
        n,
        words,
        diagnostics,
        h,
        eps,
        tau_int,
        mass_bounds: (lo, hi),
        ambient: x.clone(),
        marker,
        candidates: candidates.into_inner(),
    })
}
