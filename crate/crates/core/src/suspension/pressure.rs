use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{spectral_radius, SparseMatrix};
use crate::measures::{LocallyConstantFn, MarkovMeasure};
use crate::shift::{words, Alphabet, Sft, Symbol, EMPTY_ENTROPY};
use crate::Exec;

/// Root-finding tolerance on `s`.
pub const ROOT_TOL: f64 = 1e-13;

/// The base recoded so that the roof becomes a function of one transition:
/// states are symbols when the roof depth is at most 2, and admissible
/// `(d−1)`-words otherwise.
#[derive(Debug, Clone)]
pub struct TransitionRoof {
    pub graph: Sft,
    /// Label word of every state (a single symbol or a `(d−1)`-word).
    pub blocks: Vec<Vec<Symbol>>,
    /// Depth-2 roof on `graph`.
    pub roof: LocallyConstantFn,
}

impl TransitionRoof {
    pub fn new(base: &Sft, roof: &LocallyConstantFn) -> Result<Self> {
        let d = roof.depth();
        if d <= 2 {
            let graph = base.clone();
            let blocks = (0..base.size() as Symbol).map(|s| vec![s]).collect();
            let lifted = LocallyConstantFn::from_fn(&graph, 2, |w| roof.value(w))?;
            return Ok(Self { graph, blocks, roof: lifted });
        }
        let blocks = words::enumerate(base, d - 1, None, Exec::default(), words::DEFAULT_WORD_BUDGET, |w| Some(w.to_vec()))?;
        let index: std::collections::HashMap<&[Symbol], Symbol> =
            blocks.iter().enumerate().map(|(i, w)| (w.as_slice(), i as Symbol)).collect();
        let succ = blocks
            .iter()
            .map(|w| {
                base.successors(*w.last().expect("nonempty"))
                    .iter()
                    .filter_map(|&s| {
                        let mut next = w[1..].to_vec();
                        next.push(s);
                        index.get(next.as_slice()).copied()
                    })
                    .collect()
            })
            .collect();
        let graph = Sft::from_successors(Alphabet::new(blocks.len())?, succ);
        let merged = |p: &[Symbol]| {
            let mut w = blocks[p[0] as usize].clone();
            w.push(*blocks[p[1] as usize].last().expect("nonempty"));
            w
        };
        let lifted = LocallyConstantFn::from_fn(&graph, 2, |p| roof.value(&merged(p)))?;
        Ok(Self { graph, blocks, roof: lifted })
    }

    /// `[A_{uv} e^{−s τ(uv)}]`.
    pub fn weights(&self, s: f64) -> SparseMatrix {
        let g = &self.graph;
        SparseMatrix::from_rows(
            (0..g.size() as Symbol)
                .map(|u| g.successors(u).iter().map(|&v| (v as usize, (-s * self.roof.value(&[u, v])).exp())).collect())
                .collect(),
        )
    }

    /// Topological pressure `log ρ(weights(s))` of `−sτ`.
    pub fn pressure(&self, s: f64) -> f64 {
        spectral_radius(&self.weights(s)).ln()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PressureRoot {
    /// Root `s*` of `P(−sτ) = 0`.
    pub s_star: f64,
    /// Pressure at the returned root.
    pub residual: f64,
    pub iterations: usize,
    /// Initial bracket `[h/max τ, h/min τ]`.
    pub bracket: (f64, f64),
}

/// Unique zero of the strictly decreasing pressure function on an
/// irreducible base; bisection on `[h/max τ, h/min τ]` and a final Newton
/// polish with the numerical derivative.
pub fn pressure_root(tr: &TransitionRoof) -> Result<PressureRoot> {
    let h = tr.graph.entropy();
    if h == EMPTY_ENTROPY {
        return Err(Error::Empty("pressure_root"));
    }
    let (tmin, tmax) = (tr.roof.min_value(), tr.roof.bound());
    if !(tmin > 0.0) {
        return Err(Error::Input("roof must be strictly positive".into()));
    }
    let h = h.max(0.0);
    let (mut lo, mut hi) = (h / tmax, h / tmin);
    let bracket = (lo, hi);
    let mut iterations = 0;
    if hi - lo > ROOT_TOL {
        // widen slightly so rounding in h cannot exclude the root
        lo = (lo - 1e-12).max(0.0);
        hi += 1e-12;
        while hi - lo > ROOT_TOL * hi.max(1.0) && iterations < 200 {
            let mid = 0.5 * (lo + hi);
            if tr.pressure(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            iterations += 1;
        }
    }
    let mut s = 0.5 * (lo + hi);
    let step = 1e-7 * s.max(1e-3);
    let p = tr.pressure(s);
    let dp = (tr.pressure(s + step) - tr.pressure(s - step)) / (2.0 * step);
    if dp < 0.0 {
        let cand = s - p / dp;
        if tr.pressure(cand).abs() < p.abs() && (cand - s).abs() < 1e-9 {
            s = cand;
        }
    }
    Ok(PressureRoot { s_star: s, residual: tr.pressure(s), iterations, bracket })
}

/// Equilibrium measure of `−s τ` on the transition-roof graph: the Markov
/// measure built from the Perron pair of the weighted matrix.
pub fn equilibrium(tr: &TransitionRoof, s: f64) -> Result<MarkovMeasure> {
    MarkovMeasure::equilibrium(&tr.graph, &tr.weights(s))
}
