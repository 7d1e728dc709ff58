use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::karp::{max_mean_cycle, min_mean_cycle, WeightedDigraph};
use crate::measures::LocallyConstantFn;
use crate::shift::{words, LabeledSft, Sft, Symbol, Word};
use crate::Exec;

/// Extreme values of `∫τ dλ` over invariant measures, with periodic witnesses.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BirkhoffRange {
    pub min: f64,
    pub max: f64,
    /// One period of a periodic orbit whose average is `min`.
    pub min_witness: Word,
    pub max_witness: Word,
}

impl BirkhoffRange {
    pub fn within(&self, lo: f64, hi: f64) -> bool {
        lo <= self.min && self.max <= hi
    }
}

/// Graph on admissible `(D−1)`-words, `D = max(depth, 2)`, with one edge per
/// admissible `D`-word weighted by `τ` of its leading `depth` symbols.
pub fn block_graph(x: &Sft, tau: &LocallyConstantFn) -> Result<(WeightedDigraph, Vec<Vec<Symbol>>)> {
    let d = tau.depth().max(2);
    let nodes = words::enumerate(x, d - 1, None, Exec::default(), words::DEFAULT_WORD_BUDGET, |w| Some(w.to_vec()))?;
    let index: HashMap<&[Symbol], usize> = nodes.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
    let edges = words::enumerate(x, d, None, Exec::default(), words::DEFAULT_WORD_BUDGET, |w| Some(w.to_vec()))?;
    let mut g = WeightedDigraph::new(nodes.len());
    let mut labels = Vec::with_capacity(edges.len());
    for w in edges {
        let from = index[&w[..d - 1]];
        let to = index[&w[1..]];
        g.add_edge(from, to, tau.value(&w));
        labels.push(w);
    }
    Ok((g, labels))
}

/// Karp min/max mean cycle on the block graph of `(x, τ)`.
pub fn birkhoff_range(x: &Sft, tau: &LocallyConstantFn) -> Result<BirkhoffRange> {
    if x.is_empty() {
        return Err(Error::Empty("birkhoff_range"));
    }
    let (g, edge_words) = block_graph(x, tau)?;
    let witness = |edges: &[usize]| Word::new(edges.iter().map(|&e| edge_words[e][0]).collect());
    let lo = min_mean_cycle(&g)?.ok_or(Error::Empty("birkhoff_range"))?;
    let hi = max_mean_cycle(&g)?.ok_or(Error::Empty("birkhoff_range"))?;
    Ok(BirkhoffRange {
        min: lo.witness_mean,
        max: hi.witness_mean,
        min_witness: witness(&lo.edges),
        max_witness: witness(&hi.edges),
    })
}

/// Birkhoff range of `τ` over the shift presented by `l`; witnesses are
/// label words.
pub fn birkhoff_range_labeled(l: &LabeledSft, tau: &LocallyConstantFn) -> Result<BirkhoffRange> {
    let pulled = tau.pull_back(l)?;
    let r = birkhoff_range(l.graph(), &pulled)?;
    let relabel = |w: &Word| Word::new(w.symbols().iter().map(|&s| l.label(s)).collect());
    Ok(BirkhoffRange {
        min_witness: relabel(&r.min_witness),
        max_witness: relabel(&r.max_witness),
        ..r
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::karp::simple_cycle_mean_range;

    #[test]
    fn golden_and_full() {
        let g = Sft::golden_mean();
        let tau = LocallyConstantFn::by_symbol(&g, &[1.0, 3.0]).unwrap();
        let r = birkhoff_range(&g, &tau).unwrap();
        assert!((r.min - 1.0).abs() < 1e-12 && (r.max - 2.0).abs() < 1e-12);
        let avg = tau.cyclic_birkhoff_sum(r.max_witness.symbols()) / r.max_witness.len() as f64;
        assert!((avg - r.max).abs() < 1e-12);
        let full = Sft::full(2).unwrap();
        let tau = LocallyConstantFn::by_symbol(&full, &[1.0, 3.0]).unwrap();
        let r = birkhoff_range(&full, &tau).unwrap();
        assert_eq!((r.min, r.max), (1.0, 3.0));
        let c = LocallyConstantFn::constant(&full, 2.5).unwrap();
        let r = birkhoff_range(&full, &c).unwrap();
        assert_eq!((r.min, r.max), (2.5, 2.5));
        assert!(birkhoff_range(&Sft::empty(2).unwrap(), &c).is_err());
    }

    #[test]
    fn deeper_function_matches_cycle_enumeration() {
        let full = Sft::full(2).unwrap();
        let tau = LocallyConstantFn::from_fn(&full, 3, |w| 1.0 + (w[0] * 4 + w[1] * 2 + w[2]) as f64 * 0.37 % 1.3).unwrap();
        let r = birkhoff_range(&full, &tau).unwrap();
        let (g, _) = block_graph(&full, &tau).unwrap();
        let (lo, hi) = simple_cycle_mean_range(&g, 12).unwrap().unwrap();
        assert!((r.min - lo).abs() < 1e-12 && (r.max - hi).abs() < 1e-12);
    }
}
