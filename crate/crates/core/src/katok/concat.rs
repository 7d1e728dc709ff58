use std::collections::{BTreeMap, HashMap};

use super::birkhoff::BirkhoffRange;
use super::select::GoodCylinderSet;
use crate::error::{Error, Result};
use crate::karp::{max_mean_cycle, min_mean_cycle, WeightedDigraph, KARP_NODE_BUDGET};
use crate::measures::LocallyConstantFn;
use crate::shift::{Alphabet, LabeledSft, Sft, Symbol, Word};

/// The shift of free concatenations of `M` equal-length blocks.
#[derive(Debug, Clone)]
pub struct ConcatenationSft {
    pub n: usize,
    pub blocks: Vec<Word>,
    /// The same shift in the original alphabet: the minimized prefix tree of
    /// the blocks, each state labeled by the last symbol of its prefixes.
    pub embedded: LabeledSft,
}

impl ConcatenationSft {
    pub fn new(g: &GoodCylinderSet) -> Result<Self> {
        if g.words.is_empty() {
            return Err(Error::NoGoodCylinders { n: g.n });
        }
        let x = &g.ambient;
        // admissibility of a concatenation only depends on the junction symbols
        let mut lasts = vec![Vec::new(); x.size()];
        let mut firsts = vec![None; x.size()];
        for (i, w) in g.words.iter().enumerate() {
            let s = w.symbols();
            lasts[*s.last().expect("nonempty") as usize].push(i);
            firsts[s[0] as usize].get_or_insert(i);
        }
        let mut bad = Vec::new();
        for (l, is) in lasts.iter().enumerate() {
            for (f, j) in firsts.iter().enumerate() {
                if let (Some(&i), Some(&j)) = (is.first(), j.as_ref()) {
                    if !x.transition(l as Symbol, f as Symbol) {
                        bad.push((i, j));
                    }
                }
            }
        }
        if !bad.is_empty() {
            return Err(Error::Concatenation { pairs: bad });
        }
        Self::from_blocks(g.n, g.words.clone(), x.alphabet())
    }

    /// Unchecked: the caller guarantees all pairwise concatenations are admissible.
    pub fn from_blocks(n: usize, blocks: Vec<Word>, base: Alphabet) -> Result<Self> {
        let mut order: Vec<&[Symbol]> = blocks.iter().map(|w| w.symbols()).collect();
        if let Some(w) = blocks.iter().find(|w| w.len() != n) {
            return Err(Error::Input(format!("block {w} does not have length {n}")));
        }
        order.sort_unstable();
        if order.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Input("blocks must be distinct".into()));
        }
        let embedded = minimal_tree(&order, base)?;
        Ok(Self { n, blocks, embedded })
    }

    /// One state per block with all transitions allowed: a presentation of
    /// `σ^n` on the concatenation shift.
    pub fn presentation(&self) -> Result<Sft> {
        let m = self.count();
        if (m as u128) * (m as u128) > crate::shift::BLOCK_STATE_BUDGET as u128 {
            return Err(Error::Budget(format!("full presentation on {m} blocks")));
        }
        Sft::full(m)
    }

    pub fn count(&self) -> usize {
        self.blocks.len()
    }

    /// `(1/n) log M`.
    pub fn formula_entropy(&self) -> f64 {
        (self.count() as f64).ln() / self.n as f64
    }

    /// Entropy of the embedded shift recomputed from its graph.
    pub fn entropy(&self) -> f64 {
        self.embedded.entropy()
    }

    /// Exact Birkhoff range of `τ` over all invariant measures of the
    /// concatenation shift.
    ///
    /// A periodic orbit is a cyclic sequence of blocks; the sum of `τ` over
    /// one block is its inner sum plus a cross term that depends only on its
    /// last `d−1` symbols and the next block's first `d−1`. Blocks are
    /// grouped by that (prefix, suffix) class, keeping the extreme inner sum,
    /// and Karp runs on the class graph.
    pub fn birkhoff_range(&self, tau: &LocallyConstantFn) -> Result<BirkhoffRange> {
        let graphs = self.class_graphs(tau)?;
        let (lo_g, lo_best) = &graphs.min;
        let (hi_g, hi_best) = &graphs.max;
        let lo = min_mean_cycle(lo_g)?.ok_or(Error::Empty("concatenation birkhoff range"))?;
        let hi = max_mean_cycle(hi_g)?.ok_or(Error::Empty("concatenation birkhoff range"))?;
        let witness = |g: &WeightedDigraph, best: &[usize], edges: &[usize]| {
            Word::new(
                edges
                    .iter()
                    .flat_map(|&e| self.blocks[best[g.edges()[e].0]].symbols().iter().copied())
                    .collect(),
            )
        };
        let n = self.n as f64;
        Ok(BirkhoffRange {
            min: lo.witness_mean / n,
            max: hi.witness_mean / n,
            min_witness: witness(lo_g, lo_best, &lo.edges),
            max_witness: witness(hi_g, hi_best, &hi.edges),
        })
    }

    /// Class graphs for the minimum and the maximum, each with the index of
    /// the representative block of every class.
    pub fn class_graphs(&self, tau: &LocallyConstantFn) -> Result<ClassGraphs> {
        let d = tau.depth();
        if d > self.n {
            return Err(Error::Input(format!("function depth {d} exceeds block length {}", self.n)));
        }
        let k = d - 1;
        let mut classes: BTreeMap<(&[Symbol], &[Symbol]), (usize, f64, usize, f64)> = BTreeMap::new();
        for (i, w) in self.blocks.iter().enumerate() {
            let s = w.symbols();
            let inner: f64 = s.windows(d).map(|win| tau.value(win)).sum();
            let key = (&s[..k], &s[self.n - k..]);
            let e = classes.entry(key).or_insert((i, inner, i, inner));
            if inner < e.1 {
                e.0 = i;
                e.1 = inner;
            }
            if inner > e.3 {
                e.2 = i;
                e.3 = inner;
            }
        }
        if classes.len() > KARP_NODE_BUDGET {
            return Err(Error::Budget(format!(
                "{} boundary classes exceed the mean-cycle budget of {KARP_NODE_BUDGET}",
                classes.len()
            )));
        }
        let keys: Vec<(&[Symbol], &[Symbol])> = classes.keys().copied().collect();
        let vals: Vec<(usize, f64, usize, f64)> = classes.values().copied().collect();
        let mut cross_buf = Vec::with_capacity(2 * k);
        let mut cross = |suf: &[Symbol], pre: &[Symbol]| -> f64 {
            cross_buf.clear();
            cross_buf.extend_from_slice(suf);
            cross_buf.extend_from_slice(pre);
            if k == 0 {
                0.0
            } else {
                cross_buf.windows(d).map(|win| tau.value(win)).sum()
            }
        };
        let c = keys.len();
        let mut lo = WeightedDigraph::new(c);
        let mut hi = WeightedDigraph::new(c);
        for a in 0..c {
            for b in 0..c {
                let x = cross(keys[a].1, keys[b].0);
                lo.add_edge(a, b, vals[a].1 + x);
                hi.add_edge(a, b, vals[a].3 + x);
            }
        }
        Ok(ClassGraphs {
            min: (lo, vals.iter().map(|v| v.0).collect()),
            max: (hi, vals.iter().map(|v| v.2).collect()),
        })
    }
}

/// Weighted class graphs (edge weights are block sums, not averages).
#[derive(Debug, Clone)]
pub struct ClassGraphs {
    pub min: (WeightedDigraph, Vec<usize>),
    pub max: (WeightedDigraph, Vec<usize>),
}

/// Minimal deterministic graph whose label paths from the roots spell the
/// blocks, built incrementally over the sorted blocks: a prefix is sealed
/// into a class as soon as no later block extends it, and classes are keyed
/// by (label, successor classes).
fn minimal_tree(sorted: &[&[Symbol]], base: Alphabet) -> Result<LabeledSft> {
    type Key = (Symbol, Vec<usize>);
    let mut registry: HashMap<Key, usize> = HashMap::new();
    let mut classes: Vec<Key> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    let mut path: Vec<Key> = Vec::new();
    let mut seal = |path: &mut Vec<Key>, keep: usize, roots: &mut Vec<usize>| {
        while path.len() > keep {
            let (label, mut kids) = path.pop().expect("nonempty path");
            kids.sort_unstable();
            let key = (label, kids);
            let next = classes.len();
            let id = *registry.entry(key.clone()).or_insert_with(|| {
                classes.push(key);
                next
            });
            match path.last_mut() {
                Some(parent) => parent.1.push(id),
                None => roots.push(id),
            }
        }
    };
    let mut prev: &[Symbol] = &[];
    for w in sorted {
        let common = w.iter().zip(prev).take_while(|(a, b)| a == b).count();
        seal(&mut path, common, &mut roots);
        path.extend(w[common..].iter().map(|&s| (s, Vec::new())));
        prev = w;
    }
    seal(&mut path, 0, &mut roots);
    let succ: Vec<Vec<Symbol>> = classes
        .iter()
        .map(|(_, kids)| {
            let next = if kids.is_empty() { &roots } else { kids };
            next.iter().map(|&k| k as Symbol).collect()
        })
        .collect();
    let labels: Vec<Symbol> = classes.iter().map(|c| c.0).collect();
    let graph = Sft::from_successors(Alphabet::new(classes.len())?, succ);
    LabeledSft::new(graph, labels, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::katok::birkhoff::birkhoff_range_labeled;

    fn blocks(ws: &[&str]) -> Vec<Word> {
        ws.iter().map(|w| Word::parse(w).unwrap()).collect()
    }

    #[test]
    fn entropy_formula() {
        let c = ConcatenationSft::from_blocks(5, blocks(&["00110", "10101"]), Alphabet::new(2).unwrap()).unwrap();
        assert!((c.formula_entropy() - 0.138629).abs() < 1e-6);
        assert!((c.entropy() - c.formula_entropy()).abs() < 1e-12);
        assert!(c.embedded.is_right_resolving());
    }

    #[test]
    fn class_graph_range_agrees_with_block_graph() {
        let c = ConcatenationSft::from_blocks(4, blocks(&["0010", "0111", "1100", "0101"]), Alphabet::new(2).unwrap())
            .unwrap();
        let full = Sft::full(2).unwrap();
        for d in 1..=3 {
            let tau = LocallyConstantFn::from_fn(&full, d, |w| 1.0 + w.iter().enumerate().map(|(i, &s)| s as f64 * (i as f64 + 0.3)).sum::<f64>()).unwrap();
            let a = c.birkhoff_range(&tau).unwrap();
            let b = birkhoff_range_labeled(&c.embedded, &tau).unwrap();
            assert!((a.min - b.min).abs() < 1e-12, "d={d}: {} vs {}", a.min, b.min);
            assert!((a.max - b.max).abs() < 1e-12, "d={d}: {} vs {}", a.max, b.max);
            let avg = |w: &Word| tau.cyclic_birkhoff_sum(w.symbols()) / w.len() as f64;
            assert!((avg(&a.max_witness) - a.max).abs() < 1e-12);
            assert!((avg(&a.min_witness) - a.min).abs() < 1e-12);
        }
    }
}
