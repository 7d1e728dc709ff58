//! Extreme mean-weight cycles (Karp) and an exhaustive simple-cycle oracle.
//!
//! Karp's recurrence gives the optimal mean `min_v max_k (D_n(v) - D_k(v)) / (n - k)`
//! where `D_k(v)` is the lightest `k`-edge walk ending at `v` from a virtual
//! source attached to every node. A witness cycle is recovered from the
//! optimal `n`-edge walk; if that fails numerically we fall back to a cycle in
//! the subgraph of edges that are tight for the reweighted potentials.

use crate::error::{Error, Result};

/// Graphs larger than this are refused (Karp's table is `O(n^2)` memory).
pub const KARP_NODE_BUDGET: usize = 3000;

#[derive(Debug, Clone, Default)]
pub struct WeightedDigraph {
    nodes: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedDigraph {
    pub fn new(nodes: usize) -> Self {
        Self { nodes, edges: Vec::new() }
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: f64) -> usize {
        self.edges.push((from, to, weight));
        self.edges.len() - 1
    }

    pub fn node_count(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    fn negated(&self) -> Self {
        Self {
            nodes: self.nodes,
            edges: self.edges.iter().map(|&(u, v, w)| (u, v, -w)).collect(),
        }
    }

    fn cycle_mean(&self, cycle: &[usize]) -> f64 {
        cycle.iter().map(|&e| self.edges[e].2).sum::<f64>() / cycle.len() as f64
    }
}

/// An optimal cycle, given as edge indices in traversal order.
#[derive(Debug, Clone)]
pub struct MeanCycle {
    /// Optimal mean from Karp's formula.
    pub value: f64,
    /// Mean recomputed along the witness.
    pub witness_mean: f64,
    pub edges: Vec<usize>,
    pub nodes: Vec<usize>,
}

pub fn min_mean_cycle(g: &WeightedDigraph) -> Result<Option<MeanCycle>> {
    karp(g)
}

pub fn max_mean_cycle(g: &WeightedDigraph) -> Result<Option<MeanCycle>> {
    Ok(karp(&g.negated())?.map(|mut c| {
        c.value = -c.value;
        c.witness_mean = g.cycle_mean(&c.edges);
        c
    }))
}

fn karp(g: &WeightedDigraph) -> Result<Option<MeanCycle>> {
    let n = g.nodes;
    if n == 0 {
        return Ok(None);
    }
    if n > KARP_NODE_BUDGET {
        return Err(Error::Budget(format!(
            "mean-cycle search on {n} nodes exceeds the budget of {KARP_NODE_BUDGET}"
        )));
    }
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(_, v, _)) in g.edges.iter().enumerate() {
        incoming[v].push(e);
    }
    let inf = f64::INFINITY;
    let mut dist = vec![vec![inf; n]; n + 1];
    let mut pred = vec![vec![usize::MAX; n]; n + 1];
    dist[0].iter_mut().for_each(|d| *d = 0.0);
    for k in 1..=n {
        let (done, rest) = dist.split_at_mut(k);
        let prev = &done[k - 1];
        let cur = &mut rest[0];
        for v in 0..n {
            for &e in &incoming[v] {
                let (u, _, w) = g.edges[e];
                let cand = prev[u] + w;
                if cand < cur[v] {
                    cur[v] = cand;
                    pred[k][v] = e;
                }
            }
        }
    }
    let mut best: Option<(f64, usize)> = None;
    for v in 0..n {
        if !dist[n][v].is_finite() {
            continue;
        }
        let worst = (0..n)
            .filter(|&k| dist[k][v].is_finite())
            .map(|k| (dist[n][v] - dist[k][v]) / (n - k) as f64)
            .fold(f64::NEG_INFINITY, f64::max);
        if best.is_none_or(|(b, _)| worst < b) {
            best = Some((worst, v));
        }
    }
    let Some((value, v_star)) = best else {
        return Ok(None);
    };

    // walk back the optimal n-edge walk into v*
    let mut walk_edges = Vec::with_capacity(n);
    let mut v = v_star;
    for k in (1..=n).rev() {
        let e = pred[k][v];
        walk_edges.push(e);
        v = g.edges[e].0;
    }
    walk_edges.reverse();
    let mut seen: Vec<Option<usize>> = vec![None; n];
    let mut best_cycle: Option<Vec<usize>> = None;
    let mut node = g.edges[walk_edges[0]].0;
    seen[node] = Some(0);
    for (i, &e) in walk_edges.iter().enumerate() {
        node = g.edges[e].1;
        if let Some(start) = seen[node] {
            let cyc = walk_edges[start..=i].to_vec();
            let better = best_cycle
                .as_ref()
                .is_none_or(|b| g.cycle_mean(&cyc) < g.cycle_mean(b));
            if better {
                best_cycle = Some(cyc);
            }
        }
        seen[node] = Some(i + 1);
    }
    let tol = 1e-9 * (1.0 + value.abs());
    let mut cycle = best_cycle.unwrap_or_default();
    if cycle.is_empty() || (g.cycle_mean(&cycle) - value).abs() > tol {
        if let Some(c) = tight_cycle(g, value) {
            cycle = c;
        }
    }
    if cycle.is_empty() {
        return Err(Error::Numerical("no witness cycle recovered".into()));
    }
    let nodes = cycle.iter().map(|&e| g.edges[e].0).collect();
    Ok(Some(MeanCycle {
        value,
        witness_mean: g.cycle_mean(&cycle),
        edges: cycle,
        nodes,
    }))
}

/// Cycle of tight edges after reweighting by `-mean`.
fn tight_cycle(g: &WeightedDigraph, mean: f64) -> Option<Vec<usize>> {
    let n = g.nodes;
    let mut pot = vec![0.0f64; n];
    for _ in 0..n {
        let mut changed = false;
        for &(u, v, w) in &g.edges {
            let c = pot[u] + w - mean;
            if c < pot[v] - 1e-13 {
                pot[v] = c;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let scale = 1e-8 * (1.0 + mean.abs());
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v, w)) in g.edges.iter().enumerate() {
        if (pot[u] + w - mean - pot[v]).abs() <= scale {
            out[u].push(e);
        }
    }
    // iterative DFS for a back edge in the tight subgraph
    let mut color = vec![0u8; n];
    let mut via = vec![usize::MAX; n];
    for root in 0..n {
        if color[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        color[root] = 1;
        while let Some(&mut (u, ref mut i)) = stack.last_mut() {
            if *i < out[u].len() {
                let e = out[u][*i];
                *i += 1;
                let v = g.edges[e].1;
                if color[v] == 0 {
                    color[v] = 1;
                    via[v] = e;
                    stack.push((v, 0));
                } else if color[v] == 1 {
                    let mut cyc = vec![e];
                    let mut x = u;
                    while x != v {
                        let pe = via[x];
                        cyc.push(pe);
                        x = g.edges[pe].0;
                    }
                    cyc.reverse();
                    return Some(cyc);
                }
            } else {
                color[u] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// All simple cycles as edge-index sequences, by exhaustive search.
/// Intended as an independent oracle on small graphs.
pub fn simple_cycles(g: &WeightedDigraph, max_nodes: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.nodes;
    if n > max_nodes {
        return Err(Error::Budget(format!(
            "simple-cycle enumeration on {n} nodes exceeds the limit of {max_nodes}"
        )));
    }
    let mut out_edges: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, _, _)) in g.edges.iter().enumerate() {
        out_edges[u].push(e);
    }
    let mut cycles = Vec::new();
    for start in 0..n {
        let mut on_path = vec![false; n];
        let mut path = Vec::new();
        extend(g, &out_edges, start, start, &mut on_path, &mut path, &mut cycles);
    }
    Ok(cycles)
}

fn extend(
    g: &WeightedDigraph,
    out_edges: &[Vec<usize>],
    start: usize,
    at: usize,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    cycles: &mut Vec<Vec<usize>>,
) {
    on_path[at] = true;
    for &e in &out_edges[at] {
        let v = g.edges[e].1;
        if v == start {
            let mut c = path.clone();
            c.push(e);
            cycles.push(c);
        } else if v > start && !on_path[v] {
            path.push(e);
            extend(g, out_edges, start, v, on_path, path, cycles);
            path.pop();
        }
    }
    on_path[at] = false;
}

/// `(min, max)` cycle mean over all simple cycles, or `None` if acyclic.
pub fn simple_cycle_mean_range(g: &WeightedDigraph, max_nodes: usize) -> Result<Option<(f64, f64)>> {
    let cycles = simple_cycles(g, max_nodes)?;
    Ok(cycles.iter().map(|c| g.cycle_mean(c)).fold(None, |acc, m| match acc {
        None => Some((m, m)),
        Some((lo, hi)) => Some((lo.min(m), hi.max(m))),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn golden_with_weights(a: f64, b: f64) -> WeightedDigraph {
        // node-weighted golden mean graph: weight of leaving a node
        let mut g = WeightedDigraph::new(2);
        g.add_edge(0, 0, a);
        g.add_edge(0, 1, a);
        g.add_edge(1, 0, b);
        g
    }

    #[test]
    fn golden_mean_extremes() {
        let g = golden_with_weights(1.0, 3.0);
        let lo = min_mean_cycle(&g).unwrap().unwrap();
        let hi = max_mean_cycle(&g).unwrap().unwrap();
        assert!((lo.value - 1.0).abs() < 1e-12);
        assert!((hi.value - 2.0).abs() < 1e-12);
        assert_eq!(hi.edges.len(), 2);
        assert!((hi.witness_mean - hi.value).abs() < 1e-12);
        assert_eq!(simple_cycle_mean_range(&g, 12).unwrap(), Some((1.0, 2.0)));
    }

    #[test]
    fn acyclic_has_no_cycle() {
        let mut g = WeightedDigraph::new(3);
        g.add_edge(0, 1, 1.0);
        g.add_edge(1, 2, 1.0);
        assert!(min_mean_cycle(&g).unwrap().is_none());
        assert!(simple_cycles(&g, 12).unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let g = WeightedDigraph::new(KARP_NODE_BUDGET + 1);
        assert!(matches!(min_mean_cycle(&g), Err(Error::Budget(_))));
    }

    proptest! {
        #[test]
        fn karp_matches_enumeration(
            n in 1usize..7,
            raw in proptest::collection::vec((0usize..7, 0usize..7, -5i32..6), 1..20),
        ) {
            let mut g = WeightedDigraph::new(n);
            for (u, v, w) in raw {
                g.add_edge(u % n, v % n, w as f64 * 0.5);
            }
            let oracle = simple_cycle_mean_range(&g, 12).unwrap();
            let lo = min_mean_cycle(&g).unwrap();
            let hi = max_mean_cycle(&g).unwrap();
            match oracle {
                None => { prop_assert!(lo.is_none()); prop_assert!(hi.is_none()); }
                Some((a, b)) => {
                    let lo = lo.unwrap();
                    let hi = hi.unwrap();
                    prop_assert!((lo.value - a).abs() < 1e-9);
                    prop_assert!((hi.value - b).abs() < 1e-9);
                    prop_assert!((lo.witness_mean - lo.value).abs() < 1e-12);
                    prop_assert!((hi.witness_mean - hi.value).abs() < 1e-12);
                }
            }
        }
    }
}
