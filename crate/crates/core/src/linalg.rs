//! Nonnegative sparse matrices: Perron roots and vectors, stationary vectors.
//!
//! Transition matrices in this crate are small to medium (a few thousand
//! states at most) and very sparse. Perron data is computed per strongly
//! connected component. Components up to [`DENSE_LIMIT`] states go through a
//! dense eigensolve followed by shifted inverse iteration; larger ones use
//! power iteration on `I + A`, which converges even for periodic matrices.
//! Both paths stop on a Collatz–Wielandt bracket, so the returned root comes
//! with a certified enclosure.

use nalgebra::{DMatrix, DVector};
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};

/// Components at most this large are handled densely.
pub const DENSE_LIMIT: usize = 400;

const REL_TOL: f64 = 1e-13;
const MAX_POWER_ITERS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: Vec<Vec<(usize, f64)>>,
}

impl SparseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { rows: vec![Vec::new(); n] }
    }

    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Self {
        Self { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        self.rows[i].push((j, v));
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.dim());
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                t.rows[j].push((i, v));
            }
        }
        t
    }

    /// `A x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    /// `x^T A`
    pub fn vec_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                out[j] += x[i] * v;
            }
        }
        out
    }

    fn to_dense(&self) -> DMatrix<f64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] += v;
            }
        }
        m
    }

    /// Principal submatrix on `idx` (re-indexed in the given order).
    pub fn submatrix(&self, idx: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.dim()];
        for (k, &i) in idx.iter().enumerate() {
            pos[i] = k;
        }
        let rows = idx
            .iter()
            .map(|&i| {
                self.rows[i]
                    .iter()
                    .filter(|&&(j, v)| pos[j] != usize::MAX && v != 0.0)
                    .map(|&(j, v)| (pos[j], v))
                    .collect()
            })
            .collect();
        Self { rows }
    }

    /// Strongly connected components that carry at least one cycle,
    /// each sorted ascending; the list is sorted by smallest member.
    pub fn cyclic_components(&self) -> Vec<Vec<usize>> {
        let n = self.dim();
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(n, 0);
        for _ in 0..n {
            g.add_node(());
        }
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                if v != 0.0 {
                    g.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
                }
            }
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|v| v.index()).collect();
                c.sort_unstable();
                c
            })
            .filter(|c| {
                c.len() > 1 || self.rows[c[0]].iter().any(|&(j, v)| j == c[0] && v != 0.0)
            })
            .collect();
        comps.sort_unstable_by_key(|c| c[0]);
        comps
    }

    pub fn is_irreducible(&self) -> bool {
        let comps = self.cyclic_components();
        comps.len() == 1 && comps[0].len() == self.dim()
    }
}

/// Perron root and positive right/left eigenvectors of an irreducible matrix.
///
/// `right` is normalized to sum 1 and `left` so that `left · right = 1`.
#[derive(Debug, Clone)]
pub struct PerronPair {
    pub radius: f64,
    pub right: Vec<f64>,
    pub left: Vec<f64>,
}

/// Spectral radius of a nonnegative matrix (0 for nilpotent matrices).
pub fn spectral_radius(m: &SparseMatrix) -> f64 {
    m.cyclic_components()
        .iter()
        .map(|c| perron_root_vector(&m.submatrix(c)).0)
        .fold(0.0, f64::max)
}

pub fn perron_pair(m: &SparseMatrix) -> Result<PerronPair> {
    if m.dim() == 0 {
        return Err(Error::Empty("perron_pair"));
    }
    if !m.is_irreducible() {
        return Err(Error::Reducible { op: "perron_pair" });
    }
    let (radius, right) = perron_root_vector(m);
    let (_, mut left) = perron_root_vector(&m.transpose());
    let dot: f64 = left.iter().zip(&right).map(|(a, b)| a * b).sum();
    left.iter_mut().for_each(|x| *x /= dot);
    Ok(PerronPair { radius, right, left })
}

fn normalize_sum(x: &mut [f64]) {
    let s: f64 = x.iter().sum();
    if s > 0.0 {
        x.iter_mut().for_each(|v| *v /= s);
    }
}

/// Collatz–Wielandt enclosure `[min (Ax)_i/x_i, max (Ax)_i/x_i]`.
fn cw_bracket(m: &SparseMatrix, x: &[f64]) -> (f64, f64) {
    let y = m.mul_vec(x);
    let xmax = x.iter().cloned().fold(0.0, f64::max);
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for (yi, xi) in y.iter().zip(x) {
        if *xi > xmax * 1e-250 {
            let r = yi / xi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
    }
    (lo, hi)
}

/// Irreducible input assumed.
fn perron_root_vector(m: &SparseMatrix) -> (f64, Vec<f64>) {
    let n = m.dim();
    if n == 1 {
        let a = m.row(0).iter().map(|&(_, v)| v).sum::<f64>();
        return (a, vec![1.0]);
    }
    if n <= DENSE_LIMIT {
        if let Some(res) = dense_perron(m) {
            return res;
        }
    }
    power_perron(m)
}

fn dense_perron(m: &SparseMatrix) -> Option<(f64, Vec<f64>)> {
    let n = m.dim();
    let a = m.to_dense();
    // Francis QR can stall on near-permutation matrices; give up and let
    // the caller fall back to power iteration
    let rho0 = a
        .clone()
        .try_schur(f64::EPSILON, 30 * n + 100)?
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max);
    if !(rho0 > 0.0) {
        return None;
    }
    let shift = rho0 * (1.0 + 1e-10);
    let shifted = DMatrix::identity(n, n) * shift - &a;
    let lu = shifted.lu();
    let mut x = DVector::from_element(n, 1.0 / n as f64);
    for _ in 0..6 {
        x = lu.solve(&x)?;
        let s: f64 = x.iter().sum();
        x /= s;
    }
    let mut v: Vec<f64> = x.iter().map(|t| t.abs()).collect();
    normalize_sum(&mut v);
    let (lo, hi) = cw_bracket(m, &v);
    if hi - lo <= 1e-9 * rho0 {
        Some(((lo + hi) / 2.0, v))
    } else {
        None
    }
}

fn power_perron(m: &SparseMatrix) -> (f64, Vec<f64>) {
    let n = m.dim();
    let mut x = vec![1.0 / n as f64; n];
    let mut best = (0.0, x.clone());
    for it in 0..MAX_POWER_ITERS {
        let ax = m.mul_vec(&x);
        let mut y: Vec<f64> = x.iter().zip(&ax).map(|(a, b)| a + b).collect();
        normalize_sum(&mut y);
        x = y;
        if it % 8 == 0 {
            let (lo, hi) = cw_bracket(m, &x);
            best = ((lo + hi) / 2.0, x.clone());
            if hi - lo <= REL_TOL * hi {
                break;
            }
        }
    }
    best
}

/// Stationary probability vector of a row-stochastic matrix with a unique
/// stationary law. Fails if the residual of the solution exceeds `1e-12`.
pub fn stationary(p: &SparseMatrix) -> Result<Vec<f64>> {
    let n = p.dim();
    if n == 0 {
        return Err(Error::Empty("stationary"));
    }
    let pi = if n <= 4 * DENSE_LIMIT {
        dense_stationary(p).unwrap_or_else(|| power_stationary(p))
    } else {
        power_stationary(p)
    };
    let res = p.vec_mul(&pi);
    let err = res.iter().zip(&pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if err > 1e-12 || pi.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!(
            "stationary vector residual {err:e} exceeds 1e-12 (is the stationary law unique?)"
        )));
    }
    Ok(pi)
}

fn dense_stationary(p: &SparseMatrix) -> Option<Vec<f64>> {
    let n = p.dim();
    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1
    let mut a = p.to_dense().transpose() - DMatrix::identity(n, n);
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let x = a.lu().solve(&b)?;
    let mut pi: Vec<f64> = x.iter().map(|v| if v.abs() < 1e-300 { 0.0 } else { *v }).collect();
    if pi.iter().any(|v| *v < -1e-12) {
        return None;
    }
    pi.iter_mut().for_each(|v| *v = v.max(0.0));
    normalize_sum(&mut pi);
    // one polishing step of the chain itself
    let polished = p.vec_mul(&pi);
    let mut polished: Vec<f64> = polished.into_iter().collect();
    normalize_sum(&mut polished);
    Some(polished)
}

fn power_stationary(p: &SparseMatrix) -> Vec<f64> {
    let n = p.dim();
    let mut pi = vec![1.0 / n as f64; n];
    for _ in 0..MAX_POWER_ITERS {
        let step = p.vec_mul(&pi);
        let next: Vec<f64> = pi.iter().zip(&step).map(|(a, b)| 0.5 * (a + b)).collect();
        let delta: f64 = next.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        pi = next;
        if delta < 1e-16 {
            break;
        }
    }
    normalize_sum(&mut pi);
    pi
}
