use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::function::LocallyConstantFn;
use crate::error::{Error, Result};
use crate::linalg::{perron_pair, stationary, SparseMatrix};
use crate::shift::{words, Alphabet, Sft, Symbol, Word};
use crate::Exec;

/// Tolerance for row sums and stationarity.
pub const STOCHASTIC_TOL: f64 = 1e-12;

/// Stationary Markov chain supported on the transitions of `base`.
///
/// Transition probabilities are stored per state, aligned with the sorted
/// successor list of that state in `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    base: Sft,
    rows: Vec<Vec<f64>>,
    pi: Vec<f64>,
}

impl MarkovMeasure {
    /// From a dense `N×N` row-stochastic matrix; rows of states without mass
    /// may be all zero.
    pub fn from_matrix(base: &Sft, p: &[Vec<f64>]) -> Result<Self> {
        let n = base.size();
        if p.len() != n || p.iter().any(|r| r.len() != n) {
            return Err(Error::Input(format!("stochastic matrix must be {n}×{n}")));
        }
        for (i, row) in p.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v < 0.0 || !v.is_finite() {
                    return Err(Error::Input(format!("entry ({i},{j}) = {v} is not a probability")));
                }
                if v > 0.0 && !base.transition(i as Symbol, j as Symbol) {
                    return Err(Error::Input(format!("entry ({i},{j}) charges a forbidden transition")));
                }
            }
        }
        let rows = (0..n)
            .map(|i| base.successors(i as Symbol).iter().map(|&j| p[i][j as usize]).collect())
            .collect();
        Self::from_rows(base, rows)
    }

    fn from_rows(base: &Sft, rows: Vec<Vec<f64>>) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::Empty("MarkovMeasure"));
        }
        let mut sparse = SparseMatrix::zeros(base.size());
        for (i, row) in rows.iter().enumerate() {
            let s: f64 = row.iter().sum();
            if !row.is_empty() && s != 0.0 && (s - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::Input(format!("row {i} sums to {s}, not 1")));
            }
            for (&j, &v) in base.successors(i as Symbol).iter().zip(row) {
                if v > 0.0 {
                    sparse.push(i, j as usize, v);
                }
            }
        }
        // a state of zero mass may have an all-zero row; give it a
        // self-consistent empty row so the stationary solve stays square
        let pi = stationary(&sparse)?;
        for (i, row) in rows.iter().enumerate() {
            if pi[i] > 1e-14 && (row.iter().sum::<f64>() - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::Input(format!("state {i} carries mass but row {i} is not stochastic")));
            }
        }
        Ok(Self { base: base.clone(), rows, pi })
    }

    /// Product measure on the full shift.
    pub fn bernoulli(p: &[f64]) -> Result<Self> {
        let s: f64 = p.iter().sum();
        if p.iter().any(|&v| v < 0.0) || (s - 1.0).abs() > STOCHASTIC_TOL {
            return Err(Error::Input(format!("Bernoulli weights {p:?} are not a probability vector")));
        }
        let base = Sft::full(p.len())?;
        let rows = vec![p.to_vec(); p.len()];
        let mut m = Self::from_rows(&base, rows)?;
        m.pi = p.to_vec();
        Ok(m)
    }

    /// Maximal-entropy measure `P_ij = A_ij r_j / (λ r_i)`, `π_i = l_i r_i`.
    pub fn parry(x: &Sft) -> Result<Self> {
        Self::equilibrium(x, &x.adjacency())
    }

    /// Markov measure built from the Perron pair of a nonnegative weight
    /// matrix carried by the transitions of `x` (the Parry construction for
    /// weighted matrices). Requires the live part of `x` to be irreducible.
    pub fn equilibrium(x: &Sft, weights: &SparseMatrix) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::Empty("equilibrium measure"));
        }
        if !x.is_irreducible() {
            return Err(Error::Reducible { op: "equilibrium measure" });
        }
        let live: Vec<usize> = x.live_states().map(|s| s as usize).collect();
        let sub = weights.submatrix(&live);
        let pp = perron_pair(&sub)?;
        let mut pos = vec![usize::MAX; x.size()];
        live.iter().enumerate().for_each(|(k, &s)| pos[s] = k);
        let mut rows = vec![Vec::new(); x.size()];
        for (k, &i) in live.iter().enumerate() {
            let w: Vec<f64> = x
                .successors(i as Symbol)
                .iter()
                .map(|&j| {
                    let wij = weights.row(i).iter().find(|e| e.0 == j as usize).map_or(0.0, |e| e.1);
                    wij * pp.right[pos[j as usize]] / (pp.radius * pp.right[k])
                })
                .collect();
            let s: f64 = w.iter().sum();
            rows[i] = w.into_iter().map(|v| v / s).collect();
        }
        let mut m = Self::from_rows(x, rows)?;
        let mut pi = vec![0.0; x.size()];
        for (k, &i) in live.iter().enumerate() {
            pi[i] = pp.left[k] * pp.right[k];
        }
        let s: f64 = pi.iter().sum();
        pi.iter_mut().for_each(|v| *v /= s);
        if m.stationarity_error(&pi) <= 1e-12 {
            m.pi = pi;
        }
        Ok(m)
    }

    /// Random fully supported Markov measure on an irreducible `x`.
    pub fn random<R: Rng>(x: &Sft, rng: &mut R) -> Result<Self> {
        if !x.is_irreducible() {
            return Err(Error::Reducible { op: "random Markov measure" });
        }
        let rows = (0..x.size() as Symbol)
            .map(|i| {
                let w: Vec<f64> = x.successors(i).iter().map(|_| rng.random_range(0.02..1.0)).collect();
                let s: f64 = w.iter().sum();
                w.into_iter().map(|v| v / s).collect()
            })
            .collect();
        Self::from_rows(x, rows)
    }

    fn stationarity_error(&self, pi: &[f64]) -> f64 {
        let mut next = vec![0.0; pi.len()];
        for (i, row) in self.rows.iter().enumerate() {
            for (&j, &p) in self.base.successors(i as Symbol).iter().zip(row) {
                next[j as usize] += pi[i] * p;
            }
        }
        next.iter().zip(pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn base(&self) -> &Sft {
        &self.base
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn prob(&self, i: Symbol, j: Symbol) -> f64 {
        match self.base.successors(i).binary_search(&j) {
            Ok(k) => self.rows[i as usize].get(k).copied().unwrap_or(0.0),
            Err(_) => 0.0,
        }
    }

    pub fn matrix(&self) -> Vec<Vec<f64>> {
        let n = self.base.size() as Symbol;
        (0..n).map(|i| (0..n).map(|j| self.prob(i, j)).collect()).collect()
    }

    /// `−Σ π_i P_ij log P_ij` in nats.
    pub fn entropy(&self) -> f64 {
        let mut h = 0.0;
        for (i, row) in self.rows.iter().enumerate() {
            for &p in row {
                if p > 0.0 {
                    h -= self.pi[i] * p * p.ln();
                }
            }
        }
        h
    }

    /// `π_{w₀} Π P_{w_k w_{k+1}}`; zero for inadmissible or out-of-range words.
    pub fn cylinder(&self, w: &[Symbol]) -> f64 {
        let n = self.base.size() as Symbol;
        match w.first() {
            None => 1.0,
            Some(&s) if s >= n => 0.0,
            Some(&s) => {
                let mut m = self.pi[s as usize];
                for p in w.windows(2) {
                    if p[1] >= n {
                        return 0.0;
                    }
                    m *= self.prob(p[0], p[1]);
                }
                m
            }
        }
    }

    /// `Σ_w ν[w] φ(w)` over admissible `depth`-words.
    pub fn integrate(&self, f: &LocallyConstantFn) -> Result<f64> {
        let terms = words::enumerate(&self.base, f.depth(), None, Exec::default(), words::DEFAULT_WORD_BUDGET, |w| {
            let m = self.cylinder(w);
            (m > 0.0).then(|| m * f.value(w))
        })?;
        Ok(terms.into_iter().sum())
    }

    /// Stationary sample path of length `n`, determined by `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Word> {
        if n == 0 {
            return Err(Error::Input("sample length must be at least 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<Symbol> = (0..self.base.size() as Symbol).collect();
        let mut out = Vec::with_capacity(n);
        let mut s = draw(&mut rng, &states, &self.pi);
        out.push(s);
        for _ in 1..n {
            s = draw(&mut rng, self.base.successors(s), &self.rows[s as usize]);
            out.push(s);
        }
        Ok(Word::new(out))
    }

    /// Text form: `N`, then `N` rows of transition probabilities.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.base.size());
        for row in self.matrix() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:e}")).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }

    /// Inverse of [`to_text`](Self::to_text); the base is the support of the matrix
    /// unless one is given.
    pub fn parse(text: &str, base: Option<&Sft>) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing size line".into() })?;
        let n: usize = head.parse().map_err(|_| Error::Parse { line, msg: "expected state count".into() })?;
        let mut p = Vec::with_capacity(n);
        for (line, l) in lines {
            let row = l
                .split_whitespace()
                .map(|c| c.parse::<f64>().map_err(|_| Error::Parse { line, msg: format!("bad number '{c}'") }))
                .collect::<Result<Vec<f64>>>()?;
            p.push(row);
        }
        match base {
            Some(b) => Self::from_matrix(b, &p),
            None => {
                let support: Vec<Vec<u8>> = p.iter().map(|r| r.iter().map(|&v| u8::from(v > 0.0)).collect()).collect();
                let b = Sft::from_matrix(&support)?;
                Self::from_matrix(&b, &p)
            }
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.base.alphabet()
    }
}

fn draw<R: Rng>(rng: &mut R, items: &[Symbol], weights: &[f64]) -> Symbol {
    let u: f64 = rng.random();
    let total: f64 = weights.iter().sum();
    let mut acc = 0.0;
    for (&s, &w) in items.iter().zip(weights) {
        acc += w / total;
        if u < acc {
            return s;
        }
    }
    // rounding: last symbol with positive weight
    *items
        .iter()
        .zip(weights)
        .rev()
        .find(|(_, &w)| w > 0.0)
        .map(|(s, _)| s)
        .expect("a row with positive mass")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn parry_golden_mean() {
        let m = MarkovMeasure::parry(&Sft::golden_mean()).unwrap();
        assert!(close(m.prob(0, 0), 0.618034, 1e-6));
        assert!(close(m.prob(0, 1), 0.381966, 1e-6));
        assert_eq!(m.prob(1, 0), 1.0);
        assert!(close(m.pi()[0], 0.723607, 1e-6));
        assert!(close(m.entropy(), Sft::golden_mean().entropy(), 1e-12));
        assert!(close(m.cylinder(&[0, 1]), 0.276393, 1e-6));
        assert_eq!(m.cylinder(&[1, 1]), 0.0);
    }

    #[test]
    fn parry_full_shifts_are_uniform() {
        for n in 2..4 {
            let m = MarkovMeasure::parry(&Sft::full(n).unwrap()).unwrap();
            assert!(m.matrix().iter().flatten().all(|&p| close(p, 1.0 / n as f64, 1e-14)));
        }
        let split = Sft::from_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(matches!(MarkovMeasure::parry(&split), Err(Error::Reducible { .. })));
    }

    #[test]
    fn bernoulli_entropy_and_integral() {
        let b = MarkovMeasure::bernoulli(&[0.9, 0.1]).unwrap();
        let h = -0.9 * 0.9f64.ln() - 0.1 * 0.1f64.ln();
        assert!(close(b.entropy(), h, 1e-14));
        let half = MarkovMeasure::bernoulli(&[0.5, 0.5]).unwrap();
        let f = LocallyConstantFn::by_symbol(half.base(), &[1.0, 3.0]).unwrap();
        assert!(close(half.integrate(&f).unwrap(), 2.0, 1e-14));
        assert!(close(half.cylinder(&[0, 1, 1, 0, 1, 0, 0, 0]), 1.0 / 256.0, 1e-16));
        let p = MarkovMeasure::parry(&Sft::golden_mean()).unwrap();
        let f = LocallyConstantFn::by_symbol(p.base(), &[1.0, 3.0]).unwrap();
        assert!(close(p.integrate(&f).unwrap(), 1.552786, 1e-6));
    }

    #[test]
    fn degenerate_bernoulli() {
        let b = MarkovMeasure::bernoulli(&[0.0, 1.0]).unwrap();
        assert_eq!(b.entropy(), 0.0);
        assert_eq!(b.cylinder(&[1, 1]), 1.0);
        assert_eq!(b.sample(5, 1).unwrap().symbols(), &[1, 1, 1, 1, 1]);
    }

    #[test]
    fn sampling_is_seeded_and_supported() {
        let p = MarkovMeasure::parry(&Sft::golden_mean()).unwrap();
        let a = p.sample(100_000, 7).unwrap();
        assert_eq!(a, p.sample(100_000, 7).unwrap());
        assert!(!Word::parse("11").unwrap().is_factor_of(a.symbols()));
    }

    #[test]
    fn text_round_trip() {
        let p = MarkovMeasure::parry(&Sft::golden_mean()).unwrap();
        let q = MarkovMeasure::parse(&p.to_text(), None).unwrap();
        assert!(close(q.entropy(), p.entropy(), 1e-14));
    }
}
