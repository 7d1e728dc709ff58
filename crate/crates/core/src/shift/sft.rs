use std::fmt;

use super::word::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};
use crate::linalg::{spectral_radius, SparseMatrix};

/// Entropy reported for the empty system.
pub const EMPTY_ENTROPY: f64 = f64::NEG_INFINITY;

/// Two-sided subshift of finite type given by a 0/1 transition matrix.
///
/// The matrix is stored as sorted successor lists and is always pruned: a
/// state survives only if it lies on a bi-infinite path. Pruned-away states
/// keep their symbol number but have no transitions in or out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sft {
    alphabet: Alphabet,
    succ: Vec<Vec<Symbol>>,
}

impl Sft {
    /// Builds and prunes. `rows[i][j] != 0` means `i -> j` is allowed.
    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let alphabet = Alphabet::new(n)?;
        let mut succ = Vec::with_capacity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "transition row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            succ.push(
                row.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, _)| j as Symbol)
                    .collect(),
            );
        }
        Ok(Self::from_successors(alphabet, succ))
    }

    /// Builds from successor lists (any order, duplicates allowed) and prunes.
    pub fn from_successors(alphabet: Alphabet, mut succ: Vec<Vec<Symbol>>) -> Self {
        succ.resize(alphabet.size(), Vec::new());
        for s in &mut succ {
            s.sort_unstable();
            s.dedup();
        }
        let mut x = Self { alphabet, succ };
        x.prune_in_place();
        x
    }

    pub fn full(n: usize) -> Result<Self> {
        let alphabet = Alphabet::new(n)?;
        let succ = (0..n).map(|_| (0..n as Symbol).collect()).collect();
        Ok(Self { alphabet, succ })
    }

    /// Transition matrix `[[1,1],[1,0]]`: no two consecutive 1s.
    pub fn golden_mean() -> Self {
        Self::from_matrix(&[vec![1, 1], vec![1, 0]]).expect("valid matrix")
    }

    pub fn empty(n: usize) -> Result<Self> {
        Ok(Self { alphabet: Alphabet::new(n)?, succ: vec![Vec::new(); n] })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.size()
    }

    pub fn successors(&self, s: Symbol) -> &[Symbol] {
        &self.succ[s as usize]
    }

    pub fn transition(&self, a: Symbol, b: Symbol) -> bool {
        self.succ[a as usize].binary_search(&b).is_ok()
    }

    pub fn is_live(&self, s: Symbol) -> bool {
        !self.succ[s as usize].is_empty()
    }

    pub fn live_states(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.size() as Symbol).filter(|&s| self.is_live(s))
    }

    pub fn live_count(&self) -> usize {
        self.live_states().count()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.iter().all(|s| s.is_empty())
    }

    pub fn transition_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// All transitions present.
    pub fn is_full_shift(&self) -> bool {
        self.succ.iter().all(|s| s.len() == self.size())
    }

    pub fn to_matrix(&self) -> Vec<Vec<u8>> {
        (0..self.size())
            .map(|i| {
                let mut row = vec![0u8; self.size()];
                for &j in &self.succ[i] {
                    row[j as usize] = 1;
                }
                row
            })
            .collect()
    }

    pub fn adjacency(&self) -> SparseMatrix {
        SparseMatrix::from_rows(
            self.succ
                .iter()
                .map(|s| s.iter().map(|&j| (j as usize, 1.0)).collect())
                .collect(),
        )
    }

    /// Removes states with no bi-infinite continuation. Idempotent; the
    /// constructors already call it.
    pub fn prune(&self) -> Self {
        let mut x = self.clone();
        x.prune_in_place();
        x
    }

    fn prune_in_place(&mut self) {
        let n = self.size();
        let mut alive = vec![true; n];
        loop {
            let mut indeg = vec![0usize; n];
            for i in 0..n {
                if alive[i] {
                    for &j in &self.succ[i] {
                        if alive[j as usize] {
                            indeg[j as usize] += 1;
                        }
                    }
                }
            }
            let mut changed = false;
            for i in 0..n {
                if !alive[i] {
                    continue;
                }
                let out = self.succ[i].iter().any(|&j| alive[j as usize]);
                if !out || indeg[i] == 0 {
                    alive[i] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            if alive[i] {
                self.succ[i].retain(|&j| alive[j as usize]);
            } else {
                self.succ[i].clear();
            }
        }
    }

    pub fn is_admissible(&self, w: &Word) -> Result<bool> {
        w.check(self.alphabet)?;
        Ok(self.is_admissible_slice(w.symbols()))
    }

    pub(crate) fn is_admissible_slice(&self, w: &[Symbol]) -> bool {
        match w {
            [] => true,
            [s] => self.is_live(*s),
            _ => w.windows(2).all(|p| self.transition(p[0], p[1])),
        }
    }

    /// Exact number of admissible words of length `n` (sums of `A^{n-1}`).
    /// Refuses when the count overflows `u128`.
    pub fn count_words(&self, n: usize) -> Result<u128> {
        if n == 0 {
            return Err(Error::Input("word length must be at least 1".into()));
        }
        let mut ending: Vec<u128> = (0..self.size() as Symbol)
            .map(|s| u128::from(self.is_live(s)))
            .collect();
        for _ in 1..n {
            let mut next = vec![0u128; self.size()];
            for (i, &c) in ending.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for &j in &self.succ[i] {
                    next[j as usize] = next[j as usize]
                        .checked_add(c)
                        .ok_or_else(|| Error::Budget(format!("word count at length {n} overflows u128")))?;
                }
            }
            ending = next;
        }
        ending
            .iter()
            .try_fold(0u128, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::Budget(format!("word count at length {n} overflows u128")))
    }

    /// Topological entropy in nats: log of the Perron root; `-inf` if empty.
    pub fn entropy(&self) -> f64 {
        if self.is_empty() {
            return EMPTY_ENTROPY;
        }
        spectral_radius(&self.adjacency()).ln()
    }

    /// Strong connectivity of the live transition graph.
    pub fn is_irreducible(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        let comps = self.adjacency().cyclic_components();
        comps.len() == 1 && comps[0].len() == self.live_count()
    }

    /// Irreducible components as sub-SFTs on the same alphabet.
    pub fn components(&self) -> Vec<Sft> {
        self.adjacency()
            .cyclic_components()
            .into_iter()
            .map(|c| {
                let mut keep = vec![false; self.size()];
                c.iter().for_each(|&i| keep[i] = true);
                let succ = (0..self.size())
                    .map(|i| {
                        if keep[i] {
                            self.succ[i].iter().copied().filter(|&j| keep[j as usize]).collect()
                        } else {
                            Vec::new()
                        }
                    })
                    .collect();
                Sft::from_successors(self.alphabet, succ)
            })
            .collect()
    }

    /// Every transition of `self` is a transition of `other` (same alphabet).
    pub fn is_subsystem_of(&self, other: &Sft) -> bool {
        self.size() == other.size()
            && (0..self.size() as Symbol)
                .all(|a| self.successors(a).iter().all(|&b| other.transition(a, b)))
    }
}

impl fmt::Display for Sft {
    /// Plain-text form: `N` on the first line, then `N` rows of 0/1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.size())?;
        for row in self.to_matrix() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// `d(x, y) = 2^{-k*}` for the smallest `|k|` where two central windows
/// `{-K..K}` differ; `2^{-(K+1)}` bounds the distance when they agree.
pub fn sigma_metric(x: &[Symbol], y: &[Symbol]) -> Result<f64> {
    if x.len() != y.len() || x.len() % 2 == 0 {
        return Err(Error::Input(
            "sigma_metric needs two windows of equal odd length 2K+1".into(),
        ));
    }
    let k = x.len() / 2;
    for r in 0..=k {
        if x[k + r] != y[k + r] || x[k - r] != y[k - r] {
            return Ok(0.5f64.powi(r as i32));
        }
    }
    Ok(0.5f64.powi(k as i32 + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissibility() {
        let full = Sft::full(2).unwrap();
        assert!(full.is_admissible(&Word::parse("010").unwrap()).unwrap());
        let g = Sft::golden_mean();
        assert!(!g.is_admissible(&Word::parse("11").unwrap()).unwrap());
        assert!(g.is_admissible(&Word::parse("0").unwrap()).unwrap());
        assert!(matches!(
            g.is_admissible(&Word::parse("2").unwrap()),
            Err(Error::SymbolOutOfRange { .. })
        ));
    }

    #[test]
    fn counts() {
        assert_eq!(Sft::full(2).unwrap().count_words(10).unwrap(), 1024);
        assert_eq!(Sft::golden_mean().count_words(5).unwrap(), 13);
        assert!(Sft::full(2).unwrap().count_words(0).is_err());
        assert!(matches!(Sft::full(4).unwrap().count_words(70), Err(Error::Budget(_))));
    }

    #[test]
    fn entropy_anchors() {
        for n in 1..6 {
            let h = Sft::full(n).unwrap().entropy();
            assert!((h - (n as f64).ln()).abs() < 1e-12);
        }
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((Sft::golden_mean().entropy() - phi.ln()).abs() < 1e-12);
        assert_eq!(Sft::empty(3).unwrap().entropy(), EMPTY_ENTROPY);
    }

    #[test]
    fn pruning_removes_stranded_states() {
        // 0 -> 1 -> 2 -> 2, nothing enters 0
        let x = Sft::from_matrix(&[vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 1]]).unwrap();
        assert_eq!(x.live_states().collect::<Vec<_>>(), vec![2]);
        assert_eq!(x.prune(), x);
        let dead = Sft::from_matrix(&[vec![0, 1], vec![0, 0]]).unwrap();
        assert!(dead.is_empty());
    }

    #[test]
    fn irreducibility() {
        assert!(Sft::full(2).unwrap().is_irreducible());
        assert!(Sft::golden_mean().is_irreducible());
        let split = Sft::from_matrix(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!split.is_irreducible());
        assert_eq!(split.components().len(), 2);
        assert!(!Sft::empty(2).unwrap().is_irreducible());
    }

    #[test]
    fn metric() {
        let a = vec![0u32; 21];
        assert!(sigma_metric(&a, &a).unwrap() <= 0.5f64.powi(11));
        let mut b = a.clone();
        b[10] = 1;
        assert_eq!(sigma_metric(&a, &b).unwrap(), 1.0);
        let mut c = a.clone();
        c[10 - 3] = 1;
        assert_eq!(sigma_metric(&a, &c).unwrap(), 0.125);
    }
}
