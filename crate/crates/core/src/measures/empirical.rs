use std::collections::{BTreeMap, HashMap};

use super::markov::MarkovMeasure;
use crate::error::{Error, Result};
use crate::shift::{words, Symbol, Word};
use crate::Exec;

/// Sliding-window word frequencies of a finite orbit segment, for every
/// window length `1..=depth`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    depth: usize,
    len: usize,
    tables: Vec<BTreeMap<Vec<Symbol>, f64>>,
}

impl EmpiricalMeasure {
    pub fn from_orbit(w: &Word, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Input("empirical depth must be at least 1".into()));
        }
        if w.len() < k {
            return Err(Error::Input(format!("orbit of length {} is shorter than depth {k}", w.len())));
        }
        let s = w.symbols();
        let tables = (1..=k)
            .map(|m| {
                let windows = s.len() - m + 1;
                let mut counts: HashMap<&[Symbol], usize> = HashMap::new();
                for win in s.windows(m) {
                    *counts.entry(win).or_default() += 1;
                }
                counts
                    .into_iter()
                    .map(|(k, c)| (k.to_vec(), c as f64 / windows as f64))
                    .collect()
            })
            .collect();
        Ok(Self { depth: k, len: w.len(), tables })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn sample_len(&self) -> usize {
        self.len
    }

    /// Frequency table of the deepest level.
    pub fn table(&self) -> &BTreeMap<Vec<Symbol>, f64> {
        &self.tables[self.depth - 1]
    }

    pub fn table_at(&self, m: usize) -> Option<&BTreeMap<Vec<Symbol>, f64>> {
        m.checked_sub(1).and_then(|i| self.tables.get(i))
    }
}

/// Anything that assigns masses to cylinders at depths `1..=K`.
pub trait CylinderMasses {
    fn mass(&self, w: &[Symbol]) -> f64;
    /// Words of length `m` that may carry positive mass.
    fn support(&self, m: usize) -> Result<Vec<Vec<Symbol>>>;
}

impl CylinderMasses for EmpiricalMeasure {
    fn mass(&self, w: &[Symbol]) -> f64 {
        self.table_at(w.len()).and_then(|t| t.get(w).copied()).unwrap_or(0.0)
    }

    fn support(&self, m: usize) -> Result<Vec<Vec<Symbol>>> {
        self.table_at(m)
            .map(|t| t.keys().cloned().collect())
            .ok_or_else(|| Error::Input(format!("empirical measure of depth {} has no level {m}", self.depth)))
    }
}

impl CylinderMasses for MarkovMeasure {
    fn mass(&self, w: &[Symbol]) -> f64 {
        self.cylinder(w)
    }

    fn support(&self, m: usize) -> Result<Vec<Vec<Symbol>>> {
        words::enumerate(self.base(), m, None, Exec::default(), words::DEFAULT_WORD_BUDGET, |w| Some(w.to_vec()))
    }
}

/// `Σ_{m=1}^{K} 2^{−m} max_{|w|=m} |a[w] − b[w]|`.
///
/// A metrization of the weak∗ topology by depth-weighted cylinder
/// discrepancies.
pub fn weakstar_distance(a: &dyn CylinderMasses, b: &dyn CylinderMasses, depth: usize) -> Result<f64> {
    let mut total = 0.0;
    for m in 1..=depth {
        let mut ws = a.support(m)?;
        ws.extend(b.support(m)?);
        ws.sort();
        ws.dedup();
        let worst = ws.iter().map(|w| (a.mass(w) - b.mass(w)).abs()).fold(0.0, f64::max);
        total += 0.5f64.powi(m as i32) * worst;
    }
    Ok(total)
}

/// Plug-in conditional block entropy `H_k − H_{k−1}` of the sliding-window
/// frequencies of `w` over an alphabet of `alphabet` symbols (nats).
/// Refuses unless `|w| ≥ 100·N^k`.
pub fn block_entropy_estimate(w: &Word, alphabet: usize, k: usize) -> Result<f64> {
    if k == 0 || alphabet == 0 {
        return Err(Error::Input("depth and alphabet size must be positive".into()));
    }
    let need = 100.0 * (alphabet as f64).powi(k as i32);
    if (w.len() as f64) < need {
        return Err(Error::Input(format!(
            "orbit of length {} is undersampled for depth {k}: at least {need} symbols required",
            w.len()
        )));
    }
    let s = w.symbols();
    if let Some(&bad) = s.iter().find(|&&v| v as usize >= alphabet) {
        return Err(Error::SymbolOutOfRange { symbol: bad as usize, size: alphabet });
    }
    let block = |m: usize| -> f64 {
        if m == 0 {
            return 0.0;
        }
        let mut counts: HashMap<u64, usize> = HashMap::new();
        let base = alphabet as u64;
        let top = base.pow(m as u32 - 1);
        let mut code = 0u64;
        for (i, &v) in s.iter().enumerate() {
            if i >= m {
                code -= s[i - m] as u64 * top;
            }
            code = code * base + v as u64;
            if i + 1 >= m {
                *counts.entry(code).or_default() += 1;
            }
        }
        let total = (s.len() - m + 1) as f64;
        let mut sorted: Vec<usize> = counts.into_values().collect();
        sorted.sort_unstable();
        sorted.iter().map(|&c| c as f64 / total).map(|p| -p * p.ln()).sum()
    };
    Ok((block(k) - block(k - 1)).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::Sft;

    #[test]
    fn frequencies() {
        let w = Word::parse("0101").unwrap();
        let e1 = EmpiricalMeasure::from_orbit(&w, 1).unwrap();
        assert_eq!(e1.mass(&[0]), 0.5);
        let e2 = EmpiricalMeasure::from_orbit(&w, 2).unwrap();
        assert!((e2.mass(&[0, 1]) - 2.0 / 3.0).abs() < 1e-15);
        assert!((e2.mass(&[1, 0]) - 1.0 / 3.0).abs() < 1e-15);
        assert!(EmpiricalMeasure::from_orbit(&w, 5).is_err());
    }

    #[test]
    fn weakstar_examples() {
        let a = MarkovMeasure::bernoulli(&[0.5, 0.5]).unwrap();
        let b = MarkovMeasure::bernoulli(&[1.0, 0.0]).unwrap();
        assert_eq!(weakstar_distance(&a, &a, 3).unwrap(), 0.0);
        assert!((weakstar_distance(&a, &b, 1).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn block_entropy_guards() {
        let zeros = Word::new(vec![0; 10_000]);
        assert_eq!(block_entropy_estimate(&zeros, 2, 6).unwrap(), 0.0);
        assert!(block_entropy_estimate(&Word::new(vec![0; 100]), 2, 6).is_err());
        let p = MarkovMeasure::parry(&Sft::golden_mean()).unwrap();
        let w = p.sample(200_000, 3).unwrap();
        let h = block_entropy_estimate(&w, 2, 4).unwrap();
        assert!((h - p.entropy()).abs() < 0.05);
    }
}
