use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shift::{words, LabeledSft, Sft, Symbol, Word};
use crate::Exec;

/// Function of the first `depth` coordinates, tabulated on every admissible
/// `depth`-word of the system it was built for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocallyConstantFn {
    depth: usize,
    table: HashMap<Vec<Symbol>, f64>,
    bound: f64,
}

impl LocallyConstantFn {
    pub fn from_fn(x: &Sft, depth: usize, f: impl Fn(&[Symbol]) -> f64 + Sync + Send) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Input("function depth must be at least 1".into()));
        }
        let entries = words::enumerate(x, depth, None, Exec::default(), words::DEFAULT_WORD_BUDGET, |w| {
            Some((w.to_vec(), f(w)))
        })?;
        Self::from_table(depth, entries)
    }

    pub fn from_table(depth: usize, entries: impl IntoIterator<Item = (Vec<Symbol>, f64)>) -> Result<Self> {
        let table: HashMap<Vec<Symbol>, f64> = entries.into_iter().collect();
        if let Some((w, v)) = table.iter().find(|(w, v)| w.len() != depth || !v.is_finite()) {
            return Err(Error::Input(format!("table entry {w:?} -> {v} does not fit depth {depth}")));
        }
        let bound = table.values().cloned().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self { depth, table, bound })
    }

    pub fn constant(x: &Sft, c: f64) -> Result<Self> {
        Self::from_fn(x, 1, |_| c)
    }

    /// Depth-1 function `w ↦ values[w₀]`.
    pub fn by_symbol(x: &Sft, values: &[f64]) -> Result<Self> {
        if values.len() != x.size() {
            return Err(Error::Input(format!(
                "{} symbol values for an alphabet of size {}",
                values.len(),
                x.size()
            )));
        }
        Self::from_fn(x, 1, |w| values[w[0] as usize])
    }

    /// `const:c`, `sym:v0,v1,…` (by first symbol) or `words:w=v;w=v;…`.
    pub fn parse(x: &Sft, spec: &str) -> Result<Self> {
        let (kind, body) = spec
            .split_once(':')
            .ok_or_else(|| Error::Input(format!("function spec '{spec}' lacks a kind prefix")))?;
        let num = |s: &str| {
            s.trim().parse::<f64>().map_err(|_| Error::Input(format!("'{s}' is not a number")))
        };
        match kind {
            "const" => Self::constant(x, num(body)?),
            "sym" => {
                let values = body.split(',').map(num).collect::<Result<Vec<f64>>>()?;
                Self::by_symbol(x, &values)
            }
            "words" => {
                let mut entries = Vec::new();
                for item in body.split(';').filter(|s| !s.trim().is_empty()) {
                    let (w, v) = item
                        .split_once('=')
                        .ok_or_else(|| Error::Input(format!("entry '{item}' is not word=value")))?;
                    entries.push((Word::parse(w.trim())?.0, num(v)?));
                }
                let depth = entries.first().map(|e| e.0.len()).unwrap_or(0);
                let f = Self::from_table(depth, entries)?;
                f.check_covers(x)?;
                Ok(f)
            }
            other => Err(Error::Input(format!("unknown function kind '{other}'"))),
        }
    }

    /// Every admissible `depth`-word of `x` has a value.
    pub fn check_covers(&self, x: &Sft) -> Result<()> {
        let missing = words::enumerate(x, self.depth, None, Exec::default(), words::DEFAULT_WORD_BUDGET, |w| {
            (!self.table.contains_key(w)).then(|| Word::from(w))
        })?;
        match missing.first() {
            None => Ok(()),
            Some(w) => Err(Error::Input(format!("function has no value on admissible word {w}"))),
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Largest tabulated value (the bound α for roof usage).
    pub fn bound(&self) -> f64 {
        self.bound
    }

    pub fn min_value(&self) -> f64 {
        self.table.values().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn is_positive(&self) -> bool {
        self.table.values().all(|&v| v > 0.0)
    }

    pub fn get(&self, w: &[Symbol]) -> Option<f64> {
        w.get(..self.depth).and_then(|k| self.table.get(k).copied())
    }

    /// Value on the first `depth` symbols; panics on words it was not built for.
    pub fn value(&self, w: &[Symbol]) -> f64 {
        self.get(w)
            .unwrap_or_else(|| panic!("no value for {:?} (depth {})", w, self.depth))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&[Symbol], f64)> {
        self.table.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    /// `Σ_{i} φ(σ^i w)` over the windows fully inside `w`.
    pub fn birkhoff_sum(&self, w: &[Symbol]) -> f64 {
        if w.len() < self.depth {
            return 0.0;
        }
        w.windows(self.depth).map(|k| self.value(k)).sum()
    }

    /// Birkhoff sum over one period of the periodic point `w^∞`.
    pub fn cyclic_birkhoff_sum(&self, w: &[Symbol]) -> f64 {
        let n = w.len();
        let mut buf = Vec::with_capacity(self.depth);
        (0..n)
            .map(|i| {
                buf.clear();
                buf.extend((0..self.depth).map(|k| w[(i + k) % n]));
                self.value(&buf)
            })
            .sum()
    }

    /// Array-indexed copy for hot loops over an alphabet of `alphabet`
    /// symbols; `None` when `alphabet^depth` exceeds `2^20` entries.
    pub fn indexed(&self, alphabet: usize) -> Option<IndexedFn> {
        let size = (alphabet as u128).checked_pow(self.depth as u32)?;
        if size > 1 << 20 {
            return None;
        }
        let mut values = vec![f64::NAN; size as usize];
        for (k, &v) in &self.table {
            values[k.iter().fold(0usize, |acc, &s| acc * alphabet + s as usize)] = v;
        }
        Some(IndexedFn { depth: self.depth, alphabet, values })
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            depth: self.depth,
            table: self.table.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            bound: self.bound * c,
        }
    }

    /// The same function read through the labels of `l`, as a function of
    /// `depth` consecutive states of `l`'s graph.
    pub fn pull_back(&self, l: &LabeledSft) -> Result<Self> {
        let g = l.graph();
        let entries = words::enumerate(g, self.depth, None, Exec::default(), words::DEFAULT_WORD_BUDGET, |p| {
            let labels: Vec<Symbol> = p.iter().map(|&s| l.label(s)).collect();
            Some((p.to_vec(), self.get(&labels)))
        })?;
        let mut table = Vec::with_capacity(entries.len());
        for (p, v) in entries {
            let v = v.ok_or_else(|| {
                Error::Input(format!("labels of state path {p:?} are outside the function's domain"))
            })?;
            table.push((p, v));
        }
        Self::from_table(self.depth, table)
    }
}

/// Dense table of a [`LocallyConstantFn`], indexed by the base-`N` value of
/// the window. Windows it was not built for read as NaN.
#[derive(Debug, Clone)]
pub struct IndexedFn {
    depth: usize,
    alphabet: usize,
    values: Vec<f64>,
}

impl IndexedFn {
    /// Same as [`LocallyConstantFn::cyclic_birkhoff_sum`], with a rolling index.
    pub fn cyclic_birkhoff_sum(&self, w: &[Symbol]) -> f64 {
        let n = w.len();
        let modulus = self.values.len() / self.alphabet;
        let mut idx = (0..self.depth - 1).fold(0usize, |acc, k| acc * self.alphabet + w[k % n] as usize);
        let mut sum = 0.0;
        for i in 0..n {
            idx = (idx % modulus) * self.alphabet + w[(i + self.depth - 1) % n] as usize;
            sum += self.values[idx];
        }
        sum
    }
}
