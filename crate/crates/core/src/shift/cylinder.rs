use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::sft::Sft;
use super::word::{Symbol, Word};
use crate::error::{Error, Result};

/// Finite union of cylinders anchored at coordinate 0, kept as a
/// prefix antichain (no word is a prefix of another).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CylinderUnion {
    words: Vec<Word>,
}

impl CylinderUnion {
    pub fn new(words: impl IntoIterator<Item = Word>) -> Self {
        let set: BTreeSet<Word> = words.into_iter().collect();
        // sorted order puts prefixes first
        let mut kept: Vec<Word> = Vec::new();
        for w in set {
            if !kept.iter().any(|k| w.symbols().starts_with(k.symbols())) {
                kept.push(w);
            }
        }
        Self { words: kept }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Newline- or comma-separated words; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut words = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            for tok in line.split([',', ' ']).filter(|t| !t.is_empty()) {
                words.push(Word::parse(tok)?);
            }
        }
        if words.iter().any(Word::is_empty) {
            return Err(Error::Input("the empty word names the whole space, not a cylinder".into()));
        }
        Ok(Self::new(words))
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Does a sequence starting with `seq` lie in the union?
    /// `None` when `seq` is too short to decide.
    pub fn contains(&self, seq: &[Symbol]) -> Option<bool> {
        let mut undecided = false;
        for w in &self.words {
            if w.len() <= seq.len() {
                if seq.starts_with(w.symbols()) {
                    return Some(true);
                }
            } else if w.symbols().starts_with(seq) {
                undecided = true;
            }
        }
        if undecided {
            None
        } else {
            Some(false)
        }
    }

    /// Drops every word that contains another word of the union as a factor.
    /// This is the right normal form for forbidden-factor semantics.
    pub fn factor_reduced(&self) -> Vec<Word> {
        let mut ws = self.words.clone();
        ws.sort_by_key(Word::len);
        let mut kept: Vec<Word> = Vec::new();
        for w in ws {
            if !kept.iter().any(|k| k.is_factor_of(w.symbols())) {
                kept.push(w);
            }
        }
        kept
    }

    /// Cover of a sub-SFT by all of its admissible `k`-words.
    pub fn cover(x: &Sft, k: usize) -> Result<Self> {
        let words = super::words::enumerate(x, k, None, crate::Exec::default(), super::words::DEFAULT_WORD_BUDGET, |w| {
            Some(Word::from(w))
        })?;
        Ok(Self::new(words))
    }

    /// All admissible `m`-words of `x` that start with a word of the union;
    /// `m` must be at least the longest word.
    pub fn lift_to_depth(&self, x: &Sft, m: usize) -> Result<Vec<Word>> {
        if m < self.max_len() {
            return Err(Error::Input(format!(
                "lift depth {m} is shorter than the longest cylinder word ({})",
                self.max_len()
            )));
        }
        super::words::enumerate(x, m, None, crate::Exec::default(), super::words::DEFAULT_WORD_BUDGET, |w| {
            (self.contains(w) == Some(true)).then(|| Word::from(w))
        })
    }
}
