use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Symbol = u32;

/// Symbols `0..size`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Input("alphabet must have at least one symbol".into()));
        }
        Ok(Self(size))
    }

    pub fn size(self) -> usize {
        self.0
    }

    pub fn check(self, s: Symbol) -> Result<()> {
        if (s as usize) < self.0 {
            Ok(())
        } else {
            Err(Error::SymbolOutOfRange { symbol: s as usize, size: self.0 })
        }
    }
}

/// A finite word; names the cylinder `[w_0 … w_{n-1}]` anchored at 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Word(pub Vec<Symbol>);

const DIGITS: &[u8; 36] = b"0123456789abcdefghijklmnopqrstuvwxyz";

impl Word {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(symbols: Vec<Symbol>) -> Self {
        Self(symbols)
    }

    /// Parses `"0110"` (digits `0-9a-z`) or a comma list `"12,3,40"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.contains(',') {
            return s
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<Symbol>()
                        .map_err(|_| Error::Input(format!("bad symbol {t:?} in word {s:?}")))
                })
                .collect::<Result<Vec<_>>>()
                .map(Word);
        }
        s.chars()
            .map(|c| {
                c.to_digit(36)
                    .ok_or_else(|| Error::Input(format!("bad symbol {c:?} in word {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn check(&self, alphabet: Alphabet) -> Result<()> {
        self.0.iter().try_for_each(|&s| alphabet.check(s))
    }

    /// Constant word `s^n`.
    pub fn repeat(s: Symbol, n: usize) -> Self {
        Self(vec![s; n])
    }

    /// Does `self` occur as a factor of `text`?
    pub fn is_factor_of(&self, text: &[Symbol]) -> bool {
        self.0.is_empty() || text.windows(self.0.len()).any(|w| w == self.0.as_slice())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| (s as usize) < DIGITS.len()) {
            for &s in &self.0 {
                write!(f, "{}", DIGITS[s as usize] as char)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| s.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl From<&[Symbol]> for Word {
    fn from(s: &[Symbol]) -> Self {
        Self(s.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let w = Word::parse("01a").unwrap();
        assert_eq!(w.symbols(), &[0, 1, 10]);
        assert_eq!(w.to_string(), "01a");
        let big = Word::parse("40,3").unwrap();
        assert_eq!(big.to_string(), "40,3");
        assert!(Word::parse("0?").is_err());
    }

    #[test]
    fn factor_check() {
        let w = Word::parse("11").unwrap();
        assert!(w.is_factor_of(&[0, 1, 1, 0]));
        assert!(!w.is_factor_of(&[0, 1, 0, 1]));
        assert!(Alphabet::new(0).is_err());
        assert!(Word::parse("012").unwrap().check(Alphabet::new(2).unwrap()).is_err());
    }
}
