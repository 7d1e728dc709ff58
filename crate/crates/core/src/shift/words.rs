//! Enumeration of admissible words, split by prefix for parallel runs.

use super::sft::Sft;
use super::word::Symbol;
use crate::error::{Error, Result};
use crate::Exec;

/// Default cap on the number of words a single enumeration may visit.
pub const DEFAULT_WORD_BUDGET: u128 = 1 << 26;

/// Visits every admissible word of length `n` (optionally with a fixed first
/// symbol) in lexicographic order and keeps the `Some` results of `f`.
///
/// The word tree is split at a shallow prefix depth and the subtrees are
/// explored independently; the concatenated output is the same for every
/// execution mode.
pub fn enumerate<T, F>(
    x: &Sft,
    n: usize,
    first: Option<Symbol>,
    exec: Exec,
    budget: u128,
    f: F,
) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[Symbol]) -> Option<T> + Sync + Send,
{
    if n == 0 {
        return Err(Error::Input("word length must be at least 1".into()));
    }
    let total = x.count_words(n)?;
    if total > budget {
        return Err(Error::Budget(format!(
            "{total} admissible words of length {n} exceed the enumeration budget of {budget}"
        )));
    }
    let split = n.min(6);
    let mut prefixes: Vec<Vec<Symbol>> = Vec::new();
    let roots: Vec<Symbol> = match first {
        Some(s) if x.is_live(s) => vec![s],
        Some(_) => Vec::new(),
        None => x.live_states().collect(),
    };
    for r in roots {
        let mut buf = vec![r];
        collect_prefixes(x, split, &mut buf, &mut prefixes);
    }
    let chunks = exec.map(&prefixes, |p| {
        let mut out = Vec::new();
        let mut buf = p.clone();
        buf.reserve(n - p.len());
        walk(x, n, &mut buf, &f, &mut out);
        out
    });
    Ok(chunks.into_iter().flatten().collect())
}

fn collect_prefixes(x: &Sft, depth: usize, buf: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
    if buf.len() == depth {
        out.push(buf.clone());
        return;
    }
    let last = *buf.last().expect("nonempty prefix");
    for &s in x.successors(last) {
        buf.push(s);
        collect_prefixes(x, depth, buf, out);
        buf.pop();
    }
}

fn walk<T, F>(x: &Sft, n: usize, buf: &mut Vec<Symbol>, f: &F, out: &mut Vec<T>)
where
    F: Fn(&[Symbol]) -> Option<T>,
{
    if buf.len() == n {
        if let Some(v) = f(buf) {
            out.push(v);
        }
        return;
    }
    let last = *buf.last().expect("nonempty prefix");
    for &s in x.successors(last) {
        buf.push(s);
        walk(x, n, buf, f, out);
        buf.pop();
    }
}
