use std::collections::{BTreeSet, HashMap};

use super::cylinder::CylinderUnion;
use super::sft::Sft;
use super::word::{Alphabet, Symbol, Word};
use crate::error::{Error, Result};

/// Cap on the number of block states a recoding may create.
pub const BLOCK_STATE_BUDGET: u128 = 1 << 22;

/// Vertex-labeled graph presenting a shift over `base`: the presented system
/// is the set of label sequences of bi-infinite paths in `sft`.
///
/// All constructors here keep the labeling finite-to-one (they start from a
/// right-resolving graph and only pass to higher blocks or subgraphs), so the
/// entropy of the presented shift equals the entropy of the graph.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSft {
    sft: Sft,
    labels: Vec<Symbol>,
    base: Alphabet,
}

impl LabeledSft {
    pub fn new(sft: Sft, labels: Vec<Symbol>, base: Alphabet) -> Result<Self> {
        if labels.len() != sft.size() {
            return Err(Error::Input(format!(
                "{} labels for a graph with {} states",
                labels.len(),
                sft.size()
            )));
        }
        for &l in &labels {
            base.check(l)?;
        }
        Ok(Self { sft, labels, base })
    }

    /// `x` labeled by its own symbols.
    pub fn identity(x: &Sft) -> Self {
        Self { sft: x.clone(), labels: (0..x.size() as Symbol).collect(), base: x.alphabet() }
    }

    pub fn graph(&self) -> &Sft {
        &self.sft
    }

    pub fn into_graph(self) -> Sft {
        self.sft
    }

    pub fn labels(&self) -> &[Symbol] {
        &self.labels
    }

    pub fn label(&self, state: Symbol) -> Symbol {
        self.labels[state as usize]
    }

    pub fn base(&self) -> Alphabet {
        self.base
    }

    pub fn is_empty(&self) -> bool {
        self.sft.is_empty()
    }

    pub fn entropy(&self) -> f64 {
        self.sft.entropy()
    }

    /// Distinct successors of every state carry distinct labels.
    pub fn is_right_resolving(&self) -> bool {
        self.sft.live_states().all(|s| {
            let mut seen = BTreeSet::new();
            self.sft.successors(s).iter().all(|&t| seen.insert(self.label(t)))
        })
    }

    /// Every labeled transition is a transition of `ambient`; for a one-step
    /// ambient SFT this makes every label word admissible there.
    pub fn labels_admissible_in(&self, ambient: &Sft) -> bool {
        ambient.size() == self.base.size()
            && self.sft.live_states().all(|s| {
                ambient.is_live(self.label(s))
                    && self.sft.successors(s).iter().all(|&t| ambient.transition(self.label(s), self.label(t)))
            })
    }

    /// Distinct label words of length `n`, sorted.
    pub fn label_words(&self, n: usize, budget: u128) -> Result<Vec<Word>> {
        if n == 0 {
            return Err(Error::Input("word length must be at least 1".into()));
        }
        let paths = self.sft.count_words(n)?;
        if paths > budget {
            return Err(Error::Budget(format!("{paths} paths of length {n} exceed the budget of {budget}")));
        }
        let mut out = BTreeSet::new();
        let mut buf = Vec::with_capacity(n);
        for s in self.sft.live_states() {
            buf.push(s);
            self.collect_labels(n, &mut buf, &mut out);
            buf.pop();
        }
        Ok(out.into_iter().map(Word::new).collect())
    }

    fn collect_labels(&self, n: usize, buf: &mut Vec<Symbol>, out: &mut BTreeSet<Vec<Symbol>>) {
        if buf.len() == n {
            out.insert(buf.iter().map(|&s| self.label(s)).collect());
            return;
        }
        let last = *buf.last().expect("nonempty path");
        for &t in self.sft.successors(last) {
            buf.push(t);
            self.collect_labels(n, buf, out);
            buf.pop();
        }
    }

    /// Removes every label sequence containing a word of `f` as a factor.
    pub fn forbid(&self, f: &CylinderUnion) -> Result<Self> {
        let forbidden = f.factor_reduced();
        for w in &forbidden {
            w.check(self.base)?;
        }
        if forbidden.is_empty() {
            return Ok(self.clone());
        }
        let m = forbidden.iter().map(Word::len).max().expect("nonempty");
        let b = m.saturating_sub(1).max(1);
        let has_forbidden_suffix =
            |word: &[Symbol]| forbidden.iter().any(|w| word.ends_with(w.symbols()));
        self.recode(b, |labels: &[Symbol]| {
            (1..=labels.len()).all(|k| !has_forbidden_suffix(&labels[..k]))
        }, has_forbidden_suffix)
    }

    /// Recoding by `m`-blocks of states.
    pub fn higher_block(&self, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Input("block length must be at least 1".into()));
        }
        if m == 1 {
            return Ok(self.clone());
        }
        self.recode(m, |_| true, |_| false)
    }

    /// States are admissible `b`-paths; a state survives if `keep_state`
    /// accepts its label word, an edge if `drop_edge` rejects the label word
    /// of the `(b+1)`-path it realizes. New labels are the first state's label.
    fn recode(
        &self,
        b: usize,
        keep_state: impl Fn(&[Symbol]) -> bool,
        drop_edge: impl Fn(&[Symbol]) -> bool,
    ) -> Result<Self> {
        let count = self.sft.count_words(b)?;
        if count > BLOCK_STATE_BUDGET {
            return Err(Error::Budget(format!(
                "{count} block states of length {b} exceed the budget of {BLOCK_STATE_BUDGET}"
            )));
        }
        let paths = block_paths(&self.sft, b);
        let index: HashMap<&[Symbol], usize> =
            paths.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
        let mut succ: Vec<Vec<Symbol>> = vec![Vec::new(); paths.len()];
        let mut word = Vec::with_capacity(b + 1);
        let mut next = Vec::with_capacity(b);
        for (i, p) in paths.iter().enumerate() {
            word.clear();
            word.extend(p.iter().map(|&s| self.label(s)));
            if !keep_state(&word) {
                continue;
            }
            let last = *p.last().expect("nonempty block");
            for &q in self.sft.successors(last) {
                word.push(self.label(q));
                if !drop_edge(&word) {
                    next.clear();
                    next.extend_from_slice(&p[1..]);
                    next.push(q);
                    if let Some(&j) = index.get(next.as_slice()) {
                        succ[i].push(j as Symbol);
                    }
                }
                word.pop();
            }
        }
        let labels: Vec<Symbol> = paths.iter().map(|p| self.label(p[0])).collect();
        Ok(compact(succ, labels, self.base))
    }
}

/// All admissible state paths of length `b` in lexicographic order.
fn block_paths(x: &Sft, b: usize) -> Vec<Vec<Symbol>> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(b);
    fn rec(x: &Sft, b: usize, buf: &mut Vec<Symbol>, out: &mut Vec<Vec<Symbol>>) {
        if buf.len() == b {
            out.push(buf.clone());
            return;
        }
        let last = *buf.last().expect("nonempty path");
        for &t in x.successors(last) {
            buf.push(t);
            rec(x, b, buf, out);
            buf.pop();
        }
    }
    for s in x.live_states() {
        buf.push(s);
        rec(x, b, &mut buf, &mut out);
        buf.pop();
    }
    out
}

/// Prunes and drops dead states, renumbering the survivors in order.
fn compact(succ: Vec<Vec<Symbol>>, labels: Vec<Symbol>, base: Alphabet) -> LabeledSft {
    let n = succ.len();
    let Ok(alpha) = Alphabet::new(n) else {
        return empty_labeled(base);
    };
    let pruned = Sft::from_successors(alpha, succ);
    let live: Vec<Symbol> = pruned.live_states().collect();
    if live.is_empty() {
        return empty_labeled(base);
    }
    let mut renum = vec![u32::MAX; n];
    for (k, &s) in live.iter().enumerate() {
        renum[s as usize] = k as Symbol;
    }
    let succ = live
        .iter()
        .map(|&s| pruned.successors(s).iter().map(|&t| renum[t as usize]).collect())
        .collect();
    let sft = Sft::from_successors(Alphabet::new(live.len()).expect("nonempty"), succ);
    let labels = live.iter().map(|&s| labels[s as usize]).collect();
    LabeledSft { sft, labels, base }
}

fn empty_labeled(base: Alphabet) -> LabeledSft {
    LabeledSft { sft: Sft::empty(1).expect("size 1"), labels: vec![0], base }
}

/// SFT on admissible block states whose sequences are exactly those of `x`
/// containing no word of `f` (empty SFT if nothing survives).
pub fn forbid_words(x: &Sft, f: &CylinderUnion) -> Result<Sft> {
    Ok(LabeledSft::identity(x).forbid(f)?.into_graph())
}

/// Conjugate recoding on the alphabet of admissible `m`-words.
pub fn higher_block(x: &Sft, m: usize) -> Result<Sft> {
    Ok(LabeledSft::identity(x).higher_block(m)?.into_graph())
}

/// Non-overlapping `n`-block recoding: the shift `σ^n` on `x`, presented on
/// admissible `n`-words with `u -> v` allowed when `u v` is admissible.
pub fn power(x: &Sft, n: usize) -> Result<Sft> {
    if n == 0 {
        return Err(Error::Input("power must be at least 1".into()));
    }
    let count = x.count_words(n)?;
    if count > BLOCK_STATE_BUDGET {
        return Err(Error::Budget(format!("{count} blocks of length {n} exceed the budget")));
    }
    let blocks = block_paths(x, n);
    let mut by_first: Vec<Vec<Symbol>> = vec![Vec::new(); x.size()];
    for (j, b) in blocks.iter().enumerate() {
        by_first[b[0] as usize].push(j as Symbol);
    }
    let succ = blocks
        .iter()
        .map(|b| {
            let last = *b.last().expect("nonempty");
            x.successors(last).iter().flat_map(|&s| by_first[s as usize].iter().copied()).collect()
        })
        .collect();
    let Ok(alpha) = Alphabet::new(blocks.len()) else {
        return Sft::empty(1);
    };
    Ok(Sft::from_successors(alpha, succ))
}
