//! Subshifts of finite type, words, cylinders and word-avoidance surgery.

mod cylinder;
mod io;
mod labeled;
mod sft;
mod word;
pub mod words;

pub use cylinder::CylinderUnion;
pub use io::parse_sft;
pub use labeled::{forbid_words, higher_block, power, LabeledSft, BLOCK_STATE_BUDGET};
pub use sft::{sigma_metric, Sft, EMPTY_ENTROPY};
pub use word::{Alphabet, Symbol, Word};

use crate::error::Result;

pub fn is_admissible(w: &Word, x: &Sft) -> Result<bool> {
    x.is_admissible(w)
}

/// Exact word count, restricted to the brute-force oracle budget `N^n ≤ 10^8`.
pub fn count_words(x: &Sft, n: usize) -> Result<u128> {
    let cap = 1e8f64;
    if (x.size() as f64).powi(n as i32) > cap {
        return Err(crate::Error::Budget(format!(
            "{}^{n} exceeds the word-count oracle budget of 10^8",
            x.size()
        )));
    }
    x.count_words(n)
}

pub fn sft_entropy(x: &Sft) -> f64 {
    x.entropy()
}

pub fn is_irreducible(x: &Sft) -> bool {
    x.is_irreducible()
}
