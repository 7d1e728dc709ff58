//! Invariant measures on SFTs, locally constant functions, empirical
//! measures of orbits, weak∗ comparison and entropy estimation.

mod empirical;
mod function;
mod markov;

pub use empirical::{block_entropy_estimate, weakstar_distance, CylinderMasses, EmpiricalMeasure};
pub use function::{IndexedFn, LocallyConstantFn};
pub use markov::{MarkovMeasure, STOCHASTIC_TOL};

use crate::error::Result;
use crate::shift::{Sft, Word};

pub fn parry_measure(x: &Sft) -> Result<MarkovMeasure> {
    MarkovMeasure::parry(x)
}

pub fn markov_entropy(nu: &MarkovMeasure) -> f64 {
    nu.entropy()
}

pub fn cylinder_measure(nu: &MarkovMeasure, w: &Word) -> f64 {
    nu.cylinder(w.symbols())
}

pub fn integrate(nu: &MarkovMeasure, f: &LocallyConstantFn) -> Result<f64> {
    nu.integrate(f)
}

pub fn sample_orbit(nu: &MarkovMeasure, n: usize, seed: u64) -> Result<Word> {
    nu.sample(n, seed)
}

pub fn empirical_from_orbit(w: &Word, k: usize) -> Result<EmpiricalMeasure> {
    EmpiricalMeasure::from_orbit(w, k)
}
