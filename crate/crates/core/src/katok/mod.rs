//! Katok-style approximation: from an ergodic Markov measure `ν`, a locally
//! constant `τ` and a tolerance `ε`, build a sub-SFT `Ξ` whose entropy is
//! `ε`-close to `h_ν` and on which every invariant measure integrates `τ` to
//! within `ε` of `∫τ dν`.
//!
//! The range check covers *all* invariant measures on `Ξ`, not only ergodic
//! ones: the extremes of `λ ↦ ∫τ dλ` over the simplex of invariant measures
//! are attained at periodic orbits, which the mean-cycle oracle finds.

mod birkhoff;
mod concat;
mod select;

pub use birkhoff::{birkhoff_range, birkhoff_range_labeled, block_graph, BirkhoffRange};
pub use concat::{ClassGraphs, ConcatenationSft};
pub use select::{marker_state, select_good_cylinders, GoodCylinderSet, WordDiagnostics};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{LocallyConstantFn, MarkovMeasure};
use crate::Exec;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KatokConfig {
    pub eps: f64,
    /// Largest block length tried by the doubling search.
    pub n_max: usize,
    /// Cap on the candidate words enumerated at one block length.
    pub word_budget: u128,
    pub exec: Exec,
}

impl KatokConfig {
    pub fn new(eps: f64) -> Self {
        Self { eps, n_max: 40, word_budget: 1 << 24, exec: Exec::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KatokCertificate {
    pub h_nu: f64,
    pub h_xi: f64,
    pub tau_int_nu: f64,
    pub birkhoff_min: f64,
    pub birkhoff_max: f64,
    pub n: usize,
    #[serde(rename = "M")]
    pub m: usize,
    pub eps: f64,
    pub pass: bool,
}

impl KatokCertificate {
    pub fn entropy_gap(&self) -> f64 {
        (self.h_xi - self.h_nu).abs()
    }

    /// Recomputes the pass flag from the recorded values.
    pub fn holds(&self) -> bool {
        self.entropy_gap() < self.eps
            && self.tau_int_nu - self.eps < self.birkhoff_min
            && self.birkhoff_max < self.tau_int_nu + self.eps
    }
}

/// Outcome of one block length of the search.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Attempt {
    pub n: usize,
    pub selected: usize,
    pub outcome: String,
}

#[derive(Debug, Clone)]
pub struct Approximation {
    pub certificate: KatokCertificate,
    pub good: GoodCylinderSet,
    pub xi: ConcatenationSft,
    pub range: BirkhoffRange,
}

#[derive(Debug, Clone)]
pub struct KatokResult {
    pub certificate: KatokCertificate,
    /// The last constructed `Ξ` (the certified one when `pass`).
    pub approximation: Option<Approximation>,
    pub attempts: Vec<Attempt>,
}

/// One block length: select, concatenate, certify.
pub fn approximate_at(nu: &MarkovMeasure, tau: &LocallyConstantFn, cfg: &KatokConfig, n: usize) -> Result<Approximation> {
    let good = select_good_cylinders(nu, tau, cfg.eps, n, cfg.exec, cfg.word_budget)?;
    let xi = ConcatenationSft::new(&good)?;
    let range = xi.birkhoff_range(tau)?;
    let mut certificate = KatokCertificate {
        h_nu: good.h,
        h_xi: xi.entropy(),
        tau_int_nu: good.tau_int,
        birkhoff_min: range.min,
        birkhoff_max: range.max,
        n,
        m: xi.count(),
        eps: cfg.eps,
        pass: false,
    };
    certificate.pass = certificate.holds();
    Ok(Approximation { certificate, good, xi, range })
}

/// Doubling search `n = d, 2d, 4d, … ≤ n_max` for a certified `Ξ`.
/// When the next doubling would exceed the word budget, the longest length
/// the budget admits is tried instead, once.
///
/// Stops at the first certified length. When the schedule or the word
/// budget runs out, the last constructed candidate is returned with
/// `pass = false`.
pub fn approximate_sft(nu: &MarkovMeasure, tau: &LocallyConstantFn, cfg: &KatokConfig) -> Result<KatokResult> {
    if !tau.is_positive() {
        return Err(Error::Input("the function must be positive".into()));
    }
    let mut attempts = Vec::new();
    let mut last: Option<Approximation> = None;
    let mut n = tau.depth();
    while n <= cfg.n_max {
        match approximate_at(nu, tau, cfg, n) {
            Ok(a) => {
                let pass = a.certificate.pass;
                attempts.push(Attempt {
                    n,
                    selected: a.certificate.m,
                    outcome: if pass { "certified".into() } else { "gaps not within tolerance".into() },
                });
                last = Some(a);
                if pass {
                    break;
                }
            }
            Err(Error::NoGoodCylinders { .. }) => {
                attempts.push(Attempt { n, selected: 0, outcome: "no good cylinders".into() })
            }
            Err(Error::Budget(msg)) => {
                attempts.push(Attempt { n, selected: 0, outcome: format!("budget: {msg}") });
                break;
            }
            Err(e) => return Err(e),
        }
        let prev = n;
        n *= 2;
        // before giving up on the budget, try the longest length it still admits
        if n <= cfg.n_max && nu.base().count_words(n).map_or(true, |c| c > cfg.word_budget) {
            let fit = (prev + 1..n).rev().find(|&m| {
                nu.base().count_words(m).is_ok_and(|c| c <= cfg.word_budget)
            });
            if let Some(m) = fit {
                n = m;
            }
        }
    }
    let certificate = match &last {
        Some(a) => a.certificate,
        None => KatokCertificate {
            h_nu: nu.entropy(),
            h_xi: f64::NEG_INFINITY,
            tau_int_nu: nu.integrate(tau)?,
            birkhoff_min: f64::NAN,
            birkhoff_max: f64::NAN,
            n: attempts.last().map_or(0, |a| a.n),
            m: 0,
            eps: cfg.eps,
            pass: false,
        },
    };
    Ok(KatokResult { certificate, approximation: last, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::Sft;

    #[test]
    fn bernoulli_seven_tenths() {
        let nu = MarkovMeasure::bernoulli(&[0.7, 0.3]).unwrap();
        let tau = LocallyConstantFn::by_symbol(nu.base(), &[1.0, 2.0]).unwrap();
        let r = approximate_sft(&nu, &tau, &KatokConfig::new(0.1)).unwrap();
        let c = r.certificate;
        assert!(c.pass, "{c:?}");
        assert!((c.tau_int_nu - 1.3).abs() < 1e-12);
        assert!(c.birkhoff_min >= 1.2 && c.birkhoff_max <= 1.4);
        let a = r.approximation.unwrap();
        assert!((a.xi.formula_entropy() - c.h_xi).abs() < 1e-9);
    }

    #[test]
    fn golden_mean_parry_constant_roof() {
        let nu = MarkovMeasure::parry(&Sft::golden_mean()).unwrap();
        let tau = LocallyConstantFn::constant(nu.base(), 1.0).unwrap();
        let r = approximate_sft(&nu, &tau, &KatokConfig::new(0.05)).unwrap();
        assert!(r.certificate.pass);
        assert_eq!((r.certificate.birkhoff_min, r.certificate.birkhoff_max), (1.0, 1.0));
        let a = r.approximation.unwrap();
        assert!(a.xi.embedded.labels_admissible_in(nu.base()));
    }

    #[test]
    fn full_shift_accepted_immediately() {
        let nu = MarkovMeasure::bernoulli(&[0.5, 0.5]).unwrap();
        let tau = LocallyConstantFn::constant(nu.base(), 1.0).unwrap();
        let r = approximate_sft(&nu, &tau, &KatokConfig::new(0.7)).unwrap();
        assert_eq!(r.certificate.n, 1);
        assert_eq!(r.certificate.m, 2);
    }

    #[test]
    fn exhausted_schedule_fails_honestly() {
        let nu = MarkovMeasure::bernoulli(&[0.7, 0.3]).unwrap();
        let tau = LocallyConstantFn::by_symbol(nu.base(), &[1.0, 2.0]).unwrap();
        let cfg = KatokConfig { n_max: 2, ..KatokConfig::new(0.01) };
        let r = approximate_sft(&nu, &tau, &cfg).unwrap();
        assert!(!r.certificate.pass);
        assert_eq!(r.attempts.len(), 2);
    }
}
