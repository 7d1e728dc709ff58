use serde::Serialize;

use super::certificate::{Certificate, Relation, Step};
use crate::error::{Error, Result};
use crate::shift::{CylinderUnion, LabeledSft, Sft, Symbol, Word, EMPTY_ENTROPY};
use crate::suspension::SuspensionSpace;

/// Default depth of the cylinder cover used to thicken a sub-SFT target.
pub const DEFAULT_THICKENING: usize = 6;

/// Label-word budget for the word-level disjointness check.
const DISJOINTNESS_BUDGET: u128 = 1 << 22;

/// The set `A` whose ω-limit avoidance is studied.
#[derive(Debug, Clone, PartialEq)]
pub enum AvoidTarget {
    /// Finite union of cylinders at coordinate 0.
    Cylinders(CylinderUnion),
    /// A subsystem of the base, avoided through its depth-`thickening` cover.
    SubSft { sft: Sft, thickening: usize },
}

impl AvoidTarget {
    pub fn sub_sft(base: &Sft, a: Sft, thickening: usize) -> Result<Self> {
        if !a.is_subsystem_of(base) {
            return Err(Error::Input("target is not a subsystem of the base".into()));
        }
        if thickening == 0 {
            return Err(Error::Input("thickening depth must be positive".into()));
        }
        Ok(Self::SubSft { sft: a, thickening })
    }

    /// Cylinders whose avoidance keeps every ω-limit off `A`.
    pub fn forbidden_cylinders(&self) -> Result<CylinderUnion> {
        match self {
            Self::Cylinders(u) => Ok(u.clone()),
            Self::SubSft { sft, .. } if sft.is_empty() => Ok(CylinderUnion::empty()),
            Self::SubSft { sft, thickening } => CylinderUnion::cover(sft, *thickening),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Cylinders(_) => "cylinders",
            Self::SubSft { .. } => "sub-sft",
        }
    }
}

/// Does the ω-limit of `pre · period^∞` miss `A`? The ω-limit is the orbit
/// of `period^∞`; the preperiod is irrelevant.
pub fn omega_avoids(_preperiod: &[Symbol], period: &[Symbol], target: &AvoidTarget) -> Result<bool> {
    if period.is_empty() {
        return Err(Error::Input("period must be nonempty".into()));
    }
    let p = period.len();
    match target {
        AvoidTarget::Cylinders(u) => {
            let m = u.max_len().max(1);
            for r in 0..p {
                let seq: Vec<Symbol> = (0..m).map(|k| period[(r + k) % p]).collect();
                if u.contains(&seq) == Some(true) {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        AvoidTarget::SubSft { sft, .. } => {
            let inside = (0..p).all(|i| {
                let (a, b) = (period[i], period[(i + 1) % p]);
                (a as usize) < sft.size() && (b as usize) < sft.size() && sft.transition(a, b)
            });
            Ok(!inside)
        }
    }
}

/// Suspension over a labeled presentation, with the roof read through the labels.
pub fn labeled_suspension(s: &SuspensionSpace, l: &LabeledSft) -> Result<SuspensionSpace> {
    let roof = s.roof().pull_back(l)?;
    SuspensionSpace::new(l.graph().clone(), roof)
}

/// Flow entropy of a labeled subsystem (`−∞` when empty).
pub fn labeled_flow_entropy(s: &SuspensionSpace, l: &LabeledSft) -> Result<f64> {
    if l.is_empty() {
        return Ok(EMPTY_ENTROPY);
    }
    labeled_suspension(s, l)?.flow_entropy()
}

/// Flow ∗-entropy of the target: for a sub-SFT the flow entropy over it,
/// for a cylinder union the flow entropy over its maximal invariant subset
/// (the sequences all of whose windows of the longest word length lie in
/// the union).
pub fn star_entropy_of_target(s: &SuspensionSpace, target: &AvoidTarget) -> Result<f64> {
    match target {
        AvoidTarget::SubSft { sft, .. } => {
            if sft.is_empty() {
                return Ok(EMPTY_ENTROPY);
            }
            crate::suspension::star_entropy_of_subsft(s, sft)
        }
        AvoidTarget::Cylinders(u) => {
            if u.is_empty() {
                return Ok(EMPTY_ENTROPY);
            }
            let inv = maximal_invariant_subset(s.base(), u)?;
            labeled_flow_entropy(s, &inv)
        }
    }
}

/// `⋂_n σ^{−n} U` as a labeled SFT: forbid every admissible `m`-word that
/// does not start with a word of `U`.
pub fn maximal_invariant_subset(x: &Sft, u: &CylinderUnion) -> Result<LabeledSft> {
    let m = u.max_len();
    let inside = u.lift_to_depth(x, m)?;
    let outside = crate::shift::words::enumerate(
        x,
        m,
        None,
        crate::Exec::default(),
        crate::shift::words::DEFAULT_WORD_BUDGET,
        |w| (inside.binary_search_by(|v| v.symbols().cmp(w)).is_err()).then(|| Word::from(w)),
    )?;
    LabeledSft::identity(x).forbid(&CylinderUnion::new(outside))
}

/// Number of admissible label words of `xi_a` (of the longest target-word
/// length) that begin with a forbidden cylinder word.
pub fn disjointness_violations(xi_a: &LabeledSft, u: &CylinderUnion) -> Result<usize> {
    if xi_a.is_empty() || u.is_empty() {
        return Ok(0);
    }
    let words = xi_a.label_words(u.max_len(), DISJOINTNESS_BUDGET)?;
    Ok(words.iter().filter(|w| u.contains(w.symbols()) == Some(true)).count())
}

#[derive(Debug, Clone)]
pub struct AvoidanceBound {
    /// The avoiding subsystem, labeled in the base alphabet.
    pub xi_a: LabeledSft,
    pub bound: f64,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, Serialize)]
pub struct AvoidanceSummary {
    pub bound: f64,
    pub avoiding_states: usize,
    pub avoiding_entropy: f64,
}

impl AvoidanceBound {
    pub fn summary(&self) -> AvoidanceSummary {
        AvoidanceSummary {
            bound: self.bound,
            avoiding_states: self.xi_a.graph().live_count(),
            avoiding_entropy: self.xi_a.entropy(),
        }
    }
}

/// Lower bound for the ∗-entropy of the limit `A`-exceptional set: the
/// closed invariant set `Ξ_A` of sequences avoiding the target's cylinders
/// traps every ω-limit away from `A`, so its flow entropy is a lower bound.
pub fn exceptional_lower_bound(s: &SuspensionSpace, target: &AvoidTarget) -> Result<AvoidanceBound> {
    avoid_within(s, &LabeledSft::identity(s.base()), target)
}

/// As [`exceptional_lower_bound`], starting from a labeled subsystem of the base.
pub fn avoid_within(s: &SuspensionSpace, within: &LabeledSft, target: &AvoidTarget) -> Result<AvoidanceBound> {
    let u = target.forbidden_cylinders()?;
    let xi_a = within.forbid(&u)?;
    let bound = labeled_flow_entropy(s, &xi_a)?;
    let mut cert = Certificate::new("flow entropy of the avoiding subsystem bounds h*(I_F(A)) from below");
    let violations = disjointness_violations(&xi_a, &u)?;
    cert.push(Step::new(
        "disj",
        "admissible words of the avoiding subsystem that hit A",
        violations as f64,
        Relation::Equal,
        0.0,
        0.0,
        "label-word enumeration",
    ));
    cert.diagnostic("lower_bound", bound);
    if xi_a.is_empty() {
        cert.note("the avoiding subsystem is empty; the lower bound is -inf");
    }
    Ok(AvoidanceBound { xi_a, bound, certificate: cert })
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::LocallyConstantFn;

    fn space_const() -> SuspensionSpace {
        let full = Sft::full(2).unwrap();
        SuspensionSpace::new(full.clone(), LocallyConstantFn::constant(&full, 1.0).unwrap()).unwrap()
    }

    fn cyl(s: &str) -> AvoidTarget {
        AvoidTarget::Cylinders(CylinderUnion::parse(s).unwrap())
    }

    #[test]
    fn omega_limits() {
        assert!(omega_avoids(&[], &[0], &cyl("1")).unwrap());
        assert!(!omega_avoids(&[], &[0, 1], &cyl("01")).unwrap());
        assert!(omega_avoids(&[1], &[0], &cyl("1")).unwrap());
        let full = Sft::full(2).unwrap();
        let g = AvoidTarget::sub_sft(&full, Sft::golden_mean(), 6).unwrap();
        assert!(!omega_avoids(&[], &[0, 1], &g).unwrap());
        assert!(omega_avoids(&[], &[1], &g).unwrap());
    }

    #[test]
    fn lower_bounds() {
        let s = space_const();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let b = exceptional_lower_bound(&s, &cyl("11")).unwrap();
        assert!((b.bound - phi.ln()).abs() < 1e-12);
        assert!(b.certificate.pass);
        let b = exceptional_lower_bound(&s, &cyl("00000")).unwrap();
        assert!((b.bound - 1.965948236645486f64.ln()).abs() < 1e-10);
        let none = exceptional_lower_bound(&s, &AvoidTarget::Cylinders(CylinderUnion::empty())).unwrap();
        assert!((none.bound - 2f64.ln()).abs() < 1e-12);
        let all = exceptional_lower_bound(&s, &cyl("0,1")).unwrap();
        assert_eq!(all.bound, EMPTY_ENTROPY);
    }

    #[test]
    fn star_entropies() {
        let s = space_const();
        let full = s.base().clone();
        let base = AvoidTarget::sub_sft(&full, full.clone(), 6).unwrap();
        assert!((star_entropy_of_target(&s, &base).unwrap() - 2f64.ln()).abs() < 1e-12);
        let fixed = AvoidTarget::sub_sft(&full, Sft::from_matrix(&[vec![1, 0], vec![0, 0]]).unwrap(), 6).unwrap();
        assert!(star_entropy_of_target(&s, &fixed).unwrap().abs() < 1e-14);
        // the cylinder [0] has maximal invariant subset {0^∞}
        assert!(star_entropy_of_target(&s, &cyl("0")).unwrap().abs() < 1e-14);
        // [0] ∪ [10] is invariant-closed to the golden-mean shift of "no 11"
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((star_entropy_of_target(&s, &cyl("0,10")).unwrap() - phi.ln()).abs() < 1e-12);
    }
}
