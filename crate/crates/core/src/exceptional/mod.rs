//! Limit-exceptional sets: ω-limit avoidance, avoidance lower bounds, and
//! the full certificate chain for the ∗-entropy of `I_F(A)`.

mod avoid;
mod certificate;
mod theorem_b;

pub use avoid::{
    avoid_within, disjointness_violations, exceptional_lower_bound, labeled_flow_entropy, labeled_suspension,
    maximal_invariant_subset, omega_avoids, star_entropy_of_target, AvoidTarget, AvoidanceBound, AvoidanceSummary,
    DEFAULT_THICKENING,
};
pub use certificate::{Certificate, Relation, Step, CERTIFICATE_SCHEMA};
pub use theorem_b::{theorem_b_certificate, TheoremB};
