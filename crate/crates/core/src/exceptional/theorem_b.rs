use super::avoid::{avoid_within, star_entropy_of_target, AvoidTarget};
use super::certificate::{Certificate, Relation, Step};
use crate::error::{Error, Result};
use crate::katok::{approximate_sft, birkhoff_range_labeled, KatokConfig, KatokResult};
use crate::shift::{LabeledSft, EMPTY_ENTROPY};
use crate::suspension::{SuspensionSpace, TransitionRoof};

/// Everything the pipeline computed, for reporting and replay.
#[derive(Debug, Clone)]
pub struct TheoremB {
    pub certificate: Certificate,
    pub h_top_flow: f64,
    pub h_star_target: f64,
    /// Lower bound on `h*(F, I_F(A))`, `−∞` if the chain broke early.
    pub bound: f64,
    pub katok: Option<KatokResult>,
}

/// Executable version of the proof chain for
/// `h*(F, I_F(A)) = h_top(F)` when `h*(F, A) < h_top(F)`:
///
/// 0. `h*(A) < h_top(F)`;
/// 1. the equilibrium measure `ν_max` of `−s*τ` attains `s*`, `R = ∫τ dν_max`;
/// 2. a Katok approximation `Ξ` of `ν_max` within `ε`;
/// 3. `Ξ_A ⊂ Ξ` avoiding `A`;
/// 4. the Abramov transfer `h(Ξ_A)/(R+ε) ≤ h(Ξ_A)/max_λ ∫τ dλ ≤ h_top(F|Ξ_A)`;
/// 5. the certified bound `h_top(F|Ξ_A) ≤ h_top(F)`, with the gap reported.
///
/// The certified bound is the flow entropy over `Ξ_A` (a pressure root), which
/// dominates the `h(Ξ_A)/(R+ε)` form by step 4.
pub fn theorem_b_certificate(s: &SuspensionSpace, target: &AvoidTarget, cfg: &KatokConfig) -> Result<TheoremB> {
    let eps = cfg.eps;
    let mut cert = Certificate::new("h*(F, I_F(A)) >= bound, approaching h_top(F) as the approximation tightens");
    let report = s.flow_entropy_report()?;
    let h_top = report.entropy;
    let h_star = star_entropy_of_target(s, target)?;
    let fail = |mut cert: Certificate, msg: String, katok| {
        cert.fail(msg);
        Ok(TheoremB { certificate: cert, h_top_flow: h_top, h_star_target: h_star, bound: EMPTY_ENTROPY, katok })
    };
    if !cert.push(Step::new("0", "h*(A) < h_top(F)", h_star, Relation::Less, h_top, 0.0, "pressure root over the target")) {
        return fail(cert, "hypothesis h*(A) < h_top(F) violated".into(), None);
    }
    let Some(eq) = report.equilibrium else {
        return Err(Error::Reducible { op: "theorem_b_certificate" });
    };
    cert.push(Step::new(
        "1",
        "Abramov entropy of the equilibrium measure equals h_top(F)",
        eq.abramov,
        Relation::Equal,
        h_top,
        1e-6,
        "Perron pair of the weighted transition matrix",
    ));
    let r = eq.tau_int;
    cert.diagnostic("R", r);

    // Katok approximation of ν_max on the transition-roof graph
    let tr = &eq.recoding;
    let katok = approximate_sft(&eq.measure, &tr.roof, cfg)?;
    let kc = katok.certificate;
    cert.push(Step::new("2a", "|h(Xi) - h(nu_max)| < eps", kc.entropy_gap(), Relation::Less, eps, 0.0, "graph Perron root"));
    cert.push(Step::new("2b", "R - eps < min Birkhoff average on Xi", r - eps, Relation::Less, kc.birkhoff_min, 0.0, "Karp on boundary classes"));
    cert.push(Step::new("2c", "max Birkhoff average on Xi < R + eps", kc.birkhoff_max, Relation::Less, r + eps, 0.0, "Karp on boundary classes"));
    let Some(approx) = katok.approximation.clone() else {
        return fail(cert, "no approximating subsystem was constructed".into(), Some(katok));
    };

    // Ξ in the base alphabet: relabel block states by their first symbol
    let xi = relabel_to_base(&approx.xi.embedded, tr, s)?;
    let h_xi = xi.entropy();
    let avoid = avoid_within(s, &xi, target)?;
    let xi_a = &avoid.xi_a;
    let disj = avoid.certificate.step("disj").map_or(f64::NAN, |st| st.lhs);
    cert.push(Step::new("3a", "words of Xi_A meeting A", disj, Relation::Equal, 0.0, 0.0, "label-word enumeration"));
    let h_xi_a = xi_a.entropy();
    cert.push(Step::new("3b", "h(Xi_A) <= h(Xi)", h_xi_a, Relation::LessEq, h_xi, 1e-12, "graph Perron roots"));
    cert.diagnostic("h_xi", h_xi);
    cert.diagnostic("h_xi_a", h_xi_a);
    if xi_a.is_empty() {
        return fail(cert, "the avoiding subsystem is empty".into(), Some(katok));
    }

    let abramov_form = h_xi_a / (r + eps);
    // max Birkhoff average over Ξ_A, or over Ξ ⊃ Ξ_A when Ξ_A is too large
    let b_max = match birkhoff_range_labeled(xi_a, s.roof()) {
        Ok(r) => r.max,
        Err(Error::Budget(_)) => {
            cert.note("mean-cycle budget exceeded on Xi_A; its Birkhoff maximum is bounded by that of Xi");
            kc.birkhoff_max
        }
        Err(e) => return Err(e),
    };
    let refined = h_xi_a / b_max;
    let flow_a = avoid.bound;
    cert.push(Step::new("4a", "h(Xi_A)/(R+eps) <= h(Xi_A)/max_Xi_A tau", abramov_form, Relation::LessEq, refined, 1e-12, "Karp on Xi_A"));
    cert.push(Step::new("4b", "h(Xi_A)/max_Xi_A tau <= h_top(F|Xi_A)", refined, Relation::LessEq, flow_a, 1e-10, "pressure root over Xi_A"));
    cert.push(Step::new("5", "bound <= h_top(F)", flow_a, Relation::LessEq, h_top, 1e-10, "pressure roots"));
    let budget = h_top * (1.0 - r * (kc.h_nu - eps) / (kc.h_nu * (r + eps)));
    cert.diagnostic("bound", flow_a);
    cert.diagnostic("abramov_form_bound", abramov_form);
    cert.diagnostic("gap", h_top - flow_a);
    cert.diagnostic("eps_budget", budget);
    Ok(TheoremB { certificate: cert, h_top_flow: h_top, h_star_target: h_star, bound: flow_a, katok: Some(katok) })
}

fn relabel_to_base(xi: &LabeledSft, tr: &TransitionRoof, s: &SuspensionSpace) -> Result<LabeledSft> {
    let labels = xi.labels().iter().map(|&l| tr.blocks[l as usize][0]).collect();
    LabeledSft::new(xi.graph().clone(), labels, s.base().alphabet())
}
