//! `--selftest`: a small invariant suite per subcommand, with closed-form or
//! brute-force oracles independent of the code path under test.

use serde::Serialize;

use symflow::exceptional::{exceptional_lower_bound, theorem_b_certificate, AvoidTarget};
use symflow::hyperbolic::suite::{run_suite, SuiteConfig};
use symflow::katok::{approximate_sft, KatokConfig};
use symflow::measures::{LocallyConstantFn, MarkovMeasure};
use symflow::schottky::{coded_system, orbit_count, orbit_count_brute_force, SchottkyGroup, DEFAULT_ORBIT_BUDGET};
use symflow::shift::{forbid_words, CylinderUnion, Sft, Word};
use symflow::suspension::{abramov_entropy, SuspensionSpace};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn close(name: &'static str, got: f64, want: f64, tol: f64) -> Check {
    Check { name, pass: (got - want).abs() <= tol, detail: format!("{got:.12} vs {want:.12} (tol {tol:e})") }
}

fn flag(name: &'static str, pass: bool, detail: String) -> Check {
    Check { name, pass, detail }
}

fn golden_ratio() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

pub fn run(command: &str) -> Result<Vec<Check>, CliError> {
    Ok(match command {
        "entropy" => entropy()?,
        "forbid" => forbid()?,
        "approx-sft" => approx()?,
        "suspension" => suspension()?,
        "exceptional" => exceptional()?,
        "theorem-b" => theorem_b()?,
        "hyperbolic-verify" => hyperbolic()?,
        "schottky" => schottky()?,
        other => return Err(CliError::input(format!("no selftest for '{other}'"))),
    })
}

fn entropy() -> Result<Vec<Check>, CliError> {
    let g = Sft::golden_mean();
    // word counts of the golden mean shift are Fibonacci numbers
    let (mut a, mut b) = (1u128, 2u128);
    let mut fib_ok = true;
    for n in 1..=30 {
        fib_ok &= g.count_words(n)? == b;
        (a, b) = (b, a + b);
    }
    Ok(vec![
        close("golden mean entropy is log φ", g.entropy(), golden_ratio().ln(), 1e-12),
        close("full 3-shift entropy is log 3", Sft::full(3)?.entropy(), 3f64.ln(), 1e-12),
        flag("golden word counts are Fibonacci", fib_ok, "n = 1..30".into()),
        flag("empty SFT has entropy -inf", Sft::empty(2)?.entropy() == f64::NEG_INFINITY, String::new()),
    ])
}

fn forbid() -> Result<Vec<Check>, CliError> {
    let full = Sft::full(2)?;
    let no11 = forbid_words(&full, &CylinderUnion::new([Word::parse("11")?]))?;
    let nothing = forbid_words(&full, &CylinderUnion::empty())?;
    let all = forbid_words(&full, &CylinderUnion::new([Word::parse("0")?, Word::parse("1")?]))?;
    // forbidding a longer word can only shrink the system
    let no111 = forbid_words(&full, &CylinderUnion::new([Word::parse("111")?]))?;
    Ok(vec![
        close("forbidding 11 gives the golden mean", no11.entropy(), golden_ratio().ln(), 1e-10),
        close("forbidding nothing keeps log 2", nothing.entropy(), 2f64.ln(), 1e-12),
        flag("forbidding every symbol empties", all.is_empty(), String::new()),
        flag(
            "entropy is monotone in the forbidden set",
            no11.entropy() < no111.entropy() && no111.entropy() < 2f64.ln(),
            format!("{} < {} < {}", no11.entropy(), no111.entropy(), 2f64.ln()),
        ),
    ])
}

fn approx() -> Result<Vec<Check>, CliError> {
    let nu = MarkovMeasure::bernoulli(&[0.5, 0.5])?;
    let tau = LocallyConstantFn::by_symbol(nu.base(), &[1.0, 2.0])?;
    let res = approximate_sft(&nu, &tau, &KatokConfig::new(0.2))?;
    let c = res.certificate;
    Ok(vec![
        flag("Bernoulli(1/2) approximation certifies", c.pass, format!("n = {}, M = {}", c.n, c.m)),
        flag("pass flag replays", c.holds() == c.pass, String::new()),
        close("measure entropy is log 2", c.h_nu, 2f64.ln(), 1e-9),
        close("roof integral is 3/2", c.tau_int_nu, 1.5, 1e-9),
    ])
}

fn suspension() -> Result<Vec<Check>, CliError> {
    let g = Sft::golden_mean();
    let c = 2.5;
    let s = SuspensionSpace::new(g.clone(), LocallyConstantFn::constant(&g, c)?)?;
    let parry = MarkovMeasure::parry(&g)?;
    let ab = abramov_entropy(&parry, s.roof())?;
    // full 2-shift with roof (1, 2): root of e^{-s} + e^{-2s} = 1, i.e. e^{-s} = 1/φ
    let full = Sft::full(2)?;
    let two = SuspensionSpace::new(full.clone(), LocallyConstantFn::by_symbol(&full, &[1.0, 2.0])?)?;
    let rep = two.flow_entropy_report()?;
    let eq_ok = rep.equilibrium.as_ref().is_some_and(|e| (e.abramov - rep.entropy).abs() < 1e-9);
    Ok(vec![
        close("constant roof divides entropy", s.flow_entropy()?, golden_ratio().ln() / c, 1e-10),
        close("Abramov of Parry matches constant-roof flow", ab, golden_ratio().ln() / c, 1e-10),
        close("two-level roof pressure root is log φ", rep.entropy, golden_ratio().ln(), 1e-9),
        flag("equilibrium attains the flow entropy", eq_ok, String::new()),
    ])
}

fn exceptional() -> Result<Vec<Check>, CliError> {
    let full = Sft::full(2)?;
    let s = SuspensionSpace::new(full.clone(), LocallyConstantFn::constant(&full, 1.0)?)?;
    let b = exceptional_lower_bound(&s, &AvoidTarget::Cylinders(CylinderUnion::new([Word::parse("1")?])))?;
    let b11 = exceptional_lower_bound(&s, &AvoidTarget::Cylinders(CylinderUnion::new([Word::parse("11")?])))?;
    Ok(vec![
        close("avoiding 11 leaves the golden mean", b11.bound, golden_ratio().ln(), 1e-9),
        flag("avoiding 11 certifies disjointness", b11.certificate.pass && b11.certificate.replay(), String::new()),
        close("avoiding the symbol 1 leaves a fixed point", b.bound, 0.0, 1e-9),
    ])
}

fn theorem_b() -> Result<Vec<Check>, CliError> {
    let full = Sft::full(2)?;
    let s = SuspensionSpace::new(full.clone(), LocallyConstantFn::constant(&full, 1.0)?)?;
    let t = theorem_b_certificate(&s, &AvoidTarget::Cylinders(CylinderUnion::new([Word::repeat(0, 4)])), &KatokConfig::new(0.1))?;
    // avoiding the whole space breaks the hypothesis
    let all = CylinderUnion::new([Word::parse("0")?, Word::parse("1")?]);
    let broken = theorem_b_certificate(&s, &AvoidTarget::Cylinders(all), &KatokConfig::new(0.1))?;
    Ok(vec![
        flag("avoiding 0000 certifies", t.certificate.pass, format!("bound {:.6}", t.bound)),
        flag("certificate replays", t.certificate.replay(), String::new()),
        flag(
            "bound lies below h_top",
            t.bound <= t.h_top_flow + 1e-12 && t.bound > 0.0,
            format!("{} <= {}", t.bound, t.h_top_flow),
        ),
        flag("full target violates the hypothesis", !broken.certificate.pass, String::new()),
    ])
}

fn hyperbolic() -> Result<Vec<Check>, CliError> {
    let cfg = SuiteConfig { seed: 1, trials: 100, eps: 0.1, calibration_samples: 40 };
    let a = run_suite(cfg)?;
    let b = run_suite(cfg)?;
    let same = serde_json::to_string(&a).ok() == serde_json::to_string(&b).ok();
    Ok(vec![
        flag("Busemann cocycle", a.cocycle_max_error < 1e-9, format!("max error {:e}", a.cocycle_max_error)),
        flag("Hopf coordinates", a.hopf_max_error < 1e-9, format!("max error {:e}", a.hopf_max_error)),
        flag("unstable distance scaling", a.scaling_max_error < 1e-8, format!("max error {:e}", a.scaling_max_error)),
        flag("shadowing", a.shadowing_violations == 0, format!("worst ratio {:.4}", a.shadowing_worst_ratio)),
        flag("local product", a.bracket_failures == 0, format!("beta {:.4e}", a.bracket.beta)),
        flag("seeded suite repeats", same, String::new()),
    ])
}

fn schottky() -> Result<Vec<Check>, CliError> {
    let g = SchottkyGroup::symmetric(2, 2.5)?;
    let r = 5.5;
    let pruned = orbit_count(&g, r)?;
    let brute = orbit_count_brute_force(&g, r, DEFAULT_ORBIT_BUDGET)?;
    let coded = coded_system(&g)?;
    let cyclic = SchottkyGroup::symmetric(1, 2.5)?;
    // cyclic group: 1 + 2⌊r/ℓ⌋ elements within r
    let cyc = orbit_count(&cyclic, 6.0)?;
    Ok(vec![
        flag("pruned orbit count matches brute force", pruned == brute, format!("{pruned} vs {brute} at r = {r}")),
        close("reduced-word base has entropy log 3", coded.base().entropy(), 3f64.ln(), 1e-12),
        flag("cyclic orbit count", cyc == 5, format!("{cyc} elements within 6")),
        flag("roof is positive", coded.roof().min_value() > 0.0, format!("min {:.6}", coded.roof().min_value())),
    ])
}
