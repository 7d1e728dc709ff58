//! `symflow` — batch front end. Every run resolves its parameters (flag, then
//! `--config`, then default), computes, and writes one JSON report. Exit
//! codes: 0 pass, 1 certified failure (report still written), 2 input error.

mod config;
mod inputs;
mod selftest;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use symflow::exceptional::{exceptional_lower_bound, theorem_b_certificate};
use symflow::hyperbolic::suite::{run_suite, SuiteConfig};
use symflow::hyperbolic::{flow_trace_csv as geodesic_trace_csv, UnitTangent};
use symflow::katok::{approximate_sft, KatokConfig};
use symflow::schottky::{
    coded_system, critical_exponent_with, poincare_partial, SchottkyGroup, DEFAULT_ORBIT_BUDGET,
};
use symflow::shift::{forbid_words, Sft, Word};
use symflow::suspension::{flow_trace_csv, Carrier, FlowPoint, SuspensionSpace};
use symflow::Exec;

use config::Resolver;

pub const REPORT_SCHEMA: &str = "symflow-report/1";

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub msg: String,
}

impl CliError {
    pub fn input(msg: String) -> Self {
        Self { code: 2, msg }
    }
}

impl From<symflow::Error> for CliError {
    fn from(e: symflow::Error) -> Self {
        Self::input(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "symflow", version, about = "Entropy certificates for suspension flows over subshifts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct Common {
    /// Flat TOML file of parameters; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Report path (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run the subcommand's invariant suite instead.
    #[arg(long)]
    selftest: bool,
    /// Disable data parallelism.
    #[arg(long)]
    sequential: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Topological entropy of an SFT.
    Entropy(EntropyArgs),
    /// Forbid a set of words and compare entropies.
    Forbid(ForbidArgs),
    /// Approximate a Markov measure by a concatenation SFT.
    ApproxSft(ApproxArgs),
    /// Flow entropy of a suspension.
    Suspension(SuspensionArgs),
    /// Lower bound for the entropy of the set avoiding a target.
    Exceptional(ExceptionalArgs),
    /// Full certificate chain for the exceptional set.
    TheoremB(TheoremBArgs),
    /// Sampled geometric invariants of the hyperbolic plane.
    HyperbolicVerify(HyperbolicArgs),
    /// Critical exponent of a Schottky group against its coded flow.
    Schottky(SchottkyArgs),
}

#[derive(Args)]
struct EntropyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    sft: Option<String>,
}

#[derive(Args)]
struct ForbidArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    sft: Option<String>,
    #[arg(long)]
    words: Option<String>,
}

#[derive(Args)]
struct ApproxArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    measure: Option<String>,
    #[arg(long)]
    roof: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    word_budget: Option<u64>,
}

#[derive(Args)]
struct SuspensionArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    sft: Option<String>,
    #[arg(long)]
    roof: Option<String>,
    /// Length of an orbit sampled from the equilibrium measure.
    #[arg(long)]
    samples: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV path for a flow trace.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    trace_word: Option<String>,
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    width: Option<u64>,
}

#[derive(Args)]
struct ExceptionalArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    sft: Option<String>,
    #[arg(long)]
    roof: Option<String>,
    #[arg(long)]
    avoid: Option<String>,
}

#[derive(Args)]
struct TheoremBArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    base: Option<String>,
    #[arg(long)]
    roof: Option<String>,
    #[arg(long)]
    avoid: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    word_budget: Option<u64>,
    /// Print the inequality chain to stderr.
    #[arg(long)]
    render: bool,
}

#[derive(Args)]
struct HyperbolicArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    calibration_samples: Option<u64>,
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    vector: Option<String>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    steps: Option<u64>,
}

#[derive(Args)]
struct SchottkyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    group: Option<String>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    orbit_budget: Option<u64>,
}

/// What a run hands to the report writer.
pub struct Outcome {
    pub result: Value,
    pub pass: bool,
}

fn exec(c: &Common) -> Exec {
    if c.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    type Run = Box<dyn FnOnce(&mut Resolver, &Common) -> Result<Outcome, CliError>>;
    let (name, common, run): (&str, Common, Run) = match cli.command {
        Command::Entropy(a) => ("entropy", a.common.clone(), Box::new(move |r, _| entropy(r, a))),
        Command::Forbid(a) => ("forbid", a.common.clone(), Box::new(move |r, _| forbid(r, a))),
        Command::ApproxSft(a) => ("approx-sft", a.common.clone(), Box::new(move |r, c| approx(r, c, a))),
        Command::Suspension(a) => ("suspension", a.common.clone(), Box::new(move |r, _| suspension(r, a))),
        Command::Exceptional(a) => ("exceptional", a.common.clone(), Box::new(move |r, _| exceptional(r, a))),
        Command::TheoremB(a) => ("theorem-b", a.common.clone(), Box::new(move |r, c| theorem_b(r, c, a))),
        Command::HyperbolicVerify(a) => ("hyperbolic-verify", a.common.clone(), Box::new(move |r, _| hyperbolic(r, a))),
        Command::Schottky(a) => ("schottky", a.common.clone(), Box::new(move |r, c| schottky(r, c, a))),
    };
    match execute(name, &common, run) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("symflow {name}: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

fn execute(
    name: &str,
    common: &Common,
    run: impl FnOnce(&mut Resolver, &Common) -> Result<Outcome, CliError>,
) -> Result<u8, CliError> {
    let (mode, config, outcome) = if common.selftest {
        let checks = selftest::run(name)?;
        let pass = checks.iter().all(|c| c.pass);
        ("selftest", BTreeMap::new(), Outcome { result: json!({ "checks": checks }), pass })
    } else {
        let mut r = Resolver::new(common.config.as_deref())?;
        let outcome = run(&mut r, common)?;
        ("run", r.finish()?, outcome)
    };
    let report = json!({
        "schema": REPORT_SCHEMA,
        "command": name,
        "mode": mode,
        "config": config,
        "result": outcome.result,
        "pass": outcome.pass,
        "status": if outcome.pass { "pass" } else { "fail" },
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    match &common.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(if outcome.pass { 0 } else { 1 })
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable result")
}

fn budget_usize(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

fn sft_facts(x: &Sft) -> Value {
    let h = x.entropy();
    json!({
        "entropy": h,
        "empty": x.is_empty(),
        "states": x.size(),
        "live_states": x.live_count(),
        "transitions": x.transition_count(),
        "components": x.components().len(),
    })
}

fn entropy(r: &mut Resolver, a: EntropyArgs) -> Result<Outcome, CliError> {
    let x = inputs::system(&r.required_string("sft", a.sft)?)?;
    Ok(Outcome { result: sft_facts(&x), pass: true })
}

fn forbid(r: &mut Resolver, a: ForbidArgs) -> Result<Outcome, CliError> {
    let x = inputs::system(&r.string("sft", a.sft, Some("full2"))?.expect("defaulted"))?;
    let u = inputs::words(&r.required_string("words", a.words)?)?;
    for w in u.words() {
        w.check(x.alphabet())?;
    }
    let y = forbid_words(&x, &u)?;
    let words: Vec<String> = u.words().iter().map(Word::to_string).collect();
    Ok(Outcome {
        result: json!({
            "forbidden": words,
            "before": sft_facts(&x),
            "after": sft_facts(&y),
            "entropy_drop": x.entropy() - y.entropy(),
        }),
        pass: true,
    })
}

fn katok_config(r: &mut Resolver, common: &Common, eps: Option<f64>, n_max: Option<u64>, budget: Option<u64>) -> Result<KatokConfig, CliError> {
    let mut cfg = KatokConfig::new(0.1);
    cfg.eps = r.positive_float("eps", eps, cfg.eps)?;
    cfg.n_max = budget_usize(r.budget("n-max", n_max, cfg.n_max as u64)?);
    cfg.word_budget = u128::from(r.budget("word-budget", budget, u64::try_from(cfg.word_budget).unwrap_or(u64::MAX))?);
    cfg.exec = exec(common);
    Ok(cfg)
}

fn approx(r: &mut Resolver, common: &Common, a: ApproxArgs) -> Result<Outcome, CliError> {
    let nu = inputs::measure(&r.required_string("measure", a.measure)?)?;
    let tau = inputs::roof(nu.base(), &r.string("roof", a.roof, Some("const:1"))?.expect("defaulted"))?;
    let cfg = katok_config(r, common, a.eps, a.n_max, a.word_budget)?;
    let res = approximate_sft(&nu, &tau, &cfg)?;
    let pass = res.certificate.pass;
    Ok(Outcome {
        result: json!({
            "certificate": to_value(&res.certificate),
            "attempts": to_value(&res.attempts),
        }),
        pass,
    })
}

/// Tolerance on `h(ν_max) / ∫τ dν_max = s*`.
const ABRAMOV_TOL: f64 = 1e-6;

fn suspension(r: &mut Resolver, a: SuspensionArgs) -> Result<Outcome, CliError> {
    let base = inputs::system(&r.required_string("sft", a.sft)?)?;
    let roof = inputs::roof(&base, &r.string("roof", a.roof, Some("const:1"))?.expect("defaulted"))?;
    let samples = r.integer("samples", a.samples, 0)?;
    let seed = if samples > 0 { Some(r.seed(a.seed)?) } else { None };
    let trace = r.string("trace", a.trace.map(|p| p.display().to_string()), None)?;
    let trace_opts = match &trace {
        Some(_) => Some((
            Word::parse(&r.string("trace-word", a.trace_word, Some("0"))?.expect("defaulted"))?,
            r.positive_float("dt", a.dt, 0.1)?,
            budget_usize(r.budget("steps", a.steps, 100)?),
            budget_usize(r.budget("width", a.width, 8)?),
        )),
        None => None,
    };

    let s = SuspensionSpace::new(base.clone(), roof.clone())?;
    let report = s.flow_entropy_report()?;
    let mut pass = true;
    let mut result = json!({
        "base": sft_facts(&base),
        "roof_min": roof.min_value(),
        "roof_max": roof.bound(),
        "flow": to_value(&report.summary()),
        "empty": base.is_empty(),
    });
    if let Some(eq) = &report.equilibrium {
        let err = (eq.abramov - report.entropy).abs();
        pass &= err <= ABRAMOV_TOL;
        result["abramov_error"] = json!(err);
        if let (Some(seed), true) = (seed, samples > 0) {
            let orbit = eq.measure.sample(budget_usize(samples), seed)?;
            let mean = eq.recoding.roof.cyclic_birkhoff_sum(orbit.symbols()) / orbit.len() as f64;
            result["sample"] = json!({
                "length": orbit.len(),
                "roof_mean": mean,
                "roof_integral": eq.tau_int,
            });
        }
    } else if samples > 0 {
        return Err(CliError::input("sampling needs an irreducible, nonempty base".into()));
    }
    if let (Some(path), Some((word, dt, steps, width))) = (&trace, trace_opts) {
        word.check(base.alphabet())?;
        let p = word.symbols();
        if p.is_empty() || !(0..p.len()).all(|i| base.transition(p[i], p[(i + 1) % p.len()])) {
            return Err(CliError::input(format!("trace word {word} is not an admissible period")));
        }
        let point = FlowPoint::new(Carrier::Periodic(p.to_vec()), 0, 0.0, &roof)?;
        let csv = flow_trace_csv(&point, &roof, dt, steps, width)?;
        std::fs::write(path, csv).map_err(|e| CliError::input(format!("cannot write {path}: {e}")))?;
    }
    Ok(Outcome { result, pass })
}

fn exceptional(r: &mut Resolver, a: ExceptionalArgs) -> Result<Outcome, CliError> {
    let base = inputs::system(&r.required_string("sft", a.sft)?)?;
    let roof = inputs::roof(&base, &r.string("roof", a.roof, Some("const:1"))?.expect("defaulted"))?;
    let target = inputs::avoid_target(&base, &r.required_string("avoid", a.avoid)?)?;
    let s = SuspensionSpace::new(base, roof)?;
    let b = exceptional_lower_bound(&s, &target)?;
    let pass = b.certificate.pass && b.certificate.replay();
    Ok(Outcome {
        result: json!({
            "summary": to_value(&b.summary()),
            "h_top_flow": s.flow_entropy()?,
            "certificate": to_value(&b.certificate),
        }),
        pass,
    })
}

fn theorem_b(r: &mut Resolver, common: &Common, a: TheoremBArgs) -> Result<Outcome, CliError> {
    let base = inputs::system(&r.required_string("base", a.base)?)?;
    let roof = inputs::roof(&base, &r.string("roof", a.roof, Some("const:1"))?.expect("defaulted"))?;
    let target = inputs::avoid_target(&base, &r.required_string("avoid", a.avoid)?)?;
    let cfg = katok_config(r, common, a.eps, a.n_max, a.word_budget)?;
    let s = SuspensionSpace::new(base, roof)?;
    let t = theorem_b_certificate(&s, &target, &cfg)?;
    if a.render {
        eprint!("{}", t.certificate.render());
    }
    let pass = t.certificate.pass && t.certificate.replay();
    let katok = t.katok.as_ref().map(|k| json!({ "certificate": to_value(&k.certificate), "attempts": to_value(&k.attempts) }));
    Ok(Outcome {
        result: json!({
            "h_top_flow": t.h_top_flow,
            "h_star_target": t.h_star_target,
            "bound": t.bound,
            "gap": t.h_top_flow - t.bound,
            "katok": katok,
            "certificate": to_value(&t.certificate),
        }),
        pass,
    })
}

fn hyperbolic(r: &mut Resolver, a: HyperbolicArgs) -> Result<Outcome, CliError> {
    let seed = r.seed(a.seed)?;
    let cfg = SuiteConfig {
        seed,
        trials: budget_usize(r.budget("trials", a.trials, 1000)?),
        eps: r.positive_float("eps", a.eps, 0.1)?,
        calibration_samples: budget_usize(r.budget("calibration-samples", a.calibration_samples, 200)?),
    };
    let trace = r.string("trace", a.trace.map(|p| p.display().to_string()), None)?;
    if let Some(path) = &trace {
        let v = match r.string("vector", a.vector, None)? {
            Some(spec) => inputs::tangent(&spec)?,
            None => UnitTangent::reference(),
        };
        let t_max = r.positive_float("t-max", a.t_max, 5.0)?;
        let steps = r.budget("steps", a.steps, 50)?;
        let times: Vec<f64> = (0..=steps).map(|i| t_max * i as f64 / steps as f64).collect();
        std::fs::write(path, geodesic_trace_csv(&v, &times))
            .map_err(|e| CliError::input(format!("cannot write {path}: {e}")))?;
    }
    let rep = run_suite(cfg)?;
    Ok(Outcome { pass: rep.pass, result: to_value(&rep) })
}

fn schottky(r: &mut Resolver, common: &Common, a: SchottkyArgs) -> Result<Outcome, CliError> {
    let g = inputs::group(&r.string("group", a.group, Some("symmetric:2,2.5"))?.expect("defaulted"))?;
    let r_max = r.positive_float("r-max", a.r_max, 14.0)?;
    let tol = r.positive_float("tol", a.tol, 0.05)?;
    let budget = budget_usize(r.budget("orbit-budget", a.orbit_budget, DEFAULT_ORBIT_BUDGET as u64)?);
    let ex = exec(common);

    let est = critical_exponent_with(&g, r_max, budget, ex)?;
    let coded = coded_system(&g)?.flow_entropy()?;
    let gap = (est.delta - coded).abs();
    let subgroups = if g.rank() > 1 {
        (0..g.rank())
            .map(|j| -> Result<Value, CliError> {
                let sub: SchottkyGroup = g.subgroup(&[j])?;
                let e = critical_exponent_with(&sub, r_max, budget, ex)?;
                Ok(json!({ "generators": [j], "delta": e.delta, "drop": est.delta - e.delta }))
            })
            .collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let below = poincare_partial(&g, (est.delta - 0.1).max(0.0), r_max)?;
    let above = poincare_partial(&g, est.delta + 0.1, r_max)?;
    Ok(Outcome {
        result: json!({
            "rank": g.rank(),
            "gromov_constant": g.gromov_constant(),
            "min_displacement": g.min_displacement(),
            "estimate": to_value(&est),
            "coded_flow_entropy": coded,
            "gap": gap,
            "tolerance": tol,
            "subgroups": subgroups,
            "poincare": { "below": to_value(&below), "above": to_value(&above) },
            "divergence_note": "growth flags are numerical heuristics, not a divergence proof",
        }),
        pass: gap < tol,
    })
}
