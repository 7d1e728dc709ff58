//! Parsers for the textual parameter forms shared by the subcommands.

use std::path::Path;

use symflow::exceptional::{AvoidTarget, DEFAULT_THICKENING};
use symflow::hyperbolic::{HPoint, UnitTangent};
use symflow::measures::{LocallyConstantFn, MarkovMeasure};
use symflow::schottky::{parse_group, SchottkyGroup};
use symflow::shift::{parse_sft, CylinderUnion, Sft, Word};

use crate::CliError;

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::input(format!("cannot read {path}: {e}")))
}

/// `fullN`, `golden`, `emptyN`, or a path to an SFT file.
pub fn system(spec: &str) -> Result<Sft, CliError> {
    if spec == "golden" {
        return Ok(Sft::golden_mean());
    }
    for (prefix, make) in [("full", Sft::full as fn(usize) -> _), ("empty", Sft::empty)] {
        if let Some(n) = spec.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok()) {
            return make(n).map_err(CliError::from);
        }
    }
    Ok(parse_sft(&read(spec)?)?)
}

/// `bernoulli:p0,p1,…`, `parry:<system>`, or a path to a Markov matrix file.
pub fn measure(spec: &str) -> Result<MarkovMeasure, CliError> {
    if let Some(body) = spec.strip_prefix("bernoulli:") {
        let p = body
            .split(',')
            .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::input(format!("'{s}' is not a probability"))))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(MarkovMeasure::bernoulli(&p)?);
    }
    if let Some(body) = spec.strip_prefix("parry:") {
        return Ok(MarkovMeasure::parry(&system(body)?)?);
    }
    Ok(MarkovMeasure::parse(&read(spec)?, None)?)
}

pub fn roof(x: &Sft, spec: &str) -> Result<LocallyConstantFn, CliError> {
    Ok(LocallyConstantFn::parse(x, spec)?)
}

/// Comma-separated words, or `@path` for a newline-separated word file.
pub fn words(spec: &str) -> Result<CylinderUnion, CliError> {
    if let Some(path) = spec.strip_prefix('@') {
        return Ok(CylinderUnion::parse(&read(path)?)?);
    }
    let ws = spec.split(',').map(|w| Word::parse(w.trim())).collect::<Result<Vec<_>, _>>()?;
    Ok(CylinderUnion::new(ws))
}

/// `cyl:<words>` or `sft:<system>[@thickening]`.
pub fn avoid_target(base: &Sft, spec: &str) -> Result<AvoidTarget, CliError> {
    if let Some(body) = spec.strip_prefix("cyl:") {
        let u = words(body)?;
        for w in u.words() {
            w.check(base.alphabet())?;
        }
        return Ok(AvoidTarget::Cylinders(u));
    }
    if let Some(body) = spec.strip_prefix("sft:") {
        let (sys, depth) = match body.rsplit_once('@') {
            Some((s, d)) => (
                s,
                d.parse::<usize>().map_err(|_| CliError::input(format!("'{d}' is not a thickening depth")))?,
            ),
            None => (body, DEFAULT_THICKENING),
        };
        return Ok(AvoidTarget::sub_sft(base, system(sys)?, depth)?);
    }
    Err(CliError::input(format!("avoid target '{spec}' must start with 'cyl:' or 'sft:'")))
}

/// `symmetric:k,ℓ` or a path to a group file.
pub fn group(spec: &str) -> Result<SchottkyGroup, CliError> {
    if let Some(body) = spec.strip_prefix("symmetric:") {
        let parts: Vec<&str> = body.split(',').map(str::trim).collect();
        let (k, ell) = match parts.as_slice() {
            [k, l] => (
                k.parse::<usize>().map_err(|_| CliError::input(format!("'{k}' is not a generator count")))?,
                l.parse::<f64>().map_err(|_| CliError::input(format!("'{l}' is not a translation length")))?,
            ),
            _ => return Err(CliError::input(format!("'{spec}' should be symmetric:<k>,<ell>"))),
        };
        return Ok(SchottkyGroup::symmetric(k, ell)?);
    }
    Ok(parse_group(&read(spec)?)?)
}

/// `x,y,θ`.
pub fn tangent(spec: &str) -> Result<UnitTangent, CliError> {
    let v = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::input(format!("'{s}' is not a number"))))
        .collect::<Result<Vec<_>, _>>()?;
    match v.as_slice() {
        [x, y, th] => Ok(UnitTangent::new(HPoint::new(*x, *y)?, *th)?),
        _ => Err(CliError::input(format!("vector '{spec}' should be x,y,theta"))),
    }
}
