//! Parameter resolution: command-line flag, then `--config` file, then the
//! built-in default. Config files are flat TOML (`key = value`), with keys
//! spelled like the long flags.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde_json::Value;

use crate::CliError;

pub struct Resolver {
    table: toml::Table,
    used: BTreeSet<String>,
    resolved: BTreeMap<String, Value>,
}

impl Resolver {
    pub fn new(config: Option<&Path>) -> Result<Self, CliError> {
        let table = match config {
            None => toml::Table::new(),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::input(format!("cannot read config {}: {e}", p.display())))?;
                text.parse::<toml::Table>()
                    .map_err(|e| CliError::input(format!("config {}: {e}", p.display())))?
            }
        };
        Ok(Self { table, used: BTreeSet::new(), resolved: BTreeMap::new() })
    }

    fn lookup(&mut self, key: &str) -> Option<toml::Value> {
        self.used.insert(key.to_string());
        self.table.get(key).cloned()
    }

    fn record(&mut self, key: &str, v: Value) {
        self.resolved.insert(key.to_string(), v);
    }

    pub fn string(&mut self, key: &str, flag: Option<String>, default: Option<&str>) -> Result<Option<String>, CliError> {
        let from_file = match self.lookup(key) {
            None => None,
            Some(toml::Value::String(s)) => Some(s),
            Some(other) => return Err(type_error(key, "a string", &other)),
        };
        let v = flag.or(from_file).or(default.map(str::to_string));
        if let Some(s) = &v {
            self.record(key, Value::String(s.clone()));
        }
        Ok(v)
    }

    pub fn required_string(&mut self, key: &str, flag: Option<String>) -> Result<String, CliError> {
        self.string(key, flag, None)?.ok_or_else(|| CliError::input(format!("missing required parameter '{key}'")))
    }

    pub fn float(&mut self, key: &str, flag: Option<f64>, default: f64) -> Result<f64, CliError> {
        let from_file = match self.lookup(key) {
            None => None,
            Some(toml::Value::Float(x)) => Some(x),
            Some(toml::Value::Integer(i)) => Some(i as f64),
            Some(other) => return Err(type_error(key, "a number", &other)),
        };
        let v = flag.or(from_file).unwrap_or(default);
        if !v.is_finite() {
            return Err(CliError::input(format!("parameter '{key}' must be finite")));
        }
        self.record(key, serde_json::json!(v));
        Ok(v)
    }

    pub fn positive_float(&mut self, key: &str, flag: Option<f64>, default: f64) -> Result<f64, CliError> {
        let v = self.float(key, flag, default)?;
        if v <= 0.0 {
            return Err(CliError::input(format!("parameter '{key}' must be positive, got {v}")));
        }
        Ok(v)
    }

    fn integer_opt(&mut self, key: &str, flag: Option<u64>) -> Result<Option<u64>, CliError> {
        let from_file = match self.lookup(key) {
            None => None,
            Some(toml::Value::Integer(i)) if i >= 0 => Some(i as u64),
            Some(other) => return Err(type_error(key, "a nonnegative integer", &other)),
        };
        Ok(flag.or(from_file))
    }

    pub fn integer(&mut self, key: &str, flag: Option<u64>, default: u64) -> Result<u64, CliError> {
        let v = self.integer_opt(key, flag)?.unwrap_or(default);
        self.record(key, serde_json::json!(v));
        Ok(v)
    }

    /// Budgets and counts: must be at least 1.
    pub fn budget(&mut self, key: &str, flag: Option<u64>, default: u64) -> Result<u64, CliError> {
        let v = self.integer(key, flag, default)?;
        if v == 0 {
            return Err(CliError::input(format!("parameter '{key}' must be positive")));
        }
        Ok(v)
    }

    pub fn seed(&mut self, flag: Option<u64>) -> Result<u64, CliError> {
        let v = self
            .integer_opt("seed", flag)?
            .ok_or_else(|| CliError::input("this run samples randomly: a --seed is required".to_string()))?;
        self.record("seed", serde_json::json!(v));
        Ok(v)
    }

    /// Resolved parameters, and an error for config keys no parameter read.
    pub fn finish(self) -> Result<BTreeMap<String, Value>, CliError> {
        let unknown: Vec<&String> = self.table.keys().filter(|k| !self.used.contains(*k)).collect();
        if !unknown.is_empty() {
            return Err(CliError::input(format!(
                "unknown config keys for this subcommand: {}",
                unknown.iter().map(|s| s.as_str()).collect::<Vec<_>>().join(", ")
            )));
        }
        Ok(self.resolved)
    }
}

fn type_error(key: &str, want: &str, got: &toml::Value) -> CliError {
    CliError::input(format!("config key '{key}' must be {want}, found {got}"))
}
