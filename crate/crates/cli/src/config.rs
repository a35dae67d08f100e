//! Run configuration: flat `key = value` files, environment, and flags,
//! merged in that order of increasing precedence.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use lbesync::csv::format_f64;
use lbesync::sweep::{case_study_with, CaseStudy, CASE_NAMES};
use lbesync::{CoupledPair, DuffingParams, IntegrationConfig, PairIcs, StateVector, SweepPlan, SystemSpec, Variant};
use thiserror::Error;

pub const WORKERS_ENV: &str = "LBESYNC_WORKERS";

/// Every key accepted in a config file, in provenance order.
pub const KEYS: &[&str] = &[
    "case", "master", "slave", "source", "target", "master_ic", "slave_ic", "aux_ic", "delta", "gamma", "omega", "k",
    "h", "steps", "stride", "component", "threshold", "epsilon", "transient", "variant", "workers", "out",
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config file {path}, line {line}: {message}")]
    Syntax { path: PathBuf, line: usize, message: String },
    #[error("invalid value for `{key}`: `{value}` ({reason})")]
    Value { key: String, value: String, reason: String },
    #[error("{0}")]
    Invalid(String),
}

impl From<lbesync::Error> for ConfigError {
    fn from(e: lbesync::Error) -> Self {
        match e {
            lbesync::Error::Config(msg) => ConfigError::Invalid(msg),
            other => ConfigError::Invalid(other.to_string()),
        }
    }
}

/// Raw settings before typing. Later inserts win.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings(BTreeMap<String, String>);

impl Settings {
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.0.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn merge(&mut self, other: Settings) {
        self.0.extend(other.0);
    }

    pub fn parse_file(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_path_buf(), source })?;
        Self::parse_str(&text, path)
    }

    /// Blank lines and `#` comments are skipped; keys may use `-` or `_`.
    pub fn parse_str(text: &str, origin: &Path) -> Result<Self, ConfigError> {
        let mut out = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let syntax = |message: String| ConfigError::Syntax { path: origin.to_path_buf(), line: i + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| syntax("expected `key = value`".into()))?;
            let key = key.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(syntax(format!("unknown key `{key}`")));
            }
            out.set(&key, value.trim());
        }
        Ok(out)
    }
}

/// Fully resolved configuration shared by every subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub plan: SweepPlan,
    pub duffing: DuffingParams,
    pub variant: Variant,
    pub out: PathBuf,
}

fn value_err(key: &str, value: &str, reason: impl ToString) -> ConfigError {
    ConfigError::Value { key: key.to_string(), value: value.to_string(), reason: reason.to_string() }
}

fn parse_one<T: std::str::FromStr>(s: &Settings, key: &str) -> Result<Option<T>, ConfigError>
where
    T::Err: std::fmt::Display,
{
    s.get(key).map(|v| v.parse::<T>().map_err(|e| value_err(key, v, e))).transpose()
}

fn parse_list(s: &Settings, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
    let Some(v) = s.get(key) else { return Ok(None) };
    v.split(',')
        .map(|item| item.trim().parse::<f64>().map_err(|e| value_err(key, v, e)))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn system(s: &Settings, key: &str, duffing: DuffingParams) -> Result<Option<SystemSpec>, ConfigError> {
    Ok(parse_one::<SystemSpec>(s, key)?.map(|spec| match spec {
        SystemSpec::Duffing(_) => SystemSpec::Duffing(duffing),
        other => other,
    }))
}

fn list_string(v: &[f64]) -> String {
    v.iter().map(|x| format_f64(*x)).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    /// Types and validates `settings`. `default_out` names the run directory
    /// when `out` is unset.
    pub fn resolve(s: &Settings, default_out: impl FnOnce(&str) -> PathBuf) -> Result<Self, ConfigError> {
        let mut duffing = DuffingParams::default();
        if let Some(d) = parse_one(s, "delta")? {
            duffing.delta = d;
        }
        if let Some(g) = parse_one(s, "gamma")? {
            duffing.gamma = g;
        }
        if let Some(w) = parse_one(s, "omega")? {
            duffing.omega = w;
        }
        if ![duffing.delta, duffing.gamma, duffing.omega].iter().all(|v| v.is_finite()) {
            return Err(ConfigError::Invalid("Duffing parameters must be finite".into()));
        }

        let master = system(s, "master", duffing)?;
        let slave = system(s, "slave", duffing)?;
        let source = parse_one::<usize>(s, "source")?;
        let target = parse_one::<usize>(s, "target")?;
        let custom = master.is_some() || slave.is_some();
        let case_name = match s.get("case") {
            Some(c) => c.to_string(),
            None if custom => "custom".to_string(),
            None => CASE_NAMES[0].to_string(),
        };

        let mut case = if case_name == "custom" {
            let (Some(master), Some(slave), Some(source), Some(target)) = (master, slave, source, target) else {
                return Err(ConfigError::Invalid(
                    "a custom pair needs master, slave, source and target".into(),
                ));
            };
            let ic = |key: &str| -> Result<StateVector, ConfigError> {
                parse_list(s, key)?
                    .map(StateVector::at_origin)
                    .ok_or_else(|| ConfigError::Invalid(format!("a custom pair needs `{key}`")))
            };
            CaseStudy {
                name: case_name.clone(),
                description: format!("{} drives {}", master.name(), slave.name()),
                pair: CoupledPair::new(master, slave, 0.0, source, target)?,
                ics: PairIcs { master: ic("master_ic")?, slave: ic("slave_ic")?, aux: ic("aux_ic")? },
                k_values: vec![0.0],
                component: 0,
                sync_demo_k: 0.0,
            }
        } else {
            let case = case_study_with(&case_name, SystemSpec::Duffing(duffing))?;
            // Pair keys may restate a built-in case (provenance files do) but not change it.
            for (key, given, fixed) in [
                ("master", master.map(|m| m.name()), Some(case.pair.master.name())),
                ("slave", slave.map(|m| m.name()), Some(case.pair.slave.name())),
            ] {
                if given.is_some() && given != fixed {
                    return Err(ConfigError::Invalid(format!(
                        "case `{case_name}` fixes {key} = {}",
                        fixed.unwrap_or_default()
                    )));
                }
            }
            for (key, given, fixed) in
                [("source", source, case.pair.drive_source), ("target", target, case.pair.drive_target)]
            {
                if given.is_some_and(|g| g != fixed) {
                    return Err(ConfigError::Invalid(format!("case `{case_name}` fixes {key} = {fixed}")));
                }
            }
            let mut case = case;
            for (key, slot) in [
                ("master_ic", &mut case.ics.master),
                ("slave_ic", &mut case.ics.slave),
                ("aux_ic", &mut case.ics.aux),
            ] {
                if let Some(v) = parse_list(s, key)? {
                    *slot = StateVector::at_origin(v);
                }
            }
            case
        };
        if let Some(k) = parse_list(s, "k")? {
            case.k_values = k;
        }
        if let Some(c) = parse_one(s, "component")? {
            case.component = c;
        }
        let out = s.get("out").map(PathBuf::from).unwrap_or_else(|| default_out(&case_name));
        let mut plan = SweepPlan::from_case(case);

        let mut cfg = IntegrationConfig::default();
        if let Some(h) = parse_one(s, "h")? {
            cfg.step_size = h;
        }
        if let Some(n) = parse_one(s, "steps")? {
            cfg.n_steps = n;
        }
        if let Some(stride) = parse_one(s, "stride")? {
            cfg.record_stride = stride;
        }
        plan.cfg = cfg;
        if let Some(t) = parse_one(s, "threshold")? {
            plan.threshold_log10 = t;
        }
        if let Some(e) = parse_one(s, "epsilon")? {
            plan.sync.relative_tolerance = e;
        }
        if let Some(f) = parse_one(s, "transient")? {
            plan.sync.transient_fraction = f;
        }
        if let Some(w) = parse_one(s, "workers")? {
            plan.workers = w;
        }
        let variant = parse_one(s, "variant")?.unwrap_or(Variant::A);

        for (key, ic, dim) in [
            ("master_ic", &plan.ics.master, plan.pair.master.dimension()),
            ("slave_ic", &plan.ics.slave, plan.pair.slave.dimension()),
            ("aux_ic", &plan.ics.aux, plan.pair.slave.dimension()),
        ] {
            if ic.dimension() != dim {
                return Err(ConfigError::Invalid(format!(
                    "`{key}` has {} components, expected {dim}",
                    ic.dimension()
                )));
            }
            if !ic.is_finite() {
                return Err(ConfigError::Invalid(format!("`{key}` must be finite")));
            }
        }
        plan.validate()?;
        Ok(RunConfig { plan, duffing, variant, out })
    }

    /// The single K of a one-run subcommand.
    pub fn single_k(&self) -> Result<f64, ConfigError> {
        match self.plan.k_values.as_slice() {
            [k] => Ok(*k),
            ks => Err(ConfigError::Invalid(format!("expected a single --k value, got {} ({})", ks.len(), list_string(ks)))),
        }
    }

    /// Every key with its resolved value; reading it back reproduces the run.
    pub fn to_settings(&self) -> Settings {
        let p = &self.plan;
        let mut s = Settings::default();
        s.set("case", p.case_name.as_str());
        s.set("master", p.pair.master.name());
        s.set("slave", p.pair.slave.name());
        s.set("source", p.pair.drive_source.to_string());
        s.set("target", p.pair.drive_target.to_string());
        s.set("master_ic", list_string(&p.ics.master.components));
        s.set("slave_ic", list_string(&p.ics.slave.components));
        s.set("aux_ic", list_string(&p.ics.aux.components));
        s.set("delta", format_f64(self.duffing.delta));
        s.set("gamma", format_f64(self.duffing.gamma));
        s.set("omega", format_f64(self.duffing.omega));
        s.set("k", list_string(&p.k_values));
        s.set("h", format_f64(p.cfg.step_size));
        s.set("steps", p.cfg.n_steps.to_string());
        s.set("stride", p.cfg.record_stride.to_string());
        s.set("component", p.component.to_string());
        s.set("threshold", format_f64(p.threshold_log10));
        s.set("epsilon", format_f64(p.sync.relative_tolerance));
        s.set("transient", format_f64(p.sync.transient_fraction));
        s.set("variant", self.variant.to_string());
        s.set("workers", p.workers.to_string());
        s.set("out", self.out.display().to_string());
        s
    }

    /// Provenance file body: a comment header then one `key = value` per line.
    pub fn provenance(&self, command: &str, timestamp: &str) -> String {
        let mut text = String::new();
        let _ = writeln!(text, "# command: {command}");
        let _ = writeln!(text, "# created: {timestamp}");
        let _ = writeln!(text, "# build: lbesync {}", env!("CARGO_PKG_VERSION"));
        let _ = writeln!(text, "# config_hash: {}", self.plan.config_hash());
        let s = self.to_settings();
        for key in KEYS {
            if let Some(v) = s.get(key) {
                let _ = writeln!(text, "{key} = {v}");
            }
        }
        text
    }
}
