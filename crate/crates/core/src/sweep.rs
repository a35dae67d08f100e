//! Coupling-constant sweeps and the two built-in case studies.

use sha2::{Digest, Sha256};

use crate::dynamics::{CoupledPair, StateVector, SystemSpec, Variant};
use crate::error::{Error, Result};
use crate::integrator::IntegrationConfig;
use crate::lbe::{first_crossing, run_lbe_experiment, CrossingMetric, LbeSeries, PairIcs, DEFAULT_THRESHOLD_LOG10};
use crate::sync::{auxiliary_check, SyncSettings, SyncVerdict};

/// Names accepted by [`builtin_case_study`].
pub const CASE_NAMES: [&str; 2] = ["duffing-lorenz", "rossler-duffing"];

/// A master/slave pairing with its initial conditions and K grid.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseStudy {
    pub name: String,
    pub description: String,
    /// Pair with `k = 0`; the sweep substitutes each grid value.
    pub pair: CoupledPair,
    pub ics: PairIcs,
    pub k_values: Vec<f64>,
    /// Slave component compared by the LBE.
    pub component: usize,
    /// K shown as the synchronized example.
    pub sync_demo_k: f64,
}

pub fn case_study(name: &str) -> Result<CaseStudy> {
    case_study_with(name, SystemSpec::duffing())
}

/// Case study with a caller-supplied Duffing system (for parameter overrides).
pub fn case_study_with(name: &str, duffing: SystemSpec) -> Result<CaseStudy> {
    if !matches!(duffing, SystemSpec::Duffing(_)) {
        return Err(Error::config("case-study override must be a Duffing system"));
    }
    match name {
        "duffing-lorenz" => Ok(CaseStudy {
            name: name.to_string(),
            description: "Duffing master drives Lorenz slave: y2' += K x1".to_string(),
            pair: CoupledPair::new(duffing, SystemSpec::Lorenz, 0.0, 0, 1)?,
            ics: PairIcs {
                master: StateVector::at_origin(vec![3.0, 4.0]),
                slave: StateVector::at_origin(vec![1.0, 1.0, 1.0]),
                aux: StateVector::at_origin(vec![5.0, 5.0, 5.0]),
            },
            k_values: vec![0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 40.0],
            component: 1,
            sync_demo_k: 40.0,
        }),
        "rossler-duffing" => Ok(CaseStudy {
            name: name.to_string(),
            description: "Rossler master drives Duffing slave: x1' += K y1".to_string(),
            pair: CoupledPair::new(SystemSpec::Rossler, duffing, 0.0, 0, 0)?,
            ics: PairIcs {
                master: StateVector::at_origin(vec![1.0, 1.0, 1.0]),
                slave: StateVector::at_origin(vec![3.0, 4.0]),
                aux: StateVector::at_origin(vec![5.0, 6.0]),
            },
            k_values: vec![0.0, 100.0, 200.0, 300.0, 400.0],
            component: 1,
            sync_demo_k: 400.0,
        }),
        other => Err(Error::UnknownCase { name: other.to_string(), available: CASE_NAMES.join(", ") }),
    }
}

/// Everything needed to run one campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    pub case_name: String,
    pub pair: CoupledPair,
    pub ics: PairIcs,
    pub k_values: Vec<f64>,
    pub cfg: IntegrationConfig,
    pub component: usize,
    pub threshold_log10: f64,
    pub sync: SyncSettings,
    /// Worker threads; `0` means one per available core.
    pub workers: usize,
}

impl SweepPlan {
    pub fn from_case(case: CaseStudy) -> Self {
        SweepPlan {
            case_name: case.name,
            pair: case.pair,
            ics: case.ics,
            k_values: case.k_values,
            cfg: IntegrationConfig::default(),
            component: case.component,
            threshold_log10: DEFAULT_THRESHOLD_LOG10,
            sync: SyncSettings::default(),
            workers: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.pair.validate()?;
        self.cfg.validate()?;
        self.sync.validate()?;
        if self.k_values.is_empty() {
            return Err(Error::config("K grid is empty"));
        }
        if self.k_values.iter().any(|k| !(k.is_finite() && *k >= 0.0)) {
            return Err(Error::config("K values must be finite and non-negative"));
        }
        if self.k_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("K values must be strictly increasing"));
        }
        if self.component >= self.pair.slave.dimension() {
            return Err(Error::config(format!(
                "component {} out of range for slave {}",
                self.component,
                self.pair.slave.name()
            )));
        }
        if !self.threshold_log10.is_finite() {
            return Err(Error::config("threshold must be finite"));
        }
        if self.ics.aux.components == self.ics.slave.components {
            return Err(Error::config("auxiliary initial condition equals the slave's"));
        }
        Ok(())
    }

    /// SHA-256 over every field that affects the results.
    pub fn config_hash(&self) -> String {
        let canonical = format!(
            "{}|{:?}|{:?}|{:?}|{:?}|{}|{:?}|{:?}",
            self.case_name, self.pair, self.ics, self.k_values, self.cfg, self.component, self.threshold_log10, self.sync
        );
        Sha256::digest(canonical.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// The built-in plan for a named case study.
pub fn builtin_case_study(name: &str) -> Result<SweepPlan> {
    case_study(name).map(SweepPlan::from_case)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub k: f64,
    pub crossing: CrossingMetric,
    pub saturated: bool,
    /// Largest finite `log10(2 delta)`, `None` if saturated.
    pub max_log10: Option<f64>,
    pub sync: SyncVerdict,
    /// Earliest divergence among the LBE and sync runs.
    pub diverged_at: Option<usize>,
    pub series: LbeSeries,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub config_hash: String,
    pub build: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub case_name: String,
    pub records: Vec<SweepRecord>,
    pub provenance: Provenance,
}

/// One LBE experiment plus one auxiliary check at coupling `k`.
pub fn run_point(plan: &SweepPlan, k: f64) -> Result<SweepRecord> {
    let pair = plan.pair.with_k(k)?;
    let series = run_lbe_experiment(&pair, &plan.ics, &plan.cfg, plan.component)?;
    let sync = auxiliary_check(&pair, &plan.ics, Variant::A, &plan.cfg, &plan.sync)?;
    let crossing = first_crossing(&series, plan.threshold_log10);
    let diverged_at = match (series.diverged_at, sync.diverged_at()) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    Ok(SweepRecord {
        k,
        crossing,
        saturated: series.saturated,
        max_log10: series.max_log10(),
        sync,
        diverged_at,
        series,
    })
}

/// Runs every K in the plan. Records come back in K order regardless of
/// how work was scheduled.
pub fn run_sweep(plan: &SweepPlan) -> Result<SweepResult> {
    plan.validate()?;
    let records = run_points(plan)?;
    Ok(SweepResult {
        case_name: plan.case_name.clone(),
        records,
        provenance: Provenance {
            config_hash: plan.config_hash(),
            build: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).to_string(),
        },
    })
}

#[cfg(feature = "parallel")]
fn run_points(plan: &SweepPlan) -> Result<Vec<SweepRecord>> {
    use rayon::prelude::*;

    if plan.workers == 1 {
        return plan.k_values.iter().map(|&k| run_point(plan, k)).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.workers)
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| plan.k_values.par_iter().map(|&k| run_point(plan, k)).collect())
}

#[cfg(not(feature = "parallel"))]
fn run_points(plan: &SweepPlan) -> Result<Vec<SweepRecord>> {
    plan.k_values.iter().map(|&k| run_point(plan, k)).collect()
}
