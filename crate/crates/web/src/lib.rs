//! wasm-bindgen bindings for the browser demo in `www/`.

use lbesync::lbe::{first_crossing, run_lbe_experiment, DEFAULT_THRESHOLD_LOG10};
use lbesync::sweep::{case_study, CASE_NAMES};
use lbesync::sync::{auxiliary_run, phase_portrait_data, SyncSettings, SyncStatus};
use lbesync::{IntegrationConfig, Variant};
use wasm_bindgen::prelude::*;

/// Upper bound on steps per call so a page cannot lock the tab for long.
pub const MAX_STEPS: usize = 200_000;

fn config(h: f64, steps: usize) -> lbesync::Result<IntegrationConfig> {
    if steps > MAX_STEPS {
        return Err(lbesync::Error::Config(format!("at most {MAX_STEPS} steps per run")));
    }
    let cfg = IntegrationConfig::new(h, steps);
    cfg.validate()?;
    Ok(cfg)
}

fn js(e: lbesync::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub fn case_names() -> Vec<String> {
    CASE_NAMES.iter().map(|s| s.to_string()).collect()
}

#[wasm_bindgen]
pub fn case_k_values(case: &str) -> Result<Vec<f64>, JsError> {
    case_study(case).map(|c| c.k_values).map_err(js)
}

/// LBE of one K, thinned for plotting. The crossing is found on every step.
#[wasm_bindgen]
pub struct LbeCurve {
    k: f64,
    steps: Vec<u32>,
    log10: Vec<f64>,
    crossing: Option<u32>,
    saturated: bool,
}

#[wasm_bindgen]
impl LbeCurve {
    #[wasm_bindgen(getter)]
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn steps(&self) -> Vec<u32> {
        self.steps.clone()
    }

    /// `log10(2 delta)`; NaN where the two orbits agree exactly.
    pub fn log10(&self) -> Vec<f64> {
        self.log10.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn crossing(&self) -> Option<u32> {
        self.crossing
    }

    #[wasm_bindgen(getter)]
    pub fn saturated(&self) -> bool {
        self.saturated
    }
}

pub fn compute_lbe_curve(case: &str, k: f64, h: f64, steps: usize, points: usize) -> lbesync::Result<LbeCurve> {
    let study = case_study(case)?;
    let pair = study.pair.with_k(k)?;
    let series = run_lbe_experiment(&pair, &study.ics, &config(h, steps)?, study.component)?;
    let crossing = first_crossing(&series, DEFAULT_THRESHOLD_LOG10).crossing_index.map(|c| c as u32);
    let every = (series.len() / points.max(1)).max(1);
    let keep = (0..series.len()).step_by(every);
    Ok(LbeCurve {
        k,
        steps: keep.clone().map(|i| series.steps[i] as u32).collect(),
        log10: keep.map(|i| series.log10_values[i].unwrap_or(f64::NAN)).collect(),
        crossing,
        saturated: series.saturated,
    })
}

#[wasm_bindgen]
pub fn lbe_curve(case: &str, k: f64, h: f64, steps: usize, points: usize) -> Result<LbeCurve, JsError> {
    compute_lbe_curve(case, k, h, steps, points).map_err(js)
}

/// Post-transient `(y, y')` samples of slave and auxiliary slave plus the verdict.
#[wasm_bindgen]
pub struct Portrait {
    y: Vec<f64>,
    y_aux: Vec<f64>,
    verdict: String,
    metric: f64,
    epsilon: f64,
}

#[wasm_bindgen]
impl Portrait {
    pub fn y(&self) -> Vec<f64> {
        self.y.clone()
    }

    pub fn y_aux(&self) -> Vec<f64> {
        self.y_aux.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn verdict(&self) -> String {
        self.verdict.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn metric(&self) -> f64 {
        self.metric
    }

    #[wasm_bindgen(getter)]
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

pub fn compute_portrait(case: &str, k: f64, h: f64, steps: usize, points: usize) -> lbesync::Result<Portrait> {
    let study = case_study(case)?;
    let pair = study.pair.with_k(k)?;
    let mut cfg = config(h, steps)?;
    cfg.record_stride = (steps / 2 / points.max(1)).max(1);
    let run = auxiliary_run(&pair, &study.ics, Variant::A, &cfg, &SyncSettings::default())?;
    let transient = run.verdict.transient_steps;
    let (y, y_aux) = phase_portrait_data(&run.slave, &run.aux, study.component)?
        .into_iter()
        .zip(&run.slave.steps)
        .filter(|(_, &step)| step > transient)
        .map(|(p, _)| p)
        .unzip();
    let verdict = match run.verdict.status {
        SyncStatus::Synchronized => "synchronized".to_string(),
        SyncStatus::NotSynchronized => "not synchronized".to_string(),
        SyncStatus::Undetermined { diverged_at } => format!("diverged at step {diverged_at}"),
    };
    Ok(Portrait { y, y_aux, verdict, metric: run.verdict.metric, epsilon: run.verdict.epsilon })
}

#[wasm_bindgen]
pub fn phase_portrait(case: &str, k: f64, h: f64, steps: usize, points: usize) -> Result<Portrait, JsError> {
    compute_portrait(case, k, h, steps, points).map_err(js)
}
