//! Lower bound error between two pseudo-orbits of equivalent formulations.
//!
//! For one state component, `2 delta_n = |a_n - b_n|`. Since the exact orbit
//! lies somewhere, at least one of `a_n`, `b_n` is at least `delta_n` away
//! from it.

use crate::dynamics::{CoupledPair, StateVector, Variant};
use crate::error::{Error, Result};
use crate::integrator::{IntegrationConfig, MasterTrack, PseudoOrbit};

/// Default crossing threshold on `log10(2 delta)`.
pub const DEFAULT_THRESHOLD_LOG10: f64 = -0.3;

/// Initial conditions of a master/slave run. `aux` is only used by the
/// synchronization check.
#[derive(Debug, Clone, PartialEq)]
pub struct PairIcs {
    pub master: StateVector,
    pub slave: StateVector,
    pub aux: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LbeSeries {
    pub component_index: usize,
    pub steps: Vec<usize>,
    pub times: Vec<f64>,
    /// `delta_n = |a_n - b_n| / 2`.
    pub values: Vec<f64>,
    /// `log10(2 delta_n)`, `None` where `delta_n == 0`.
    pub log10_values: Vec<Option<f64>>,
    /// Every `delta_n` is zero.
    pub saturated: bool,
    pub diverged_at: Option<usize>,
}

impl LbeSeries {
    pub fn from_deltas(component_index: usize, steps: Vec<usize>, times: Vec<f64>, values: Vec<f64>) -> Self {
        assert_eq!(steps.len(), values.len());
        assert_eq!(times.len(), values.len());
        let log10_values = log10_of(&values);
        let saturated = values.iter().all(|&d| d == 0.0);
        LbeSeries { component_index, steps, times, values, log10_values, saturated, diverged_at: None }
    }

    /// Series from two recorded orbits of equal sampling. Truncates to the
    /// shorter orbit and carries the earlier divergence.
    pub fn between(a: &PseudoOrbit, b: &PseudoOrbit, component: usize) -> Result<Self> {
        if a.dimension() != b.dimension() {
            return Err(Error::LengthMismatch { left: a.dimension(), right: b.dimension() });
        }
        if component >= a.dimension() {
            return Err(Error::config(format!(
                "component {component} out of range for dimension {}",
                a.dimension()
            )));
        }
        let len = a.len().min(b.len());
        if a.steps[..len] != b.steps[..len] {
            return Err(Error::config("orbits are sampled at different steps"));
        }
        let values = (0..len).map(|i| (a.state(i)[component] - b.state(i)[component]).abs() / 2.0).collect();
        let mut series = Self::from_deltas(component, a.steps[..len].to_vec(), a.times[..len].to_vec(), values);
        series.diverged_at = match (a.diverged_at, b.diverged_at) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        Ok(series)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest finite `log10(2 delta)`, `None` when saturated.
    pub fn max_log10(&self) -> Option<f64> {
        self.log10_values.iter().flatten().copied().reduce(f64::max)
    }

    pub fn log10_lbe(&self) -> &[Option<f64>] {
        &self.log10_values
    }
}

fn log10_of(values: &[f64]) -> Vec<Option<f64>> {
    values.iter().map(|&d| (d != 0.0).then(|| (2.0 * d).log10())).collect()
}

/// Elementwise `log10(2 delta)`; zero maps to `None`.
pub fn log10_lbe(series: &LbeSeries) -> Vec<Option<f64>> {
    log10_of(&series.values)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingMetric {
    pub threshold_log10: f64,
    /// Step of the first sample with `log10(2 delta) >= threshold`.
    pub crossing_index: Option<usize>,
    pub never_crossed: bool,
}

/// First touch of the threshold; the crossing need not persist.
pub fn first_crossing(series: &LbeSeries, threshold_log10: f64) -> CrossingMetric {
    let crossing_index = series
        .log10_values
        .iter()
        .position(|v| matches!(v, Some(l) if *l >= threshold_log10))
        .map(|i| series.steps[i]);
    CrossingMetric { threshold_log10, crossing_index, never_crossed: crossing_index.is_none() }
}

/// LBE on slave `component` between formulation variants A and B.
pub fn run_lbe_experiment(
    pair: &CoupledPair,
    ics: &PairIcs,
    cfg: &IntegrationConfig,
    component: usize,
) -> Result<LbeSeries> {
    run_lbe_between(pair, ics, cfg, component, Variant::A, Variant::B)
}

/// LBE between two arbitrary slave variants; `(A, A)` is the degenerate
/// self-comparison. The master is integrated once and replayed into both
/// slave runs.
pub fn run_lbe_between(
    pair: &CoupledPair,
    ics: &PairIcs,
    cfg: &IntegrationConfig,
    component: usize,
    first: Variant,
    second: Variant,
) -> Result<LbeSeries> {
    if component >= pair.slave.dimension() {
        return Err(Error::config(format!(
            "component {component} out of range for slave {} (dimension {})",
            pair.slave.name(),
            pair.slave.dimension()
        )));
    }
    let track = MasterTrack::integrate(pair, &ics.master, cfg)?;
    let a = track.drive_slave(pair, &ics.slave, first, cfg)?;
    let b = track.drive_slave(pair, &ics.slave, second, cfg)?;
    LbeSeries::between(&a, &b, component)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series_from_logs(logs: &[f64]) -> LbeSeries {
        let values: Vec<f64> = logs.iter().map(|l| 10f64.powf(*l) / 2.0).collect();
        let n = values.len();
        LbeSeries::from_deltas(0, (0..n).collect(), (0..n).map(|i| i as f64).collect(), values)
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn log_examples() {
        let s = LbeSeries::from_deltas(0, vec![0, 1, 2], vec![0.0, 0.1, 0.2], vec![0.25, 0.0, 0.5]);
        let logs = log10_lbe(&s);
        assert!((logs[0].unwrap() - (-0.30103)).abs() < 1e-5);
        assert_eq!(logs[1], None);
        assert_eq!(logs[2], Some(0.0));
        assert_eq!(logs, s.log10_values);
        assert!(!s.saturated);
    }

    #[test]
    fn saturated_series_never_crosses() {
        let s = LbeSeries::from_deltas(1, vec![0, 1, 2], vec![0.0; 3], vec![0.0; 3]);
        assert!(s.saturated);
        for thr in [-300.0, -0.3, 10.0] {
            let c = first_crossing(&s, thr);
            assert!(c.never_crossed);
            assert_eq!(c.crossing_index, None);
        }
        assert_eq!(s.max_log10(), None);
    }

    #[test]
    fn crossing_is_first_touch() {
        let s = series_from_logs(&[-5.0, -2.0, -0.2, -1.0]);
        let c = first_crossing(&s, -0.3);
        assert_eq!(c.crossing_index, Some(2));
        assert!(!c.never_crossed);
        assert!(first_crossing(&s, 0.0).never_crossed);
    }

    #[test]
    fn crossing_reports_step_not_sample_index() {
        let s = LbeSeries::from_deltas(0, vec![0, 10, 20], vec![0.0, 1.0, 2.0], vec![0.0, 0.1, 0.4]);
        assert_eq!(first_crossing(&s, -0.3).crossing_index, Some(20));
    }

    #[test]
    fn between_rejects_bad_component() {
        let mut a = PseudoOrbit::with_capacity(2, 1);
        a.push(0, 0.0, &[1.0, 2.0]);
        assert!(LbeSeries::between(&a, &a, 2).is_err());
        let s = LbeSeries::between(&a, &a, 1).unwrap();
        assert!(s.saturated);
    }
}
