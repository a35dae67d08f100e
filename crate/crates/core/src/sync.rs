//! Auxiliary-system test for generalized synchronization.
//!
//! A second copy of the slave starts from different initial conditions and
//! receives the identical drive signal. If slave and copy converge to each
//! other, the slave state is a function of the master history alone, which is
//! generalized synchronization between master and slave.

use crate::dynamics::{CoupledPair, Variant};
use crate::error::{Error, Result};
use crate::integrator::{drive_loop, IntegrationConfig, PseudoOrbit};
use crate::lbe::PairIcs;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncSettings {
    /// Fraction of the horizon discarded before the metric window.
    pub transient_fraction: f64,
    /// Tolerance as a fraction of the slave attractor's measured diameter.
    pub relative_tolerance: f64,
}

impl Default for SyncSettings {
    fn default() -> Self {
        SyncSettings { transient_fraction: 0.5, relative_tolerance: 1e-3 }
    }
}

impl SyncSettings {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.transient_fraction) {
            return Err(Error::config(format!(
                "transient fraction must lie in [0, 1), got {}",
                self.transient_fraction
            )));
        }
        if !(self.relative_tolerance.is_finite() && self.relative_tolerance > 0.0) {
            return Err(Error::config(format!(
                "relative tolerance must be positive, got {}",
                self.relative_tolerance
            )));
        }
        Ok(())
    }

    pub fn transient_steps(&self, n_steps: usize) -> usize {
        (self.transient_fraction * n_steps as f64).floor() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyncStatus {
    Synchronized,
    NotSynchronized,
    /// A run diverged before the window completed.
    Undetermined { diverged_at: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyncVerdict {
    pub status: SyncStatus,
    pub synchronized: bool,
    /// Supremum over the window of the Euclidean slave/auxiliary distance.
    pub metric: f64,
    /// Largest coordinate range of the slave over the window.
    pub diameter: f64,
    /// Absolute tolerance: `relative_tolerance * diameter`, or the relative
    /// tolerance itself when the slave did not move.
    pub epsilon: f64,
    pub transient_steps: usize,
    pub window_steps: usize,
}

impl SyncVerdict {
    pub fn diverged_at(&self) -> Option<usize> {
        match self.status {
            SyncStatus::Undetermined { diverged_at } => Some(diverged_at),
            _ => None,
        }
    }
}

/// Verdict plus the recorded orbits of master, slave and auxiliary slave.
#[derive(Debug, Clone)]
pub struct SyncRun {
    pub verdict: SyncVerdict,
    pub master: PseudoOrbit,
    pub slave: PseudoOrbit,
    pub aux: PseudoOrbit,
}

pub fn auxiliary_check(
    pair: &CoupledPair,
    ics: &PairIcs,
    variant: Variant,
    cfg: &IntegrationConfig,
    settings: &SyncSettings,
) -> Result<SyncVerdict> {
    auxiliary_run(pair, ics, variant, cfg, settings).map(|r| r.verdict)
}

pub fn auxiliary_run(
    pair: &CoupledPair,
    ics: &PairIcs,
    variant: Variant,
    cfg: &IntegrationConfig,
    settings: &SyncSettings,
) -> Result<SyncRun> {
    settings.validate()?;
    if ics.aux.components == ics.slave.components {
        return Err(Error::config(
            "auxiliary initial condition equals the slave's; the test would be vacuous",
        ));
    }
    let transient = settings.transient_steps(cfg.n_steps);
    run_unchecked(pair, ics, variant, cfg, transient, settings.relative_tolerance)
}

pub(crate) fn run_unchecked(
    pair: &CoupledPair,
    ics: &PairIcs,
    variant: Variant,
    cfg: &IntegrationConfig,
    transient_steps: usize,
    relative_tolerance: f64,
) -> Result<SyncRun> {
    pair.validate()?;
    cfg.validate()?;
    if transient_steps >= cfg.n_steps {
        return Err(Error::config(format!(
            "transient ({transient_steps} steps) must be shorter than the horizon ({} steps)",
            cfg.n_steps
        )));
    }
    let n = pair.master.dimension();
    let m = pair.slave.dimension();
    for (name, ic, dim) in [("master", &ics.master, n), ("slave", &ics.slave, m), ("auxiliary", &ics.aux, m)] {
        if ic.dimension() != dim {
            return Err(Error::config(format!(
                "{name} initial condition has {} components, expected {dim}",
                ic.dimension()
            )));
        }
        if !ic.is_finite() {
            return Err(Error::NonFiniteState(ic.components.clone()));
        }
    }

    let mut x0 = ics.master.components.clone();
    x0.extend_from_slice(&ics.slave.components);
    x0.extend_from_slice(&ics.aux.components);

    let len = cfg.recorded_len();
    let mut master = PseudoOrbit::with_capacity(n, len);
    let mut slave = PseudoOrbit::with_capacity(m, len);
    let mut aux = PseudoOrbit::with_capacity(m, len);
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    let mut metric = 0.0f64;

    // Every step feeds the window statistics; recording is strided.
    let every_step = IntegrationConfig { record_stride: 1, ..*cfg };
    let diverged = drive_loop(
        &x0,
        ics.master.t,
        &every_step,
        |_, _, t, x, dx| pair.stacked_eval_into(variant, t, x, dx),
        |step, t, x| {
            let (xm, rest) = x.split_at(n);
            let (y, y_aux) = rest.split_at(m);
            if step > transient_steps {
                let dist = y.iter().zip(y_aux).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                metric = metric.max(dist);
                for j in 0..m {
                    lo[j] = lo[j].min(y[j]);
                    hi[j] = hi[j].max(y[j]);
                }
            }
            if cfg.records(step) {
                master.push(step, t, xm);
                slave.push(step, t, y);
                aux.push(step, t, y_aux);
            }
        },
    );
    for orbit in [&mut master, &mut slave, &mut aux] {
        orbit.diverged_at = diverged;
    }

    let diameter = lo.iter().zip(&hi).map(|(l, h)| h - l).filter(|d| d.is_finite()).fold(0.0, f64::max);
    let epsilon = if diameter > 0.0 { relative_tolerance * diameter } else { relative_tolerance };
    let status = match diverged {
        Some(d) => SyncStatus::Undetermined { diverged_at: d },
        None if metric < epsilon => SyncStatus::Synchronized,
        None => SyncStatus::NotSynchronized,
    };
    let verdict = SyncVerdict {
        status,
        synchronized: status == SyncStatus::Synchronized,
        metric,
        diameter,
        epsilon,
        transient_steps,
        window_steps: cfg.n_steps - transient_steps,
    };
    Ok(SyncRun { verdict, master, slave, aux })
}

/// `(y, y')` pairs of one component for a phase portrait.
pub fn phase_portrait_data(slave: &PseudoOrbit, aux: &PseudoOrbit, component: usize) -> Result<Vec<(f64, f64)>> {
    if slave.len() != aux.len() {
        return Err(Error::LengthMismatch { left: slave.len(), right: aux.len() });
    }
    if component >= slave.dimension() || component >= aux.dimension() {
        return Err(Error::config(format!("component {component} out of range")));
    }
    Ok(slave.component(component).zip(aux.component(component)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::case_study;

    fn short() -> IntegrationConfig {
        IntegrationConfig::new(0.01, 4_000)
    }

    #[test]
    fn identical_auxiliary_is_synchronized_with_zero_metric() {
        let case = case_study("duffing-lorenz").unwrap();
        let ics = PairIcs { aux: case.ics.slave.clone(), ..case.ics.clone() };
        let run = run_unchecked(&case.pair, &ics, Variant::A, &short(), 2_000, 1e-3).unwrap();
        assert_eq!(run.verdict.metric, 0.0);
        assert!(run.verdict.synchronized);
        assert_eq!(run.slave, run.aux);
    }

    #[test]
    fn vacuous_auxiliary_rejected() {
        let case = case_study("rossler-duffing").unwrap();
        let ics = PairIcs { aux: case.ics.slave.clone(), ..case.ics.clone() };
        let err = auxiliary_check(&case.pair, &ics, Variant::A, &short(), &SyncSettings::default()).unwrap_err();
        assert!(err.to_string().contains("vacuous"), "{err}");
    }

    #[test]
    fn transient_must_leave_a_window() {
        let case = case_study("duffing-lorenz").unwrap();
        assert!(run_unchecked(&case.pair, &case.ics, Variant::A, &short(), 4_000, 1e-3).is_err());
        let bad = SyncSettings { transient_fraction: 1.0, ..Default::default() };
        assert!(auxiliary_check(&case.pair, &case.ics, Variant::A, &short(), &bad).is_err());
        let bad = SyncSettings { relative_tolerance: 0.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn strong_coupling_collapses_the_metric() {
        let case = case_study("duffing-lorenz").unwrap();
        let cfg = IntegrationConfig::default();
        let s = SyncSettings::default();
        let free = auxiliary_check(&case.pair, &case.ics, Variant::A, &cfg, &s).unwrap();
        let coupled = auxiliary_check(&case.pair.with_k(40.0).unwrap(), &case.ics, Variant::A, &cfg, &s).unwrap();
        assert_eq!(free.status, SyncStatus::NotSynchronized);
        assert_eq!(coupled.status, SyncStatus::Synchronized);
        assert!(coupled.metric / free.metric < 1e-3);
        assert!(coupled.diameter > 1.0);
    }

    #[test]
    fn verdict_stable_when_window_doubles() {
        let case = case_study("duffing-lorenz").unwrap();
        let s = SyncSettings::default();
        for k in [0.0, 40.0] {
            let pair = case.pair.with_k(k).unwrap();
            let a = auxiliary_check(&pair, &case.ics, Variant::A, &IntegrationConfig::new(0.01, 30_000), &s).unwrap();
            let b = auxiliary_check(&pair, &case.ics, Variant::A, &IntegrationConfig::new(0.01, 60_000), &s).unwrap();
            assert_eq!(a.synchronized, b.synchronized, "k = {k}");
        }
    }

    #[test]
    fn strided_recording_keeps_full_window_statistics() {
        let case = case_study("duffing-lorenz").unwrap();
        let pair = case.pair.with_k(10.0).unwrap();
        let dense = run_unchecked(&pair, &case.ics, Variant::A, &short(), 1_000, 1e-3).unwrap();
        let cfg = IntegrationConfig { record_stride: 50, ..short() };
        let sparse = run_unchecked(&pair, &case.ics, Variant::A, &cfg, 1_000, 1e-3).unwrap();
        assert_eq!(dense.verdict, sparse.verdict);
        assert_eq!(sparse.slave.len(), 4_000 / 50 + 1);
        assert_eq!(phase_portrait_data(&sparse.slave, &sparse.aux, 1).unwrap().len(), sparse.slave.len());
        assert!(phase_portrait_data(&sparse.slave, &sparse.aux, 3).is_err());
    }
}
