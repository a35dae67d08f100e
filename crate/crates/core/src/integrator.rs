//! Fixed-step classical Runge-Kutta integration.
//!
//! One step from `(t, x)` with step `h` evaluates, in this order:
//!
//! ```text
//! k1 = f(t,       x)
//! k2 = f(t + h/2, x + (h/2) k1)
//! k3 = f(t + h/2, x + (h/2) k2)
//! k4 = f(t + h,   x + h k3)
//! x' = x + (((k1 + 2 k2) + 2 k3) + k4) * h / 6
//! ```
//!
//! componentwise, with `h/2` computed as `h * 0.5`. Time at step `n` is
//! `t0 + n * h`, never an accumulated sum. The same inputs therefore give
//! bitwise-identical orbits on the same platform.

use crate::dynamics::{CoupledPair, StateVector, Variant};
use crate::error::{Error, Result};

/// Magnitude above which a state component counts as diverged.
pub const DIVERGENCE_BOUND: f64 = 1e10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationConfig {
    pub step_size: f64,
    pub n_steps: usize,
    pub record_stride: usize,
}

impl Default for IntegrationConfig {
    fn default() -> Self {
        IntegrationConfig { step_size: 0.01, n_steps: 30_000, record_stride: 1 }
    }
}

impl IntegrationConfig {
    pub fn new(step_size: f64, n_steps: usize) -> Self {
        IntegrationConfig { step_size, n_steps, record_stride: 1 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.step_size.is_finite() && self.step_size > 0.0) {
            return Err(Error::config(format!("step size must be positive, got {}", self.step_size)));
        }
        if self.n_steps == 0 {
            return Err(Error::config("n_steps must be at least 1"));
        }
        if self.record_stride == 0 {
            return Err(Error::config("record_stride must be at least 1"));
        }
        Ok(())
    }

    /// Whether step `n` is kept in a recorded orbit. The final step always is.
    #[inline]
    pub fn records(&self, n: usize) -> bool {
        n.is_multiple_of(self.record_stride) || n == self.n_steps
    }

    pub fn recorded_len(&self) -> usize {
        self.n_steps / self.record_stride + 1 + usize::from(!self.n_steps.is_multiple_of(self.record_stride))
    }
}

#[inline]
pub(crate) fn out_of_bounds(x: &[f64]) -> bool {
    x.iter().any(|v| !v.is_finite() || v.abs() > DIVERGENCE_BOUND)
}

/// Scratch buffers for RK4 stages, reusable across steps.
#[derive(Debug, Clone)]
pub struct Rk4 {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    stage: Vec<f64>,
}

impl Rk4 {
    pub fn new(dim: usize) -> Self {
        Rk4 {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            stage: vec![0.0; dim],
        }
    }

    /// Advances `x` in place by one step.
    ///
    /// `field(stage, t, x, dx)` is called with `stage` in `0..4`. Returns
    /// `false` if any stage derivative or the new state is non-finite or
    /// beyond [`DIVERGENCE_BOUND`].
    pub fn step<F>(&mut self, mut field: F, t: f64, h: f64, x: &mut [f64]) -> bool
    where
        F: FnMut(usize, f64, &[f64], &mut [f64]),
    {
        let half = h * 0.5;
        let Rk4 { k1, k2, k3, k4, stage } = self;

        field(0, t, x, k1);
        for ((s, &xi), &ki) in stage.iter_mut().zip(x.iter()).zip(k1.iter()) {
            *s = xi + half * ki;
        }
        field(1, t + half, stage, k2);
        for ((s, &xi), &ki) in stage.iter_mut().zip(x.iter()).zip(k2.iter()) {
            *s = xi + half * ki;
        }
        field(2, t + half, stage, k3);
        for ((s, &xi), &ki) in stage.iter_mut().zip(x.iter()).zip(k3.iter()) {
            *s = xi + h * ki;
        }
        field(3, t + h, stage, k4);

        if [&*k1, &*k2, &*k3, &*k4].iter().any(|k| k.iter().any(|v| !v.is_finite())) {
            return false;
        }
        for i in 0..x.len() {
            x[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * h / 6.0;
        }
        !out_of_bounds(x)
    }
}

/// A single RK4 step of an autonomous-or-not field `f(t, x, dx)`.
pub fn rk4_step<F>(mut field: F, state: &StateVector, h: f64) -> Result<StateVector>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::config(format!("step size must be positive, got {h}")));
    }
    if !state.is_finite() {
        return Err(Error::NonFiniteState(state.components.clone()));
    }
    let mut x = state.components.clone();
    let mut rk = Rk4::new(x.len());
    if rk.step(|_, t, x, dx| field(t, x, dx), state.t, h, &mut x) {
        Ok(StateVector::new(state.t + h, x))
    } else {
        Err(Error::Diverged { step: 1 })
    }
}

/// A recorded pseudo-orbit, stored flat.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoOrbit {
    dim: usize,
    pub steps: Vec<usize>,
    pub times: Vec<f64>,
    data: Vec<f64>,
    /// Step whose result left the finite/bounded region. Nothing at or past
    /// it is recorded.
    pub diverged_at: Option<usize>,
}

impl PseudoOrbit {
    pub fn with_capacity(dim: usize, len: usize) -> Self {
        PseudoOrbit {
            dim,
            steps: Vec::with_capacity(len),
            times: Vec::with_capacity(len),
            data: Vec::with_capacity(len * dim),
            diverged_at: None,
        }
    }

    pub fn push(&mut self, step: usize, t: f64, x: &[f64]) {
        debug_assert_eq!(x.len(), self.dim);
        self.steps.push(step);
        self.times.push(t);
        self.data.extend_from_slice(x);
    }

    pub fn dimension(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn state_vector(&self, i: usize) -> StateVector {
        StateVector::new(self.times[i], self.state(i).to_vec())
    }

    pub fn states(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn component(&self, j: usize) -> impl Iterator<Item = f64> + '_ {
        self.states().map(move |s| s[j])
    }

    pub fn last(&self) -> Option<&[f64]> {
        (!self.is_empty()).then(|| self.state(self.len() - 1))
    }
}

/// Integrates `field(stage, t, x, dx)` from `x0` at `t0`, calling `record`
/// for every step kept by `cfg`. Returns the divergence step, if any.
pub(crate) fn drive_loop<F, R>(
    x0: &[f64],
    t0: f64,
    cfg: &IntegrationConfig,
    mut field: F,
    mut record: R,
) -> Option<usize>
where
    F: FnMut(usize, usize, f64, &[f64], &mut [f64]),
    R: FnMut(usize, f64, &[f64]),
{
    let h = cfg.step_size;
    let mut x = x0.to_vec();
    let mut rk = Rk4::new(x.len());
    if out_of_bounds(&x) {
        return Some(0);
    }
    record(0, t0, &x);
    for n in 0..cfg.n_steps {
        let t = t0 + n as f64 * h;
        if !rk.step(|s, t, x, dx| field(n, s, t, x, dx), t, h, &mut x) {
            return Some(n + 1);
        }
        if cfg.records(n + 1) {
            record(n + 1, t0 + (n + 1) as f64 * h, &x);
        }
    }
    None
}

/// Integrates a field `f(t, x, dx)` into a pseudo-orbit.
pub fn integrate<F>(mut field: F, ic: &StateVector, cfg: &IntegrationConfig) -> Result<PseudoOrbit>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    cfg.validate()?;
    let mut orbit = PseudoOrbit::with_capacity(ic.dimension(), cfg.recorded_len());
    orbit.diverged_at = drive_loop(
        &ic.components,
        ic.t,
        cfg,
        |_, _, t, x, dx| field(t, x, dx),
        |n, t, x| orbit.push(n, t, x),
    );
    Ok(orbit)
}

fn check_ic(name: &str, ic: &StateVector, dim: usize) -> Result<()> {
    if ic.dimension() != dim {
        return Err(Error::config(format!(
            "{name} initial condition has {} components, expected {dim}",
            ic.dimension()
        )));
    }
    if !ic.is_finite() {
        return Err(Error::NonFiniteState(ic.components.clone()));
    }
    Ok(())
}

/// Integrates master and slave as one stacked system, drive evaluated inside
/// every RK4 stage. Divergence of either part flags both orbits.
pub fn integrate_pair(
    pair: &CoupledPair,
    master_ic: &StateVector,
    slave_ic: &StateVector,
    slave_variant: Variant,
    cfg: &IntegrationConfig,
) -> Result<(PseudoOrbit, PseudoOrbit)> {
    pair.validate()?;
    cfg.validate()?;
    let n = pair.master.dimension();
    let m = pair.slave.dimension();
    check_ic("master", master_ic, n)?;
    check_ic("slave", slave_ic, m)?;

    let mut x0 = master_ic.components.clone();
    x0.extend_from_slice(&slave_ic.components);
    let mut master = PseudoOrbit::with_capacity(n, cfg.recorded_len());
    let mut slave = PseudoOrbit::with_capacity(m, cfg.recorded_len());
    let diverged = drive_loop(
        &x0,
        master_ic.t,
        cfg,
        |_, _, t, x, dx| pair.stacked_eval_into(slave_variant, t, x, dx),
        |step, t, x| {
            master.push(step, t, &x[..n]);
            slave.push(step, t, &x[n..]);
        },
    );
    master.diverged_at = diverged;
    slave.diverged_at = diverged;
    Ok((master, slave))
}

/// A master orbit integrated on its own, with the drive-source component
/// sampled at each of the four RK4 stage states of every step.
///
/// Replaying these samples into a slave integration reproduces the stacked
/// computation bit for bit, so one master run can drive any number of slave
/// runs.
#[derive(Debug, Clone)]
pub struct MasterTrack {
    pub orbit: PseudoOrbit,
    pub(crate) stage_samples: Vec<[f64; 4]>,
    pub(crate) t0: f64,
}

impl MasterTrack {
    pub fn integrate(pair: &CoupledPair, master_ic: &StateVector, cfg: &IntegrationConfig) -> Result<Self> {
        pair.validate()?;
        cfg.validate()?;
        let n = pair.master.dimension();
        check_ic("master", master_ic, n)?;
        let source = pair.drive_source;
        let master_spec = pair.master;
        let mut samples = vec![[0.0; 4]; cfg.n_steps];
        let mut orbit = PseudoOrbit::with_capacity(n, cfg.recorded_len());
        orbit.diverged_at = drive_loop(
            &master_ic.components,
            master_ic.t,
            cfg,
            |step, stage, t, x, dx| {
                samples[step][stage] = x[source];
                master_spec.eval_into(Variant::A, t, x, None, dx);
            },
            |step, t, x| orbit.push(step, t, x),
        );
        if let Some(d) = orbit.diverged_at {
            samples.truncate(d);
        }
        Ok(MasterTrack { orbit, stage_samples: samples, t0: master_ic.t })
    }

    /// Integrates a slave driven by the recorded master samples. The slave
    /// run stops where the master diverged.
    pub fn drive_slave(
        &self,
        pair: &CoupledPair,
        slave_ic: &StateVector,
        slave_variant: Variant,
        cfg: &IntegrationConfig,
    ) -> Result<PseudoOrbit> {
        pair.validate()?;
        cfg.validate()?;
        check_ic("slave", slave_ic, pair.slave.dimension())?;
        let available = self.stage_samples.len();
        let run_cfg = IntegrationConfig { n_steps: cfg.n_steps.min(available), ..*cfg };
        let mut orbit = PseudoOrbit::with_capacity(pair.slave.dimension(), cfg.recorded_len());
        if run_cfg.n_steps == 0 {
            orbit.push(0, self.t0, &slave_ic.components);
            orbit.diverged_at = self.orbit.diverged_at;
            return Ok(orbit);
        }
        // Record with the caller's stride, not the truncated horizon's final step.
        let slave_div = drive_loop(
            &slave_ic.components,
            self.t0,
            &run_cfg,
            |step, stage, t, y, dy| {
                let drive = pair.drive(self.stage_samples[step][stage]);
                pair.slave.eval_into(slave_variant, t, y, Some((pair.drive_target, drive)), dy);
            },
            |step, t, y| {
                if cfg.records(step) {
                    orbit.push(step, t, y)
                }
            },
        );
        orbit.diverged_at = match (slave_div, self.orbit.diverged_at) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        Ok(orbit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::SystemSpec;

    fn exp_field(_t: f64, x: &[f64], dx: &mut [f64]) {
        dx[0] = x[0];
    }

    #[test]
    fn zero_field_keeps_state() {
        let s = StateVector::new(0.0, vec![1.5, -2.0, 3.25]);
        let next = rk4_step(|_, _, dx: &mut [f64]| dx.fill(0.0), &s, 0.1).unwrap();
        assert_eq!(next.components, s.components);
    }

    #[test]
    fn single_step_matches_exponential() {
        let s = StateVector::at_origin(vec![1.0]);
        let next = rk4_step(exp_field, &s, 0.1).unwrap();
        assert!((next.components[0] - 0.1f64.exp()).abs() < 1e-7);
        assert_eq!(next.t, 0.1);
    }

    #[test]
    fn tracks_sine() {
        let cfg = IntegrationConfig { step_size: 0.001, n_steps: 10_000, record_stride: 100 };
        let orbit = integrate(|t, _, dx| dx[0] = t.cos(), &StateVector::at_origin(vec![0.0]), &cfg).unwrap();
        for (t, x) in orbit.times.iter().zip(orbit.component(0)) {
            assert!((x - t.sin()).abs() < 1e-8, "t={t}");
        }
        assert_eq!(*orbit.steps.last().unwrap(), 10_000);
    }

    #[test]
    fn stride_keeps_final_state() {
        let cfg = IntegrationConfig { step_size: 0.1, n_steps: 10, record_stride: 3 };
        let orbit = integrate(exp_field, &StateVector::at_origin(vec![1.0]), &cfg).unwrap();
        assert_eq!(orbit.steps, vec![0, 3, 6, 9, 10]);
        assert_eq!(orbit.len(), cfg.recorded_len());
    }

    #[test]
    fn first_state_is_initial_condition() {
        let ic = StateVector::at_origin(vec![0.1 + 0.2, 7.0, -1.0]);
        let cfg = IntegrationConfig::new(0.01, 5);
        let orbit = integrate(|_, x, dx| dx.copy_from_slice(x), &ic, &cfg).unwrap();
        assert_eq!(orbit.state(0), &ic.components[..]);
    }

    #[test]
    fn blow_up_is_flagged_and_truncated() {
        let cfg = IntegrationConfig::new(0.1, 1000);
        let orbit = integrate(|_, x, dx| dx[0] = x[0] * x[0], &StateVector::at_origin(vec![1.0]), &cfg).unwrap();
        let d = orbit.diverged_at.expect("x' = x^2 blows up at t = 1");
        assert!(d > 5 && d < 20, "{d}");
        assert_eq!(orbit.len(), d);
        assert!(orbit.states().all(|s| s[0].abs() <= DIVERGENCE_BOUND));
    }

    #[test]
    fn invalid_config_rejected() {
        let ic = StateVector::at_origin(vec![1.0]);
        for cfg in [
            IntegrationConfig::new(0.0, 10),
            IntegrationConfig::new(-0.1, 10),
            IntegrationConfig::new(0.1, 0),
            IntegrationConfig { record_stride: 0, ..IntegrationConfig::new(0.1, 10) },
        ] {
            assert!(integrate(exp_field, &ic, &cfg).is_err());
        }
    }

    #[test]
    fn pair_dimension_mismatch_rejected() {
        let pair = CoupledPair::new(SystemSpec::duffing(), SystemSpec::Lorenz, 1.0, 0, 1).unwrap();
        let cfg = IntegrationConfig::new(0.01, 10);
        let bad = integrate_pair(
            &pair,
            &StateVector::at_origin(vec![3.0, 4.0, 0.0]),
            &StateVector::at_origin(vec![1.0, 1.0, 1.0]),
            Variant::A,
            &cfg,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn stacked_and_staged_agree_bitwise() {
        let pair = CoupledPair::new(SystemSpec::Rossler, SystemSpec::duffing(), 7.5, 0, 0).unwrap();
        let cfg = IntegrationConfig { step_size: 0.01, n_steps: 2000, record_stride: 7 };
        let m0 = StateVector::at_origin(vec![1.0, 1.0, 1.0]);
        let s0 = StateVector::at_origin(vec![3.0, 4.0]);
        let (master, slave) = integrate_pair(&pair, &m0, &s0, Variant::B, &cfg).unwrap();
        let track = MasterTrack::integrate(&pair, &m0, &cfg).unwrap();
        let staged = track.drive_slave(&pair, &s0, Variant::B, &cfg).unwrap();
        assert_eq!(track.orbit, master);
        assert_eq!(staged, slave);
    }
}
