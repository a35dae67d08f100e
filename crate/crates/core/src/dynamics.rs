//! Oscillator vector fields and the unidirectional coupling construction.
//!
//! Every expression below is evaluated in IEEE-754 double precision in the
//! order it is written. rustc never contracts `a * b + c` into an FMA and
//! never reassociates floating-point arithmetic, so the two formulation
//! variants of a system keep their distinct rounding behaviour. Do not
//! "simplify" these expressions.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const LORENZ_SIGMA: f64 = 10.0;
const LORENZ_RHO: f64 = 28.0;
const LORENZ_BETA: f64 = 8.0 / 3.0;

const ROSSLER_A: f64 = 0.2;
const ROSSLER_B: f64 = 0.2;
const ROSSLER_C: f64 = 5.7;

/// Formulation variant of a vector field.
///
/// Both variants of a system are the same polynomial; they differ only in the
/// order of floating-point operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    A,
    B,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::A => f.write_str("A"),
            Variant::B => f.write_str("B"),
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Variant::A),
            "B" | "b" => Ok(Variant::B),
            other => Err(Error::config(format!("unknown variant `{other}` (expected A or B)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuffingParams {
    pub delta: f64,
    pub gamma: f64,
    pub omega: f64,
}

impl Default for DuffingParams {
    /// Strongly forced, heavily damped twin-well oscillator.
    fn default() -> Self {
        DuffingParams { delta: 1.0, gamma: 8.0, omega: 0.5 }
    }
}

/// One of the built-in oscillators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SystemSpec {
    /// `x1' = x2`, `x2' = x1 - x1^3 - delta x2 + gamma cos(omega t)`.
    Duffing(DuffingParams),
    /// `y1' = 10(y2 - y1)`, `y2' = 28 y1 - y2 - y1 y3`, `y3' = y1 y2 - 8/3 y3`.
    Lorenz,
    /// `x1' = -x2 - x3`, `x2' = x1 + 0.2 x2`, `x3' = 0.2 + x3 (x1 - 5.7)`.
    Rossler,
}

impl SystemSpec {
    pub fn duffing() -> Self {
        SystemSpec::Duffing(DuffingParams::default())
    }

    pub fn name(&self) -> &'static str {
        match self {
            SystemSpec::Duffing(_) => "duffing",
            SystemSpec::Lorenz => "lorenz",
            SystemSpec::Rossler => "rossler",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            SystemSpec::Duffing(_) => 2,
            SystemSpec::Lorenz | SystemSpec::Rossler => 3,
        }
    }

    pub fn time_dependent(&self) -> bool {
        matches!(self, SystemSpec::Duffing(_))
    }

    /// Whether the system has two distinct formulations registered.
    pub fn has_variants(&self) -> bool {
        !matches!(self, SystemSpec::Rossler)
    }

    /// Named scalar parameters.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match self {
            SystemSpec::Duffing(p) => {
                vec![("delta", p.delta), ("gamma", p.gamma), ("omega", p.omega)]
            }
            SystemSpec::Lorenz => {
                vec![("sigma", LORENZ_SIGMA), ("rho", LORENZ_RHO), ("beta", LORENZ_BETA)]
            }
            SystemSpec::Rossler => vec![("a", ROSSLER_A), ("b", ROSSLER_B), ("c", ROSSLER_C)],
        }
    }

    /// Writes the derivative at `(t, x)` into `dx`.
    ///
    /// `drive`, when present, is `(equation, value)`: `value` is added as the
    /// last operation of that equation. Equations without drive get no
    /// extra addition at all, so an uncoupled call is bit-for-bit the plain
    /// field.
    #[inline]
    pub fn eval_into(
        &self,
        variant: Variant,
        t: f64,
        x: &[f64],
        drive: Option<(usize, f64)>,
        dx: &mut [f64],
    ) {
        let add = |eq: usize, v: f64| match drive {
            Some((target, d)) if target == eq => v + d,
            _ => v,
        };
        match *self {
            SystemSpec::Duffing(p) => {
                let (x1, x2) = (x[0], x[1]);
                let forcing = p.gamma * (p.omega * t).cos();
                let dx2 = match variant {
                    Variant::A => x1 - x1.powf(3.0) - p.delta * x2 + forcing,
                    Variant::B => x1 - x1 * x1 * x1 - p.delta * x2 + forcing,
                };
                dx[0] = add(0, x2);
                dx[1] = add(1, dx2);
            }
            SystemSpec::Lorenz => {
                let (y1, y2, y3) = (x[0], x[1], x[2]);
                let dy1 = match variant {
                    Variant::A => -LORENZ_SIGMA * y1 + LORENZ_SIGMA * y2,
                    Variant::B => LORENZ_SIGMA * (y2 - y1),
                };
                dx[0] = add(0, dy1);
                dx[1] = add(1, LORENZ_RHO * y1 - y2 - y1 * y3);
                dx[2] = add(2, y1 * y2 - LORENZ_BETA * y3);
            }
            SystemSpec::Rossler => {
                let (x1, x2, x3) = (x[0], x[1], x[2]);
                dx[0] = add(0, -x2 - x3);
                dx[1] = add(1, x1 + ROSSLER_A * x2);
                dx[2] = add(2, ROSSLER_B + x3 * (x1 - ROSSLER_C));
            }
        }
    }

    /// Checked evaluation returning a fresh derivative vector.
    pub fn eval(
        &self,
        variant: Variant,
        state: &StateVector,
        drive: Option<(usize, f64)>,
    ) -> Result<StateVector> {
        state.check_dimension(self.dimension())?;
        state.check_finite()?;
        if let Some((eq, value)) = drive {
            if eq >= self.dimension() {
                return Err(Error::config(format!(
                    "drive equation {eq} out of range for {} (dimension {})",
                    self.name(),
                    self.dimension()
                )));
            }
            if !value.is_finite() {
                return Err(Error::NonFiniteState(vec![value]));
            }
        }
        let mut dx = vec![0.0; self.dimension()];
        self.eval_into(variant, state.t, &state.components, drive, &mut dx);
        Ok(StateVector::new(state.t, dx))
    }
}

impl FromStr for SystemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "duffing" => Ok(SystemSpec::duffing()),
            "lorenz" => Ok(SystemSpec::Lorenz),
            "rossler" | "rössler" => Ok(SystemSpec::Rossler),
            other => Err(Error::config(format!(
                "unknown system `{other}` (expected duffing, lorenz or rossler)"
            ))),
        }
    }
}

/// A point in state space at simulation time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub t: f64,
    pub components: Vec<f64>,
}

impl StateVector {
    pub fn new(t: f64, components: impl Into<Vec<f64>>) -> Self {
        StateVector { t, components: components.into() }
    }

    pub fn at_origin(components: impl Into<Vec<f64>>) -> Self {
        Self::new(0.0, components)
    }

    pub fn dimension(&self) -> usize {
        self.components.len()
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.components.iter().all(|c| c.is_finite())
    }

    fn check_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFiniteState(self.components.clone()))
        }
    }

    fn check_dimension(&self, expected: usize) -> Result<()> {
        if self.dimension() == expected {
            Ok(())
        } else {
            Err(Error::LengthMismatch { left: self.dimension(), right: expected })
        }
    }
}

/// Duffing derivative. `drive` is added to `x1'`, where a master's signal
/// enters when Duffing is the slave.
pub fn eval_duffing(
    state: &StateVector,
    params: DuffingParams,
    variant: Variant,
    drive: f64,
) -> Result<StateVector> {
    SystemSpec::Duffing(params).eval(variant, state, Some((0, drive)))
}

/// Lorenz derivative. `drive` is added to `y2'`.
pub fn eval_lorenz(state: &StateVector, variant: Variant, drive: f64) -> Result<StateVector> {
    SystemSpec::Lorenz.eval(variant, state, Some((1, drive)))
}

/// Rössler derivative (a = b = 0.2, c = 5.7). Rössler only ever drives.
pub fn eval_rossler(state: &StateVector) -> Result<StateVector> {
    SystemSpec::Rossler.eval(Variant::A, state, None)
}

/// A master driving a slave through `k * master[drive_source]`, added into
/// slave equation `drive_target`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledPair {
    pub master: SystemSpec,
    pub slave: SystemSpec,
    pub k: f64,
    pub drive_source: usize,
    pub drive_target: usize,
}

impl CoupledPair {
    pub fn new(
        master: SystemSpec,
        slave: SystemSpec,
        k: f64,
        drive_source: usize,
        drive_target: usize,
    ) -> Result<Self> {
        let pair = CoupledPair { master, slave, k, drive_source, drive_target };
        pair.validate()?;
        Ok(pair)
    }

    pub fn with_k(&self, k: f64) -> Result<Self> {
        let pair = CoupledPair { k, ..*self };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k.is_finite() && self.k >= 0.0) {
            return Err(Error::config(format!("coupling constant must be finite and >= 0, got {}", self.k)));
        }
        if self.drive_source >= self.master.dimension() {
            return Err(Error::config(format!(
                "drive source index {} out of range for master {} (dimension {})",
                self.drive_source,
                self.master.name(),
                self.master.dimension()
            )));
        }
        if self.drive_target >= self.slave.dimension() {
            return Err(Error::config(format!(
                "drive target index {} out of range for slave {} (dimension {})",
                self.drive_target,
                self.slave.name(),
                self.slave.dimension()
            )));
        }
        if !self.slave.has_variants() {
            return Err(Error::config(format!(
                "{} has no formulation variants and cannot be a slave",
                self.slave.name()
            )));
        }
        Ok(())
    }

    /// Coupling term for a given master source value.
    #[inline]
    pub fn drive(&self, source_value: f64) -> f64 {
        self.k * source_value
    }

    /// Stacked dimension of master plus `slaves` copies of the slave.
    pub fn stacked_dimension(&self, slaves: usize) -> usize {
        self.master.dimension() + slaves * self.slave.dimension()
    }

    /// Derivative of the stacked state `[master | slave_0 | slave_1 | ...]`.
    /// Every slave copy sees the same drive.
    #[inline]
    pub fn stacked_eval_into(&self, slave_variant: Variant, t: f64, x: &[f64], dx: &mut [f64]) {
        let n = self.master.dimension();
        let m = self.slave.dimension();
        let (xm, xs) = x.split_at(n);
        let (dm, ds) = dx.split_at_mut(n);
        self.master.eval_into(Variant::A, t, xm, None, dm);
        let drive = Some((self.drive_target, self.drive(xm[self.drive_source])));
        for (y, dy) in xs.chunks_exact(m).zip(ds.chunks_exact_mut(m)) {
            self.slave.eval_into(slave_variant, t, y, drive, dy);
        }
    }
}

/// Master and slave derivatives of a coupled pair at a common time.
pub fn coupled_derivative(
    pair: &CoupledPair,
    master_state: &StateVector,
    slave_state: &StateVector,
    slave_variant: Variant,
) -> Result<(StateVector, StateVector)> {
    pair.validate()?;
    let master_deriv = pair.master.eval(Variant::A, master_state, None)?;
    let drive = pair.drive(master_state.components[pair.drive_source]);
    let slave_at = StateVector::new(master_state.t, slave_state.components.clone());
    let slave_deriv = pair.slave.eval(slave_variant, &slave_at, Some((pair.drive_target, drive)))?;
    Ok((master_deriv, slave_deriv))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(c: &[f64]) -> StateVector {
        StateVector::at_origin(c.to_vec())
    }

    #[test]
    fn duffing_at_origin_is_pure_forcing() {
        for v in [Variant::A, Variant::B] {
            let p = DuffingParams { delta: 0.25, gamma: 0.3, omega: 1.0 };
            let d = eval_duffing(&sv(&[0.0, 0.0]), p, v, 0.0).unwrap();
            assert_eq!(d.components, vec![0.0, 0.3]);
        }
    }

    #[test]
    fn duffing_unforced_well_bottom_is_fixed() {
        let p = DuffingParams { gamma: 0.0, ..Default::default() };
        for v in [Variant::A, Variant::B] {
            let s = StateVector::new(12.345, vec![1.0, 0.0]);
            let d = eval_duffing(&s, p, v, 0.0).unwrap();
            assert_eq!(d.components, vec![0.0, 0.0]);
        }
    }

    #[test]
    fn duffing_drive_enters_first_equation() {
        let s = sv(&[0.5, -0.25]);
        let plain = eval_duffing(&s, DuffingParams::default(), Variant::B, 0.0).unwrap();
        let driven = eval_duffing(&s, DuffingParams::default(), Variant::B, 2.0).unwrap();
        assert_eq!(driven.components[0], plain.components[0] + 2.0);
        assert_eq!(driven.components[1], plain.components[1]);
    }

    #[test]
    fn lorenz_examples() {
        for v in [Variant::A, Variant::B] {
            let d = eval_lorenz(&sv(&[1.0, 1.0, 0.0]), v, 0.0).unwrap();
            assert_eq!(d.components[0], 0.0);
            let d = eval_lorenz(&sv(&[1.0, 1.0, 1.0]), v, 0.0).unwrap();
            assert_eq!(d.components, vec![0.0, 26.0, 1.0 - 8.0 / 3.0]);
        }
    }

    #[test]
    fn lorenz_variants_follow_written_order() {
        let s = sv(&[0.3, 0.7, 0.1]);
        let a = eval_lorenz(&s, Variant::A, 0.0).unwrap();
        let b = eval_lorenz(&s, Variant::B, 0.0).unwrap();
        assert_eq!(a.components[0], -10.0 * 0.3 + 10.0 * 0.7);
        assert_eq!(b.components[0], 10.0 * (0.7 - 0.3));
        assert_eq!(a.components[1..], b.components[1..]);
    }

    #[test]
    fn rossler_examples() {
        assert_eq!(eval_rossler(&sv(&[0.0, 0.0, 0.0])).unwrap().components, vec![0.0, 0.0, 0.2]);
        assert_eq!(eval_rossler(&sv(&[5.7, 0.0, 0.0])).unwrap().components, vec![0.0, 5.7, 0.2]);
        let d = eval_rossler(&sv(&[1.0, 1.0, 1.0])).unwrap().components;
        assert_eq!(d[0], -2.0);
        assert_eq!(d[1], 1.2);
        assert!((d[2] - (-4.5)).abs() < 1e-15);
    }

    #[test]
    fn non_finite_state_is_rejected() {
        let err = eval_lorenz(&sv(&[f64::NAN, 0.0, 0.0]), Variant::A, 0.0).unwrap_err();
        assert!(matches!(err, Error::NonFiniteState(_)));
        assert!(eval_rossler(&sv(&[0.0, f64::INFINITY, 0.0])).is_err());
        assert!(eval_duffing(&sv(&[0.0, 0.0]), DuffingParams::default(), Variant::A, f64::NAN).is_err());
    }

    #[test]
    fn pair_validation() {
        let lorenz_slave = CoupledPair::new(SystemSpec::duffing(), SystemSpec::Lorenz, 1.0, 0, 1);
        assert!(lorenz_slave.is_ok());
        assert!(CoupledPair::new(SystemSpec::duffing(), SystemSpec::Lorenz, 1.0, 2, 1).is_err());
        assert!(CoupledPair::new(SystemSpec::duffing(), SystemSpec::Lorenz, 1.0, 0, 3).is_err());
        assert!(CoupledPair::new(SystemSpec::duffing(), SystemSpec::Lorenz, -1.0, 0, 1).is_err());
        assert!(CoupledPair::new(SystemSpec::Lorenz, SystemSpec::Rossler, 1.0, 0, 1).is_err());
    }

    #[test]
    fn coupled_derivative_examples() {
        let pair = CoupledPair::new(SystemSpec::duffing(), SystemSpec::Lorenz, 40.0, 0, 1).unwrap();
        let m = sv(&[2.0, 0.0]);
        let s = sv(&[1.0, 1.0, 1.0]);
        let (_, ds) = coupled_derivative(&pair, &m, &s, Variant::A).unwrap();
        assert_eq!(ds.components[1], 26.0 + 80.0);

        let uncoupled = pair.with_k(0.0).unwrap();
        for v in [Variant::A, Variant::B] {
            let (_, ds) = coupled_derivative(&uncoupled, &m, &s, v).unwrap();
            let plain = SystemSpec::Lorenz.eval(v, &s, None).unwrap();
            assert_eq!(ds, plain);
        }
    }

    #[test]
    fn parse_names() {
        assert_eq!("Lorenz".parse::<SystemSpec>().unwrap(), SystemSpec::Lorenz);
        assert_eq!("rossler".parse::<SystemSpec>().unwrap(), SystemSpec::Rossler);
        assert!("chua".parse::<SystemSpec>().is_err());
        assert_eq!("b".parse::<Variant>().unwrap(), Variant::B);
    }
}
