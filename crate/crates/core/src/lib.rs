//! Lower bound error (LBE) of pseudo-orbits in unidirectionally coupled
//! chaotic oscillators.
//!
//! A slave oscillator is driven by a master through an additive coupling
//! term `K * x_source`. The slave is integrated twice under two
//! algebraically equivalent formulations of its vector field; half the
//! absolute difference between the two pseudo-orbits is a lower bound on the
//! round-off error of at least one of them. Sweeping `K` shows how
//! generalized synchronization changes the growth of that bound.
//!
//! Modules:
//! - [`dynamics`]: Duffing, Lorenz and Rössler fields and their formulation variants.
//! - [`integrator`]: fixed-step RK4 producing pseudo-orbits.
//! - [`lbe`]: LBE series and threshold-crossing metrics.
//! - [`sync`]: auxiliary-system test for generalized synchronization.
//! - [`sweep`]: coupling-constant campaigns and the built-in case studies.
//! - [`csv`]: CSV schemas and the gnuplot script generator.

pub mod csv;
pub mod dynamics;
pub mod error;
pub mod integrator;
pub mod lbe;
pub mod sweep;
pub mod sync;

pub use dynamics::{CoupledPair, DuffingParams, StateVector, SystemSpec, Variant};
pub use error::{Error, Result};
pub use integrator::{IntegrationConfig, PseudoOrbit};
pub use lbe::{CrossingMetric, LbeSeries, PairIcs};
pub use sweep::{builtin_case_study, run_sweep, CaseStudy, SweepPlan, SweepRecord, SweepResult};
pub use sync::{SyncSettings, SyncStatus, SyncVerdict};
