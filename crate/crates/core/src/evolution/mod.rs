//! Nonlinear evolution on the torus.
//!
//! Two integrators share one pseudospectral right-hand side: a Lawson
//! (integrating factor) RK4 stepper and a fixed-point iteration of the
//! Duhamel map on a time grid. Diagnostics and closed-form single-mode
//! solutions live alongside.

mod config;
mod diagnostics;
mod exact;
mod integrator;
mod nonlinearity;
mod picard;

pub use config::{ContractionReport, DealiasRatio, DivergenceReport, Integrator, SimulationConfig, Trajectory, DIVERGENCE_THRESHOLD};
pub use diagnostics::{energy, energy_for, mass, smooth_random_datum};
pub use exact::{exact_pure_frequency, exact_pure_frequency_for};
pub use integrator::{simulate, step_integrating_factor, Stepper};
pub use nonlinearity::{eval_nonlinearity, NonlinearityKind, NonlinearitySpec};
pub use picard::{picard_iterate, picard_with_auto_horizon, picard_initial_horizon};
