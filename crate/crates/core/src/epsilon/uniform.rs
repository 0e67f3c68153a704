use crate::evolution::{exact_pure_frequency, simulate, Integrator, NonlinearityKind, NonlinearitySpec, SimulationConfig};
use crate::spectral::{DispersionParams, TorusGrid};
use crate::{Error, Result};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformFailureRow {
    pub eps: f64,
    pub eps_prime: f64,
    /// `sup_{t∈[0,T]} 2 - 2cos(t(ε² - ε'²))`.
    pub sup: f64,
    /// `π/|ε² - ε'²|` when it lies in `[0, T]`.
    pub first_maximizer: Option<f64>,
}

/// The squared `C_T H^s` distance between the two pure-frequency solutions
/// at `n = 1`, in units of `2π`.
pub fn uniform_failure_witness(horizon: f64, pairs: &[(f64, f64)]) -> Vec<UniformFailureRow> {
    pairs
        .iter()
        .map(|&(eps, eps_prime)| {
            let gap = (eps * eps - eps_prime * eps_prime).abs();
            let (sup, first_maximizer) = if gap == 0.0 {
                (0.0, None)
            } else if PI / gap <= horizon {
                (2.0, Some(PI / gap))
            } else {
                (2.0 - 2.0 * (horizon * gap).cos(), None)
            };
            UniformFailureRow { eps, eps_prime, sup, first_maximizer }
        })
        .collect()
}

/// Runs the solver for `u₀ = ⟨1⟩^{-s}e^{ix}` at ε and ε' and returns
/// `max_t |d(t)²/2π - (2 - 2cos(t(ε² - ε'²)))|` over the saved times.
pub fn uniform_failure_solver_check(eps: f64, eps_prime: f64, s: f64, horizon: f64, dt: f64) -> Result<f64> {
    let grid = TorusGrid::new(16)?;
    let spec = NonlinearitySpec::new(NonlinearityKind::N1, -1.0)?;
    let run = |e: f64| {
        let params = DispersionParams::real(e);
        let cfg = SimulationConfig::new(params, spec, grid, dt, horizon, Integrator::IntegratingFactor)?;
        let u0 = exact_pure_frequency(grid, 1, 1.0, s, &params, 0.0)?;
        simulate(&u0, &cfg)
    };
    let (a, b) = (run(eps)?, run(eps_prime)?);
    if a.times.len() != b.times.len() {
        return Err(Error::Dimension("trajectories sampled differently".into()));
    }
    let gap = eps * eps - eps_prime * eps_prime;
    Ok(a.states
        .iter()
        .zip(&b.states)
        .zip(&a.times)
        .map(|((x, y), &t)| {
            let d2 = x.distance(y, s).powi(2) / (2.0 * PI);
            (d2 - (2.0 - 2.0 * (t * gap).cos())).abs()
        })
        .fold(0.0, f64::max))
}
