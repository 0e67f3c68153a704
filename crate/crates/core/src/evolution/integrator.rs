use super::config::{DivergenceReport, Integrator, SimulationConfig, Trajectory, DIVERGENCE_THRESHOLD};
use super::nonlinearity::Rhs;
use crate::spectral::{semigroup_multiplier, Regime, SpectralField};
use crate::{Error, Result};
use num_complex::Complex64;

/// Lawson RK4 with a fixed step: the linear part is integrated exactly by
/// `E(t) = e^{-itw(D)}` and the classical RK4 weights act on the twisted
/// nonlinearity `e^{itw}(-iN)(e^{-itw}·)`.
#[derive(Debug, Clone)]
pub struct Stepper {
    rhs: Rhs,
    dt: f64,
    e_half: Vec<Complex64>,
    e_full: Vec<Complex64>,
}

impl Stepper {
    pub fn new(config: &SimulationConfig, dt: f64) -> Result<Self> {
        if dt < 0.0 && matches!(config.params.regime(), Regime::Dissipative | Regime::BlowUp) {
            return Err(Error::Regime(format!(
                "negative step {dt} with Im(ε²) = {}",
                config.params.beta()
            )));
        }
        let rhs = Rhs::new(config.nonlinearity, &config.params, config.grid, config.k_cut())?;
        let ks: Vec<i64> = config.grid.wavenumbers().collect();
        let e_half = ks.iter().map(|&k| semigroup_multiplier(k, dt / 2.0, &config.params)).collect();
        let e_full = ks.iter().map(|&k| semigroup_multiplier(k, dt, &config.params)).collect();
        Ok(Stepper { rhs, dt, e_half, e_full })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn f(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mi = Complex64::new(0.0, -1.0);
        let mut out = self.rhs.eval(v);
        out.iter_mut().for_each(|c| *c *= mi);
        out
    }

    fn advance(&self, u: &[Complex64]) -> Vec<Complex64> {
        let h = self.dt;
        let (eh, ef) = (&self.e_half, &self.e_full);
        let n = u.len();
        let k1 = self.f(u);
        let a: Vec<Complex64> = (0..n).map(|i| eh[i] * (u[i] + k1[i] * (h / 2.0))).collect();
        let k2 = self.f(&a);
        let b: Vec<Complex64> = (0..n).map(|i| eh[i] * u[i] + k2[i] * (h / 2.0)).collect();
        let k3 = self.f(&b);
        let c: Vec<Complex64> = (0..n).map(|i| ef[i] * u[i] + eh[i] * k3[i] * h).collect();
        let k4 = self.f(&c);
        (0..n)
            .map(|i| ef[i] * u[i] + (ef[i] * k1[i] + eh[i] * (k2[i] + k3[i]) * 2.0 + k4[i]) * (h / 6.0))
            .collect()
    }

    /// One step. A sup of coefficient moduli above the divergence threshold
    /// (or a non-finite value) is reported as [`Error::Divergence`] with
    /// `time` equal to the step length.
    pub fn step(&self, state: &SpectralField) -> Result<SpectralField> {
        let next = SpectralField::from_coeffs(state.grid(), self.advance(state.coeffs()))?;
        check_divergence(&next, self.dt)?;
        Ok(next)
    }
}

pub(crate) fn check_divergence(state: &SpectralField, time: f64) -> Result<()> {
    let sup = state.sup_coeff();
    if !sup.is_finite() || sup > DIVERGENCE_THRESHOLD {
        return Err(Error::Divergence { time, sup });
    }
    Ok(())
}

/// Advances `state` by `dt` (negative `dt` runs backward, dispersive regime
/// only).
pub fn step_integrating_factor(state: &SpectralField, dt: f64, config: &SimulationConfig) -> Result<SpectralField> {
    if state.grid() != config.grid {
        return Err(grid_mismatch(state, config));
    }
    Stepper::new(config, dt)?.step(state)
}

pub(crate) fn grid_mismatch(state: &SpectralField, config: &SimulationConfig) -> Error {
    Error::Dimension(format!(
        "state on {} points, config grid has {}",
        state.grid().num_points(),
        config.grid.num_points()
    ))
}

/// Number of steps and their length covering `[0, horizon]`.
pub(crate) fn time_steps(dt: f64, horizon: f64) -> (usize, f64) {
    let ratio = horizon / dt;
    let m = if (ratio - ratio.round()).abs() < 1e-9 * ratio.max(1.0) { ratio.round() } else { ratio.ceil() };
    let m = (m as usize).max(1);
    (m, horizon / m as f64)
}

/// Runs the configured integrator on `[0, T]`. The datum is first projected
/// onto the dealiased band. A divergence ends the run early and is recorded
/// in [`Trajectory::divergence`] rather than returned as an error.
pub fn simulate(u0: &SpectralField, config: &SimulationConfig) -> Result<Trajectory> {
    config.validate()?;
    if u0.grid() != config.grid {
        return Err(grid_mismatch(u0, config));
    }
    if config.integrator == Integrator::PicardDuhamel {
        return super::picard_iterate(u0, config, 1e-12, 200);
    }
    let mut state = u0.clone();
    if let Some(c) = config.k_cut() {
        state.truncate(c);
    }
    let (steps, h) = time_steps(config.dt, config.horizon);
    let stepper = Stepper::new(config, h)?;
    let mut traj = Trajectory::new(config.hs_exponents.clone());
    traj.push(0.0, state.clone(), config.nonlinearity, &config.params);
    for i in 1..=steps {
        let t = if i == steps { config.horizon } else { i as f64 * h };
        match stepper.step(&state) {
            Ok(next) => state = next,
            Err(Error::Divergence { sup, .. }) => {
                traj.divergence = Some(DivergenceReport { time: t, sup });
                break;
            }
            Err(e) => return Err(e),
        }
        if i % config.save_every == 0 || i == steps {
            traj.push(t, state.clone(), config.nonlinearity, &config.params);
        }
    }
    Ok(traj)
}
