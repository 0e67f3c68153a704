use crate::evolution::{exact_pure_frequency, simulate, Integrator, NonlinearityKind, NonlinearitySpec, SimulationConfig};
use crate::spectral::{DispersionParams, TorusGrid};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Norms in units of `√(2π)`: the datum `k⟨n⟩^{-s}e^{inx}` has norm `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InflationRow {
    pub n: i64,
    pub k_n: f64,
    pub initial_norm: f64,
    /// `ln(k_n) + βTn⁴`; the final norm itself overflows quickly.
    pub log_final_norm: f64,
}

impl InflationRow {
    pub fn final_norm(&self) -> f64 {
        self.log_final_norm.exp()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InflationTable {
    pub beta: f64,
    pub alpha: f64,
    pub horizon: f64,
    pub s: f64,
    pub rows: Vec<InflationRow>,
}

impl InflationTable {
    /// First row with initial norm `< δ` and final norm `> 1/δ`.
    pub fn witness(&self, delta: f64) -> Option<&InflationRow> {
        self.rows.iter().find(|r| r.initial_norm < delta && r.log_final_norm > (1.0 / delta).ln())
    }
}

/// Closed-form pure-frequency norms at `t = 0` and `t = T` for
/// `ε² = α + iβ`, `β > 0`, along the amplitudes `k_n`.
pub fn norm_inflation_table(
    alpha: f64,
    beta: f64,
    horizon: f64,
    s: f64,
    k_sequence: impl Fn(i64) -> f64,
    ns: impl IntoIterator<Item = i64>,
) -> Result<InflationTable> {
    if !(beta > 0.0) {
        return Err(Error::Domain(format!("norm inflation needs β > 0, got {beta}")));
    }
    if !(horizon > 0.0) {
        return Err(Error::Domain(format!("horizon must be positive, got {horizon}")));
    }
    let rows = ns
        .into_iter()
        .map(|n| {
            let k_n = k_sequence(n);
            InflationRow { n, k_n, initial_norm: k_n, log_final_norm: k_n.ln() + beta * horizon * (n as f64).powi(4) }
        })
        .collect();
    Ok(InflationTable { beta, alpha, horizon, s, rows })
}

/// Relative gap between the solver's final `H^s` norm and the closed form
/// for one small-`n` row.
pub fn inflation_solver_check(alpha: f64, beta: f64, n: i64, k: f64, s: f64, horizon: f64, dt: f64) -> Result<f64> {
    let params = DispersionParams::from_eps2(Complex64::new(alpha, beta));
    let grid = TorusGrid::containing(4 * n.unsigned_abs() as usize);
    let spec = NonlinearitySpec::new(NonlinearityKind::N1, -1.0)?;
    let cfg = SimulationConfig::new(params, spec, grid, dt, horizon, Integrator::IntegratingFactor)?
        .with_hs_exponents(vec![s]);
    let u0 = exact_pure_frequency(grid, n, k, s, &params, 0.0)?;
    let traj = simulate(&u0, &cfg)?;
    if let Some(d) = traj.divergence {
        return Err(Error::Divergence { time: d.time, sup: d.sup });
    }
    let solver = traj.final_state().sobolev_norm(s) / (2.0 * PI).sqrt();
    let exact = k * (beta * horizon * (n as f64).powi(4)).exp();
    Ok((solver - exact).abs() / exact)
}
