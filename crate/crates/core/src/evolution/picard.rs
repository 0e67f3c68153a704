use super::config::{ContractionReport, SimulationConfig, Trajectory};
use super::integrator::{grid_mismatch, time_steps};
use super::nonlinearity::Rhs;
use crate::spectral::{semigroup_multiplier, Regime, SpectralField};
use crate::{Error, Result};
use num_complex::Complex64;

/// `min(1, 0.1·(1+‖u₀‖_{H^s})^{-2})`, the first horizon tried by
/// [`picard_with_auto_horizon`].
pub fn picard_initial_horizon(u0: &SpectralField, s: f64) -> f64 {
    (0.1 * (1.0 + u0.sobolev_norm(s)).powi(-2)).min(1.0)
}

/// Cumulative integrals `I_i = ∫₀^{t_i} g` on a uniform grid, fourth order:
/// interior intervals use the centred cubic through four neighbours, the
/// two end intervals the one-sided cubic.
fn cumulative_integral(g: &[Vec<Complex64>], h: f64) -> Vec<Vec<Complex64>> {
    let m = g.len() - 1;
    let n = g[0].len();
    let w = h / 24.0;
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; m + 1];
    for i in 0..m {
        let (idx, coef): ([usize; 4], [f64; 4]) = if i == 0 {
            ([0, 1, 2, 3], [9.0, 19.0, -5.0, 1.0])
        } else if i == m - 1 {
            ([m - 3, m - 2, m - 1, m], [1.0, -5.0, 19.0, 9.0])
        } else {
            ([i - 1, i, i + 1, i + 2], [-1.0, 13.0, 13.0, -1.0])
        };
        let (prev, next) = out.split_at_mut(i + 1);
        let (prev, next) = (&prev[i], &mut next[0]);
        for k in 0..n {
            let mut acc = prev[k];
            for (&j, &c) in idx.iter().zip(&coef) {
                acc += g[j][k] * (c * w);
            }
            next[k] = acc;
        }
    }
    out
}

/// Fixed point of the Duhamel map
/// `Γu(t) = E(t)u₀ - i∫₀^t E(t-τ)N(u(τ))dτ` on the time grid of `config`,
/// iterated in the discrete `C⁰_t H^s` norm (`s` the largest configured
/// exponent). The twisted integrand `E(-τ)N(u(τ))` is integrated by a
/// fourth-order cumulative rule.
///
/// Only the dispersive regime is supported: off it `E(-τ)` grows like
/// `e^{|β|τk⁴}` and the twisted form loses all precision.
pub fn picard_iterate(u0: &SpectralField, config: &SimulationConfig, tol: f64, max_iter: usize) -> Result<Trajectory> {
    config.validate()?;
    if u0.grid() != config.grid {
        return Err(grid_mismatch(u0, config));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if config.params.regime() != Regime::Dispersive {
        return Err(Error::Regime(format!(
            "Picard iteration needs the dispersive regime, got {:?}",
            config.params.regime()
        )));
    }
    let rhs = Rhs::new(config.nonlinearity, &config.params, config.grid, config.k_cut())?;
    let s = config.picard_exponent();
    let (mut m, mut h) = time_steps(config.dt, config.horizon);
    if m < 3 {
        m = 3;
        h = config.horizon / 3.0;
    }
    let times: Vec<f64> = (0..=m).map(|i| if i == m { config.horizon } else { i as f64 * h }).collect();
    let mut base = u0.clone();
    if let Some(c) = config.k_cut() {
        base.truncate(c);
    }
    let ks: Vec<i64> = config.grid.wavenumbers().collect();
    let prop: Vec<Vec<Complex64>> = times
        .iter()
        .map(|&t| ks.iter().map(|&k| semigroup_multiplier(k, t, &config.params)).collect())
        .collect();
    let b = base.coeffs();
    let mut iterate: Vec<Vec<Complex64>> =
        prop.iter().map(|e| e.iter().zip(b).map(|(x, y)| x * y).collect()).collect();

    let mi = Complex64::new(0.0, -1.0);
    let mut diffs: Vec<f64> = Vec::new();
    let mut converged = false;
    while diffs.len() < max_iter {
        let g: Vec<Vec<Complex64>> = iterate
            .iter()
            .zip(&prop)
            .map(|(u, e)| rhs.eval(u).iter().zip(e).map(|(n, e)| n * e.conj()).collect())
            .collect();
        let integral = cumulative_integral(&g, h);
        let next: Vec<Vec<Complex64>> = prop
            .iter()
            .zip(&integral)
            .map(|(e, int)| (0..b.len()).map(|k| e[k] * (b[k] + mi * int[k])).collect())
            .collect();
        let d = next
            .iter()
            .zip(&iterate)
            .map(|(x, y)| hs_distance(&ks, x, y, s))
            .fold(0.0, f64::max);
        iterate = next;
        diffs.push(d);
        if !d.is_finite() {
            break;
        }
        if d < tol {
            converged = true;
            break;
        }
        let n = diffs.len();
        if n >= 4 && diffs[n - 1] > diffs[n - 2] && diffs[n - 2] > diffs[n - 3] {
            break;
        }
    }
    let ratio = observed_ratio(&diffs, tol);
    if !converged {
        return Err(Error::NonContractive { ratio, iterations: diffs.len() });
    }

    let mut traj = Trajectory::new(config.hs_exponents.clone());
    for (i, coeffs) in iterate.into_iter().enumerate() {
        if i % config.save_every == 0 || i == m {
            let state = SpectralField::from_coeffs(config.grid, coeffs)?;
            traj.push(times[i], state, config.nonlinearity, &config.params);
        }
    }
    traj.contraction = Some(ContractionReport {
        ratio,
        iterations: diffs.len(),
        horizon: config.horizon,
        final_difference: *diffs.last().unwrap_or(&0.0),
    });
    Ok(traj)
}

fn hs_distance(ks: &[i64], a: &[Complex64], b: &[Complex64], s: f64) -> f64 {
    let sum: f64 = ks
        .iter()
        .zip(a.iter().zip(b))
        .map(|(&k, (x, y))| (1.0 + (k * k) as f64).powf(s) * (x - y).norm_sqr())
        .sum();
    (sum / (2.0 * std::f64::consts::PI)).sqrt()
}

/// Largest successive ratio `d_j/d_{j-1}`, ignoring the first step (which
/// measures the distance from the free flow) and steps already below `tol`,
/// where rounding dominates.
fn observed_ratio(diffs: &[f64], tol: f64) -> f64 {
    let ratios: Vec<f64> = diffs
        .windows(2)
        .enumerate()
        .filter(|(j, w)| *j >= 1 && w[1] >= tol && w[0] > 0.0)
        .map(|(_, w)| w[1] / w[0])
        .collect();
    if let Some(max) = ratios.iter().copied().reduce(f64::max) {
        return max;
    }
    match diffs {
        [a, b, ..] if *a > 0.0 => b / a,
        _ => 0.0,
    }
}

/// Picard iteration from `T = min(1, 0.1(1+‖u₀‖_{H^s})^{-2})`, halving the
/// horizon until the observed contraction ratio drops below 0.9.
pub fn picard_with_auto_horizon(
    u0: &SpectralField,
    config: &SimulationConfig,
    tol: f64,
    max_iter: usize,
) -> Result<Trajectory> {
    let mut horizon = picard_initial_horizon(u0, config.picard_exponent());
    let mut last_err = None;
    for _ in 0..40 {
        let cfg = config.clone().with_horizon(horizon)?;
        match picard_iterate(u0, &cfg, tol, max_iter) {
            Ok(t) if t.contraction.is_some_and(|c| c.ratio < 0.9) => return Ok(t),
            Ok(t) => {
                let c = t.contraction.expect("picard trajectories carry a certificate");
                last_err = Some(Error::NonContractive { ratio: c.ratio, iterations: c.iterations });
            }
            Err(e @ Error::NonContractive { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
        horizon /= 2.0;
    }
    Err(last_err.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cumulative_rule_is_exact_on_cubics() {
        let h = 0.1;
        let ts: Vec<f64> = (0..=7).map(|i| i as f64 * h).collect();
        let g: Vec<Vec<Complex64>> = ts.iter().map(|t| vec![Complex64::new(1.0 - 2.0 * t + 3.0 * t * t * t, t * t)]).collect();
        let int = cumulative_integral(&g, h);
        for (i, t) in ts.iter().enumerate() {
            let exact = Complex64::new(t - t * t + 0.75 * t.powi(4), t.powi(3) / 3.0);
            assert!((int[i][0] - exact).norm() < 1e-14, "i={i}");
        }
    }
}
