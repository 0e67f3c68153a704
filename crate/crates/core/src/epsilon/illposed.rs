use crate::evolution::{eval_nonlinearity, exact_pure_frequency, NonlinearityKind, NonlinearitySpec};
use crate::spectral::{japanese, DispersionParams, SpectralField, TorusGrid};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// One member of the pure-frequency family separating two close data.
///
/// Norms and distances are in units of `‖⟨n⟩^{-s}e^{inx}‖_{H^s} = √(2π)`, so
/// the datum `k⟨n⟩^{-s}e^{inx}` has norm exactly `k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IllposednessWitness {
    pub n: i64,
    pub k: f64,
    /// `(k² + π⟨n⟩^{2s}/t)^{1/2}`.
    pub k_n: f64,
    pub initial_distance: f64,
    /// `t⟨n⟩^{-2s}(k_n² - k²)`, equal to π by construction.
    pub phase_gap: f64,
    /// `k|e^{iφ} - 1| - |k_n - k|`.
    pub lower_bound: f64,
    pub distance: f64,
}

fn check(s: f64, t: f64, n: i64) -> Result<()> {
    if s >= 0.0 {
        return Err(Error::Domain(format!("the construction needs s < 0, got s = {s}")));
    }
    if !(t > 0.0) || n < 1 {
        return Err(Error::Domain(format!("need t > 0 and n ≥ 1, got t = {t}, n = {n}")));
    }
    Ok(())
}

pub fn witness_k_n(n: i64, k: f64, s: f64, t: f64) -> f64 {
    (k * k + PI * japanese(n as f64).powf(2.0 * s) / t).sqrt()
}

/// Evaluates the witness from the closed-form solutions for real ε.
pub fn illposedness_witness(n: i64, k: f64, s: f64, t: f64, params: &DispersionParams) -> Result<IllposednessWitness> {
    check(s, t, n)?;
    if !params.has_real_epsilon() || params.is_monomial() {
        return Err(Error::Domain("the witness uses real ε".into()));
    }
    let k_n = witness_k_n(n, k, s, t);
    let grid = TorusGrid::containing(n as usize);
    let unit = (2.0 * PI).sqrt();
    let a0 = exact_pure_frequency(grid, n, k, s, params, 0.0)?;
    let b0 = exact_pure_frequency(grid, n, k_n, s, params, 0.0)?;
    let a = exact_pure_frequency(grid, n, k, s, params, t)?;
    let b = exact_pure_frequency(grid, n, k_n, s, params, t)?;
    let weight = japanese(n as f64).powf(-2.0 * s);
    let phase_gap = t * weight * (k_n * k_n - k * k);
    let lower_bound = k * (Complex64::new(0.0, phase_gap).exp() - 1.0).norm() - (k_n - k).abs();
    Ok(IllposednessWitness {
        n,
        k,
        k_n,
        initial_distance: a0.distance(&b0, s) / unit,
        phase_gap,
        lower_bound,
        distance: a.distance(&b, s) / unit,
    })
}

/// Smallest `n₀` with `|k_n - k| ≤ tol` for every `n ≥ n₀` (`k_n` decreases
/// in `n`).
pub fn illposedness_threshold(k: f64, s: f64, t: f64, tol: f64) -> Result<i64> {
    check(s, t, 1)?;
    let gap = |n: i64| witness_k_n(n, k, s, t) - k;
    if gap(1) <= tol {
        return Ok(1);
    }
    let mut hi = 2i64;
    while gap(hi) > tol {
        hi *= 2;
        if hi > 1 << 50 {
            return Err(Error::Domain(format!("|k_n - k| stays above {tol}")));
        }
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if gap(mid) > tol {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// `‖i∂ₜu - w(D)u - N(u)‖_{H^{s-4}} / ‖u‖_{H^s}` for the closed-form pure
/// frequency (N1, `μ = -1`), with `∂ₜ` from a five-point stencil.
pub fn pure_frequency_residual(n: i64, k: f64, s: f64, params: &DispersionParams, t: f64) -> Result<f64> {
    // twice the band so the dealiasing cutoff keeps mode n
    let grid = TorusGrid::containing(2 * n.unsigned_abs() as usize);
    let spec = NonlinearitySpec { kind: NonlinearityKind::N1, mu: -1.0 };
    let w = params.symbol(n);
    let modulus2 = k * k * japanese(n as f64).powf(-2.0 * s) * (2.0 * w.im * t).exp();
    let h = 3e-3 / (1.0 + w.norm() + modulus2);
    let u = |t: f64| exact_pure_frequency(grid, n, k, s, params, t);
    let (um2, um1, u0, up1, up2) = (u(t - 2.0 * h)?, u(t - h)?, u(t)?, u(t + h)?, u(t + 2.0 * h)?);
    let nl = eval_nonlinearity(&u0, spec, params)?;
    let c = |f: &SpectralField, kk: i64| f.coeff(kk);
    let residual = SpectralField::from_fn(grid, |kk| {
        let dt = (c(&um2, kk) - 8.0 * c(&um1, kk) + 8.0 * c(&up1, kk) - c(&up2, kk)) / (12.0 * h);
        Complex64::new(0.0, 1.0) * dt - params.symbol(kk) * c(&u0, kk) - c(&nl, kk)
    });
    Ok(residual.sobolev_norm(s - 4.0) / u0.sobolev_norm(s))
}
