use crate::spectral::{apply_semigroup, DispersionParams, SpectralField};
use crate::{Error, Result};
use num_complex::Complex64;

/// `Re(ε)·Im(ε) < 0`.
pub fn in_omega(eps: Complex64) -> bool {
    eps.re * eps.im < 0.0
}

fn flow(eps: Complex64, u0: &SpectralField, t: f64) -> Result<SpectralField> {
    apply_semigroup(u0, t, &DispersionParams::from_epsilon(eps))
}

/// `sup_{t∈[δ,T]} ‖(F(ε+h) - F(ε-h))/2h - (F(ε+ih) - F(ε-ih))/2ih‖_{H^s}`
/// for `F(ε) = S_ε(·)u₀`, with `t` on `n_times` equispaced points.
pub fn holomorphy_residual(
    eps: Complex64,
    h: f64,
    delta: f64,
    horizon: f64,
    u0: &SpectralField,
    s: f64,
    n_times: usize,
) -> Result<f64> {
    if !(h > 0.0) || !(delta > 0.0) || delta > horizon || n_times < 1 {
        return Err(Error::Domain(format!("need h > 0 and 0 < δ ≤ T, got h = {h}, δ = {delta}, T = {horizon}")));
    }
    let i = Complex64::new(0.0, 1.0);
    for p in [eps + h, eps - h, eps + i * h, eps - i * h] {
        if !in_omega(p) {
            return Err(Error::Domain(format!("stencil point {p} leaves Re(ε)·Im(ε) < 0")));
        }
    }
    let mut worst = 0.0f64;
    for j in 0..n_times {
        let t = if n_times == 1 { delta } else { delta + (horizon - delta) * j as f64 / (n_times - 1) as f64 };
        let real = &flow(eps + h, u0, t)? - &flow(eps - h, u0, t)?;
        let imag = &flow(eps + i * h, u0, t)? - &flow(eps - i * h, u0, t)?;
        let cr = real.scale(Complex64::new(1.0 / (2.0 * h), 0.0));
        let ci = imag.scale((2.0 * i * h).inv());
        worst = worst.max(cr.distance(&ci, s));
    }
    Ok(worst)
}

/// Residual at `h` and `h/2` and their ratio (4 for a second-order stencil).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolomorphyOrder {
    pub eps: Complex64,
    pub residual_h: f64,
    pub residual_half: f64,
    pub ratio: f64,
}

pub fn holomorphy_order(
    eps: Complex64,
    h: f64,
    delta: f64,
    horizon: f64,
    u0: &SpectralField,
    s: f64,
    n_times: usize,
) -> Result<HolomorphyOrder> {
    let a = holomorphy_residual(eps, h, delta, horizon, u0, s, n_times)?;
    let b = holomorphy_residual(eps, h / 2.0, delta, horizon, u0, s, n_times)?;
    Ok(HolomorphyOrder { eps, residual_h: a, residual_half: b, ratio: a / b })
}
