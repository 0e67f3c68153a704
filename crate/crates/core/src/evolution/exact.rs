use super::nonlinearity::{NonlinearityKind, NonlinearitySpec};
use crate::spectral::{japanese, Regime, DispersionParams, SpectralField, TorusGrid};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Single-mode solution `u = a(t)e^{inx}` of the N1 flow with `μ = -1` and
/// `a(0) = k⟨n⟩^{-s}`.
///
/// `|a(t)| = k⟨n⟩^{-s}e^{βtn⁴}`. For real ε the phase is
/// `-(αn⁴+n²-k²⟨n⟩^{-2s})t`; for `β ≠ 0` the nonlinear phase accumulates
/// the growing modulus, `∫₀^t|a|² = k²⟨n⟩^{-2s}(e^{2βn⁴t}-1)/(2βn⁴)`.
pub fn exact_pure_frequency(
    grid: TorusGrid,
    n: i64,
    k: f64,
    s: f64,
    params: &DispersionParams,
    t: f64,
) -> Result<SpectralField> {
    let spec = NonlinearitySpec { kind: NonlinearityKind::N1, mu: -1.0 };
    let a0 = Complex64::new(k * japanese(n as f64).powf(-s), 0.0);
    exact_pure_frequency_for(grid, spec, n, a0, params, t)
}

/// Single-mode solution for any of the nonlinearities: with `p` the degree,
/// `a(t) = a₀ e^{-itw(n)} e^{-iμ∫₀^t|a|^{p-1}}`.
pub fn exact_pure_frequency_for(
    grid: TorusGrid,
    spec: NonlinearitySpec,
    n: i64,
    a0: Complex64,
    params: &DispersionParams,
    t: f64,
) -> Result<SpectralField> {
    if t < 0.0 && matches!(params.regime(), Regime::Dissipative | Regime::BlowUp) {
        return Err(Error::Regime(format!("t = {t} < 0 with Im(ε²) = {}", params.beta())));
    }
    spec.validate(params)?;
    let w = params.symbol(n);
    let linear = Complex64::new(t * w.im, -t * w.re).exp();
    let p1 = (spec.kind.degree() - 1) as f64;
    let rate = p1 * w.im;
    let growth = if rate * t == 0.0 { t } else { t * (rate * t).exp_m1() / (rate * t) };
    let nonlinear_phase = spec.mu * a0.norm().powf(p1) * growth;
    let a = a0 * linear * Complex64::new(0.0, -nonlinear_phase).exp();
    SpectralField::single_mode(grid, n, a * 2.0 * PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initial_datum() {
        let g = TorusGrid::new(32).unwrap();
        let p = DispersionParams::real(0.9);
        let u = exact_pure_frequency(g, 3, 0.4, 0.5, &p, 0.0).unwrap();
        assert!((u.coeff(3).re - 2.0 * PI * 0.4 * 10f64.powf(-0.25)).abs() < 1e-14);
        assert_eq!(u.coeff(3).im, 0.0);
    }

    #[test]
    fn modulus_law() {
        let g = TorusGrid::new(32).unwrap();
        let real = DispersionParams::real(1.1);
        let c0 = exact_pure_frequency(g, 2, 0.7, 1.0, &real, 0.0).unwrap().coeff(2).norm();
        for t in [0.3, 1.0, 5.0] {
            let c = exact_pure_frequency(g, 2, 0.7, 1.0, &real, t).unwrap().coeff(2).norm();
            assert!((c - c0).abs() < 1e-13);
        }
        let blow = DispersionParams::from_eps2(Complex64::new(0.2, 0.01));
        let (n, tt) = (3i64, 0.5);
        let c = exact_pure_frequency(g, n, 0.7, 1.0, &blow, tt).unwrap().coeff(n).norm();
        let expected = 2.0 * PI * 0.7 * 10f64.powf(-0.5) * (0.01 * tt * 81.0f64).exp();
        assert!((c - expected).abs() < 1e-12 * expected);
    }

    #[test]
    fn real_epsilon_phase_matches_formula() {
        let g = TorusGrid::new(32).unwrap();
        let (eps, n, k, s, t) = (0.6f64, 4i64, 0.3f64, -0.5f64, 0.77f64);
        let p = DispersionParams::real(eps);
        let u = exact_pure_frequency(g, n, k, s, &p, t).unwrap();
        let nf = n as f64;
        let amp = k * japanese(nf).powf(-s);
        let phase = -t * (eps * eps * nf.powi(4) + nf * nf - amp * amp);
        let expected = Complex64::from_polar(2.0 * PI * amp, phase);
        assert!((u.coeff(n) - expected).norm() < 1e-13);
    }

    #[test]
    fn ode_residual_off_the_real_axis() {
        // i a' = w(n) a - |a|²a, checked by central differences
        let g = TorusGrid::new(32).unwrap();
        let p = DispersionParams::from_eps2(Complex64::new(0.3, 0.002));
        let n = 2i64;
        let a = |t: f64| exact_pure_frequency(g, n, 0.8, 0.0, &p, t).unwrap().coeff(n) / (2.0 * PI);
        let h = 1e-4;
        for t in [0.1, 0.4, 0.9] {
            let deriv = (a(t + h) - a(t - h)) / (2.0 * h);
            let v = a(t);
            let resid = Complex64::new(0.0, 1.0) * deriv - p.symbol(n) * v + v * v.norm_sqr();
            assert!(resid.norm() < 1e-6, "t={t} resid={resid}");
        }
    }
}
