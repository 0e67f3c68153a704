use super::nonlinearity::{NonlinearityKind, NonlinearitySpec};
use crate::rng::Stream;
use crate::spectral::{apply_smoothing_j, forward_transform, DispersionParams, SpectralField, TorusGrid};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `‖u‖²_{L²}`.
pub fn mass(u: &SpectralField) -> f64 {
    let l2 = u.l2_norm();
    l2 * l2
}

/// Hamiltonian of the N1 flow with `μ = -1`:
/// `(ε²/2)‖u_xx‖² + (1/2)‖u_x‖² - (1/4)∫J_ε(|u|²)|u|²`.
pub fn energy(u: &SpectralField, params: &DispersionParams) -> Result<f64> {
    energy_for(u, NonlinearitySpec { kind: NonlinearityKind::N1, mu: -1.0 }, params)
}

/// Conserved energy for any of the three nonlinearities. The potential
/// terms are `(μ/4)∫J_ε(|u|²)|u|²`, `(μ/4)∫|u|⁴` and `(μ/6)∫|u|⁶`, each by
/// quadrature on the grid.
pub fn energy_for(u: &SpectralField, spec: NonlinearitySpec, params: &DispersionParams) -> Result<f64> {
    if !params.has_real_epsilon() {
        return Err(Error::Domain(format!(
            "energy is defined for real ε only (ε² = {})",
            params.eps2()
        )));
    }
    let kinetic: f64 = u
        .modes()
        .map(|(k, c)| params.symbol_real(k as f64) * c.norm_sqr())
        .sum::<f64>()
        / (4.0 * PI);
    if !spec.is_active() {
        return Ok(kinetic);
    }
    let grid = u.grid();
    let h = grid.spacing();
    let samples = u.to_samples();
    let potential = match spec.kind {
        NonlinearityKind::N1 => {
            let rho: Vec<Complex64> = samples.iter().map(|c| Complex64::new(c.norm_sqr(), 0.0)).collect();
            let j = apply_smoothing_j(&forward_transform(grid, &rho)?, params)?.to_samples();
            spec.mu / 4.0 * h * samples.iter().zip(&j).map(|(a, r)| r.re * a.norm_sqr()).sum::<f64>()
        }
        NonlinearityKind::N2 => spec.mu / 4.0 * h * samples.iter().map(|a| a.norm_sqr().powi(2)).sum::<f64>(),
        NonlinearityKind::N3 => spec.mu / 6.0 * h * samples.iter().map(|a| a.norm_sqr().powi(3)).sum::<f64>(),
    };
    Ok(kinetic + potential)
}

/// Random datum with Gaussian spectral envelope `e^{-k²/2}`, normalised to
/// the requested `H¹` norm.
pub fn smooth_random_datum(grid: TorusGrid, seed: u64, h1_norm: f64) -> SpectralField {
    let mut rng = Stream::new(seed, 0);
    let nyq = grid.max_frequency();
    let raw = SpectralField::from_fn(grid, |k| {
        let z = rng.complex_normal();
        if k.abs() >= nyq {
            Complex64::new(0.0, 0.0)
        } else {
            z * (-(k as f64).powi(2) / 2.0).exp()
        }
    });
    let norm = raw.sobolev_norm(1.0);
    raw.scale(Complex64::new(h1_norm / norm, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_examples() {
        let g = TorusGrid::new(16).unwrap();
        assert_eq!(mass(&SpectralField::zeros(g)), 0.0);
        let u = SpectralField::single_mode(g, 5, Complex64::new(2.0 * PI, 0.0)).unwrap();
        assert!((mass(&u) - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn energy_examples() {
        let g = TorusGrid::new(16).unwrap();
        let p = DispersionParams::real(0.7);
        assert_eq!(energy(&SpectralField::zeros(g), &p).unwrap(), 0.0);
        let c = Complex64::new(0.6, 0.3);
        let u = SpectralField::single_mode(g, 0, c * 2.0 * PI).unwrap();
        let e = energy(&u, &p).unwrap();
        assert!((e + 0.25 * 2.0 * PI * c.norm_sqr().powi(2)).abs() < 1e-13);
        let complex = DispersionParams::from_eps2(Complex64::new(1.0, 0.1));
        assert!(matches!(energy(&u, &complex), Err(Error::Domain(_))));
    }

    #[test]
    fn kinetic_term_of_a_single_mode() {
        // û(n) = 2π a: (1/2)(ε²n⁴+n²)·2π|a|²
        let g = TorusGrid::new(32).unwrap();
        let (eps, n, a) = (0.5f64, 3i64, 0.01f64);
        let u = SpectralField::single_mode(g, n, Complex64::new(2.0 * PI * a, 0.0)).unwrap();
        let spec = NonlinearitySpec::disabled(NonlinearityKind::N2);
        let e = energy_for(&u, spec, &DispersionParams::real(eps)).unwrap();
        let nf = n as f64;
        let expected = 0.5 * (eps * eps * nf.powi(4) + nf * nf) * 2.0 * PI * a * a;
        assert!((e - expected).abs() < 1e-14);
    }

    #[test]
    fn datum_normalisation() {
        let g = TorusGrid::new(64).unwrap();
        let u = smooth_random_datum(g, 9, 0.8);
        assert!((u.sobolev_norm(1.0) - 0.8).abs() < 1e-14);
        assert_eq!(u.coeffs(), smooth_random_datum(g, 9, 0.8).coeffs());
    }
}
