use super::field::SpectralField;
use super::params::{DispersionParams, Regime};
use crate::{Error, Result};
use num_complex::Complex64;

/// `⟨x⟩ = (1 + x²)^{1/2}`.
pub fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

/// Applies the linear propagator `e^{-itw(k)}` mode by mode.
///
/// Outside the dispersive regime the flow is only a forward semigroup, so
/// negative times are rejected.
pub fn apply_semigroup(field: &SpectralField, t: f64, params: &DispersionParams) -> Result<SpectralField> {
    if t < 0.0 && matches!(params.regime(), Regime::Dissipative | Regime::BlowUp) {
        return Err(Error::Regime(format!(
            "backward time t={t} requested with Im(ε²)={} (no time reversal off the dispersive regime)",
            params.beta()
        )));
    }
    Ok(field.apply_multiplier(|k| semigroup_multiplier(k, t, params)))
}

pub(crate) fn semigroup_multiplier(k: i64, t: f64, params: &DispersionParams) -> Complex64 {
    let w = params.symbol(k);
    // -i t w = t·Im(w) - i t·Re(w)
    Complex64::new(t * w.im, -t * w.re).exp()
}

/// Symbol `1/(1+ε²k²)` of `J_ε = (1 - ε²∂ₓ²)⁻¹`.
pub fn smoothing_multiplier(k: i64, params: &DispersionParams) -> Complex64 {
    let kf = k as f64;
    (Complex64::new(1.0, 0.0) + params.eps2() * (kf * kf)).inv()
}

fn reject_resonant(params: &DispersionParams, what: &str) -> Result<()> {
    if let Some(n) = params.resonant_index() {
        return Err(Error::SingularOperator(format!(
            "{what} is undefined at ε = i/{n}: the nonlinearity is not well defined there"
        )));
    }
    Ok(())
}

/// `J_ε f`, the multiplier `1/(1+ε²k²)`.
pub fn apply_smoothing_j(field: &SpectralField, params: &DispersionParams) -> Result<SpectralField> {
    reject_resonant(params, "J_ε")?;
    Ok(field.apply_multiplier(|k| smoothing_multiplier(k, params)))
}

/// Last index scanned by [`gamma_constant`]: `⌈10/|ε|²⌉ + 10`.
pub fn gamma_scan_bound(params: &DispersionParams) -> u64 {
    let m = params.eps2().norm();
    if m == 0.0 {
        return 0;
    }
    (10.0 / m).ceil() as u64 + 10
}

/// `γ(ε) = sup_n |1/(1+ε²n²)|`, the operator norm of `J_ε` on every `H^s`.
///
/// Once `|ε|²n² ≥ 2` each term is at most `1/(|ε|²n²-1) ≤ 1`, so nothing
/// beyond the scan bound can beat the `n = 0` value.
pub fn gamma_constant(params: &DispersionParams) -> Result<f64> {
    reject_resonant(params, "γ(ε)")?;
    let bound = gamma_scan_bound(params);
    let eps2 = params.eps2();
    let mut best = 1.0f64;
    for n in 1..=bound {
        let n2 = (n as f64) * (n as f64);
        let v = 1.0 / (Complex64::new(1.0, 0.0) + eps2 * n2).norm();
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Stream;
    use crate::spectral::TorusGrid;
    use std::f64::consts::PI;

    fn random_field(seed: u64, n: usize) -> SpectralField {
        let g = TorusGrid::new(n).unwrap();
        let mut rng = Stream::new(seed, 0);
        SpectralField::from_fn(g, |k| rng.complex_normal() * (-(k as f64).powi(2) / 50.0).exp())
    }

    #[test]
    fn semigroup_at_zero_is_identity() {
        let f = random_field(1, 32);
        let p = DispersionParams::from_eps2(Complex64::new(0.3, -0.2));
        assert_eq!(apply_semigroup(&f, 0.0, &p).unwrap(), f);
    }

    #[test]
    fn dissipative_modulus_decay() {
        let g = TorusGrid::new(16).unwrap();
        let p = DispersionParams::from_eps2(Complex64::new(0.7, -0.05));
        let (n, t) = (3i64, 0.4);
        let f = SpectralField::single_mode(g, n, Complex64::new(1.0, 0.0)).unwrap();
        let out = apply_semigroup(&f, t, &p).unwrap();
        let expected = (p.beta() * t * (n as f64).powi(4)).exp();
        assert!((out.coeff(n).norm() - expected).abs() < 1e-14);
        assert!(matches!(apply_semigroup(&f, -0.1, &p), Err(Error::Regime(_))));
    }

    #[test]
    fn imaginary_epsilon_allows_backward_time() {
        let f = random_field(2, 16);
        let p = DispersionParams::from_epsilon(Complex64::new(0.0, 0.3));
        let back = apply_semigroup(&apply_semigroup(&f, 0.7, &p).unwrap(), -0.7, &p).unwrap();
        assert!(back.distance(&f, 0.0) < 1e-12 * f.l2_norm());
    }

    #[test]
    fn smoothing_examples() {
        let g = TorusGrid::new(16).unwrap();
        let p = DispersionParams::real(1.0);
        let f = SpectralField::from_fn(g, |_| Complex64::new(1.0, 0.0));
        let j = apply_smoothing_j(&f, &p).unwrap();
        assert_eq!(j.coeff(0), Complex64::new(1.0, 0.0));
        assert!((j.coeff(1) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let res = DispersionParams::from_epsilon(Complex64::new(0.0, 0.5));
        assert!(matches!(apply_smoothing_j(&f, &res), Err(Error::SingularOperator(_))));
    }

    #[test]
    fn smoothing_tends_to_mean_projector() {
        // operator-norm gap sup_{n≠0} |1/(1+ε²n²)| = 1/(1+|ε|²) for real ε
        let mut prev = f64::INFINITY;
        for eps in [1.0, 10.0, 100.0, 1000.0] {
            let p = DispersionParams::real(eps);
            let gap = (1..2000).map(|n| smoothing_multiplier(n, &p).norm()).fold(0.0, f64::max);
            assert!(gap < prev);
            prev = gap;
        }
        assert!(prev < 1e-5);
        let f = random_field(3, 32);
        let j = apply_smoothing_j(&f, &DispersionParams::real(1e4)).unwrap();
        let mean = f.coeff(0);
        let projector = SpectralField::single_mode(f.grid(), 0, mean).unwrap();
        assert!(j.distance(&projector, 0.0) < 1e-7 * f.l2_norm());
        // (1/2π)∫f in physical space equals û(0)/2π
        let avg: Complex64 = f.to_samples().iter().sum::<Complex64>() / f.grid().num_points() as f64;
        assert!((avg - mean / (2.0 * PI)).norm() < 1e-12);
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(gamma_constant(&DispersionParams::real(0.37)).unwrap(), 1.0);
        for &(r, th) in &[(1.5f64, 0.3f64), (2.0, 1.2), (1.42, 1.57), (3.0, 2.9)] {
            let p = DispersionParams::from_epsilon(Complex64::from_polar(r, th));
            assert!(gamma_constant(&p).unwrap() <= 1.0 + 1e-15, "r={r} th={th}");
        }
        let near = DispersionParams::from_epsilon(Complex64::new(0.0, 0.5 + 1e-3));
        // direct scan oracle over a generous range
        let oracle = (0..10_000i64).map(|n| smoothing_multiplier(n, &near).norm()).fold(0.0, f64::max);
        let g = gamma_constant(&near).unwrap();
        assert!((g - oracle).abs() <= 1e-12 * oracle);
        assert!(g > 100.0);
        let res = DispersionParams::from_epsilon(Complex64::new(0.0, 0.25));
        assert!(matches!(gamma_constant(&res), Err(Error::SingularOperator(_))));
    }
}
