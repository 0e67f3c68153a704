use super::fft::fft_in_place;
use super::grid::TorusGrid;
use super::ops::japanese;
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftDirection;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};

/// One time slice of `u`, stored as `û(k)` in DFT order on a [`TorusGrid`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: TorusGrid) -> Self {
        SpectralField { grid, coeffs: vec![Complex64::new(0.0, 0.0); grid.num_points()] }
    }

    /// Wraps coefficients given in DFT order.
    pub fn from_coeffs(grid: TorusGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.num_points() {
            return Err(Error::Dimension(format!(
                "{} coefficients for a grid of {} points",
                coeffs.len(),
                grid.num_points()
            )));
        }
        Ok(SpectralField { grid, coeffs })
    }

    /// Builds `û(k) = f(k)` for every stored wavenumber.
    pub fn from_fn(grid: TorusGrid, mut f: impl FnMut(i64) -> Complex64) -> Self {
        let coeffs = grid.wavenumbers().map(&mut f).collect();
        SpectralField { grid, coeffs }
    }

    /// `û(n) = value`, all other coefficients zero.
    pub fn single_mode(grid: TorusGrid, n: i64, value: Complex64) -> Result<Self> {
        let idx = grid
            .index_of(n)
            .ok_or_else(|| Error::Dimension(format!("mode {n} not representable on {} points", grid.num_points())))?;
        let mut field = Self::zeros(grid);
        field.coeffs[idx] = value;
        Ok(field)
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `û(k)`, zero when `k` is not on the grid.
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.grid.index_of(k).map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    /// Iterator over `(k, û(k))` in storage order.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.grid.wavenumbers().zip(self.coeffs.iter().copied())
    }

    /// Multiplies coefficient `k` by `m(k)`.
    pub fn apply_multiplier(&self, mut m: impl FnMut(i64) -> Complex64) -> Self {
        let coeffs = self.modes().map(|(k, c)| c * m(k)).collect();
        SpectralField { grid: self.grid, coeffs }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        SpectralField { grid: self.grid, coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn sobolev_norm(&self, s: f64) -> f64 {
        sobolev_norm(self, s)
    }

    pub fn l2_norm(&self) -> f64 {
        self.sobolev_norm(0.0)
    }

    /// `‖self - other‖_{H^s}`.
    pub fn distance(&self, other: &SpectralField, s: f64) -> f64 {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let sum: f64 = self
            .modes()
            .zip(other.coeffs.iter())
            .map(|((k, a), b)| japanese(k as f64).powf(2.0 * s) * (a - b).norm_sqr())
            .sum();
        (sum / (2.0 * PI)).sqrt()
    }

    /// Largest coefficient modulus.
    pub fn sup_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| if c.norm() > m || c.norm().is_nan() { c.norm() } else { m })
    }

    pub fn to_samples(&self) -> Vec<Complex64> {
        inverse_transform(self)
    }

    /// Zeroes the Nyquist mode and every `|k| > k_max`.
    pub fn truncate(&mut self, k_max: i64) {
        let nyq = self.grid.nyquist_index();
        for (i, c) in self.coeffs.iter_mut().enumerate() {
            if i == nyq || self.grid.wavenumber(i).abs() > k_max {
                *c = Complex64::new(0.0, 0.0);
            }
        }
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        assert_eq!(self.grid, rhs.grid);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        SpectralField { grid: self.grid, coeffs }
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        assert_eq!(self.grid, rhs.grid);
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        SpectralField { grid: self.grid, coeffs }
    }
}

impl Mul<Complex64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: Complex64) -> SpectralField {
        self.scale(rhs)
    }
}

/// Samples `u(x_j)`, `x_j = 2πj/n`, to `û(k) ≈ ∫₀^{2π} u e^{-ikx} dx`
/// (trapezoidal rule, exact for trigonometric polynomials on the grid).
pub fn forward_transform(grid: TorusGrid, samples: &[Complex64]) -> Result<SpectralField> {
    if samples.len() != grid.num_points() {
        return Err(Error::Dimension(format!(
            "{} samples for a grid of {} points",
            samples.len(),
            grid.num_points()
        )));
    }
    let mut buf = samples.to_vec();
    fft_in_place(&mut buf, FftDirection::Forward);
    let h = grid.spacing();
    buf.iter_mut().for_each(|c| *c *= h);
    Ok(SpectralField { grid, coeffs: buf })
}

/// `u(x_j) = (1/2π) Σ_k û(k) e^{ikx_j}`.
pub fn inverse_transform(field: &SpectralField) -> Vec<Complex64> {
    let mut buf = field.coeffs.clone();
    fft_in_place(&mut buf, FftDirection::Inverse);
    let scale = 1.0 / (2.0 * PI);
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// `‖u‖_{H^s} = (1/2π)^{1/2} ‖⟨k⟩^s û(k)‖_{ℓ²}`.
pub fn sobolev_norm(field: &SpectralField, s: f64) -> f64 {
    let sum: f64 = field
        .modes()
        .map(|(k, c)| if s == 0.0 { c.norm_sqr() } else { japanese(k as f64).powf(2.0 * s) * c.norm_sqr() })
        .sum();
    (sum / (2.0 * PI)).sqrt()
}
