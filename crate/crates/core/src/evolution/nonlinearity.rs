use crate::spectral::{smoothing_multiplier, DispersionParams, SpectralField, TorusGrid};
use crate::spectral::{fft_in_place};
use crate::{Error, Result};
use num_complex::Complex64;
use rustfft::FftDirection;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NonlinearityKind {
    /// `μ J_ε(|u|²) u`
    N1,
    /// `μ |u|² u`
    N2,
    /// `μ |u|⁴ u`
    N3,
}

impl NonlinearityKind {
    /// Polynomial degree of the nonlinearity in `u`.
    pub fn degree(self) -> u32 {
        match self {
            NonlinearityKind::N1 | NonlinearityKind::N2 => 3,
            NonlinearityKind::N3 => 5,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NonlinearityKind::N1 => "N1",
            NonlinearityKind::N2 => "N2",
            NonlinearityKind::N3 => "N3",
        }
    }
}

impl std::str::FromStr for NonlinearityKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "N1" => Ok(NonlinearityKind::N1),
            "N2" => Ok(NonlinearityKind::N2),
            "N3" => Ok(NonlinearityKind::N3),
            other => Err(Error::Config(format!("unknown nonlinearity `{other}` (expected N1, N2 or N3)"))),
        }
    }
}

/// Nonlinearity and its sign. `mu = 0` switches the term off, which turns
/// every integrator into the linear flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonlinearitySpec {
    pub kind: NonlinearityKind,
    pub mu: f64,
}

impl NonlinearitySpec {
    pub fn new(kind: NonlinearityKind, mu: f64) -> Result<Self> {
        if mu != 1.0 && mu != -1.0 {
            return Err(Error::Domain(format!("μ must be ±1, got {mu}")));
        }
        Ok(NonlinearitySpec { kind, mu })
    }

    pub fn disabled(kind: NonlinearityKind) -> Self {
        NonlinearitySpec { kind, mu: 0.0 }
    }

    pub fn is_active(&self) -> bool {
        self.mu != 0.0
    }

    /// N1 is undefined at the resonant parameters `ε = i/n`.
    pub fn validate(&self, params: &DispersionParams) -> Result<()> {
        if self.kind == NonlinearityKind::N1 && self.is_active() {
            if let Some(n) = params.resonant_index() {
                return Err(Error::SingularOperator(format!(
                    "N1 needs J_ε, which has a pole at ε = i/{n}"
                )));
            }
        }
        Ok(())
    }
}

/// Pseudospectral evaluator with cached multipliers for a fixed grid.
#[derive(Debug, Clone)]
pub(crate) struct Rhs {
    spec: NonlinearitySpec,
    grid: TorusGrid,
    j_mult: Option<Vec<Complex64>>,
    keep: Vec<bool>,
}

impl Rhs {
    /// `k_cut = None` keeps every mode except Nyquist.
    pub(crate) fn new(
        spec: NonlinearitySpec,
        params: &DispersionParams,
        grid: TorusGrid,
        k_cut: Option<i64>,
    ) -> Result<Self> {
        spec.validate(params)?;
        let j_mult = (spec.kind == NonlinearityKind::N1)
            .then(|| grid.wavenumbers().map(|k| smoothing_multiplier(k, params)).collect());
        let nyq = grid.nyquist_index();
        let keep = (0..grid.num_points())
            .map(|i| i != nyq && k_cut.is_none_or(|c| grid.wavenumber(i).abs() <= c))
            .collect();
        Ok(Rhs { spec, grid, j_mult, keep })
    }

    /// `N(u)` in coefficient space.
    pub(crate) fn eval(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        let n = self.grid.num_points();
        if !self.spec.is_active() {
            return vec![Complex64::new(0.0, 0.0); n];
        }
        let to_phys = 1.0 / (2.0 * PI);
        let to_spec = self.grid.spacing();
        let mut u = coeffs.to_vec();
        fft_in_place(&mut u, FftDirection::Inverse);
        u.iter_mut().for_each(|c| *c *= to_phys);

        let mut out: Vec<Complex64> = match self.spec.kind {
            NonlinearityKind::N1 => {
                let mut rho: Vec<Complex64> = u.iter().map(|c| Complex64::new(c.norm_sqr(), 0.0)).collect();
                fft_in_place(&mut rho, FftDirection::Forward);
                let j = self.j_mult.as_ref().expect("N1 multiplier");
                // forward then inverse: the 2π/n and 1/2π factors combine to 1/n
                let scale = 1.0 / n as f64;
                rho.iter_mut().zip(j).for_each(|(r, m)| *r *= m * scale);
                fft_in_place(&mut rho, FftDirection::Inverse);
                u.iter().zip(&rho).map(|(a, r)| a * r).collect()
            }
            NonlinearityKind::N2 => u.iter().map(|a| a * a.norm_sqr()).collect(),
            NonlinearityKind::N3 => u.iter().map(|a| a * a.norm_sqr() * a.norm_sqr()).collect(),
        };
        fft_in_place(&mut out, FftDirection::Forward);
        let f = to_spec * self.spec.mu;
        for (c, &k) in out.iter_mut().zip(&self.keep) {
            *c = if k { *c * f } else { Complex64::new(0.0, 0.0) };
        }
        out
    }
}

/// `N(u)` evaluated pseudospectrally with the default dealiasing for the
/// kind (2/3 rule for the cubic terms, 1/2 rule for the quintic one).
pub fn eval_nonlinearity(u: &SpectralField, spec: NonlinearitySpec, params: &DispersionParams) -> Result<SpectralField> {
    let grid = u.grid();
    let cut = super::DealiasRatio::for_kind(spec.kind).cutoff(grid);
    let rhs = Rhs::new(spec, params, grid, Some(cut))?;
    SpectralField::from_coeffs(grid, rhs.eval(u.coeffs()))
}
