//! Fourier analysis on the one-dimensional torus.
//!
//! Coefficients follow the convention `û(k) = ∫₀^{2π} u(x) e^{-ikx} dx` with
//! inverse `u(x) = (1/2π) Σ_k û(k) e^{ikx}`, so `‖u‖²_{L²} = (1/2π) Σ_k |û(k)|²`
//! and every norm in this crate carries that `1/2π` factor.

mod fft;
mod field;
mod grid;
mod ops;
mod params;

pub(crate) use fft::{fft2_in_place, fft_in_place};
pub(crate) use ops::semigroup_multiplier;
pub use field::{forward_transform, inverse_transform, sobolev_norm, SpectralField};
pub use grid::TorusGrid;
pub use ops::{apply_semigroup, apply_smoothing_j, gamma_constant, gamma_scan_bound, japanese, smoothing_multiplier};
pub use params::{dispersion_symbol, Dispersion, DispersionParams, Regime};
