//! Space-time Fourier analysis on `𝕋 × ℝ`.
//!
//! A [`SpaceTimeField`] stores `û(k, τ) = ∫∫ u e^{-i(kx+τt)} dx dt` on the
//! lattice `k ∈ ℤ`, `τ ∈ (2π/T_w)ℤ` of a time window of length `T_w`. Norms
//! use the matching Plancherel normalisation
//! `‖u‖²_{L²} = (2πT_w)⁻¹ Σ |û(k,τ)|²`.

mod field;
mod norms;
mod random;
mod sharpness;

pub use field::{spacetime_transform, time_samples_for, SpaceTimeField, Window};
pub use norms::{
    dyadic_decomposition, dyadic_project, embedding_ratio, lebesgue_norm, shell_index, trilinear_inequality_probe,
    trilinear_inequality_probe_with, xsb_norm, DyadicPiece, TrilinearProbe,
};
pub use random::{random_spacetime_field, RandomFieldSpec};
pub use sharpness::{
    necessity_check, necessity_crossover, sharpness_family, sharpness_family_on, sharpness_sweep, write_sharpness_csv,
    ExponentFit, NecessityCrossover, NecessityVerdict, SharpnessData, SharpnessSweep, Verdict, DIVERGENCE_SLOPE,
    SHARPNESS_NS,
};
