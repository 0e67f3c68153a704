//! Spectral laboratory for the fourth-order nonlinear Schrödinger equation
//!
//! ```text
//! i u_t + u_xx - ε² u_xxxx = N(u),   x ∈ 𝕋 = ℝ/2πℤ
//! ```
//!
//! with the three nonlinearities `μ (1-ε²∂ₓ²)⁻¹(|u|²)u`, `μ|u|²u` and `μ|u|⁴u`,
//! and with the quantum parameter ε allowed to be complex.
//!
//! The crate is organised by subsystem:
//!
//! * [`spectral`]: torus grids, the `û(k) = ∫₀^{2π} u e^{-ikx} dx` transform,
//!   Sobolev norms, dispersion multipliers, semigroups and the smoothing
//!   operator `J_ε`.
//! * [`evolution`]: nonlinear time integration (integrating factor RK4 and a
//!   Picard/Duhamel fixed point), conservation diagnostics and closed-form
//!   single-mode solutions.
//! * [`restriction`]: space-time fields, `X^{s,b}` restriction norms, dyadic
//!   shells, space-time Lebesgue norms, embedding constants and the box
//!   family that saturates them.
//! * [`counting`]: exact lattice counts behind the bilinear and trilinear
//!   shell estimates, and the quartic resonance count `r_{N,n,j}`.
//! * [`epsilon`]: ill-posedness witnesses, norm inflation, continuity in ε
//!   and its failure, and the holomorphy check for the linear flow.
//! * [`harness`]: named experiments, configuration, seeding, CSV/SVG output
//!   and the acceptance suite.

pub mod counting;
pub mod epsilon;
pub mod error;
pub mod evolution;
pub mod fit;
pub mod harness;
pub mod restriction;
pub mod rng;
pub mod spectral;

pub use error::{Error, Result};
