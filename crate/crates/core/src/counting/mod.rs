//! Exact lattice counts behind the bilinear and trilinear shell estimates.
//!
//! All counts are over integer frequencies and compare level values with
//! thresholds `Θ = C·2^{shells}`. Fast counts exploit monotonicity or a
//! provable search box; every fast count has an exhaustive scan beside it.

mod bilinear;
mod odd;
mod resonance;
mod trilinear;
mod window;

pub use bilinear::{
    bilinear_level, bilinear_min_level, completed_square_level, count_bilinear, count_bilinear_scan, sup_bilinear,
    verify_bilinear_bound, verify_minimizer, BoundReport, BoundRow, CountQuery, MinimizerVerdict, SupCount,
};
pub use odd::{count_odd_delta, odd_delta_exponent_fit, OddDeltaBranch, OddDeltaCount, OddDeltaFit};
pub use resonance::{
    rational_eps2, resonance_count, resonance_count_exact, resonance_histogram, resonance_histogram_by_k2,
    resonance_max, Rational, ResonanceMax,
};
pub use trilinear::{
    count_trilinear, count_trilinear_scan, radial_polynomial_v, radial_v_second_derivative, sup_trilinear,
    trilinear_level, verify_trilinear_bound, verify_v_properties, VCertificate, VReport,
};
pub use window::write_bound_csv;
