use crate::spectral::DispersionParams;
use num_complex::Complex64;

/// `|m(n)|²` for the symbol `m` of `S_{ε'}(t) - S_ε(t)`, by the expanded
/// real formula
/// `e^{2β'tn⁴} + e^{2βtn⁴} - 2e^{(β'+β)tn⁴}cos((α'-α)tn⁴)`.
pub fn symbol_gap(n: i64, t: f64, eps: &DispersionParams, eps_prime: &DispersionParams) -> f64 {
    let n4 = (n as f64).powi(4);
    let (a, b) = (eps.alpha(), eps.beta());
    let (ap, bp) = (eps_prime.alpha(), eps_prime.beta());
    (2.0 * bp * t * n4).exp() + (2.0 * b * t * n4).exp()
        - 2.0 * ((bp + b) * t * n4).exp() * ((ap - a) * t * n4).cos()
}

/// The same quantity by complex arithmetic, `|e^{-itε'²n⁴} - e^{-itε²n⁴}|²`.
pub fn symbol_gap_direct(n: i64, t: f64, eps: &DispersionParams, eps_prime: &DispersionParams) -> f64 {
    let n4 = (n as f64).powi(4);
    let i = Complex64::new(0.0, 1.0);
    ((-i * t * n4 * eps_prime.eps2()).exp() - (-i * t * n4 * eps.eps2()).exp()).norm_sqr()
}

/// `min(4, |β'-β|²T²n₀⁸ + 2(1 - cos((α'-α)tn⁴)))`, valid for `β, β' ≤ 0`,
/// `t ≤ T` and `|n| ≤ n₀`.
pub fn symbol_gap_bound(n: i64, t: f64, horizon: f64, n0: i64, eps: &DispersionParams, eps_prime: &DispersionParams) -> f64 {
    let n4 = (n as f64).powi(4);
    let db = eps_prime.beta() - eps.beta();
    let low = db * db * horizon * horizon * (n0 as f64).powi(8) + 2.0 * (1.0 - ((eps_prime.alpha() - eps.alpha()) * t * n4).cos());
    low.min(4.0)
}
