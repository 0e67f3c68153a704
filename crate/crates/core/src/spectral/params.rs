use crate::{Error, Result};
use num_complex::Complex64;

/// Which dispersion relation `w(k)` the linear flow uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dispersion {
    /// `w(k) = ε²k⁴ + k²`.
    Quartic,
    /// `w(k) = k^δ`.
    Monomial(u32),
}

/// Classification of ε by `β = Im(ε²)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `ε ∈ ℝ`, or `ε ∈ iℝ` away from the resonances: unitary flow.
    Dispersive,
    /// `β < 0`: every nonzero mode decays.
    Dissipative,
    /// `β > 0`: mode `n` grows like `e^{βtn⁴}`.
    BlowUp,
    /// `ε = i/n`, where `1 + ε²n² = 0` and `J_ε` is undefined.
    Resonant,
}

/// Dispersion parameters. `ε²` is the stored datum; ε itself is recovered
/// as the square root with `Im(ε) ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionParams {
    eps2: Complex64,
    dispersion: Dispersion,
}

impl DispersionParams {
    /// Real quantum parameter ε (only ε² matters).
    pub fn real(epsilon: f64) -> Self {
        Self::from_eps2(Complex64::new(epsilon * epsilon, 0.0))
    }

    pub fn from_eps2(eps2: Complex64) -> Self {
        DispersionParams { eps2, dispersion: Dispersion::Quartic }
    }

    pub fn from_epsilon(epsilon: Complex64) -> Self {
        Self::from_eps2(epsilon * epsilon)
    }

    /// Pure monomial dispersion `w(k) = k^δ`; `J_ε` reduces to the identity.
    pub fn monomial(delta: u32) -> Result<Self> {
        if delta < 2 {
            return Err(Error::Domain(format!("monomial degree must be >= 2, got {delta}")));
        }
        Ok(DispersionParams { eps2: Complex64::new(0.0, 0.0), dispersion: Dispersion::Monomial(delta) })
    }

    pub fn eps2(&self) -> Complex64 {
        self.eps2
    }

    pub fn alpha(&self) -> f64 {
        self.eps2.re
    }

    pub fn beta(&self) -> f64 {
        self.eps2.im
    }

    /// Principal square root of ε², reflected into the half-plane `Im ε ≥ 0`.
    pub fn epsilon(&self) -> Complex64 {
        let r = self.eps2.sqrt();
        if r.im < 0.0 || (r.im == 0.0 && r.re < 0.0) {
            -r
        } else {
            r
        }
    }

    pub fn dispersion(&self) -> Dispersion {
        self.dispersion
    }

    /// Polynomial degree of `w`.
    pub fn degree(&self) -> u32 {
        match self.dispersion {
            Dispersion::Quartic => 4,
            Dispersion::Monomial(d) => d,
        }
    }

    pub fn is_monomial(&self) -> bool {
        matches!(self.dispersion, Dispersion::Monomial(_))
    }

    /// True for `ε ∈ ℝ` (including monomial mode), where `w` is real and even
    /// or a real monomial.
    pub fn has_real_epsilon(&self) -> bool {
        self.beta() == 0.0 && self.alpha() >= 0.0
    }

    /// For real ε, the value `ε = √α`.
    pub fn real_epsilon(&self) -> Option<f64> {
        self.has_real_epsilon().then(|| self.alpha().sqrt())
    }

    /// The resonant index `n` when `ε = i/n`.
    pub fn resonant_index(&self) -> Option<u64> {
        if self.is_monomial() || self.beta() != 0.0 || self.alpha() >= 0.0 {
            return None;
        }
        let n = 1.0 / (-self.alpha()).sqrt();
        let rounded = n.round();
        (rounded >= 1.0 && (n - rounded).abs() <= 1e-12 * rounded).then_some(rounded as u64)
    }

    pub fn regime(&self) -> Regime {
        if self.resonant_index().is_some() {
            Regime::Resonant
        } else if self.beta() < 0.0 {
            Regime::Dissipative
        } else if self.beta() > 0.0 {
            Regime::BlowUp
        } else {
            Regime::Dispersive
        }
    }

    /// `w(k)` as a complex number.
    pub fn symbol(&self, k: i64) -> Complex64 {
        let kf = k as f64;
        match self.dispersion {
            Dispersion::Quartic => self.eps2 * kf.powi(4) + kf * kf,
            Dispersion::Monomial(d) => Complex64::new(kf.powi(d as i32), 0.0),
        }
    }

    /// `w(x)` on the real line; meaningful for real ε or monomial mode.
    pub fn symbol_real(&self, x: f64) -> f64 {
        match self.dispersion {
            Dispersion::Quartic => self.alpha() * x.powi(4) + x * x,
            Dispersion::Monomial(d) => x.powi(d as i32),
        }
    }
}

/// `w(k) = ε²k⁴ + k²`, or `k^δ` in monomial mode.
pub fn dispersion_symbol(k: i64, params: &DispersionParams) -> Complex64 {
    params.symbol(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_examples() {
        assert_eq!(dispersion_symbol(0, &DispersionParams::real(0.7)), Complex64::new(0.0, 0.0));
        assert_eq!(dispersion_symbol(1, &DispersionParams::real(1.0)), Complex64::new(2.0, 0.0));
        let p = DispersionParams::from_eps2(Complex64::new(0.0, 1.0));
        // independent evaluation: i·2⁴ + 2² = 4 + 16i
        let expected = Complex64::new(0.0, 1.0) * 16.0 + 4.0;
        assert_eq!(dispersion_symbol(2, &p), expected);
        assert_eq!(expected, Complex64::new(4.0, 16.0));
        let m = DispersionParams::monomial(3).unwrap();
        assert_eq!(dispersion_symbol(-2, &m), Complex64::new(-8.0, 0.0));
    }

    #[test]
    fn regime_classification() {
        assert_eq!(DispersionParams::real(0.3).regime(), Regime::Dispersive);
        let imag = |y: f64| DispersionParams::from_epsilon(Complex64::new(0.0, y));
        assert_eq!(imag(0.4).regime(), Regime::Dispersive);
        assert_eq!(imag(0.5).regime(), Regime::Resonant);
        assert_eq!(imag(1.0 / 3.0).regime(), Regime::Resonant);
        assert_eq!(imag(0.5 + 1e-3).regime(), Regime::Dispersive);
        // second/fourth quadrant → β < 0
        assert_eq!(DispersionParams::from_epsilon(Complex64::new(-1.0, 0.5)).regime(), Regime::Dissipative);
        assert_eq!(DispersionParams::from_epsilon(Complex64::new(1.0, -0.5)).regime(), Regime::Dissipative);
        assert_eq!(DispersionParams::from_epsilon(Complex64::new(1.0, 0.5)).regime(), Regime::BlowUp);
        assert_eq!(DispersionParams::monomial(4).unwrap().regime(), Regime::Dispersive);
    }

    #[test]
    fn epsilon_branch_has_nonnegative_imaginary_part() {
        for &(re, im) in &[(1.0, -0.5), (-1.0, 0.5), (0.3, 0.9), (-2.0, 0.0), (0.0, -1.0)] {
            let e = Complex64::new(re, im);
            let p = DispersionParams::from_epsilon(e);
            let eps = p.epsilon();
            assert!(eps.im >= 0.0);
            assert!((eps * eps - p.eps2()).norm() < 1e-14);
            // same ε² from ±ε
            assert_eq!(DispersionParams::from_epsilon(-e).eps2(), p.eps2());
        }
    }
}
