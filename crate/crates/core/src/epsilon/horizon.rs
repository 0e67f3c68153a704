use crate::spectral::{DispersionParams, Regime};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Which branch of the case analysis a sequence member falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HorizonCase {
    /// `β_j = 0`, `α_j ≠ α`.
    PurePhase,
    /// `|α_j - α| ≤ |β_j|`.
    DampingDominated,
    /// `|α_j - α| > |β_j|`.
    PhaseDominated,
    /// `ε_j² = ε₀²`: nothing to separate.
    Identical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonRow {
    pub alpha_gap: f64,
    pub beta: f64,
    pub case: HorizonCase,
    /// `sup_τ |e^{i(α_j-α)τ} - e^{β_jτ}|` over the searched range.
    pub sup: f64,
    pub tau_at_sup: f64,
    pub tau_max: f64,
    /// Case lower bound the sup must clear.
    pub bound: f64,
    /// For `PhaseDominated`: sup over `[0, π/(2|α_j-α|)]`.
    pub sup_short: Option<f64>,
}

impl HorizonRow {
    pub fn holds(&self) -> bool {
        self.sup >= self.bound - 1e-12 && self.sup_short.is_none_or(|s| s >= 1.0 - 1e-12)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HorizonReport {
    pub delta0: f64,
    pub c1: f64,
    pub c: f64,
    pub rows: Vec<HorizonRow>,
}

impl HorizonReport {
    /// `min(1 - e^{-π/2}, c₁ce^{-c})`, the smallest case bound with β ≠ 0.
    pub fn floor(&self) -> f64 {
        (1.0 - (-PI / 2.0).exp()).min(self.c1 * self.c * (-self.c).exp())
    }

    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds() && (r.case == HorizonCase::Identical || r.sup >= self.floor() - 1e-6))
    }
}

/// `c₁ = min_{0<|z|≤δ₀} |e^z - 1|/|z|`, measured on a polar grid.
pub fn taylor_constant(delta0: f64) -> f64 {
    let mut best = f64::INFINITY;
    for ir in 1..=200 {
        let r = delta0 * ir as f64 / 200.0;
        for ia in 0..720 {
            let z = Complex64::from_polar(r, 2.0 * PI * ia as f64 / 720.0);
            best = best.min((z.exp() - 1.0).norm() / r);
        }
    }
    best
}

fn g(alpha_gap: f64, beta: f64, tau: f64) -> f64 {
    (Complex64::new(0.0, alpha_gap * tau).exp() - (beta * tau).exp()).norm()
}

/// Sup of `g` on `[0, tau_max]`: grid doubling until the sup settles to
/// 1e-6, then golden-section polishing around the best grid point.
fn sup_g(alpha_gap: f64, beta: f64, tau_max: f64) -> (f64, f64) {
    let scan = |m: usize| {
        (0..=m)
            .map(|i| tau_max * i as f64 / m as f64)
            .map(|t| (g(alpha_gap, beta, t), t))
            .fold((f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a })
    };
    let mut m = 1024;
    let mut best = scan(m);
    loop {
        let next = scan(2 * m);
        m *= 2;
        let settled = (next.0 - best.0).abs() < 1e-6;
        best = next;
        if settled || m > 1 << 22 {
            break;
        }
    }
    let h = tau_max / m as f64;
    let (mut lo, mut hi) = ((best.1 - h).max(0.0), (best.1 + h).min(tau_max));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let x1 = hi - r * (hi - lo);
        let x2 = lo + r * (hi - lo);
        if g(alpha_gap, beta, x1) >= g(alpha_gap, beta, x2) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let t = 0.5 * (lo + hi);
    let v = g(alpha_gap, beta, t);
    if v > best.0 {
        (v, t)
    } else {
        best
    }
}

/// Case analysis for `ε_j → ε₀` on the infinite horizon, in the rescaled
/// time `τ = tn⁴`. Each `τ` range is `[0, max(10/|β_j|, 10π/|α_j-α|)]`.
pub fn infinite_horizon_discontinuity(
    eps0: &DispersionParams,
    sequence: &[DispersionParams],
    c: f64,
) -> Result<HorizonReport> {
    if eps0.regime() != Regime::Dispersive || eps0.is_monomial() {
        return Err(Error::Domain("ε₀ must lie in the dispersive regime".into()));
    }
    let delta0 = 0.5;
    if !(c > 0.0 && c < delta0 / 2f64.sqrt()) {
        return Err(Error::Domain(format!("need 0 < c < δ₀/√2 = {}, got {c}", delta0 / 2f64.sqrt())));
    }
    let c1 = taylor_constant(delta0);
    let mut rows = Vec::with_capacity(sequence.len());
    for p in sequence {
        if p.beta() > 0.0 || matches!(p.regime(), Regime::Resonant) {
            return Err(Error::Domain(format!("ε² = {} is outside the admissible set", p.eps2())));
        }
        let (da, b) = (p.alpha() - eps0.alpha(), p.beta());
        let case = if da == 0.0 && b == 0.0 {
            HorizonCase::Identical
        } else if b == 0.0 {
            HorizonCase::PurePhase
        } else if da.abs() <= b.abs() {
            HorizonCase::DampingDominated
        } else {
            HorizonCase::PhaseDominated
        };
        let bound = match case {
            HorizonCase::Identical => 0.0,
            HorizonCase::PurePhase => 2.0,
            HorizonCase::DampingDominated => (1.0 - (-c).exp()).min(c1 * c * (-c).exp()),
            HorizonCase::PhaseDominated => (1.0 - (-PI / 2.0).exp()).min(1.0),
        };
        let tau_max = if case == HorizonCase::Identical {
            1.0
        } else {
            let a = if b != 0.0 { 10.0 / b.abs() } else { 0.0 };
            let p = if da != 0.0 { 10.0 * PI / da.abs() } else { 0.0 };
            a.max(p)
        };
        let (sup, tau_at_sup) = sup_g(da, b, tau_max);
        let sup_short = (case == HorizonCase::PhaseDominated).then(|| sup_g(da, b, PI / (2.0 * da.abs())).0);
        rows.push(HorizonRow { alpha_gap: da, beta: b, case, sup, tau_at_sup, tau_max, bound, sup_short });
    }
    Ok(HorizonReport { delta0, c1, c, rows })
}
