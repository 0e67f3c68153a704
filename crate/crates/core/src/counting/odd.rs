use super::bilinear::{count_bilinear, sup_bilinear, CountQuery};
use crate::fit::plane;
use crate::spectral::DispersionParams;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddDeltaBranch {
    /// `|k| ≤ 2^a`: only the trivial bound `2^{(a+m)/2}` is used.
    Low,
    /// `|k| > 2^a`: the level set is counted exactly.
    High,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddDeltaCount {
    pub branch: OddDeltaBranch,
    pub split: f64,
    /// `2^{(a+m)/2}`.
    pub low_bound: f64,
    /// `2^{(m+n-a)/(δ-1)}`, the size the high count is compared with.
    pub high_bound: f64,
    pub high_count: Option<u64>,
}

fn odd_params(delta: u32) -> Result<DispersionParams> {
    if delta < 3 || delta % 2 == 0 {
        return Err(Error::Domain(format!("odd δ ≥ 3 required, got {delta}")));
    }
    DispersionParams::monomial(delta)
}

/// Low/high frequency split for `w = k^δ`, δ odd. The split `a` defaults to
/// `(m+n)/δ`, where the two bounds balance.
pub fn count_odd_delta(tau: f64, k: i64, m: u32, n: u32, delta: u32, split: Option<f64>) -> Result<OddDeltaCount> {
    let params = odd_params(delta)?;
    let a = split.unwrap_or((m + n) as f64 / delta as f64);
    let low_bound = 2f64.powf((a + m as f64) / 2.0);
    let high_bound = 2f64.powf(((m + n) as f64 - a) / (delta as f64 - 1.0));
    if (k.abs() as f64) <= 2f64.powf(a) {
        return Ok(OddDeltaCount { branch: OddDeltaBranch::Low, split: a, low_bound, high_bound, high_count: None });
    }
    let q = CountQuery::bilinear(m, n, params);
    let c = count_bilinear(&q, tau, k)?;
    Ok(OddDeltaCount { branch: OddDeltaBranch::High, split: a, low_bound, high_bound, high_count: Some(c) })
}

/// Plane fit `E(m,n) ≈ c + A·m + B·n` with
/// `E = ½ log₂(2^m · sup_{τ, 2^a < |k| ≤ 2^a + width} count)`, compared
/// with `A = (δ+1)/(2δ)`, `B = 1/(2δ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OddDeltaFit {
    pub delta: u32,
    pub intercept: f64,
    pub m_coef: f64,
    pub n_coef: f64,
    pub expected_m: f64,
    pub expected_n: f64,
    /// `(m, n, E)` samples.
    pub samples: Vec<(u32, u32, f64)>,
}

impl OddDeltaFit {
    pub fn max_coefficient_error(&self) -> f64 {
        (self.m_coef - self.expected_m).abs().max((self.n_coef - self.expected_n).abs())
    }
}

pub fn odd_delta_exponent_fit(delta: u32, ms: &[u32], ns: &[u32], width: i64) -> Result<OddDeltaFit> {
    let params = odd_params(delta)?;
    let mut samples = Vec::new();
    for &m in ms {
        for &n in ns {
            let a = (m + n) as f64 / delta as f64;
            let k0 = 2f64.powf(a).floor() as i64 + 1;
            let q = CountQuery::bilinear(m, n, params);
            let mut best = 0u64;
            for k in k0..k0 + width.max(1) {
                best = best.max(sup_bilinear(&q, k)?.count);
            }
            let e = 0.5 * (m as f64 + (best.max(1) as f64).log2());
            samples.push((m, n, e));
        }
    }
    let us: Vec<f64> = samples.iter().map(|s| s.0 as f64).collect();
    let vs: Vec<f64> = samples.iter().map(|s| s.1 as f64).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.2).collect();
    let (c, a, b) = plane(&us, &vs, &ys);
    let d = delta as f64;
    Ok(OddDeltaFit {
        delta,
        intercept: c,
        m_coef: a,
        n_coef: b,
        expected_m: (d + 1.0) / (2.0 * d),
        expected_n: 1.0 / (2.0 * d),
        samples,
    })
}
