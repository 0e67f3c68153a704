use super::bilinear::{count_window, radius, shape, BoundReport, BoundRow, CountQuery, Shape, SupCount};
use super::window::sup_window;
use crate::spectral::DispersionParams;
use crate::{Error, Result};
use std::f64::consts::PI;

/// `w(k₁) + w(k₂) + w(k - k₁ - k₂)`.
pub fn trilinear_level(params: &DispersionParams, k: i64, k1: i64, k2: i64) -> f64 {
    params.symbol_real(k1 as f64) + params.symbol_real(k2 as f64) + params.symbol_real((k - k1 - k2) as f64)
}

/// The trilinear level in polar coordinates about `(k/3, k/3)`, written out
/// term by term in its trigonometric form.
pub fn radial_polynomial_v(r: f64, theta: f64, k: i64, params: &DispersionParams) -> f64 {
    let e2 = params.alpha();
    let k = k as f64;
    let (s1, c1) = theta.sin_cos();
    let (s3, c3) = (3.0 * theta).sin_cos();
    let s2 = (2.0 * theta).sin();
    let c4 = (4.0 * theta).cos();
    r * r / 12.0
        * (3.0 * e2 * (9.0 - c4 + 8.0 * s2) * r * r - 12.0 * e2 * k * (c1 - c3 + s1 + s3) * r
            + (8.0 * e2 * k * k + 12.0) * (s2 + 2.0))
        + k * k / 27.0 * (e2 * k * k + 9.0)
}

/// `v''(r)` in its printed closed form.
pub fn radial_v_second_derivative(r: f64, theta: f64, k: i64, params: &DispersionParams) -> f64 {
    let e2 = params.alpha();
    let k = k as f64;
    let (s1, c1) = theta.sin_cos();
    let s3 = (3.0 * theta).sin();
    let c3 = (3.0 * theta).cos();
    let s2 = (2.0 * theta).sin();
    6.0 * e2 * (s2 + 2.0).powi(2) * r * r + 6.0 * e2 * k * (c3 - (s1 + s3 + c1)) * r
        + (4.0 / 3.0 * e2 * k * k + 2.0) * (s2 + 2.0)
}

fn v_offset(e2: f64, k: f64) -> f64 {
    k * k * (e2 * k * k + 9.0) / 27.0
}

/// A measured constant `c` with `v(r) - v(0) ≥ c·ε²r⁴` on the sampled
/// `|k| ≤ k_max`. Valid for any `ε² ≤ eps2` (the remaining `r²` term only
/// grows as ε shrinks).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VCertificate {
    pub c: f64,
    pub k_max: i64,
    pub eps2: f64,
}

impl VCertificate {
    /// Constant used for search boxes: 90% of the measured one.
    pub fn box_constant(&self) -> f64 {
        0.9 * self.c
    }

    pub fn covers(&self, params: &DispersionParams, k: i64) -> bool {
        params.alpha() <= self.eps2 && k.abs() <= self.k_max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VReport {
    pub min_second_derivative: f64,
    /// Smallest sampled `(v(r) - v(0))/(ε²r⁴)`, including the `r → ∞` limit.
    pub c_sampled: f64,
    /// `min_θ [A(θ) - 3g(θ)²/(8(sin 2θ + 2))]`, the infimum over all `k/r`
    /// with the `1/(ε²r²)` term dropped, on a fine θ grid.
    pub c_infimum: f64,
    /// Largest `|v'(r)|` seen at `r = 0` by central differences.
    pub max_slope_at_origin: f64,
    pub samples: usize,
    pub certificate: Option<VCertificate>,
}

impl VReport {
    pub fn convex(&self) -> bool {
        self.min_second_derivative >= -1e-9
    }

    pub fn passes(&self) -> bool {
        self.convex() && self.c_sampled > 0.0
    }
}

/// Samples `v''` and the quartic lower bound on `θ ∈ [0, 2π)` (`n_theta`
/// points), `k ∈ [-k_max, k_max]` and `r ∈ (0, r_max]` (`n_r` points).
pub fn verify_v_properties(
    params: &DispersionParams,
    n_theta: usize,
    k_max: i64,
    r_max: f64,
    n_r: usize,
) -> Result<VReport> {
    let e2 = params.alpha();
    if params.is_monomial() || !params.has_real_epsilon() || e2 <= 0.0 {
        return Err(Error::Domain("v(r) is defined for real ε > 0".into()));
    }
    if n_theta == 0 || n_r == 0 || !(r_max > 0.0) {
        return Err(Error::Domain("empty sample grid".into()));
    }
    let mut min_vpp = f64::INFINITY;
    let mut c_sampled = f64::INFINITY;
    let mut slope0 = 0.0f64;
    let mut samples = 0usize;
    for it in 0..n_theta {
        let th = 2.0 * PI * it as f64 / n_theta as f64;
        let limit = (9.0 - (4.0 * th).cos() + 8.0 * (2.0 * th).sin()) / 4.0;
        c_sampled = c_sampled.min(limit);
        for k in -k_max..=k_max {
            let v0 = v_offset(e2, k as f64);
            let h = 1e-6;
            let d0 = (radial_polynomial_v(h, th, k, params) - radial_polynomial_v(-h, th, k, params)) / (2.0 * h);
            slope0 = slope0.max(d0.abs() / (1.0 + v0));
            for ir in 1..=n_r {
                let r = r_max * ir as f64 / n_r as f64;
                min_vpp = min_vpp.min(radial_v_second_derivative(r, th, k, params));
                let v = radial_polynomial_v(r, th, k, params);
                c_sampled = c_sampled.min((v - v0) / (e2 * r.powi(4)));
                samples += 1;
            }
        }
    }
    let c_infimum = (0..=200_000)
        .map(|i| {
            let th = 2.0 * PI * i as f64 / 200_000.0;
            let s2 = (2.0 * th).sin();
            let a = (9.0 - (4.0 * th).cos() + 8.0 * s2) / 4.0;
            let g = th.cos() - (3.0 * th).cos() + th.sin() + (3.0 * th).sin();
            a - 3.0 * g * g / (8.0 * (s2 + 2.0))
        })
        .fold(f64::INFINITY, f64::min);
    let certificate = (min_vpp >= -1e-9 && c_sampled > 0.0).then_some(VCertificate { c: c_sampled, k_max, eps2: e2 });
    Ok(VReport {
        min_second_derivative: min_vpp,
        c_sampled,
        c_infimum,
        max_slope_at_origin: slope0,
        samples,
        certificate,
    })
}

fn quartic_eps2(query: &CountQuery) -> Result<f64> {
    match shape(&query.params)? {
        Shape::Quartic(a) if a > 0.0 => Ok(a),
        _ => Err(Error::Domain("trilinear counts need real ε > 0".into())),
    }
}

/// Radius of the disc about `(k/3, k/3)` holding every point with
/// `w̃ ≤ cap`.
fn disc_radius(query: &CountQuery, k: i64, cap: f64) -> Result<f64> {
    let e2 = quartic_eps2(query)?;
    let cert = query.certificate.ok_or_else(|| Error::Inconclusive {
        reason: "no verified lower-bound constant; run verify_v_properties first".into(),
        required: f64::NAN,
    })?;
    if !cert.covers(&query.params, k) {
        return Err(Error::Inconclusive {
            reason: format!(
                "certificate covers |k| ≤ {} and ε² ≤ {}, query has k = {k}, ε² = {e2}",
                cert.k_max, cert.eps2
            ),
            required: k.abs() as f64,
        });
    }
    let excess = cap - v_offset(e2, k as f64);
    Ok(if excess <= 0.0 { 0.0 } else { (excess / (cert.box_constant() * e2)).powf(0.25) })
}

fn k1_range(query: &CountQuery, k: i64, r: f64) -> Result<(i64, i64)> {
    let c = k as f64 / 3.0;
    if let Some(b) = query.k1_bound {
        let needed = c.abs() + r;
        if needed > b as f64 {
            return Err(Error::Inconclusive { reason: format!("search box |k₁|,|k₂| ≤ {b} too small"), required: needed });
        }
    }
    Ok(((c - r).ceil() as i64, (c + r).floor() as i64))
}

/// `|{(k₁,k₂) : |τ + w̃(k₁,k₂)| ≤ Θ}|`, with `k₁` confined by the certified
/// disc and each `k₂` fibre counted as a bilinear problem.
pub fn count_trilinear(query: &CountQuery, tau: f64, k: i64) -> Result<u64> {
    let theta = query.threshold()?;
    let r = disc_radius(query, k, -tau + theta)?;
    let (lo, hi) = k1_range(query, k, r)?;
    let sh = shape(&query.params)?;
    let p = &query.params;
    let mut total = 0;
    for k1 in lo..=hi {
        total += count_window(p, sh, tau + p.symbol_real(k1 as f64), k - k1, theta, None)?;
    }
    Ok(total)
}

/// Exhaustive oracle over `|k₁|, |k₂| ≤ bound`.
pub fn count_trilinear_scan(query: &CountQuery, tau: f64, k: i64, bound: i64) -> Result<u64> {
    quartic_eps2(query)?;
    let theta = query.threshold()?;
    let mut n = 0;
    for k1 in -bound..=bound {
        for k2 in -bound..=bound {
            if (tau + trilinear_level(&query.params, k, k1, k2)).abs() <= theta {
                n += 1;
            }
        }
    }
    Ok(n)
}

/// `sup_τ count_trilinear(τ, k)` by exact breakpoint enumeration; the
/// default range anchors the window bottom in `[v(0), v(0) + 8Θ]`.
pub fn sup_trilinear(query: &CountQuery, k: i64) -> Result<SupCount> {
    let e2 = quartic_eps2(query)?;
    let theta = query.threshold()?;
    let (a_lo, a_hi) = match query.tau_range {
        Some((t_lo, t_hi)) => (-t_hi - theta, -t_lo - theta),
        None => {
            let v0 = v_offset(e2, k as f64);
            (v0, v0 + 8.0 * theta)
        }
    };
    let cap = a_hi + 2.0 * theta;
    let r = disc_radius(query, k, cap)?;
    let (lo, hi) = k1_range(query, k, r)?;
    let sh = shape(&query.params)?;
    let p = &query.params;
    let mut levels = Vec::new();
    for k1 in lo..=hi {
        let w1 = p.symbol_real(k1 as f64);
        let kk = k - k1;
        let y = radius(sh, kk, cap - w1 - 2.0 * p.symbol_real(kk as f64 / 2.0));
        let c = kk as f64 / 2.0;
        for k2 in (c - y).ceil() as i64..=(c + y).floor() as i64 {
            let v = trilinear_level(p, k, k1, k2);
            if v <= cap {
                levels.push(v);
            }
        }
    }
    levels.sort_by(f64::total_cmp);
    let (count, a) = sup_window(&levels, 2.0 * theta, a_lo, a_hi);
    Ok(SupCount { count, tau: -a - theta })
}

/// `sup_τ count_trilinear / (ε⁻¹2^{(m+n+l)/2})` for shell totals
/// `0..=max_total` and every `k` in `ks`.
pub fn verify_trilinear_bound(
    params: &DispersionParams,
    max_total: u32,
    ks: &[i64],
    certificate: VCertificate,
) -> Result<BoundReport> {
    let mut rows = Vec::new();
    for t in 0..=max_total {
        for &k in ks {
            let q = CountQuery::trilinear(0, 0, t, *params).with_certificate(certificate);
            let e2 = quartic_eps2(&q)?;
            let s = sup_trilinear(&q, k)?;
            let bound = 2f64.powf(t as f64 / 2.0) / e2.sqrt();
            rows.push(BoundRow {
                shells_total: t,
                k,
                tau: s.tau,
                count: s.count,
                bound,
                ratio: s.count as f64 / bound,
                exact: false,
            });
        }
    }
    Ok(BoundReport { kind: "trilinear", eps2: params.alpha(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_term() {
        let p = DispersionParams::real(0.7);
        for k in [-4, 0, 3, 11] {
            let kf = k as f64;
            let expect = kf * kf * (0.49 * kf * kf + 9.0) / 27.0;
            assert!((radial_polynomial_v(0.0, 1.3, k, &p) - expect).abs() < 1e-12 * (1.0 + expect));
        }
    }

    #[test]
    fn second_derivative_at_theta_zero() {
        let p = DispersionParams::real(1.0);
        for r in [0.0, 0.5, 3.0] {
            assert!((radial_v_second_derivative(r, 0.0, 0, &p) - (24.0 * r * r + 4.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn needs_certificate() {
        let q = CountQuery::trilinear(0, 0, 2, DispersionParams::real(1.0));
        assert!(matches!(count_trilinear(&q, 0.0, 0), Err(Error::Inconclusive { .. })));
    }
}
