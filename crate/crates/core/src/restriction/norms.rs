use super::field::SpaceTimeField;
use crate::spectral::{japanese, smoothing_multiplier, DispersionParams, TorusGrid};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

fn require_real(params: &DispersionParams) -> Result<()> {
    if !params.has_real_epsilon() {
        return Err(Error::Domain(format!(
            "X^{{s,b}} is only set up for real ε (ε² = {})",
            params.eps2()
        )));
    }
    Ok(())
}

/// `‖⟨k⟩^s ⟨τ+w(k)⟩^b û‖_{L²_{k,τ}}` with the Plancherel normalisation.
pub fn xsb_norm(f: &SpaceTimeField, s: f64, b: f64, params: &DispersionParams) -> Result<f64> {
    require_real(params)?;
    let sum: f64 = f
        .modes()
        .map(|(k, tau, c)| {
            let kf = k as f64;
            let ws = if s == 0.0 { 1.0 } else { japanese(kf).powf(2.0 * s) };
            let wb = if b == 0.0 { 1.0 } else { japanese(tau + params.symbol_real(kf)).powf(2.0 * b) };
            ws * wb * c.norm_sqr()
        })
        .sum();
    Ok((sum / (2.0 * PI * f.time_window())).sqrt())
}

/// The `m` with `2^m ≤ x < 2^{m+1}`, for `x ≥ 1`.
pub fn shell_index(x: f64) -> u32 {
    let mut m = x.log2().floor().max(0.0) as u32;
    while m > 0 && 2f64.powi(m as i32) > x {
        m -= 1;
    }
    while 2f64.powi(m as i32 + 1) <= x {
        m += 1;
    }
    m
}

/// The part of a field in one dyadic shell `2^m ≤ ⟨τ+w(k)⟩ < 2^{m+1}`.
#[derive(Debug, Clone)]
pub struct DyadicPiece<'a> {
    pub parent: &'a SpaceTimeField,
    pub shell: u32,
    pub field: SpaceTimeField,
}

pub fn dyadic_project<'a>(f: &'a SpaceTimeField, m: u32, params: &DispersionParams) -> Result<DyadicPiece<'a>> {
    require_real(params)?;
    let field = f.map_modes(|k, tau, c| {
        if shell_index(japanese(tau + params.symbol_real(k as f64))) == m {
            c
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    Ok(DyadicPiece { parent: f, shell: m, field })
}

/// All non-empty shells, in increasing order of `m`.
pub fn dyadic_decomposition<'a>(f: &'a SpaceTimeField, params: &DispersionParams) -> Result<Vec<DyadicPiece<'a>>> {
    require_real(params)?;
    let top = f
        .modes()
        .filter(|(_, _, c)| c.norm_sqr() > 0.0)
        .map(|(k, tau, _)| shell_index(japanese(tau + params.symbol_real(k as f64))))
        .max();
    let Some(top) = top else { return Ok(Vec::new()) };
    (0..=top).map(|m| dyadic_project(f, m, params)).collect()
}

/// `‖u‖_{L^p(𝕋×[0,T_w])}` by the trapezoidal rule on a grid refined by
/// `max(2, ⌈p/2⌉+1)`, which integrates `|u|^p` exactly for even `p`.
pub fn lebesgue_norm(f: &SpaceTimeField, p: f64) -> f64 {
    let pad = ((p / 2.0).ceil() as usize + 1).max(2);
    let (nx, nt, samples) = f.samples_padded(pad);
    let w = 2.0 * PI / nx as f64 * f.time_window() / nt as f64;
    let half = p / 2.0;
    let sum: f64 = samples
        .iter()
        .map(|c| {
            let a = c.norm_sqr();
            if half == 1.0 {
                a
            } else if half.fract() == 0.0 {
                a.powi(half as i32)
            } else {
                a.powf(half)
            }
        })
        .sum();
    (sum * w).powf(1.0 / p)
}

/// `‖f‖_{L^p} / ‖f‖_{X^{0,b}}`.
pub fn embedding_ratio(f: &SpaceTimeField, p: u32, b: f64, params: &DispersionParams) -> Result<f64> {
    let den = xsb_norm(f, 0.0, b, params)?;
    if den == 0.0 {
        return Err(Error::ZeroDenominator("X^{0,b} norm of the field vanishes".into()));
    }
    Ok(lebesgue_norm(f, p as f64) / den)
}

/// Both sides of the trilinear estimate
/// `‖J_ε(f ḡ)h‖_{X^{s,-5/16}} ≲ Σ (one factor in X^{s,5/16}, two in X^{0,5/16})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrilinearProbe {
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

pub fn trilinear_inequality_probe(
    f: &SpaceTimeField,
    g: &SpaceTimeField,
    h: &SpaceTimeField,
    s: f64,
    params: &DispersionParams,
) -> Result<TrilinearProbe> {
    trilinear_inequality_probe_with(f, g, h, s, params, 4)
}

/// As [`trilinear_inequality_probe`], with the product formed on a grid
/// refined by `pad`; `pad ≥ 4` leaves the cubic product alias-free.
pub fn trilinear_inequality_probe_with(
    f: &SpaceTimeField,
    g: &SpaceTimeField,
    h: &SpaceTimeField,
    s: f64,
    params: &DispersionParams,
    pad: usize,
) -> Result<TrilinearProbe> {
    require_real(params)?;
    if s < 0.0 {
        return Err(Error::Domain(format!("s must be nonnegative, got {s}")));
    }
    let same = |a: &SpaceTimeField| {
        a.grid() == f.grid() && a.num_time_samples() == f.num_time_samples() && a.time_window() == f.time_window()
    };
    if !same(g) || !same(h) {
        return Err(Error::Dimension("trilinear probe needs fields on one lattice".into()));
    }
    let b = 5.0 / 16.0;
    let norms = |a: &SpaceTimeField| -> Result<(f64, f64)> { Ok((xsb_norm(a, 0.0, b, params)?, xsb_norm(a, s, b, params)?)) };
    let ((f0, fs), (g0, gs), (h0, hs)) = (norms(f)?, norms(g)?, norms(h)?);
    let rhs = fs * g0 * h0 + f0 * gs * h0 + f0 * g0 * hs;
    if rhs == 0.0 {
        return Err(Error::ZeroDenominator("right-hand side of the trilinear estimate vanishes".into()));
    }

    let (nx, nt, fs_) = f.samples_padded(pad);
    let (_, _, gs_) = g.samples_padded(pad);
    let (_, _, hs_) = h.samples_padded(pad);
    let fine = TorusGrid::new(nx)?;
    let window = f.window();
    let fg: Vec<Complex64> = fs_.iter().zip(&gs_).map(|(a, b)| a * b.conj()).collect();
    let fg = SpaceTimeField::from_samples(fine, f.time_window(), nt, fg, window)?;
    let jfg = fg.map_modes(|k, _, c| c * smoothing_multiplier(k, params));
    let prod: Vec<Complex64> = jfg.samples().iter().zip(&hs_).map(|(a, b)| a * b).collect();
    let prod = SpaceTimeField::from_samples(fine, f.time_window(), nt, prod, window)?;
    let lhs = xsb_norm(&prod, s, -b, params)?;
    Ok(TrilinearProbe { lhs, rhs, ratio: lhs / rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::restriction::Window;
    use crate::spectral::TorusGrid;

    fn plane(k: i64, l: i64) -> SpaceTimeField {
        let g = TorusGrid::new(16).unwrap();
        let f = SpaceTimeField::zeros(g, 2.0 * PI, 256, Window::Rectangular).unwrap();
        f.map_modes(|kk, tau, _| {
            if kk == k && (tau - l as f64).abs() < 1e-9 {
                Complex64::new(4.0 * PI * PI, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn shells() {
        assert_eq!(shell_index(1.0), 0);
        assert_eq!(shell_index(1.999), 0);
        assert_eq!(shell_index(2.0), 1);
        assert_eq!(shell_index(japanese(100.0)), 6);
        assert_eq!(shell_index(1024.0), 10);
    }

    #[test]
    fn plane_wave_norms() {
        // |u| ≡ 1 on 𝕋×[0,2π]: every L^p norm is (4π²)^{1/p}
        let f = plane(2, 3);
        for p in [2.0, 4.0, 6.0] {
            assert!((lebesgue_norm(&f, p) - (4.0 * PI * PI).powf(1.0 / p)).abs() < 1e-12);
        }
        assert!((f.l2_norm() - 2.0 * PI).abs() < 1e-12);
        let params = DispersionParams::real(0.0);
        let x = xsb_norm(&f, 1.0, 0.5, &params).unwrap();
        assert!((x - 2.0 * PI * japanese(2.0) * japanese(3.0 + 4.0).sqrt()).abs() < 1e-12);
        // on the characteristic τ = -w(n) the b-weight is 1
        let on = plane(2, -4);
        let x = xsb_norm(&on, 1.0, 0.7, &params).unwrap();
        assert!((x - 2.0 * PI * japanese(2.0)).abs() < 1e-12);
    }

    #[test]
    fn shifted_plane_wave_shell() {
        // w(2) = 4 with ε = 0; τ = -4 + 100
        let f = plane(2, 96);
        let params = DispersionParams::real(0.0);
        let pieces = dyadic_decomposition(&f, &params).unwrap();
        let nonzero: Vec<u32> = pieces.iter().filter(|p| p.field.l2_norm() > 0.0).map(|p| p.shell).collect();
        assert_eq!(nonzero, vec![6]);
    }

    #[test]
    fn complex_epsilon_rejected() {
        let f = plane(1, 1);
        let p = DispersionParams::from_eps2(Complex64::new(1.0, 0.2));
        assert!(matches!(xsb_norm(&f, 0.0, 0.5, &p), Err(Error::Domain(_))));
        assert!(matches!(dyadic_project(&f, 0, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn zero_denominator() {
        let g = TorusGrid::new(8).unwrap();
        let z = SpaceTimeField::zeros(g, 1.0, 8, Window::Rectangular).unwrap();
        let p = DispersionParams::real(1.0);
        assert!(matches!(embedding_ratio(&z, 4, 0.3, &p), Err(Error::ZeroDenominator(_))));
        assert!(matches!(trilinear_inequality_probe(&z, &z, &z, 0.0, &p), Err(Error::ZeroDenominator(_))));
        assert_eq!(lebesgue_norm(&z, 4.0), 0.0);
    }

    #[test]
    fn single_mode_trilinear_is_finite() {
        let p = DispersionParams::real(1.0);
        let (f, g, h) = (plane(1, -2), plane(2, -20), plane(-1, -2));
        let r = trilinear_inequality_probe(&f, &g, &h, 0.0, &p).unwrap();
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
        // f ḡ = e^{i(-x+18t)} and J halves it; the product with h is the unit
        // plane wave at (k, τ) = (-2, 16), with τ + w(k) = 36
        let expected_lhs = 2.0 * PI * 0.5 * japanese(36.0).powf(-5.0 / 16.0);
        assert!((r.lhs - expected_lhs).abs() < 1e-10 * expected_lhs, "{} vs {expected_lhs}", r.lhs);
    }
}
