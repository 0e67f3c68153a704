use super::field::{SpaceTimeField, Window};
use super::norms::{lebesgue_norm, xsb_norm};
use crate::fit::{log_log, LineFit};
use crate::spectral::{DispersionParams, TorusGrid};
use crate::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::io::Write;

/// Dyadic range of box sizes used for the exponent fits.
pub const SHARPNESS_NS: [i64; 5] = [4, 8, 16, 32, 64];

/// Log-log slope of the necessity ratio above which it counts as diverging.
pub const DIVERGENCE_SLOPE: f64 = 0.02;

/// Number of `τ`-lattice steps across the half-height `N^δ` of the box.
const DEFAULT_J0: i64 = 32;

/// `û_N = χ_{[-N,N]}(k)·χ_{[-N^δ,N^δ]}(τ)` with `τ` sampled at spacing
/// `N^δ/32`, so the lattice is self-similar in `N`.
pub fn sharpness_family(n: i64, delta: u32) -> Result<SpaceTimeField> {
    sharpness_family_on(TorusGrid::containing(n.max(0) as usize), n, delta, DEFAULT_J0)
}

/// As [`sharpness_family`] on an explicit grid with `j0` lattice steps per
/// half-height.
pub fn sharpness_family_on(grid: TorusGrid, n: i64, delta: u32, j0: i64) -> Result<SpaceTimeField> {
    if n < 2 || delta < 2 || j0 < 1 {
        return Err(Error::Domain(format!("need N ≥ 2, δ ≥ 2, J₀ ≥ 1 (got N={n}, δ={delta}, J₀={j0})")));
    }
    if n >= grid.max_frequency() {
        return Err(Error::Dimension(format!(
            "box |k| ≤ {n} does not fit a grid resolving |k| < {}",
            grid.max_frequency()
        )));
    }
    let height = (n as f64).powi(delta as i32);
    let dtau = height / j0 as f64;
    let m = ((2 * j0 + 2) as usize).next_power_of_two();
    let f = SpaceTimeField::zeros(grid, 2.0 * PI / dtau, m, Window::Rectangular)?;
    Ok(f.map_modes(|k, tau, _| {
        if k.abs() <= n && (tau / dtau).round().abs() <= j0 as f64 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// Sharpness fields over a range of `N` with their Lebesgue norms cached, so
/// that `X^{0,b}` norms for many `b` are cheap.
#[derive(Debug, Clone)]
pub struct SharpnessData {
    pub delta: u32,
    pub ns: Vec<i64>,
    pub fields: Vec<SpaceTimeField>,
    /// `(p, ‖u_N‖_{L^p} for each N)`.
    pub lebesgue: Vec<(u32, Vec<f64>)>,
}

impl SharpnessData {
    pub fn new(delta: u32, ns: &[i64], ps: &[u32]) -> Result<Self> {
        let fields: Vec<SpaceTimeField> = ns.iter().map(|&n| sharpness_family(n, delta)).collect::<Result<_>>()?;
        let lebesgue = ps
            .iter()
            .map(|&p| (p, fields.iter().map(|f| lebesgue_norm(f, p as f64)).collect()))
            .collect();
        Ok(SharpnessData { delta, ns: ns.to_vec(), fields, lebesgue })
    }

    fn params(&self) -> DispersionParams {
        DispersionParams::monomial(self.delta).expect("δ ≥ 2 checked on construction")
    }

    pub fn xsb(&self, b: f64) -> Vec<f64> {
        let p = self.params();
        self.fields.iter().map(|f| xsb_norm(f, 0.0, b, &p).expect("monomial symbol is real")).collect()
    }

    pub fn lp(&self, p: u32) -> Option<&[f64]> {
        self.lebesgue.iter().find(|(q, _)| *q == p).map(|(_, v)| v.as_slice())
    }

    fn xs(&self) -> Vec<f64> {
        self.ns.iter().map(|&n| n as f64).collect()
    }

    pub fn fit(&self, ys: &[f64]) -> LineFit {
        log_log(&self.xs(), ys)
    }
}

/// A fitted exponent against its predicted value.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub quantity: String,
    pub delta: u32,
    pub b: Option<f64>,
    pub p: Option<u32>,
    pub slope: f64,
    pub expected: f64,
    pub r_squared: f64,
}

impl ExponentFit {
    pub fn relative_error(&self) -> f64 {
        (self.slope / self.expected - 1.0).abs()
    }
}

#[derive(Debug, Clone)]
pub struct SharpnessSweep {
    pub data: SharpnessData,
    pub bs: Vec<f64>,
    pub xsb: Vec<Vec<f64>>,
    pub fits: Vec<ExponentFit>,
}

/// Norms of the sharpness family and their log-log slopes against
/// `(2q-1)(1+δ)/(2q)` for `L^{2q}` and `(1+(2b+1)δ)/2` for `X^{0,b}`.
pub fn sharpness_sweep(delta: u32, ns: &[i64], ps: &[u32], bs: &[f64]) -> Result<SharpnessSweep> {
    if let Some(&p) = ps.iter().find(|&&p| p < 2 || p % 2 != 0) {
        return Err(Error::Domain(format!("sharpness exponents are stated for even p, got {p}")));
    }
    let data = SharpnessData::new(delta, ns, ps)?;
    let d = delta as f64;
    let mut fits = Vec::new();
    for (p, values) in &data.lebesgue {
        let q = (*p / 2) as f64;
        let lf = data.fit(values);
        fits.push(ExponentFit {
            quantity: format!("L{p}"),
            delta,
            b: None,
            p: Some(*p),
            slope: lf.slope,
            expected: (2.0 * q - 1.0) * (1.0 + d) / (2.0 * q),
            r_squared: lf.r_squared,
        });
    }
    let mut xsb = Vec::new();
    for &b in bs {
        let values = data.xsb(b);
        let lf = data.fit(&values);
        fits.push(ExponentFit {
            quantity: format!("X0,{b}"),
            delta,
            b: Some(b),
            p: None,
            slope: lf.slope,
            expected: (1.0 + (2.0 * b + 1.0) * d) / 2.0,
            r_squared: lf.r_squared,
        });
        xsb.push(values);
    }
    Ok(SharpnessSweep { data, bs: bs.to_vec(), xsb, fits })
}

/// Rows `N, delta, b, p, norm, slope, r_squared`; the slope columns repeat
/// the fit for the quantity on every row.
pub fn write_sharpness_csv<W: Write>(sweep: &SharpnessSweep, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["N", "delta", "b", "p", "norm", "slope", "expected_slope", "r_squared"])?;
    let d = sweep.data.delta.to_string();
    for fit in &sweep.fits {
        let values: &[f64] = match (fit.p, fit.b) {
            (Some(p), _) => sweep.data.lp(p).unwrap_or(&[]),
            (None, Some(b)) => {
                let i = sweep.bs.iter().position(|&x| x == b).expect("b from the sweep");
                &sweep.xsb[i]
            }
            _ => &[],
        };
        for (n, v) in sweep.data.ns.iter().zip(values) {
            w.write_record([
                n.to_string(),
                d.clone(),
                fit.b.map(|b| b.to_string()).unwrap_or_default(),
                fit.p.map(|p| p.to_string()).unwrap_or_default(),
                format!("{v:.12e}"),
                format!("{:.6}", fit.slope),
                format!("{:.6}", fit.expected),
                format!("{:.6}", fit.r_squared),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Diverges,
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NecessityVerdict {
    pub q: u32,
    pub delta: u32,
    pub b: f64,
    pub b_star: f64,
    pub slope: f64,
    pub r_squared: f64,
    pub verdict: Verdict,
}

fn b_star(q: u32, delta: u32) -> f64 {
    (q as f64 - 1.0) * (1.0 + delta as f64) / (2.0 * q as f64 * delta as f64)
}

fn verdict_from(data: &SharpnessData, q: u32, b: f64) -> NecessityVerdict {
    let lp = data.lp(2 * q).expect("L^{2q} cached");
    let ratio: Vec<f64> = lp.iter().zip(data.xsb(b)).map(|(l, x)| l / x).collect();
    let lf = data.fit(&ratio);
    NecessityVerdict {
        q,
        delta: data.delta,
        b,
        b_star: b_star(q, data.delta),
        slope: lf.slope,
        r_squared: lf.r_squared,
        verdict: if lf.slope > DIVERGENCE_SLOPE { Verdict::Diverges } else { Verdict::Bounded },
    }
}

fn check_qd(q: u32, delta: u32) -> Result<()> {
    if q < 2 || delta < 2 {
        return Err(Error::Domain(format!("need q ≥ 2 and δ ≥ 2 (got q={q}, δ={delta})")));
    }
    Ok(())
}

/// Growth of `‖u_N‖_{L^{2q}}/‖u_N‖_{X^{0,b}}` along the sharpness family:
/// a log-log slope above [`DIVERGENCE_SLOPE`] is reported as divergence.
pub fn necessity_check(q: u32, delta: u32, b: f64) -> Result<NecessityVerdict> {
    check_qd(q, delta)?;
    let data = SharpnessData::new(delta, &SHARPNESS_NS, &[2 * q])?;
    Ok(verdict_from(&data, q, b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct NecessityCrossover {
    pub q: u32,
    pub delta: u32,
    pub b_star: f64,
    pub spacing: f64,
    pub verdicts: Vec<NecessityVerdict>,
    /// Smallest tested `b` judged bounded.
    pub first_bounded: Option<f64>,
    /// Largest tested `b` judged divergent.
    pub last_diverging: Option<f64>,
}

impl NecessityCrossover {
    /// The verdict flips once, and the flip brackets `b*` to within the
    /// grid spacing.
    pub fn matches_threshold(&self) -> bool {
        let monotone = self
            .verdicts
            .windows(2)
            .all(|w| !(w[0].verdict == Verdict::Bounded && w[1].verdict == Verdict::Diverges));
        match (self.first_bounded, self.last_diverging) {
            (Some(fb), Some(ld)) => {
                monotone && ld < self.b_star + 1e-12 && (fb - self.b_star).abs() <= self.spacing + 1e-12
            }
            _ => false,
        }
    }
}

/// Scans `b = 0, s, 2s, …, 1` and locates where the verdict flips.
pub fn necessity_crossover(q: u32, delta: u32, spacing: f64) -> Result<NecessityCrossover> {
    check_qd(q, delta)?;
    if !(spacing > 0.0 && spacing <= 1.0) {
        return Err(Error::Domain(format!("b-grid spacing must lie in (0, 1], got {spacing}")));
    }
    let data = SharpnessData::new(delta, &SHARPNESS_NS, &[2 * q])?;
    let steps = (1.0 / spacing).round() as usize;
    let verdicts: Vec<NecessityVerdict> = (0..=steps).map(|i| verdict_from(&data, q, i as f64 * spacing)).collect();
    let first_bounded = verdicts.iter().find(|v| v.verdict == Verdict::Bounded).map(|v| v.b);
    let last_diverging = verdicts.iter().rev().find(|v| v.verdict == Verdict::Diverges).map(|v| v.b);
    Ok(NecessityCrossover { q, delta, b_star: b_star(q, delta), spacing, verdicts, first_bounded, last_diverging })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_must_fit() {
        let g = TorusGrid::new(16).unwrap();
        assert!(matches!(sharpness_family_on(g, 8, 2, 32), Err(Error::Dimension(_))));
        assert!(sharpness_family_on(g, 7, 2, 32).is_ok());
        assert!(sharpness_family(1, 2).is_err());
    }

    #[test]
    fn box_cardinality() {
        let f = sharpness_family(4, 3).unwrap();
        let ones = f.coeffs().iter().filter(|c| c.re == 1.0).count();
        assert_eq!(ones, 9 * 65);
    }
}
