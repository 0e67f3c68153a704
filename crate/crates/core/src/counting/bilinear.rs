use super::trilinear::VCertificate;
use super::window::sup_window;
use crate::fit::linear;
use crate::spectral::{Dispersion, DispersionParams};
use crate::{Error, Result};

/// A shell-count query: shells `m, n` (and `l` for trilinear counts),
/// threshold `Θ = C·2^{m+n(+l)}`, and optional search restrictions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountQuery {
    pub m: u32,
    pub n: u32,
    pub l: Option<u32>,
    pub params: DispersionParams,
    pub threshold_constant: f64,
    /// Search box `|k₁|, |k₂| ≤ bound`; `None` lets the count derive a
    /// provably exhaustive box.
    pub k1_bound: Option<i64>,
    /// Range of `τ` for suprema; `None` covers the bottom of the level set.
    pub tau_range: Option<(f64, f64)>,
    pub certificate: Option<VCertificate>,
}

impl CountQuery {
    /// Bilinear query with `C = 4`.
    pub fn bilinear(m: u32, n: u32, params: DispersionParams) -> Self {
        CountQuery { m, n, l: None, params, threshold_constant: 4.0, k1_bound: None, tau_range: None, certificate: None }
    }

    /// Trilinear query with `C = 6`.
    pub fn trilinear(m: u32, n: u32, l: u32, params: DispersionParams) -> Self {
        CountQuery { l: Some(l), threshold_constant: 6.0, ..Self::bilinear(m, n, params) }
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.threshold_constant = c;
        self
    }

    pub fn with_box(mut self, bound: i64) -> Self {
        self.k1_bound = Some(bound);
        self
    }

    pub fn with_tau_range(mut self, lo: f64, hi: f64) -> Self {
        self.tau_range = Some((lo, hi));
        self
    }

    pub fn with_certificate(mut self, cert: VCertificate) -> Self {
        self.certificate = Some(cert);
        self
    }

    pub fn shells_total(&self) -> u32 {
        self.m + self.n + self.l.unwrap_or(0)
    }

    /// `Θ = C·2^{m+n(+l)}`.
    pub fn threshold(&self) -> Result<f64> {
        if !(self.threshold_constant > 0.0) {
            return Err(Error::Domain(format!("threshold constant must be positive, got {}", self.threshold_constant)));
        }
        Ok(self.threshold_constant * 2f64.powi(self.shells_total() as i32))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Shape {
    /// `w = αx⁴ + x²`, `α ≥ 0`.
    Quartic(f64),
    Even(u32),
    Odd(u32),
}

pub(crate) fn shape(params: &DispersionParams) -> Result<Shape> {
    match params.dispersion() {
        Dispersion::Monomial(d) if d % 2 == 0 => Ok(Shape::Even(d)),
        Dispersion::Monomial(d) => Ok(Shape::Odd(d)),
        Dispersion::Quartic if params.has_real_epsilon() => Ok(Shape::Quartic(params.alpha())),
        Dispersion::Quartic => Err(Error::Domain(format!(
            "lattice counts need real ε or a monomial symbol (ε² = {})",
            params.eps2()
        ))),
    }
}

fn ipow(x: i128, d: u32) -> Result<i128> {
    x.checked_pow(d).ok_or_else(|| Error::Exactness(format!("{x}^{d} overflows 128 bits")))
}

/// `w(k₁) + w(k - k₁)`; odd monomials are evaluated in exact integers.
pub fn bilinear_level(params: &DispersionParams, k: i64, k1: i64) -> f64 {
    match params.dispersion() {
        Dispersion::Monomial(d) if d % 2 == 1 => {
            let v = ipow(k1 as i128, d).and_then(|a| Ok(a + ipow((k - k1) as i128, d)?));
            v.map(|v| v as f64).unwrap_or(f64::NAN)
        }
        _ => params.symbol_real(k1 as f64) + params.symbol_real((k - k1) as f64),
    }
}

/// `min_{x∈ℝ} w(x) + w(k-x) = 2w(k/2)` (for odd δ, `k > 0`).
pub fn bilinear_min_level(params: &DispersionParams, k: i64) -> f64 {
    2.0 * params.symbol_real(k as f64 / 2.0)
}

/// The completed-square form of the level around `x = k/2`:
/// `2ε²(y² + (ε⁻² + 3k²/2)/2)² - (ε²k⁴ + k² + 1/(2ε²))`, `y = k₁ - k/2`.
pub fn completed_square_level(eps2: f64, k: f64, y: f64) -> f64 {
    let a = 0.5 * (1.0 / eps2 + 1.5 * k * k);
    2.0 * eps2 * (y * y + a).powi(2) - (eps2 * k.powi(4) + k * k + 0.5 / eps2)
}

/// Radius `Y` such that `w(k/2+y) + w(k/2-y) - min ≤ excess` forces `|y| ≤ Y`.
pub(crate) fn radius(shape: Shape, k: i64, excess: f64) -> f64 {
    if excess <= 0.0 {
        return 0.0;
    }
    match shape {
        // excess ≥ 2αy⁴ + 2y²
        Shape::Quartic(alpha) => (2.0 * excess / (2.0 + (4.0 + 8.0 * alpha * excess).sqrt())).sqrt(),
        // excess ≥ |y|^δ
        Shape::Even(d) => excess.powf(1.0 / d as f64),
        // excess ≥ δ|k||y|^{δ-1}
        Shape::Odd(d) => (excess / (d as f64 * k.abs() as f64)).powf(1.0 / (d as f64 - 1.0)),
    }
}

/// Reduces an odd-δ query to `k > 0` using `count(τ, k) = count(-τ, -k)`.
fn orient(shape: Shape, tau: f64, k: i64) -> Result<(f64, i64)> {
    match shape {
        Shape::Odd(_) if k == 0 => Err(Error::Domain(
            "for odd δ and k = 0 the level w(k₁)+w(-k₁) vanishes identically".into(),
        )),
        Shape::Odd(_) if k < 0 => Ok((-tau, -k)),
        _ => Ok((tau, k)),
    }
}

/// `|{k₁ : |τ + w(k₁) + w(k-k₁)| ≤ Θ}|`.
///
/// The level is unimodal about `k/2`, so each monotone side is counted by
/// binary search inside a box derived from the growth bound of the level.
pub fn count_bilinear(query: &CountQuery, tau: f64, k: i64) -> Result<u64> {
    let sh = shape(&query.params)?;
    let theta = query.threshold()?;
    count_window(&query.params, sh, tau, k, theta, query.k1_bound)
}

pub(crate) fn count_window(
    p: &DispersionParams,
    sh: Shape,
    tau: f64,
    k: i64,
    theta: f64,
    bound: Option<i64>,
) -> Result<u64> {
    let (tau, k) = orient(sh, tau, k)?;
    let (lo, hi) = (-tau - theta, -tau + theta);
    let y = radius(sh, k, hi - bilinear_min_level(p, k));
    let needed = (k as f64 / 2.0).abs() + y;
    if let Some(b) = bound {
        if needed > b as f64 {
            return Err(Error::Inconclusive { reason: format!("search box |k₁| ≤ {b} too small"), required: needed });
        }
    }
    if hi < bilinear_min_level(p, k) {
        return Ok(0);
    }
    let c = k as f64 / 2.0;
    let (i_lo, i_hi) = ((c - y).ceil() as i64, (c + y).floor() as i64);
    let mid = k.div_euclid(2);
    let level = |k1: i64| bilinear_level(p, k, k1);
    // left side: level decreasing on [i_lo, mid]
    let left = if i_lo <= mid {
        let first = i_lo + partition(i_lo, mid, |k1| level(k1) > hi);
        let end = i_lo + partition(i_lo, mid, |k1| level(k1) >= lo);
        (end - first).max(0) as u64
    } else {
        0
    };
    // right side: level increasing on [mid+1, i_hi]
    let right = if mid < i_hi {
        let s = mid + 1;
        let first = s + partition(s, i_hi, |k1| level(k1) < lo);
        let end = s + partition(s, i_hi, |k1| level(k1) <= hi);
        (end - first).max(0) as u64
    } else {
        0
    };
    Ok(left + right)
}

/// Number of leading elements of `[a, b]` satisfying `pred` (which must be
/// true on a prefix).
fn partition(a: i64, b: i64, pred: impl Fn(i64) -> bool) -> i64 {
    let (mut lo, mut hi) = (0i64, b - a + 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if pred(a + mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Exhaustive oracle for [`count_bilinear`] over `|k₁| ≤ bound`.
pub fn count_bilinear_scan(query: &CountQuery, tau: f64, k: i64, bound: i64) -> Result<u64> {
    shape(&query.params)?;
    let theta = query.threshold()?;
    Ok((-bound..=bound)
        .filter(|&k1| (tau + bilinear_level(&query.params, k, k1)).abs() <= theta)
        .count() as u64)
}

/// A supremum over `τ` and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupCount {
    pub count: u64,
    pub tau: f64,
}

/// `sup_τ count_bilinear(τ, k)` over the query's `τ` range, by exact
/// enumeration of the breakpoints. The default range anchors the window
/// `[-τ-Θ, -τ+Θ]` anywhere in `[min level, min level + 8Θ]`.
pub fn sup_bilinear(query: &CountQuery, k: i64) -> Result<SupCount> {
    let sh = shape(&query.params)?;
    let theta = query.threshold()?;
    let (_, kk) = orient(sh, 0.0, k)?;
    let reflect = kk != k;
    let p = &query.params;
    let c = kk as f64 / 2.0;
    let mid = kk.div_euclid(2);
    let fmin = bilinear_level(p, kk, mid).min(bilinear_level(p, kk, mid + 1));
    let (a_lo, a_hi) = match query.tau_range {
        Some((t_lo, t_hi)) => {
            let (t_lo, t_hi) = if reflect { (-t_hi, -t_lo) } else { (t_lo, t_hi) };
            (-t_hi - theta, -t_lo - theta)
        }
        None => (fmin, fmin + 8.0 * theta),
    };
    let y = radius(sh, kk, a_hi + 2.0 * theta - bilinear_min_level(p, kk));
    let mut levels: Vec<f64> = ((c - y).ceil() as i64..=(c + y).floor() as i64)
        .map(|k1| bilinear_level(p, kk, k1))
        .filter(|&v| v <= a_hi + 2.0 * theta)
        .collect();
    levels.sort_by(f64::total_cmp);
    let (count, a) = sup_window(&levels, 2.0 * theta, a_lo, a_hi);
    let tau = -a - theta;
    Ok(SupCount { count, tau: if reflect { -tau } else { tau } })
}

/// One `(shells, k)` entry of a bound sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub shells_total: u32,
    pub k: i64,
    pub tau: f64,
    pub count: u64,
    pub bound: f64,
    pub ratio: f64,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: &'static str,
    pub eps2: f64,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    /// Empirical constant: largest ratio over shells `≤ max_total`.
    pub fn constant_up_to(&self, max_total: u32) -> f64 {
        self.rows.iter().filter(|r| r.shells_total <= max_total).map(|r| r.ratio).fold(0.0, f64::max)
    }

    /// `constant_up_to(hi) / constant_up_to(lo)`.
    pub fn stability(&self, lo: u32, hi: u32) -> f64 {
        self.constant_up_to(hi) / self.constant_up_to(lo)
    }

    /// Slope of `log₂ max_k count` against the shell total.
    pub fn growth_exponent(&self, min_total: u32) -> f64 {
        let mut totals: Vec<u32> = self.rows.iter().map(|r| r.shells_total).filter(|&t| t >= min_total).collect();
        totals.sort_unstable();
        totals.dedup();
        let ys: Vec<f64> = totals
            .iter()
            .map(|&t| {
                let c = self.rows.iter().filter(|r| r.shells_total == t).map(|r| r.count).max().unwrap_or(1);
                (c.max(1) as f64).log2()
            })
            .collect();
        let xs: Vec<f64> = totals.iter().map(|&t| t as f64).collect();
        linear(&xs, &ys).slope
    }
}

/// `sup_τ count_bilinear / bound` for every shell total `0..=max_total` and
/// every `k` in `ks`. The bound is `ε^{-1/2}2^{(m+n)/4}` for the quartic
/// symbol and `2^{(m+n)/δ}` for an even monomial.
pub fn verify_bilinear_bound(params: &DispersionParams, max_total: u32, ks: &[i64]) -> Result<BoundReport> {
    let sh = shape(params)?;
    let bound = |t: u32| match sh {
        Shape::Quartic(alpha) => alpha.sqrt().powf(-0.5) * 2f64.powf(t as f64 / 4.0),
        Shape::Even(d) => 2f64.powf(t as f64 / d as f64),
        Shape::Odd(_) => f64::NAN,
    };
    if let Shape::Odd(_) = sh {
        return Err(Error::Domain("odd δ has its own low/high split, see count_odd_delta".into()));
    }
    if let Shape::Quartic(a) = sh {
        if a <= 0.0 {
            return Err(Error::Domain("the ε^{-1/2} bound needs ε > 0".into()));
        }
    }
    let mut rows = Vec::new();
    for t in 0..=max_total {
        for &k in ks {
            let q = CountQuery::bilinear(0, t, *params);
            let s = sup_bilinear(&q, k)?;
            let b = bound(t);
            rows.push(BoundRow {
                shells_total: t,
                k,
                tau: s.tau,
                count: s.count,
                bound: b,
                ratio: s.count as f64 / b,
                exact: matches!(sh, Shape::Even(_)),
            });
        }
    }
    Ok(BoundReport { kind: "bilinear", eps2: params.alpha(), rows })
}

/// Location of the minimum of `x ↦ w(x) + w(k-x)` found three ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizerVerdict {
    pub k: i64,
    /// Best point of a scan with step 1/64.
    pub argmin_scan: f64,
    /// Golden-section search on the level (flat minima limit its accuracy
    /// to about `√(machine ε)` relative).
    pub argmin_golden: f64,
    /// Bisection on the sign of the derivative.
    pub argmin_derivative: f64,
    pub derivative_sign_change: bool,
    /// Even monomials: `w̃(k₁) - 2(k/2)^δ ≥ k₁^δ` for all `|k₁| ≤ 1000`.
    pub pointwise_inequality: Option<bool>,
}

impl MinimizerVerdict {
    pub fn holds(&self) -> bool {
        let c = self.k as f64 / 2.0;
        self.argmin_scan == c
            && (self.argmin_golden - c).abs() <= 1e-4 * (1.0 + c.abs())
            && (self.argmin_derivative - c).abs() <= 1e-10
            && self.derivative_sign_change
            && self.pointwise_inequality.unwrap_or(true)
    }
}

fn symbol_derivative(sh: Shape, x: f64) -> f64 {
    match sh {
        Shape::Quartic(a) => 4.0 * a * x.powi(3) + 2.0 * x,
        Shape::Even(d) | Shape::Odd(d) => d as f64 * x.powi(d as i32 - 1),
    }
}

pub fn verify_minimizer(k: i64, params: &DispersionParams) -> Result<MinimizerVerdict> {
    let sh = shape(params)?;
    if let Shape::Odd(_) = sh {
        return Err(Error::Domain("the minimiser statement is for real ε or even δ".into()));
    }
    let kf = k as f64;
    let f = |x: f64| params.symbol_real(x) + params.symbol_real(kf - x);
    let df = |x: f64| symbol_derivative(sh, x) - symbol_derivative(sh, kf - x);
    let half = kf.abs() + 10.0;
    let (a, b) = (kf / 2.0 - half, kf / 2.0 + half);

    let steps = (128.0 * half) as i64;
    let argmin_scan = (0..=steps)
        .map(|i| a + i as f64 / 64.0)
        .min_by(|x, y| f(*x).total_cmp(&f(*y)))
        .expect("non-empty scan");

    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (a, b);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    let argmin_golden = 0.5 * (lo + hi);

    let (mut lo, mut hi) = (a, b);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if df(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let argmin_derivative = 0.5 * (lo + hi);
    let h = 1e-3;
    let derivative_sign_change = df(kf / 2.0 - h) < 0.0 && df(kf / 2.0 + h) > 0.0;

    let pointwise_inequality = match sh {
        Shape::Even(d) => {
            let mut ok = true;
            for k1 in -1000i64..=1000 {
                // scaled by 2^δ: (2k₁+k)^δ + (k-2k₁)^δ - 2k^δ ≥ (2k₁)^δ
                let lhs = ipow((2 * k1 + k) as i128, d)? + ipow((k - 2 * k1) as i128, d)? - 2 * ipow(k as i128, d)?;
                if lhs < ipow((2 * k1) as i128, d)? {
                    ok = false;
                    break;
                }
            }
            Some(ok)
        }
        _ => None,
    };
    Ok(MinimizerVerdict {
        k,
        argmin_scan,
        argmin_golden,
        argmin_derivative,
        derivative_sign_change,
        pointwise_inequality,
    })
}
