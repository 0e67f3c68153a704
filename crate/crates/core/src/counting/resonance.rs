use crate::spectral::DispersionParams;
use crate::{Error, Result};
use std::collections::{BTreeMap, HashMap};

/// A reduced fraction `p/q`, `q > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rational {
    pub p: i128,
    pub q: i128,
}

impl Rational {
    pub fn new(p: i128, q: i128) -> Result<Self> {
        if q == 0 {
            return Err(Error::ZeroDenominator(format!("{p}/0")));
        }
        let g = gcd(p.abs(), q.abs()).max(1);
        let s = q.signum();
        Ok(Rational { p: s * p / g, q: s * q / g })
    }

    pub fn to_f64(self) -> f64 {
        self.p as f64 / self.q as f64
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

const MAX_DENOMINATOR: i128 = 1_000_000;

/// Recovers `ε² = p/q` from a real ε²: the smallest `q ≤ 10⁶` for which
/// `p/q` rounds to exactly the stored value.
pub fn rational_eps2(params: &DispersionParams) -> Result<Rational> {
    if params.is_monomial() || params.beta() != 0.0 {
        return Err(Error::Exactness(format!("ε² = {} is not a real rational", params.eps2())));
    }
    let x = params.alpha();
    for q in 1..=MAX_DENOMINATOR {
        let p = (x * q as f64).round();
        if p.abs() < 1e30 && p / q as f64 == x {
            return Rational::new(p as i128, q);
        }
    }
    Err(Error::Exactness(format!("ε² = {x} has no rational form with denominator ≤ {MAX_DENOMINATOR}")))
}

fn check_range(n_box: i64, n: i64, eps2: Rational) -> Result<()> {
    let big = (2 * n_box.unsigned_abs() as i128 + n.unsigned_abs() as i128).pow(2);
    let ok = big
        .checked_mul(big)
        .and_then(|k4| k4.checked_mul(3 * (eps2.p.abs() + eps2.q)))
        .is_some();
    if ok {
        Ok(())
    } else {
        Err(Error::Exactness(format!("N = {n_box} overflows 128-bit arithmetic")))
    }
}

/// `q·(ε²Σk⁴ + Σk²)` for `(k₁, k₂, n - k₁ - k₂)`.
fn scaled_level(eps2: Rational, n: i128, k1: i128, k2: i128) -> i128 {
    let k3 = n - k1 - k2;
    let s2 = k1 * k1 + k2 * k2 + k3 * k3;
    let s4 = k1.pow(4) + k2.pow(4) + k3.pow(4);
    eps2.p * s4 + eps2.q * s2
}

/// `r_{N,n,j}` in exact integer arithmetic.
pub fn resonance_count_exact(n_box: i64, n: i64, j: i64, eps2: Rational) -> Result<u64> {
    check_range(n_box, n, eps2)?;
    let target = eps2.q * j as i128;
    let (nn, b) = (n as i128, n_box as i128);
    let mut count = 0;
    for k1 in -b..=b {
        for k2 in -b..=b {
            if scaled_level(eps2, nn, k1, k2) == target {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// `|{(k₁,k₂) : |k₁|,|k₂| ≤ N, ε²(k₁⁴+k₂⁴+k₃⁴) + k₁²+k₂²+k₃² = j}|`,
/// `k₃ = n - k₁ - k₂`, for rational ε².
pub fn resonance_count(n_box: i64, n: i64, j: i64, params: &DispersionParams) -> Result<u64> {
    resonance_count_exact(n_box, n, j, rational_eps2(params)?)
}

/// Counts per level. Keys are `q·level` (the level is `key / q`).
pub fn resonance_histogram(n_box: i64, n: i64, eps2: Rational) -> Result<BTreeMap<i128, u64>> {
    check_range(n_box, n, eps2)?;
    let (nn, b) = (n as i128, n_box as i128);
    let mut hist: HashMap<i128, u64> = HashMap::new();
    for k1 in -b..=b {
        for k2 in -b..=b {
            *hist.entry(scaled_level(eps2, nn, k1, k2)).or_default() += 1;
        }
    }
    Ok(hist.into_iter().collect())
}

/// The same histogram with `k₂` outermost and `k₃` as the running variable.
pub fn resonance_histogram_by_k2(n_box: i64, n: i64, eps2: Rational) -> Result<BTreeMap<i128, u64>> {
    check_range(n_box, n, eps2)?;
    let (nn, b) = (n as i128, n_box as i128);
    let mut hist = BTreeMap::new();
    for k2 in (-b..=b).rev() {
        // k₁ ∈ [-N, N] ⇔ k₃ ∈ [n - k₂ - N, n - k₂ + N]
        for k3 in nn - k2 - b..=nn - k2 + b {
            let k1 = nn - k2 - k3;
            let s4 = k3.pow(4) + k2.pow(4) + k1.pow(4);
            let s2 = k3 * k3 + k2 * k2 + k1 * k1;
            *hist.entry(eps2.q * s2 + eps2.p * s4).or_insert(0u64) += 1;
        }
    }
    Ok(hist)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonanceMax {
    pub n_box: i64,
    pub n: i64,
    pub max_count: u64,
    /// Level attaining the maximum (smallest such), as `q·level`.
    pub level_scaled: i128,
    pub distinct_levels: usize,
}

/// `max_j r_{N,n,j}` over all attained levels.
pub fn resonance_max(n_box: i64, n: i64, params: &DispersionParams) -> Result<ResonanceMax> {
    let eps2 = rational_eps2(params)?;
    let hist = resonance_histogram(n_box, n, eps2)?;
    let (level, count) = hist
        .iter()
        .fold((0i128, 0u64), |best, (&l, &c)| if c > best.1 { (l, c) } else { best });
    Ok(ResonanceMax { n_box, n, max_count: count, level_scaled: level, distinct_levels: hist.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_recovery() {
        let r = rational_eps2(&DispersionParams::from_eps2((1.0 / 3.0).into())).unwrap();
        assert_eq!((r.p, r.q), (1, 3));
        let r = rational_eps2(&DispersionParams::real(0.5)).unwrap();
        assert_eq!((r.p, r.q), (1, 4));
        assert!(matches!(
            rational_eps2(&DispersionParams::from_eps2(std::f64::consts::PI.into())),
            Err(Error::Exactness(_))
        ));
    }

    #[test]
    fn below_minimum_is_empty() {
        let p = DispersionParams::real(1.0);
        assert_eq!(resonance_count(10, 0, -1, &p).unwrap(), 0);
        // n = 0: only the origin reaches level 0
        assert_eq!(resonance_count(10, 0, 0, &p).unwrap(), 1);
    }
}
