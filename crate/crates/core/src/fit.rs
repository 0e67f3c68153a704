//! Least-squares fits used to turn "≃ N^a" statements into measurable slopes.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Ordinary least squares `y ≈ intercept + slope·x`.
pub fn linear(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    LineFit { slope, intercept, r_squared }
}

/// Slope of `ln y` against `ln x`.
pub fn log_log(xs: &[f64], ys: &[f64]) -> LineFit {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear(&lx, &ly)
}

/// Two-regressor least squares `y ≈ c + a·u + b·v`, returned as `(c, a, b)`.
pub fn plane(us: &[f64], vs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = ys.len() as f64;
    let mean = |z: &[f64]| z.iter().sum::<f64>() / n;
    let (mu, mv, my) = (mean(us), mean(vs), mean(ys));
    let mut suu = 0.0;
    let mut svv = 0.0;
    let mut suv = 0.0;
    let mut suy = 0.0;
    let mut svy = 0.0;
    for i in 0..ys.len() {
        let (u, v, y) = (us[i] - mu, vs[i] - mv, ys[i] - my);
        suu += u * u;
        svv += v * v;
        suv += u * v;
        suy += u * y;
        svy += v * y;
    }
    let det = suu * svv - suv * suv;
    let a = (suy * svv - svy * suv) / det;
    let b = (svy * suu - suy * suv) / det;
    (my - a * mu - b * mv, a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = [4.0, 8.0, 16.0, 32.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.75)).collect();
        let f = log_log(&xs, &ys);
        assert!((f.slope - 1.75).abs() < 1e-12);
        assert!((f.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn plane_recovers_coefficients() {
        let us = [0.0, 1.0, 2.0, 0.0, 3.0, 1.0];
        let vs = [0.0, 0.0, 1.0, 2.0, 1.0, 3.0];
        let ys: Vec<f64> = us.iter().zip(&vs).map(|(u, v)| 0.5 + 2.0 * u - 0.25 * v).collect();
        let (c, a, b) = plane(&us, &vs, &ys);
        assert!((c - 0.5).abs() < 1e-12 && (a - 2.0).abs() < 1e-12 && (b + 0.25).abs() < 1e-12);
    }
}
