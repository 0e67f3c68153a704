use super::bilinear::BoundReport;
use crate::Result;
use std::io::Write;

/// Largest number of sorted `levels` inside a closed window `[a, a+width]`
/// with `a ∈ [a_lo, a_hi]`, and a maximising `a`.
///
/// The count is piecewise constant in `a` and only increases when a level
/// enters at the right end, so the candidates `a_lo`, `a_hi`, every level
/// and every level minus `width` inside the range are exhaustive.
pub(crate) fn sup_window(levels: &[f64], width: f64, a_lo: f64, a_hi: f64) -> (u64, f64) {
    debug_assert!(levels.windows(2).all(|w| w[0] <= w[1]));
    let count = |a: f64| {
        let lo = levels.partition_point(|&x| x < a);
        let hi = levels.partition_point(|&x| x <= a + width);
        (hi - lo) as u64
    };
    let mut best = (count(a_lo), a_lo);
    let mut consider = |a: f64| {
        if a >= a_lo && a <= a_hi {
            let c = count(a);
            if c > best.0 {
                best = (c, a);
            }
        }
    };
    consider(a_hi);
    for &x in levels {
        consider(x);
        consider(x - width);
    }
    best
}

/// Rows `kind, eps2, shells_total, k, tau, count, bound, ratio, exact`.
pub fn write_bound_csv<W: Write>(report: &BoundReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "eps2", "shells_total", "k", "tau", "count", "bound", "ratio", "exact"])?;
    for r in &report.rows {
        w.write_record([
            report.kind.to_string(),
            format!("{}", report.eps2),
            r.shells_total.to_string(),
            r.k.to_string(),
            format!("{:.6}", r.tau),
            r.count.to_string(),
            format!("{:.6}", r.bound),
            format!("{:.6}", r.ratio),
            r.exact.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sliding_window_oracle() {
        let levels = [0.0, 1.0, 1.5, 4.0, 4.2, 4.4, 9.0];
        // brute force over a fine grid of anchors
        let brute = (0..=1000)
            .map(|i| {
                let a = -1.0 + i as f64 * 0.01;
                levels.iter().filter(|&&x| x >= a && x <= a + 1.0).count() as u64
            })
            .max()
            .unwrap();
        assert_eq!(sup_window(&levels, 1.0, -1.0, 9.0).0, brute);
        assert_eq!(brute, 3);
        assert_eq!(sup_window(&levels, 0.5, -1.0, 0.2).0, 1);
        assert_eq!(sup_window(&levels, 0.5, -1.0, 1.0), (2, 1.0));
    }
}
