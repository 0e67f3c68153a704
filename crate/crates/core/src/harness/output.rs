use crate::{Error, Result};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

/// Column-oriented result of an experiment. Cells are preformatted so the
/// CSV bytes depend only on the values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// RFC 4180 body, no comment line.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv of utf-8 cells"))
    }
}

/// Shortest round-trip decimal, switching to exponent form outside
/// `[1e-4, 1e6)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || !v.is_finite() || (1e-4..1e6).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// The only line of an output file that is allowed to differ between runs.
pub(crate) fn header_line(name: &str, seed: u64) -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("# fnls {name} seed={seed} generated_unix={secs}\n")
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Output { path: path.to_path_buf(), source })
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir).map_err(|source| Error::Output { path: dir.to_path_buf(), source })?;
    Ok(dir.to_path_buf())
}

/// A line chart: one polyline per series.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub log_y: bool,
    pub series: Vec<(String, Vec<(f64, f64)>)>,
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

impl Plot {
    pub fn to_svg(&self) -> String {
        let (w, h, m) = (640.0, 420.0, 60.0);
        let tx = |v: f64| if self.log_x { v.log10() } else { v };
        let ty = |v: f64| if self.log_y { v.log10() } else { v };
        let pts: Vec<(f64, f64)> = self
            .series
            .iter()
            .flat_map(|(_, s)| s.iter().map(|&(x, y)| (tx(x), ty(y))))
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        let (mut x0, mut x1, mut y0, mut y1) = pts.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
        );
        if pts.is_empty() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if x1 - x0 < 1e-300 {
            (x0, x1) = (x0 - 0.5, x1 + 0.5);
        }
        if y1 - y0 < 1e-300 {
            (y0, y1) = (y0 - 0.5, y1 + 0.5);
        }
        let px = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
        let py = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);

        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
        let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
        let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, w / 2.0, esc(&self.title));
        let _ = writeln!(
            s,
            r#"<path d="M{m} {m} V{} H{}" fill="none" stroke="black"/>"#,
            h - m,
            w - m
        );
        let log = |l: bool| if l { " (log10)" } else { "" };
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}{}</text>"#, w / 2.0, h - 15.0, esc(&self.x_label), log(self.log_x));
        let _ = writeln!(
            s,
            r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}{}</text>"#,
            h / 2.0,
            h / 2.0,
            esc(&self.y_label),
            log(self.log_y)
        );
        for (v, x, y, anchor) in [
            (x0, px(x0), h - m + 16.0, "start"),
            (x1, px(x1), h - m + 16.0, "end"),
        ] {
            let _ = writeln!(s, r#"<text x="{x:.1}" y="{y:.1}" text-anchor="{anchor}">{}</text>"#, tick(v));
        }
        for (v, y) in [(y0, py(y0)), (y1, py(y1))] {
            let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"#, m - 4.0, y + 4.0, tick(v));
        }
        for (i, (label, data)) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let d: Vec<String> = data
                .iter()
                .map(|&(x, y)| (tx(x), ty(y)))
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, d.join(" "));
            let ly = m + 14.0 * i as f64;
            let _ = writeln!(s, r#"<text x="{:.1}" y="{ly:.1}" fill="{color}" text-anchor="end">{}</text>"#, w - m, esc(label));
        }
        s.push_str("</svg>\n");
        s
    }
}

fn tick(v: f64) -> String {
    format!("{v:.3}")
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quoting_and_numbers() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["x,y".into(), num(0.5)]);
        t.push(vec!["z".into(), num(1e-19)]);
        assert_eq!(t.to_csv().unwrap(), "a,b\n\"x,y\",0.5\nz,1e-19\n");
        assert_eq!(num(2.0), "2");
        assert_eq!(opt(None), "");
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let p = Plot {
            title: "a<b".into(),
            log_y: true,
            series: vec![("s".into(), vec![(1.0, 1.0), (2.0, 100.0), (3.0, 0.0)])],
            ..Plot::default()
        };
        let svg = p.to_svg();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("a&lt;b"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
