//! The acceptance criteria as runs of registered experiments.
//!
//! Each criterion is a list of experiment runs with config overrides; it
//! passes when every run does. Tolerances enter only through config keys,
//! so tightening one of them can only change the criteria that read it.

use super::output::{ensure_dir, header_line, num, write_file, Table};
use super::{run_with, Config, RunOptions, Verdict, DEFAULT_SEED};
use crate::Result;
use rayon::prelude::*;
use std::path::Path;
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    /// Reduced sizes, same checks.
    Smoke,
    /// Sizes as stated in the criteria.
    Full,
}

impl Suite {
    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Smoke => "smoke",
            Suite::Full => "full",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    pub conservation_mass: f64,
    pub conservation_energy: f64,
    pub closed_form: f64,
    pub sharpness_slope: f64,
    pub necessity_spacing: f64,
    pub embedding_factor: f64,
    pub counting_stability: f64,
    pub v_relative: f64,
    pub v_second_derivative: f64,
    pub illposed: f64,
    pub inflation_solver: f64,
    pub continuity_distance: f64,
    pub uniform_exact: f64,
    pub horizon_slack: f64,
    pub holomorphy_ratio: (f64, f64),
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            conservation_mass: 1e-8,
            conservation_energy: 1e-6,
            closed_form: 1e-8,
            sharpness_slope: 0.03,
            necessity_spacing: 1.0 / 32.0,
            embedding_factor: 3.0,
            counting_stability: 0.2,
            v_relative: 1e-9,
            v_second_derivative: 1e-9,
            illposed: 1e-3,
            inflation_solver: 1e-4,
            continuity_distance: 1e-4,
            uniform_exact: 1e-10,
            horizon_slack: 1e-6,
            holomorphy_ratio: (3.5, 4.5),
        }
    }
}

type Runs = Vec<(&'static str, Config)>;

pub struct Criterion {
    pub id: u32,
    pub title: &'static str,
    pub anchor: &'static str,
    pub runs: fn(&Tolerances, Suite) -> Runs,
}

fn cfg(pairs: &[(&str, String)]) -> Config {
    pairs.iter().fold(Config::default(), |c, (k, v)| c.set(k, v))
}

fn smoke(suite: Suite) -> bool {
    suite == Suite::Smoke
}

pub fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            id: 1,
            title: "conservation of mass and energy",
            anchor: "Hamiltonian flow conserves mass and energy",
            runs: |t, s| {
                let horizon = if smoke(s) { "0.1" } else { "1" };
                vec![(
                    "conservation",
                    cfg(&[
                        ("check.mass", num(t.conservation_mass)),
                        ("check.energy", num(t.conservation_energy)),
                        ("time.horizon", horizon.into()),
                    ]),
                )]
            },
        },
        Criterion {
            id: 2,
            title: "solver against the closed-form single-mode solution",
            anchor: "explicit single-mode solutions",
            runs: |t, s| {
                let (eps2, ns): (&[f64], Vec<i64>) =
                    if smoke(s) { (&[1.0], vec![0, 3, 8]) } else { (&[0.25, 1.0], (0..=8).collect()) };
                let mut runs = Vec::new();
                for &e in eps2 {
                    for &n in &ns {
                        runs.push((
                            "simulate",
                            cfg(&[
                                ("params.eps2_re", num(e)),
                                ("datum.kind", "pure-frequency".into()),
                                ("datum.n", n.to_string()),
                                ("check.closed_form", num(t.closed_form)),
                            ]),
                        ));
                    }
                }
                runs
            },
        },
        Criterion {
            id: 3,
            title: "sharpness exponents of the box family",
            anchor: "box family saturating the embedding exponents",
            runs: |t, _| vec![("sharpness", cfg(&[("check.slope", num(t.sharpness_slope))]))],
        },
        Criterion {
            id: 4,
            title: "necessity crossover at b*",
            anchor: "necessary condition on b for the L^{2q} embedding",
            runs: |t, _| vec![("necessity", cfg(&[("necessity.spacing", num(t.necessity_spacing))]))],
        },
        Criterion {
            id: 5,
            title: "ε-scaling of the embedding constants",
            anchor: "modified Strichartz embeddings with explicit ε-powers",
            runs: |t, s| {
                let count = if smoke(s) { "50" } else { "500" };
                vec![(
                    "strichartz-sweep",
                    cfg(&[("check.factor", num(t.embedding_factor)), ("fields.count", count.into())]),
                )]
            },
        },
        Criterion {
            id: 6,
            title: "bilinear and trilinear counting bounds",
            anchor: "lattice count bounds behind the bilinear and trilinear estimates",
            runs: |t, s| {
                let total = if smoke(s) { "8" } else { "12" };
                let c = cfg(&[("check.stability", num(t.counting_stability)), ("count.max_total", total.into())]);
                vec![("bilinear-count", c.clone()), ("trilinear-count", c)]
            },
        },
        Criterion {
            id: 7,
            title: "radial polynomial algebra and convexity",
            anchor: "radial polynomial of the trilinear level and its convexity",
            runs: |t, s| {
                let points = if smoke(s) { "1000" } else { "10000" };
                vec![(
                    "v-convexity",
                    cfg(&[
                        ("check.relative", num(t.v_relative)),
                        ("check.second_derivative", num(t.v_second_derivative)),
                        ("substitution.points", points.into()),
                    ]),
                )]
            },
        },
        Criterion {
            id: 8,
            title: "resonance count grows with N",
            anchor: "growth of the resonance count r_{N,n,j} with N",
            runs: |_, s| {
                let boxes = if smoke(s) { "10,20,40" } else { "10,20,40,80,160" };
                vec![("resonance-count", cfg(&[("resonance.boxes", boxes.into())]))]
            },
        },
        Criterion {
            id: 9,
            title: "ill-posedness witness below L²",
            anchor: "failure of uniform continuity of the flow map below L²",
            runs: |t, _| vec![("illposed", cfg(&[("check.tolerance", num(t.illposed))]))],
        },
        Criterion {
            id: 10,
            title: "norm inflation",
            anchor: "norm inflation when Im(ε²) > 0",
            runs: |t, _| vec![("inflation", cfg(&[("check.solver", num(t.inflation_solver))]))],
        },
        Criterion {
            id: 11,
            title: "ε-continuity and its failure to be uniform",
            anchor: "continuity in ε on finite intervals, not uniform for large ε",
            runs: |t, _| {
                vec![
                    ("epsilon-continuity", cfg(&[("check.distance", num(t.continuity_distance))])),
                    ("uniform-failure", cfg(&[("check.exact", num(t.uniform_exact))])),
                ]
            },
        },
        Criterion {
            id: 12,
            title: "infinite-horizon discontinuity",
            anchor: "discontinuity in ε on the infinite time horizon",
            runs: |t, _| vec![("infinite-horizon", cfg(&[("check.slack", num(t.horizon_slack))]))],
        },
        Criterion {
            id: 13,
            title: "holomorphy residual decays at second order",
            anchor: "holomorphy of the linear flow in ε",
            runs: |t, _| {
                let (lo, hi) = t.holomorphy_ratio;
                vec![("holomorphy", cfg(&[("check.ratio", format!("{}:{}", num(lo), num(hi)))]))]
            },
        },
    ]
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: u32,
    pub title: &'static str,
    pub anchor: &'static str,
    pub experiments: Vec<&'static str>,
    pub verdict: Verdict,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn line(&self) -> String {
        format!("[{}] criterion {:>2} {} ({:.1}s): {}", self.verdict.as_str(), self.id, self.title, self.seconds, self.detail)
    }
}

fn run_criterion(c: &Criterion, tol: &Tolerances, suite: Suite, out: Option<&Path>) -> CriterionResult {
    let start = Instant::now();
    let runs = (c.runs)(tol, suite);
    let mut experiments: Vec<&'static str> = runs.iter().map(|r| r.0).collect();
    experiments.dedup();
    let opts = RunOptions { seed: DEFAULT_SEED, plot: false };
    let dir = out.map(|o| o.join(format!("criterion-{:02}", c.id)));
    let mut ok = true;
    let mut details = Vec::new();
    for (i, (name, config)) in runs.iter().enumerate() {
        // repeated runs of one experiment get their own directory
        let sub = dir.as_ref().map(|d| if runs.len() > 1 { d.join(format!("{i:02}")) } else { d.clone() });
        match run_with(name, config, sub.as_deref(), &opts) {
            Ok(r) => {
                if r.verdict != Verdict::Pass {
                    ok = false;
                    details.push(format!("{name}: {}", r.detail));
                } else if runs.len() <= 2 {
                    details.push(format!("{name}: {}", r.detail));
                }
            }
            Err(e) => {
                ok = false;
                details.push(format!("{name}: error: {e}"));
            }
        }
    }
    if ok && details.is_empty() {
        details.push(format!("{} runs passed", runs.len()));
    }
    CriterionResult {
        id: c.id,
        title: c.title,
        anchor: c.anchor,
        experiments,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
        detail: details.join(" | "),
        seconds: start.elapsed().as_secs_f64(),
    }
}

#[derive(Debug, Clone)]
pub struct Summary {
    pub suite: Suite,
    pub rows: Vec<CriterionResult>,
}

impl Summary {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(CriterionResult::passed)
    }

    pub fn row(&self, id: u32) -> Option<&CriterionResult> {
        self.rows.iter().find(|r| r.id == id)
    }

    /// Columns `criterion, title, anchor, experiments, verdict, detail`.
    /// Timings are left out so the file is reproducible.
    pub fn to_csv(&self) -> Result<String> {
        let mut t = Table::new(&["criterion", "title", "anchor", "experiments", "verdict", "detail"]);
        for r in &self.rows {
            t.push(vec![
                r.id.to_string(),
                r.title.into(),
                r.anchor.into(),
                r.experiments.join(";"),
                r.verdict.as_str().into(),
                r.detail.clone(),
            ]);
        }
        t.to_csv()
    }

    pub fn write(&self, dir: &Path) -> Result<std::path::PathBuf> {
        let dir = ensure_dir(dir)?;
        let path = dir.join(format!("summary-{}.csv", self.suite.as_str()));
        write_file(&path, &format!("{}{}", header_line("verify", DEFAULT_SEED), self.to_csv()?))?;
        Ok(path)
    }
}

/// Runs the selected criteria (all when `only` is `None`) on a pool of
/// `workers` threads, writing per-criterion outputs under `out` if given.
pub fn run_acceptance_in(
    tol: &Tolerances,
    suite: Suite,
    workers: Option<usize>,
    only: Option<&[u32]>,
    out: Option<&Path>,
) -> Summary {
    let selected: Vec<Criterion> = criteria().into_iter().filter(|c| only.is_none_or(|ids| ids.contains(&c.id))).collect();
    let go = || selected.par_iter().map(|c| run_criterion(c, tol, suite, out)).collect::<Vec<_>>();
    let rows = match workers {
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build() {
            Ok(pool) => pool.install(go),
            Err(_) => go(),
        },
        None => go(),
    };
    Summary { suite, rows }
}

pub fn run_acceptance(tol: &Tolerances, suite: Suite, workers: Option<usize>, out: Option<&Path>) -> Summary {
    run_acceptance_in(tol, suite, workers, None, out)
}
