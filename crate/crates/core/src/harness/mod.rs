//! Named experiments, configuration and reproducible output.
//!
//! Every experiment reads a flat `key=value` config (unknown keys are
//! rejected), runs deterministically from a 64-bit seed and writes
//! `<name>.csv`, `<name>.record.csv`, `<name>.config` and optionally
//! `<name>.svg`. The first line of each CSV is a `#` comment carrying the
//! timestamp; everything after it is byte-identical across runs.

pub mod acceptance;
mod config;
mod output;
mod registry;

pub use acceptance::{criteria, run_acceptance, run_acceptance_in, Criterion, CriterionResult, Suite, Summary, Tolerances};
pub use config::{Config, Key, Settings};
pub use output::{num, Plot, Table};
pub use registry::{lookup, names, Experiment, Outcome, Verdict, REGISTRY};

use crate::Result;
use output::{ensure_dir, header_line, write_file};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub plot: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { seed: DEFAULT_SEED, plot: false }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentRecord {
    pub name: String,
    /// Every key of the experiment, defaults included.
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    pub outputs: BTreeMap<String, f64>,
    pub verdict: Verdict,
    pub anchor: String,
    pub detail: String,
    pub table: Table,
    pub files: Vec<PathBuf>,
}

impl ExperimentRecord {
    /// The config snapshot as a [`Config`] that re-runs this record.
    pub fn replay_config(&self) -> Config {
        self.config.iter().fold(Config::default(), |c, (k, v)| c.set(k, v))
    }

    /// Rows `field, value`: name, seed, verdict, anchor, detail, then
    /// `metric.<name>` and `config.<key>`.
    pub fn to_csv(&self) -> Result<String> {
        let mut t = Table::new(&["field", "value"]);
        t.push(vec!["name".into(), self.name.clone()]);
        t.push(vec!["seed".into(), self.seed.to_string()]);
        t.push(vec!["verdict".into(), self.verdict.as_str().into()]);
        t.push(vec!["anchor".into(), self.anchor.clone()]);
        t.push(vec!["detail".into(), self.detail.clone()]);
        for (k, v) in &self.outputs {
            t.push(vec![format!("metric.{k}"), num(*v)]);
        }
        for (k, v) in &self.config {
            t.push(vec![format!("config.{k}"), v.clone()]);
        }
        t.to_csv()
    }
}

/// Runs `name` with the config file at `config` (defaults when `None`) and
/// writes its files into `out_dir`.
pub fn run(name: &str, config: Option<&Path>, out_dir: &Path) -> Result<ExperimentRecord> {
    run_with(name, &Config::load_optional(config)?, Some(out_dir), &RunOptions::default())
}

/// As [`run`] with an in-memory config; nothing is written when `out_dir`
/// is `None`.
pub fn run_with(name: &str, config: &Config, out_dir: Option<&Path>, opts: &RunOptions) -> Result<ExperimentRecord> {
    let exp = lookup(name)?;
    let settings = Settings::resolve(name, exp.keys, config)?;
    let dir = out_dir.map(ensure_dir).transpose()?;
    let outcome = (exp.run)(&settings, opts.seed)?;
    let mut record = ExperimentRecord {
        name: name.to_string(),
        config: settings.snapshot().clone(),
        seed: opts.seed,
        outputs: outcome.metrics,
        verdict: outcome.verdict,
        anchor: exp.anchor.to_string(),
        detail: outcome.detail,
        table: outcome.table,
        files: Vec::new(),
    };
    if let Some(dir) = dir {
        let header = header_line(name, opts.seed);
        let mut files = vec![
            (format!("{name}.csv"), format!("{header}{}", record.table.to_csv()?)),
            (format!("{name}.record.csv"), format!("{header}{}", record.to_csv()?)),
            (format!("{name}.config"), settings.to_config_text()),
        ];
        if let (true, Some(plot)) = (opts.plot, &outcome.plot) {
            files.push((format!("{name}.svg"), plot.to_svg()));
        }
        for (file, body) in files {
            let path = dir.join(file);
            write_file(&path, &body)?;
            record.files.push(path);
        }
    }
    Ok(record)
}

/// Runs the acceptance suite with default tolerances on all cores.
pub fn verify_all(suite: Suite) -> Summary {
    run_acceptance(&Tolerances::default(), suite, None, None)
}
