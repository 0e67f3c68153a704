use clap::{Parser, ValueEnum};
use fnls::harness::{self, Config, RunOptions, Suite, Tolerances, Verdict, DEFAULT_SEED};
use fnls::Error;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Smoke,
    Full,
}

/// Run a named experiment, or `verify` to run the acceptance suite.
#[derive(Debug, Parser)]
#[command(name = "fnls", version, about)]
struct Cli {
    /// Experiment name, `verify`, or `list`.
    experiment: String,
    /// key=value config file; defaults are used for missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Also write an SVG figure.
    #[arg(long)]
    plot: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Suite for `verify`.
    #[arg(long, value_enum, default_value = "smoke")]
    suite: SuiteArg,
}

fn usage_error(e: &Error) -> bool {
    matches!(e, Error::UnknownExperiment { .. } | Error::Config(_) | Error::Output { .. })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.experiment.as_str() {
        "list" => {
            for e in &harness::REGISTRY {
                println!("{:<20} {}", e.name, e.anchor);
                for k in e.keys {
                    println!("    {}={}  # {}", k.name, k.default, k.doc);
                }
            }
            ExitCode::SUCCESS
        }
        "verify" => {
            let suite = match cli.suite {
                SuiteArg::Smoke => Suite::Smoke,
                SuiteArg::Full => Suite::Full,
            };
            let summary = harness::run_acceptance(&Tolerances::default(), suite, cli.workers, Some(&cli.out));
            for r in &summary.rows {
                println!("{}", r.line());
            }
            match summary.write(&cli.out) {
                Ok(p) => println!("summary: {}", p.display()),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if summary.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        name => {
            let result = Config::load_optional(cli.config.as_deref()).and_then(|cfg| {
                let opts = RunOptions { seed: cli.seed, plot: cli.plot };
                let run = || harness::run_with(name, &cfg, Some(&cli.out), &opts);
                match cli.workers {
                    Some(k) => rayon::ThreadPoolBuilder::new()
                        .num_threads(k.max(1))
                        .build()
                        .map_err(|e| Error::Config(format!("worker pool: {e}")))?
                        .install(run),
                    None => run(),
                }
            });
            match result {
                Ok(r) => {
                    println!("{} {}: {}", r.verdict.as_str(), r.name, r.detail);
                    for f in &r.files {
                        println!("  wrote {}", f.display());
                    }
                    if r.verdict == Verdict::Fail {
                        ExitCode::from(1)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(if usage_error(&e) { 2 } else { 1 })
                }
            }
        }
    }
}
