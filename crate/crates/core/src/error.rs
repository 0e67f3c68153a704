use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("regime violation: {0}")]
    Regime(String),

    /// `J_ε` (or anything built on it) evaluated at a resonant ε = i/n.
    #[error("singular operator: {0}")]
    SingularOperator(String),

    #[error("outside the domain of definition: {0}")]
    Domain(String),

    #[error("inconclusive: {reason} (required bound {required})")]
    Inconclusive { reason: String, required: f64 },

    #[error("iteration is not contractive: observed ratio {ratio:.4} after {iterations} iterations")]
    NonContractive { ratio: f64, iterations: usize },

    /// The flow left the representable range; expected in the blow-up regime.
    #[error("divergence at t={time}: sup |û| = {sup:e}")]
    Divergence { time: f64, sup: f64 },

    #[error("exact arithmetic unavailable: {0}")]
    Exactness(String),

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("unknown experiment `{name}`; valid names: {}", valid.join(", "))]
    UnknownExperiment { name: String, valid: Vec<String> },

    #[error("config error: {0}")]
    Config(String),

    #[error("cannot write to {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
