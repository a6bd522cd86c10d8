//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Scenario file could not be parsed. Message carries the field/line
    /// diagnostics from the TOML parser.
    #[error("scenario parse error: {0}")]
    Parse(String),

    /// Scenario file declares a schema version this build does not understand.
    #[error("schema version mismatch: expected {expected}, found {found}")]
    SchemaVersion { expected: String, found: String },

    /// A structural configuration problem that is not a model-invariant
    /// violation (those go through `ValidationReport`).
    #[error("configuration error: {0}")]
    Config(String),

    /// Numerical simulation produced a non-finite value.
    #[error("simulation error at step {step}: {message}")]
    Simulation { step: usize, message: String },

    /// Action outside the admissible interval A.
    #[error("action {action} outside admissible interval [{lo}, {hi}]")]
    ActionDomain { action: f64, lo: f64, hi: f64 },

    /// A common-noise cell ended up with no usable weight/sample.
    #[error("degenerate cell {cell}: {message}")]
    DegenerateCell { cell: usize, message: String },

    /// Girsanov weight became non-finite on a path.
    #[error("non-finite Girsanov weight on path {path}")]
    BadWeight { path: usize },

    #[error("empty sketch")]
    EmptySketch,

    #[error("LPPL trend evaluated at or past the critical time t_c")]
    LpplSingular,

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
