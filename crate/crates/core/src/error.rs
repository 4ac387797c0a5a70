use thiserror::Error;

pub type Result<T, E = SgaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum SgaError {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("x = {x} lies outside the domain ({lo}, {hi})")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("mu = {mu} lies outside the image ({lo}, {hi})")]
    Range { mu: f64, lo: f64, hi: f64 },

    #[error("singular point at x = {x}: {what}")]
    Singularity { x: f64, what: String },

    #[error("grid error: {0}")]
    Grid(String),

    #[error("no convergence after {iterations} iterations: {detail}")]
    NumericConvergence { iterations: usize, detail: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl SgaError {
    pub fn validation(msg: impl Into<String>) -> Self {
        Self::Validation(msg.into())
    }

    pub fn singular(x: f64, what: impl Into<String>) -> Self {
        Self::Singularity { x, what: what.into() }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_)
            | Self::Domain { .. }
            | Self::Range { .. }
            | Self::Singularity { .. }
            | Self::Grid(_)
            | Self::Config(_) => 2,
            Self::NumericConvergence { .. } => 3,
            Self::Io(_) | Self::Serde(_) | Self::Csv(_) => 4,
        }
    }
}
