use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lattice parameters: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidInput(String),

    #[error("eigenvalue iteration did not converge for {context} (eigenvalue {index}, {iterations} iterations)")]
    EigenNotConverged {
        context: String,
        index: usize,
        iterations: usize,
    },

    #[error("no broken phase found below gamma = {cap} for N={n_sites}, m0={m0}, alpha={alpha}")]
    BracketFailure {
        n_sites: usize,
        m0: usize,
        alpha: f64,
        cap: f64,
    },

    #[error("breaking predicate is not monotone: {detail}")]
    NonMonotone { detail: String },

    #[error("insufficient data for scaling fit: {0}")]
    InsufficientData(String),

    #[error("degenerate scaling fit: {0}")]
    DegenerateFit(String),

    #[error("propagator norm exceeds 1e300 at t = {t} (max Im E = {max_imag})")]
    GrowthOverflow { t: f64, max_imag: f64 },

    #[error("ramp integration did not converge after {halvings} step halvings (relative change {change:e})")]
    StepNotConverged { halvings: usize, change: f64 },

    #[error("empty intensity trace")]
    EmptyTrace,

    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::InvalidSpec(_) | Error::InvalidInput(_) => 1,
            _ => 2,
        }
    }
}
