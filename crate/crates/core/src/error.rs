use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice size must be at least 2, got {0}")]
    InvalidSize(usize),

    #[error("unknown lattice kind `{0}`")]
    UnknownKind(String),

    #[error("recursion level {level} exceeds the configured maximum {max}")]
    RecursionTooDeep { level: usize, max: usize },

    #[error("degenerate tiling: {0}")]
    DegenerateTiling(String),

    #[error("probability `{name}` = {value} is outside {range}")]
    InvalidProbability {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("edge index {edge} out of range for a lattice with {count} edges")]
    EdgeOutOfRange { edge: usize, count: usize },

    #[error("error pattern has {0} lost edges; use the damaged-code path")]
    LostEdgesPresent(usize),

    #[error("cannot perfectly match an odd number of defects ({0})")]
    OddDefectCount(usize),

    #[error("no crossing in window: {0}")]
    NoCrossing(String),

    #[error("fit did not converge after {iterations} iterations (sse {sse:e})")]
    NotConverged { iterations: usize, sse: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("sweep requests {requested} trials, above the cap of {cap}")]
    TrialCap { requested: u64, cap: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn check_probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidProbability {
            name,
            value,
            range: "[0, 1]",
        })
    }
}
