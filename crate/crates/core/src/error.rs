use thiserror::Error;

/// Errors raised across the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("full-space oracle supports at most {max} chain sites, got {got}")]
    Dimension { max: usize, got: usize },

    #[error("integrator instability at t = {t}: minimum eigenvalue {min_eigenvalue:e} after {halvings} step halvings")]
    IntegratorInstability {
        t: f64,
        min_eigenvalue: f64,
        halvings: u32,
    },

    #[error("too few samples: need at least {need}, got {got}")]
    TooFewSamples { need: usize, got: usize },

    #[error("bisection bracket failure: bounce is {state} at both ends of [{lo}, {hi}]")]
    BracketFailure {
        lo: f64,
        hi: f64,
        state: &'static str,
    },

    #[error("lambert_w domain error: x = {0} < 0")]
    LambertDomain(f64),

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("horizon too short: maximum at final sample t = {t} (gamma = {gamma})")]
    HorizonTooShort { t: f64, gamma: f64 },

    #[error("degenerate fit: {0}")]
    Degenerate(String),

    #[error("realization {index}: {source}")]
    Realization {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
