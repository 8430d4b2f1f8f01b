use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular to working precision (sigma_min/sigma_max = {ratio:.3e})")]
    Singular { ratio: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("evolution operator is not contractive: ||A|| = {norm}")]
    NotContractive { norm: f64 },

    #[error("projected system at frequency {frequency} is not a frame (lower bound {lower:.3e})")]
    NotAFrame { frequency: usize, lower: f64 },

    #[error("frame certificate failed at frequencies {failed:?}")]
    CertificateFailed { failed: Vec<usize> },

    #[error(
        "condition-2/condition-3 frame verdicts disagree at frequency {frequency} \
         (lower2 = {lower2:.3e}, lower3 = {lower3:.3e}, condition numbers {cond2:.3e}/{cond3:.3e})"
    )]
    EquivalenceViolation {
        frequency: usize,
        lower2: f64,
        lower3: f64,
        cond2: f64,
        cond3: f64,
    },

    #[error("sample matrix has {rows} rows; need at least {needed}")]
    TooFewRows { rows: usize, needed: usize },

    #[error("least-squares system is rank deficient (sigma_min/sigma_max = {ratio:.3e})")]
    RankDeficient { ratio: f64 },

    #[error("certificate passes at frequency {frequency}; no ambiguity witness exists")]
    WitnessUnavailable { frequency: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
