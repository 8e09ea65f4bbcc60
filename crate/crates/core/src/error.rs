use thiserror::Error;

use crate::chebysolve::LpStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("invalid relation: {0}")]
    InvalidRelation(String),

    #[error("polynomial has degree {found} in x{var}, must be below {limit}; reduce it first")]
    DegreeTooHigh { var: usize, found: u32, limit: usize },

    #[error("cannot parse polynomial {input:?} at byte {position}: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },

    #[error("branch {branch} undefined on box {box_index} at {point:?}: {message}")]
    BranchUndefined {
        branch: usize,
        box_index: usize,
        point: Vec<f64>,
        message: String,
    },

    #[error("empty set: {0}")]
    EmptySet(String),

    #[error("illegal projection: {0}")]
    IllegalProjection(String),

    #[error("linear program ended with status {0:?}")]
    Lp(LpStatus),

    #[error("basis element {0} vanishes identically on the sample set")]
    DegenerateBasis(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("configuration error at {path}: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
