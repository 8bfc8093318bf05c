use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported dimension n = {0}: closed forms are available for n in {{3, 4}}")]
    UnsupportedDimension(usize),

    #[error("radius {radius} is below the horizon radius {horizon}")]
    BelowHorizon { radius: f64, horizon: f64 },

    #[error("node {0:?} lies outside the domain")]
    NodeOutsideDomain([i64; 4]),

    #[error("node {0:?} has insufficient finite-difference stencil (reach {1})")]
    InsufficientStencil([i64; 4], i64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("metric axiom violated: {0}")]
    MetricAxiom(String),

    #[error("label sets differ: {0}")]
    LabelMismatch(String),

    #[error("empty set passed to {0}")]
    EmptySet(&'static str),

    #[error("nodes {0:?} and {1:?} are in disconnected components")]
    Disconnected([i64; 4], [i64; 4]),

    #[error("family member {index} failed class validation: {reason}")]
    ClassValidation { index: usize, reason: String },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
