//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Clone, Error)]
pub enum LabError {
    #[error("parameter t = {t} outside the curve domain ({a}, {b})")]
    OutOfDomain { t: f64, a: f64, b: f64 },

    #[error("non-finite value of derivative order {order} at t = {t}")]
    NonFinite { order: usize, t: f64 },

    #[error("invalid curve: {0}")]
    InvalidCurve(String),

    #[error(
        "curve failed the positivity validation at derivative order {order}, t = {t} \
         (value {value}); pass the degenerate flag to use it anyway"
    )]
    NotValidated { order: usize, t: f64, value: f64 },

    #[error("monotonicity violated while bisecting omega: {0}")]
    NonMonotone(String),

    #[error("invalid node tuple: {0}")]
    InvalidNodes(String),

    #[error(
        "recursive kernel evaluation supports at most {max} nodes (got {got}); \
         use the divided-difference path instead"
    )]
    KernelCapability { got: usize, max: usize },

    #[error("nearly coincident nodes (relative gap {gap:e}); divided differences are ill-conditioned")]
    IllConditioned { gap: f64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("point is not in the permutohedron: {0}")]
    NotMember(String),

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("block decomposition invariant `{which}` violated: {detail}")]
    BlockInvariant { which: &'static str, detail: String },

    #[error("oscillatory quadrature needs more than {cap} phase panels; reduce |xi|")]
    Resolution { cap: usize },

    #[error("zero test function")]
    ZeroTestFunction,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}
