use thiserror::Error;

/// Errors raised by the model, solver and spectroscopy layers.
#[derive(Debug, Error)]
pub enum HtcError {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("basis would contain {count} states, above the cap of {cap}")]
    BasisTooLarge { count: u128, cap: usize },

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("eigensolver failed on a {dim}x{dim} matrix (max |H_ij| = {max_abs:.3e}, max asymmetry = {asymmetry:.3e}): {reason}")]
    EigenFailure {
        dim: usize,
        max_abs: f64,
        asymmetry: f64,
        reason: String,
    },

    #[error("tracked eigenvalue does not change sign in [{lo}, {hi}] (values {start:.6e} -> {end:.6e})")]
    NoSignChange { lo: f64, hi: f64, start: f64, end: f64 },

    #[error("eigenvalue tracking lost near rabi = {rabi:.6}: best overlap {overlap:.3} below {min_overlap}")]
    TrackingAmbiguous {
        rabi: f64,
        overlap: f64,
        min_overlap: f64,
    },

    #[error("population model selects no states")]
    EmptyPopulation,

    #[error("unknown operator `{0}` (expected `a` or `jminus`)")]
    UnknownOperator(String),

    #[error("no usable peak in [{lo:.4}, {hi:.4}]: {reason}")]
    PeakSearch { lo: f64, hi: f64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = HtcError> = std::result::Result<T, E>;
