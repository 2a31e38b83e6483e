use thiserror::Error;

/// Errors produced by the simulation library.
///
/// Variants split into two families: shape/contract violations (a caller
/// handed us something structurally wrong) and domain violations (a physical
/// parameter outside the region where the model is defined). The CLI maps the
/// latter to exit code 3.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: expected {expected}, got {rows}x{cols}")]
    Shape {
        expected: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("matrix has {len} entries, expected {rows}x{cols}")]
    EntryCount { rows: usize, cols: usize, len: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |m - m^dagger| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("trace is {re} + {im}i, expected 1")]
    NotUnitTrace { re: f64, im: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("parameter {name} = {value} is outside {allowed}")]
    Parameter {
        name: &'static str,
        value: f64,
        allowed: &'static str,
    },

    #[error("as-written channel requires p1 + p2 <= 1, got p1 = {p1}, p2 = {p2}")]
    ChannelDomain { p1: f64, p2: f64 },

    #[error(
        "as-written channel is only valid for t <= ln(2)/2 = {bound:.6}, got t = {t} (use the factorized variant)"
    )]
    BeyondValidity { t: f64, bound: f64 },

    #[error("at alpha = {alpha}, t = {t}: {source}")]
    AtCell {
        alpha: f64,
        t: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("time series is not strictly increasing at index {index}")]
    NonMonotone { index: usize },
}

impl Error {
    /// True when the error stems from a physical parameter outside the
    /// model's domain, as opposed to a malformed call.
    pub fn is_domain(&self) -> bool {
        match self {
            Error::Parameter { .. } | Error::ChannelDomain { .. } | Error::BeyondValidity { .. } => {
                true
            }
            Error::AtCell { source, .. } => source.is_domain(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
