use thiserror::Error;

use crate::observables::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A - A^*| entry = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("iterative solver did not converge within {iterations} sweeps")]
    NoConvergence { iterations: usize },

    #[error("family members {first} and {second} do not commute (commutator norm {norm:.3e})")]
    NotCommutingFamily {
        first: usize,
        second: usize,
        norm: f64,
    },

    #[error("observable is not commutative (max commutator norm {norm:.3e})")]
    NotCommutative { norm: f64 },

    #[error("empty operator family")]
    EmptyFamily,

    #[error("non-finite matrix entry")]
    NonFinite,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unknown outcome label {0:?}")]
    UnknownLabel(String),

    #[error("invalid outcome set: {0}")]
    InvalidOutcomeSet(String),

    #[error("outcome sets do not match: {0}")]
    OutcomeMismatch(String),

    #[error("index mismatch: {0}")]
    IndexMismatch(String),

    #[error("observable is not product structured: {0}")]
    NotProductStructured(String),

    #[error(
        "joint value tuples differ by {gap:.3e} in coordinate {coordinate}, \
         inside the ambiguous band ({lower:.1e}, {upper:.1e}]"
    )]
    ClusterAmbiguity {
        coordinate: usize,
        gap: f64,
        lower: f64,
        upper: f64,
    },

    #[error("invalid Markov kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid probability vector: {0}")]
    InvalidProbability(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(ValidationReport),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed document: {0}")]
    Document(String),

    #[error("simplex pivoting broke down: {0}")]
    NumericalBreakdown(String),
}
