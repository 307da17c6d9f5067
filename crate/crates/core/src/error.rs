//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Matrix/vector dimensions inconsistent with the operation.
    Shape { detail: String },
    /// Input required to be Hermitian exceeds the symmetry tolerance.
    NotHermitian { defect: f64 },
    /// Input required to be positive semi-definite has a significant negative eigenvalue.
    NotPsd { min_eig: f64 },
    /// A Choi matrix with a negative eigenvalue below the CP tolerance.
    NotCp { min_eig: f64 },
    /// Input required to be a density operator is not one.
    NotAState { detail: String },
    /// Scalar parameter outside its mathematical domain (e.g. p < 1).
    Domain { detail: String },
    /// Structural parameter violates a precondition (e.g. N < d for a frame).
    Param { detail: String },
    /// Matrix not invertible at the requested floor; for a compression
    /// witness S this signals ‖S−1‖∞ ≥ 1, i.e. the compression is too coarse.
    Singular { min_eig: f64, floor: f64 },
    /// Channel construction from an empty Kraus list.
    EmptyKraus,
    /// Operation requires a trace-preserving (exact or approximate) channel.
    NonTp { defect: f64 },
    /// Tail-probability target ⟨y|N(x)|y⟩ is numerically zero.
    DegenerateTarget { value: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape { detail } => write!(f, "shape mismatch: {detail}"),
            Error::NotHermitian { defect } => {
                write!(f, "matrix is not Hermitian (defect {defect:.3e})")
            }
            Error::NotPsd { min_eig } => {
                write!(f, "matrix is not positive semi-definite (min eigenvalue {min_eig:.3e})")
            }
            Error::NotCp { min_eig } => {
                write!(f, "Choi matrix is not completely positive (min eigenvalue {min_eig:.3e})")
            }
            Error::NotAState { detail } => write!(f, "not a density operator: {detail}"),
            Error::Domain { detail } => write!(f, "domain error: {detail}"),
            Error::Param { detail } => write!(f, "parameter error: {detail}"),
            Error::Singular { min_eig, floor } => write!(
                f,
                "singular matrix: eigenvalue {min_eig:.3e} at or below floor {floor:.3e}"
            ),
            Error::EmptyKraus => write!(f, "empty Kraus operator list"),
            Error::NonTp { defect } => {
                write!(f, "channel is not trace preserving (defect {defect:.3e})")
            }
            Error::DegenerateTarget { value } => {
                write!(f, "degenerate target expectation {value:.3e}")
            }
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    pub fn shape(detail: impl Into<String>) -> Self {
        Error::Shape { detail: detail.into() }
    }

    pub fn param(detail: impl Into<String>) -> Self {
        Error::Param { detail: detail.into() }
    }

    pub fn domain(detail: impl Into<String>) -> Self {
        Error::Domain { detail: detail.into() }
    }

    pub fn not_a_state(detail: impl Into<String>) -> Self {
        Error::NotAState { detail: detail.into() }
    }
}
