use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Failures raised by the library.
///
/// Variants split into two families: shape/validation problems with the
/// input, and mathematical precondition failures (see [`Error::is_precondition`]).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("cannot truncate order {from} to larger order {to}")]
    OrderViolation { from: usize, to: usize },

    #[error("branch {branch} out of range (connection has {branches} branches)")]
    BranchOutOfRange { branch: usize, branches: usize },

    #[error("element is not a unit: constant term {0:e} is below tolerance")]
    NonUnit(f64),

    #[error("matrix is singular modulo t")]
    Singular,

    #[error("commutant member {index} does not commute (commutator norm {norm:e})")]
    NonCommuting { index: usize, norm: f64 },

    #[error("connection is not integrable (worst commutator norm {0:e})")]
    NotIntegrable(f64),

    #[error("resonant residue: exponent differences {0:?} are nonzero integers within the order")]
    Resonant(Vec<i64>),

    #[error("unknown exponential strategy {0:?}")]
    UnknownStrategy(String),
}

impl Error {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::TruncationMismatch { .. } => "TruncationMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::Invalid(_) => "Invalid",
            Error::OrderViolation { .. } => "OrderViolation",
            Error::BranchOutOfRange { .. } => "BranchOutOfRange",
            Error::NonUnit(_) => "NonUnit",
            Error::Singular => "Singular",
            Error::NonCommuting { .. } => "NonCommuting",
            Error::NotIntegrable(_) => "NotIntegrable",
            Error::Resonant(_) => "Resonant",
            Error::UnknownStrategy(_) => "UnknownStrategy",
        }
    }

    /// True for failures of a mathematical precondition rather than of input shape.
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NonUnit(_)
                | Error::Singular
                | Error::NonCommuting { .. }
                | Error::NotIntegrable(_)
                | Error::Resonant(_)
        )
    }
}
