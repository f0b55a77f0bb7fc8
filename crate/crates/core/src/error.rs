use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the core library.
///
/// `Capacity` and `Domain` are the "guard" failures: the request is well
/// formed but exceeds a size limit or leaves the region where a formula is
/// defined.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid Pauli encoding: {0}")]
    Encoding(String),

    #[error("qubit count mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{what} needs {requested} qubits but the limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("qubit index {index} out of range 1..={n_qubits}")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("even order n = {0} needs exponentially many Bell samples without the conjugate copy; pass allow_even to run it anyway")]
    EvenOrderRefused(usize),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("value outside the domain of the formula: {0}")]
    Domain(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub(crate) fn capacity(what: &'static str, requested: usize, limit: usize) -> Self {
        Error::Capacity {
            what,
            requested,
            limit,
        }
    }

    pub(crate) fn check_capacity(what: &'static str, requested: usize, limit: usize) -> Result<()> {
        if requested > limit {
            Err(Error::capacity(what, requested, limit))
        } else {
            Ok(())
        }
    }

    pub(crate) fn check_match(expected: usize, found: usize) -> Result<()> {
        if expected != found {
            Err(Error::DimensionMismatch { expected, found })
        } else {
            Ok(())
        }
    }

    /// True for guard failures (capacity limits, formula domains, refused configurations).
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::Capacity { .. } | Error::Domain(_) | Error::EvenOrderRefused(_)
        )
    }
}
