use thiserror::Error;

/// Errors raised by constructions, verifiers and the search oracles.
///
/// Every variant maps onto one of three stable process exit codes, see
/// [`CacError::exit_code`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CacError {
    /// Malformed input: out-of-range residues, empty sets, inconsistent files.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A mathematical hypothesis of a construction or theorem does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A base codeword handed to the mixed-weight rebuild is exceptional.
    #[error("base codeword {index} (generator {generator}) is exceptional; the mixed rebuild only accepts non-exceptional bases")]
    ExceptionalBase { index: usize, generator: u64 },
    /// A base-code search could not reach the requested size.
    #[error("no generator set of size {target} exists (maximum is {max})")]
    TargetUnreachable { target: usize, max: usize },
    /// A search exceeded its node budget before completing.
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },
}

impl CacError {
    /// 1 = validation, 2 = precondition, 3 = budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            CacError::Invalid(_) => 1,
            CacError::Precondition(_)
            | CacError::ExceptionalBase { .. }
            | CacError::TargetUnreachable { .. } => 2,
            CacError::BudgetExhausted { .. } => 3,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        CacError::Invalid(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        CacError::Precondition(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, CacError>;
