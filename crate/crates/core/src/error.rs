use thiserror::Error;

/// Errors raised by the library. Budget and resource errors are kept apart
/// from "no witness exists" answers, which are ordinary return values.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("resource limit exceeded for {what}: requested {requested}, limit {limit}")]
    ResourceLimit {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    #[error("search budget of {budget} nodes exhausted in {what}")]
    BudgetExceeded { what: &'static str, budget: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn check_limit(what: &'static str, requested: u64, limit: u64) -> Result<()> {
    if requested <= limit {
        Ok(())
    } else {
        Err(Error::ResourceLimit {
            what,
            requested,
            limit,
        })
    }
}
