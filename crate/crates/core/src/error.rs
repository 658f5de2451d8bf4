use thiserror::Error;

use crate::exact::Model;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A row was requested above the configured cap for its model.
    #[error("{model} row n={n} exceeds the configured row limit {limit}")]
    LimitExceeded { model: Model, n: usize, limit: usize },

    /// A derivative of 1/Γ was requested beyond the embedded ζ table.
    #[error("derivative order {k} exceeds the maximum supported order {max}")]
    OrderExceeded { k: usize, max: usize },

    #[error("exact coefficient oracle budget exceeded: {0}")]
    BudgetExceeded(String),

    /// The table's counts do not sum to n!, so it cannot be a distribution row.
    #[error("{model} row n={n} does not sum to n!")]
    RowSumMismatch { model: Model, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
