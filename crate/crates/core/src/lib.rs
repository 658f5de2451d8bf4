//! Exact cost distributions, factorial moments and asymptotic moment
//! expansions for three classic analysis-of-algorithms quantities: the number
//! of cycles and the number of inversions of a uniformly random permutation,
//! and the number of comparisons performed by randomized quicksort.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`] builds exact distribution rows with arbitrary-precision
//!   triangular recurrences.
//! * [`moments`] turns rows into exact factorial moments.
//! * [`transfer`] maps singular terms `(1-u)^-α log^β(1/(1-u))` to asymptotic
//!   estimates of their Maclaurin coefficients, with an exact series oracle.
//! * [`expansions`] encodes the singular expansions of the moment generating
//!   functions and the resulting two-term moment asymptotics.
//! * [`simulate`] estimates the same moments by seeded Monte Carlo.
//!
//! All logarithms are natural logarithms.

pub mod error;
pub mod exact;
pub mod expansions;
pub mod moments;
pub mod simulate;
pub mod transfer;

pub use error::{Error, Result};
pub use exact::{DistributionTable, Model, RowLimits};
pub use moments::ExactRational;
