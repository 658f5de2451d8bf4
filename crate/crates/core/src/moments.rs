//! Exact factorial moments `β_s(n) = Σ_k (k)_s · counts[k] / n!`.

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::{self, factorial, DistributionTable, Model, RowLimits};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type ExactRational = Rational;

/// `(k)_s = k(k-1)…(k-s+1)`; `(k)_0 = 1`, and zero once `s > k`.
pub fn falling_factorial(k: u64, s: u64) -> Integer {
    if s > k {
        return Integer::new();
    }
    let mut acc = Integer::from(1);
    for i in 0..s {
        acc *= k - i;
    }
    acc
}

/// Generalized harmonic number `Σ_{j=1..n} 1/j^r`.
pub fn harmonic(n: u64, r: u32) -> ExactRational {
    let mut sum = Rational::new();
    for j in 1..=n {
        let denom = Integer::from(j).pow(r);
        sum += Rational::from((Integer::from(1), denom));
    }
    sum
}

/// Exact `β_s(n)` of a distribution row.
pub fn factorial_moment(table: &DistributionTable, s: u64) -> Result<ExactRational> {
    if !table.has_valid_total() {
        return Err(Error::RowSumMismatch {
            model: table.model(),
            n: table.n(),
        });
    }
    let mut weighted = Integer::new();
    for (k, count) in table.counts().iter().enumerate().skip(s as usize) {
        if *count != 0 {
            weighted += falling_factorial(k as u64, s) * count;
        }
    }
    Ok(Rational::from((weighted, factorial(table.n()))))
}

/// `β_s(0), …, β_s(N)`: the first `N + 1` Maclaurin coefficients of `f_s(u)`.
pub fn fs_series(model: Model, s: u64, upto: usize, limits: &RowLimits) -> Result<Vec<ExactRational>> {
    exact::tables_up_to(model, upto, limits)?
        .iter()
        .map(|t| factorial_moment(t, s))
        .collect()
}
