//! Maclaurin coefficients of `(1-u)^-α · log^β(1/(1-u))` by direct power-series
//! convolution, used to check the transfer estimates.

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

pub const ORACLE_MAX_N: u64 = 100_000;
pub const ORACLE_MAX_BETA: u32 = 6;

fn check_budget(alpha: u32, beta: u32, n: u64) -> Result<()> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("alpha must be a positive integer".into()));
    }
    if n > ORACLE_MAX_N {
        return Err(Error::BudgetExceeded(format!("n={n} above {ORACLE_MAX_N}")));
    }
    if beta > ORACLE_MAX_BETA {
        return Err(Error::BudgetExceeded(format!("beta={beta} above {ORACLE_MAX_BETA}")));
    }
    Ok(())
}

/// `binom(m + α - 1, α - 1)` for `m = 0..=n`: the series of `(1-u)^-α`.
fn binomial_series(alpha: u32, n: usize) -> Vec<Integer> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Integer::from(1);
    for m in 0..=n {
        out.push(c.clone());
        // binom(m+α, α-1) = binom(m+α-1, α-1) · (m+α) / (m+1)
        c *= (m as u64) + u64::from(alpha);
        c /= (m as u64) + 1;
    }
    out
}

/// Exact `[u^n] (1-u)^-α log^β(1/(1-u))`.
///
/// `log(1/(1-u)) = Σ_{m≥1} u^m/m` is scaled by `D = lcm(1..n)` so every
/// convolution stays in integers; the final coefficient is divided by `D^β`.
pub fn exact_coeff_oracle(alpha: u32, beta: u32, n: u64) -> Result<Rational> {
    check_budget(alpha, beta, n)?;
    let n = n as usize;
    let mut series = binomial_series(alpha, n);
    if beta == 0 {
        return Ok(Rational::from(series.swap_remove(n)));
    }
    let mut lcm = Integer::from(1);
    for m in 2..=n as u64 {
        lcm.lcm_u_mut(m as u32);
    }
    // log[m] = D/m, log[0] = 0
    let log: Vec<Integer> = (0..=n)
        .map(|m| if m == 0 { Integer::new() } else { Integer::from(&lcm / m as u64) })
        .collect();

    for _ in 1..beta {
        series = convolve_int(&series, &log);
    }
    let mut top = Integer::new();
    for i in 0..n {
        top += Integer::from(&series[i] * &log[n - i]);
    }
    Ok(Rational::from((top, lcm.pow(beta))))
}

fn convolve_int(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let n = a.len();
    let mut out = vec![Integer::new(); n];
    for (i, ai) in a.iter().enumerate() {
        if *ai == 0 {
            continue;
        }
        for j in 1..n - i {
            out[i + j] += Integer::from(ai * &b[j]);
        }
    }
    out
}

/// Same coefficient as [`exact_coeff_oracle`], by convolution in `bits`-bit
/// floating point. All terms are nonnegative, so the relative error stays
/// near `n · 2^-bits`.
pub fn float_coeff_oracle(alpha: u32, beta: u32, n: u64, bits: u32) -> Result<Float> {
    check_budget(alpha, beta, n)?;
    let n = n as usize;
    let mut series: Vec<Float> = binomial_series(alpha, n)
        .into_iter()
        .map(|c| Float::with_val(bits, c))
        .collect();
    if beta == 0 {
        return Ok(series.swap_remove(n));
    }
    let log: Vec<Float> = (0..=n)
        .map(|m| {
            if m == 0 {
                Float::new(bits)
            } else {
                Float::with_val(bits, 1) / m as u64
            }
        })
        .collect();
    for _ in 1..beta {
        let mut out = vec![Float::new(bits); n + 1];
        for (i, si) in series.iter().enumerate() {
            for j in 1..=n - i {
                out[i + j] += si * &log[j];
            }
        }
        series = out;
    }
    let mut top = Float::new(bits);
    for i in 0..n {
        top += &series[i] * &log[n - i];
    }
    Ok(top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::harmonic;

    fn q(p: i64, d: i64) -> Rational {
        Rational::from((p, d))
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(exact_coeff_oracle(1, 1, 3).unwrap(), q(11, 6));
        assert_eq!(exact_coeff_oracle(2, 0, 7).unwrap(), 8);
        // log² = u² + u³ + 11/12 u⁴ + …, so the prefix sums through u² and u³ are 1 and 2.
        assert_eq!(exact_coeff_oracle(1, 2, 2).unwrap(), 1);
        assert_eq!(exact_coeff_oracle(1, 2, 3).unwrap(), 2);
        assert_eq!(exact_coeff_oracle(1, 2, 4).unwrap(), q(35, 12));
        assert_eq!(exact_coeff_oracle(1, 3, 0).unwrap(), 0);
    }

    #[test]
    fn harmonic_and_binomial_cases() {
        for n in 0..60u64 {
            assert_eq!(exact_coeff_oracle(1, 1, n).unwrap(), harmonic(n, 1));
            assert_eq!(
                exact_coeff_oracle(3, 0, n).unwrap(),
                Integer::from(Integer::binomial_u(n as u32 + 2, 2))
            );
            // [u^n] log = 1/n
            if n > 0 {
                let diff = exact_coeff_oracle(1, 1, n).unwrap() - exact_coeff_oracle(1, 1, n - 1).unwrap();
                assert_eq!(diff, q(1, n as i64));
            }
        }
    }

    #[test]
    fn float_route_matches_exact_route() {
        for alpha in 1..=3 {
            for beta in 0..=4 {
                for n in [0u64, 1, 5, 40, 300] {
                    let exact = exact_coeff_oracle(alpha, beta, n).unwrap();
                    let approx = float_coeff_oracle(alpha, beta, n, 256).unwrap();
                    let e = Float::with_val(256, &exact);
                    let err = Float::with_val(256, &approx - &e).abs();
                    let scale = Float::with_val(256, e.abs_ref()).max(&Float::with_val(256, 1));
                    assert!((err / scale).to_f64() < 1e-60, "alpha={alpha} beta={beta} n={n}");
                }
            }
        }
    }

    #[test]
    fn budget_guard() {
        assert!(matches!(exact_coeff_oracle(1, 7, 10), Err(Error::BudgetExceeded(_))));
        assert!(matches!(exact_coeff_oracle(1, 1, ORACLE_MAX_N + 1), Err(Error::BudgetExceeded(_))));
        assert!(matches!(float_coeff_oracle(1, 1, ORACLE_MAX_N + 1, 64), Err(Error::BudgetExceeded(_))));
        assert!(exact_coeff_oracle(0, 1, 10).is_err());
    }
}
