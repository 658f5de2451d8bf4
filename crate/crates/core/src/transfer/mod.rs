//! Coefficient asymptotics for log-power singular terms.
//!
//! For `f(u) = (1-u)^-α · log^β(1/(1-u))` with integer `α ≥ 1` and `β ≥ 0`,
//!
//! ```text
//! [u^n] f(u) ~ n^(α-1)/(α-1)! · (log n)^β · [1 + Σ_{k=1..β} C_k/k! · (β)_k / (log n)^k]
//! ```
//!
//! where `C_k = (α-1)! · (d/dx)^k (1/Γ)(α)`. The bracket is finite because
//! `(β)_k` vanishes for `k > β`.

mod constants;
pub mod oracle;

pub use oracle::{exact_coeff_oracle, float_coeff_oracle, ORACLE_MAX_BETA, ORACLE_MAX_N};

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Float, Integer};

use crate::error::{Error, Result};

/// Highest derivative order of `1/Γ` supported by the embedded ζ table.
pub const MAX_ORDER: usize = 16;

/// Working precision for the constants and the `C_k` recurrence.
pub const HIGH_PRECISION_BITS: u32 = 256;

/// Arithmetic used to evaluate transfer estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    #[default]
    Double,
    /// 256-bit binary floating point (constants are good to ~239 bits).
    High,
}

impl Precision {
    pub fn bits(self) -> u32 {
        match self {
            Precision::Double => 53,
            Precision::High => HIGH_PRECISION_BITS,
        }
    }
}

/// `coeff · (1-u)^-alpha · log^beta(1/(1-u))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogPowerTerm {
    pub coeff: f64,
    pub alpha: u32,
    pub beta: u32,
}

impl LogPowerTerm {
    pub fn new(coeff: f64, alpha: u32, beta: u32) -> Result<Self> {
        if alpha == 0 {
            return Err(Error::InvalidArgument("alpha must be a positive integer".into()));
        }
        Ok(LogPowerTerm { coeff, alpha, beta })
    }

    fn scale(&self) -> (u32, u32) {
        (self.alpha, self.beta)
    }
}

/// An unspecified combination of `log^i(1/(1-u)) · (1-u)^-j` with either
/// `j < q`, or `j = q` and `i ≤ p`.
///
/// `j` is the pole order itself, so the class `(p, q)` sits below every term
/// `(1-u)^-q log^i` with `i > p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RemainderClass {
    pub p: i64,
    pub q: i64,
    pub present: bool,
}

impl RemainderClass {
    pub fn none() -> Self {
        RemainderClass { p: 0, q: 0, present: false }
    }

    pub fn new(p: i64, q: i64) -> Self {
        RemainderClass { p, q, present: true }
    }

    /// Whether a term `(1-u)^-alpha log^beta` lies inside the class.
    pub fn absorbs(&self, alpha: u32, beta: u32) -> bool {
        if !self.present {
            return false;
        }
        let (i, j) = (i64::from(beta), i64::from(alpha));
        j < self.q || (j == self.q && i <= self.p)
    }
}

impl Default for RemainderClass {
    fn default() -> Self {
        Self::none()
    }
}

/// Significant terms in decreasing `(alpha, beta)` order plus a dominated tail.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularExpansion {
    terms: Vec<LogPowerTerm>,
    remainder: RemainderClass,
}

impl SingularExpansion {
    pub fn new(terms: Vec<LogPowerTerm>, remainder: RemainderClass) -> Result<Self> {
        for pair in terms.windows(2) {
            if pair[0].scale().cmp(&pair[1].scale()) != Ordering::Greater {
                return Err(Error::InvalidArgument(
                    "terms must be strictly decreasing in (alpha, beta)".into(),
                ));
            }
        }
        if let Some(t) = terms.iter().find(|t| remainder.absorbs(t.alpha, t.beta)) {
            return Err(Error::InvalidArgument(format!(
                "term (alpha={}, beta={}) is absorbed by the remainder class",
                t.alpha, t.beta
            )));
        }
        Ok(SingularExpansion { terms, remainder })
    }

    pub fn terms(&self) -> &[LogPowerTerm] {
        &self.terms
    }

    pub fn remainder(&self) -> RemainderClass {
        self.remainder
    }
}

/// Evaluation options for the transfer estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TransferOptions {
    pub precision: Precision,
    /// Keep only bracket terms with `k ≤ order_limit`; `None` sums all `β + 1`.
    pub order_limit: Option<usize>,
}

pub fn euler_gamma(bits: u32) -> Float {
    parse_const(constants::EULER_GAMMA, bits)
}

/// ζ(k) for `2 ≤ k ≤ MAX_ORDER + 1`.
pub fn zeta(k: usize, bits: u32) -> Result<Float> {
    if k < 2 {
        return Err(Error::InvalidArgument("zeta is only tabulated for k >= 2".into()));
    }
    constants::ZETA
        .get(k - 2)
        .map(|s| parse_const(s, bits))
        .ok_or(Error::OrderExceeded { k: k - 1, max: MAX_ORDER })
}

fn parse_const(digits: &str, bits: u32) -> Float {
    Float::with_val(bits, Float::parse(digits).expect("embedded constant is valid"))
}

/// `ψ^(i)(alpha)` at a positive integer, from the harmonic and ζ closed forms.
pub fn polygamma_at_integer(i: usize, alpha: u32, bits: u32) -> Result<Float> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("polygamma needs a positive integer argument".into()));
    }
    if i == 0 {
        let mut psi = -euler_gamma(bits);
        for j in 1..alpha {
            psi += Float::with_val(bits, 1) / j;
        }
        return Ok(psi);
    }
    let mut tail = zeta(i + 1, bits)?;
    for j in 1..alpha {
        tail -= Float::with_val(bits, j).pow(-((i + 1) as i32));
    }
    let fact = Float::with_val(bits, Integer::from(Integer::factorial(i as u32)));
    let sign = if i % 2 == 1 { 1 } else { -1 };
    Ok(tail * fact * sign)
}

/// `C_0, …, C_max_k` at `alpha`, computed at `bits` of precision.
///
/// Uses `g' = -ψ·g` for `g = 1/Γ`, hence
/// `g^(m+1) = -Σ_{i≤m} binom(m, i) ψ^(i) g^(m-i)`; scaling by `(α-1)!`
/// turns `g(α)` into 1.
pub fn gamma_recip_derivatives(alpha: u32, max_k: usize, bits: u32) -> Result<Vec<Float>> {
    if alpha == 0 {
        return Err(Error::InvalidArgument("alpha must be a positive integer".into()));
    }
    if max_k > MAX_ORDER {
        return Err(Error::OrderExceeded { k: max_k, max: MAX_ORDER });
    }
    let psi: Vec<Float> = (0..max_k)
        .map(|i| polygamma_at_integer(i, alpha, bits))
        .collect::<Result<_>>()?;
    let mut c = vec![Float::with_val(bits, 1)];
    for m in 0..max_k {
        let mut next = Float::new(bits);
        for i in 0..=m {
            let binom = Integer::from(Integer::binomial_u(m as u32, i as u32));
            next -= Float::with_val(bits, &psi[i] * &c[m - i]) * binom;
        }
        c.push(next);
    }
    Ok(c)
}

/// `C_k = (α-1)! · (1/Γ)^(k)(α)` as a double.
pub fn gamma_recip_derivative(alpha: u32, k: usize) -> Result<f64> {
    let c = gamma_recip_derivatives(alpha, k, HIGH_PRECISION_BITS)?;
    Ok(c[k].to_f64())
}

fn check_n(n: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("transfer needs n >= 2, got {n}")));
    }
    Ok(())
}

/// The summands of the transfer bracket, `C_k/k! · (β)_k / (log n)^k` for `k = 0..=β`
/// (or up to the order limit).
pub fn bracket_terms(term: &LogPowerTerm, n: u64, opts: TransferOptions) -> Result<Vec<Float>> {
    check_n(n)?;
    let bits = opts.precision.bits();
    let beta = term.beta as usize;
    let top = opts.order_limit.map_or(beta, |k| k.min(beta));
    let c = gamma_recip_derivatives(term.alpha, top, HIGH_PRECISION_BITS)?;
    let log_n = Float::with_val(bits, n).ln();
    let mut out = Vec::with_capacity(top + 1);
    for (k, ck) in c.iter().enumerate() {
        // (β)_k / k! = binom(β, k)
        let binom = Integer::from(Integer::binomial_u(term.beta, k as u32));
        let mut v = Float::with_val(bits, ck) * binom;
        v /= Float::with_val(bits, log_n.clone().pow(k as u32));
        out.push(v);
    }
    Ok(out)
}

/// Transfer estimate of `[u^n]` of a single term at the requested precision.
pub fn transfer_term_with(term: &LogPowerTerm, n: u64, opts: TransferOptions) -> Result<Float> {
    let bits = opts.precision.bits();
    let bracket = Float::with_val(bits, Float::sum(bracket_terms(term, n, opts)?.iter()));
    let log_n = Float::with_val(bits, n).ln();
    let fact = Integer::from(Integer::factorial(term.alpha - 1));
    let mut v = Float::with_val(bits, n).pow(term.alpha - 1) / fact;
    v *= log_n.pow(term.beta);
    v *= bracket;
    v *= term.coeff;
    Ok(v)
}

/// Double-precision transfer estimate with the full bracket.
pub fn transfer_term(term: &LogPowerTerm, n: u64) -> Result<f64> {
    Ok(transfer_term_with(term, n, TransferOptions::default())?.to_f64())
}

/// Termwise transfer of an expansion; the remainder class contributes nothing.
pub fn transfer_expansion_with(exp: &SingularExpansion, n: u64, opts: TransferOptions) -> Result<Float> {
    check_n(n)?;
    let mut sum = Float::new(opts.precision.bits());
    for term in exp.terms() {
        sum += transfer_term_with(term, n, opts)?;
    }
    Ok(sum)
}

pub fn transfer_expansion(exp: &SingularExpansion, n: u64) -> Result<f64> {
    Ok(transfer_expansion_with(exp, n, TransferOptions::default())?.to_f64())
}

#[cfg(test)]
mod tests {
    use super::*;

    const GAMMA: f64 = 0.577_215_664_901_532_9;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn low_order_coefficients() {
        for alpha in 1..8 {
            assert_eq!(gamma_recip_derivative(alpha, 0).unwrap(), 1.0);
        }
        assert!(rel(gamma_recip_derivative(1, 1).unwrap(), GAMMA) < 1e-15);
        assert!(rel(gamma_recip_derivative(2, 1).unwrap(), GAMMA - 1.0) < 1e-15);
        // (1/Γ)''(1) = γ² - π²/6
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!(rel(gamma_recip_derivative(1, 2).unwrap(), GAMMA * GAMMA - pi2_6) < 1e-14);
    }

    #[test]
    fn order_is_capped() {
        assert!(gamma_recip_derivative(3, MAX_ORDER).is_ok());
        assert_eq!(
            gamma_recip_derivative(3, MAX_ORDER + 1),
            Err(Error::OrderExceeded { k: MAX_ORDER + 1, max: MAX_ORDER })
        );
    }

    // C_k against central differences of MPFR's Γ at 256 bits.
    #[test]
    fn derivatives_match_finite_differences() {
        let bits = 256;
        let h = Float::with_val(bits, Float::parse("1e-12").unwrap());
        let recip_gamma = |x: &Float| Float::with_val(bits, x.gamma_ref()).recip();
        for alpha in 1..=5u32 {
            let c = gamma_recip_derivatives(alpha, 4, bits).unwrap();
            let scale = Float::with_val(bits, Integer::from(Integer::factorial(alpha - 1)));
            for k in 1..=4u32 {
                let mut acc = Float::new(bits);
                for i in 0..=k {
                    let offset = Float::with_val(bits, f64::from(k) / 2.0 - f64::from(i));
                    let x = Float::with_val(bits, alpha) + Float::with_val(bits, &offset * &h);
                    let w = Integer::from(Integer::binomial_u(k, i));
                    let term = recip_gamma(&x) * w;
                    if i % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                let fd = acc / Float::with_val(bits, h.clone().pow(k)) * &scale;
                let got = c[k as usize].to_f64();
                assert!(rel(got, fd.to_f64()) < 1e-8, "alpha={alpha} k={k}: {got} vs {fd}");
            }
        }
    }

    #[test]
    fn constants_match_mpfr() {
        let bits = 230;
        let tol = Float::with_val(bits, Float::parse("1e-65").unwrap());
        let euler = Float::with_val(bits, rug::float::Constant::Euler);
        assert!(Float::with_val(bits, &euler - &euler_gamma(bits)).abs() < tol);
        for k in 2..=MAX_ORDER + 1 {
            let mpfr = Float::with_val(bits, k).zeta();
            let ours = zeta(k, bits).unwrap();
            assert!(Float::with_val(bits, &mpfr - &ours).abs() < tol, "zeta({k})");
        }
        assert!(zeta(MAX_ORDER + 2, bits).is_err());
    }

    // ζ(k) by direct summation with an Euler–Maclaurin tail; γ from H_N.
    #[test]
    fn constants_match_series_summation() {
        let bits = 200;
        let n = 2000u32;
        for k in 2..=(MAX_ORDER as i32 + 1) {
            let mut s = Float::new(bits);
            for j in 1..n {
                s += Float::with_val(bits, j).pow(-k);
            }
            let nf = Float::with_val(bits, n);
            let kf = f64::from(k);
            // Σ_{j≥N} j^-k ≈ N^(1-k)/(k-1) + N^-k/2 + k N^(-k-1)/12 - k(k+1)(k+2) N^(-k-3)/720
            s += Float::with_val(bits, nf.clone().pow(1 - k)) / (kf - 1.0);
            s += Float::with_val(bits, nf.clone().pow(-k)) / 2.0;
            s += Float::with_val(bits, nf.clone().pow(-k - 1)) * kf / 12.0;
            s -= Float::with_val(bits, nf.clone().pow(-k - 3)) * (kf * (kf + 1.0) * (kf + 2.0) / 720.0);
            let err = Float::with_val(bits, &s - &zeta(k as usize, bits).unwrap()).abs();
            assert!(err.to_f64() < 1e-20, "zeta({k}) err {err}");
        }
        let mut h = Float::new(bits);
        for j in 1..=n {
            h += Float::with_val(bits, 1) / j;
        }
        let nf = Float::with_val(bits, n);
        // H_N - ln N - 1/(2N) + 1/(12N²) - 1/(120N⁴)
        h -= nf.clone().ln();
        h -= Float::with_val(bits, 1) / (Float::with_val(bits, 2) * &nf);
        h += Float::with_val(bits, 1) / (Float::with_val(bits, 12) * nf.clone().pow(2));
        h -= Float::with_val(bits, 1) / (Float::with_val(bits, 120) * nf.clone().pow(4));
        let err = (h - euler_gamma(bits)).abs();
        assert!(err.to_f64() < 1e-18, "gamma err {err}");
    }

    #[test]
    fn polygamma_values() {
        let psi1 = polygamma_at_integer(0, 1, 128).unwrap().to_f64();
        assert!(rel(psi1, -GAMMA) < 1e-15);
        // ψ'(1) = π²/6, ψ'(2) = π²/6 - 1
        let pi2_6 = std::f64::consts::PI.powi(2) / 6.0;
        assert!(rel(polygamma_at_integer(1, 1, 128).unwrap().to_f64(), pi2_6) < 1e-15);
        assert!(rel(polygamma_at_integer(1, 2, 128).unwrap().to_f64(), pi2_6 - 1.0) < 1e-15);
        // ψ''(1) = -2ζ(3)
        let z3 = 1.202_056_903_159_594_3;
        assert!(rel(polygamma_at_integer(2, 1, 128).unwrap().to_f64(), -2.0 * z3) < 1e-15);
    }

    #[test]
    fn transfer_term_examples() {
        let t = LogPowerTerm::new(1.0, 1, 0).unwrap();
        assert_eq!(transfer_term(&t, 1000).unwrap(), 1.0);
        let t = LogPowerTerm::new(1.0, 2, 0).unwrap();
        assert!(rel(transfer_term(&t, 10).unwrap(), 10.0) < 1e-15);
        let t = LogPowerTerm::new(1.0, 1, 1).unwrap();
        let v = transfer_term(&t, 1000).unwrap();
        assert!((v - (1000f64.ln() + GAMMA)).abs() < 1e-12);
        assert!((v - 7.48497).abs() < 1e-5);
        assert!(transfer_term(&t, 1).is_err());
        assert!(LogPowerTerm::new(1.0, 0, 1).is_err());
    }

    #[test]
    fn bracket_has_beta_plus_one_summands() {
        for alpha in 1..=4 {
            for beta in 0..=6 {
                let t = LogPowerTerm::new(1.0, alpha, beta).unwrap();
                let b = bracket_terms(&t, 1000, TransferOptions::default()).unwrap();
                assert_eq!(b.len(), beta as usize + 1);
                assert!(b.iter().all(|x| !x.is_zero()));
            }
        }
        let t = LogPowerTerm::new(1.0, 2, 5).unwrap();
        let opts = TransferOptions { order_limit: Some(2), ..Default::default() };
        assert_eq!(bracket_terms(&t, 1000, opts).unwrap().len(), 3);
    }

    #[test]
    fn beta_zero_transfer_tracks_binomial() {
        for alpha in 1..=6u32 {
            let t = LogPowerTerm::new(1.0, alpha, 0).unwrap();
            for n in (10 * alpha as u64..=2000).step_by(37) {
                let exact = Integer::from(Integer::binomial_u(n as u32 + alpha - 1, alpha - 1)).to_f64();
                let got = transfer_term(&t, n).unwrap();
                let bound = f64::from(alpha * alpha) / n as f64;
                assert!(rel(got, exact) <= bound, "alpha={alpha} n={n}");
            }
        }
    }

    #[test]
    fn high_precision_agrees_with_double() {
        let t = LogPowerTerm::new(2.5, 3, 4).unwrap();
        let hi = transfer_term_with(&t, 5000, TransferOptions { precision: Precision::High, order_limit: None })
            .unwrap();
        assert_eq!(hi.prec(), HIGH_PRECISION_BITS);
        assert!(rel(transfer_term(&t, 5000).unwrap(), hi.to_f64()) < 1e-13);
    }

    #[test]
    fn expansion_sums_terms() {
        let a = LogPowerTerm::new(2.0, 2, 1).unwrap();
        let b = LogPowerTerm::new(-2.0, 2, 0).unwrap();
        let single = SingularExpansion::new(vec![a], RemainderClass::none()).unwrap();
        assert_eq!(transfer_expansion(&single, 100).unwrap(), transfer_term(&a, 100).unwrap());
        let both = SingularExpansion::new(vec![a, b], RemainderClass::new(-1, 2)).unwrap();
        let sum = transfer_term(&a, 100).unwrap() + transfer_term(&b, 100).unwrap();
        assert!(rel(transfer_expansion(&both, 100).unwrap(), sum) < 1e-15);
        let empty = SingularExpansion::new(vec![], RemainderClass::none()).unwrap();
        assert_eq!(transfer_expansion(&empty, 100).unwrap(), 0.0);

        let cyc = SingularExpansion::new(vec![LogPowerTerm::new(1.0, 1, 1).unwrap()], RemainderClass::none())
            .unwrap();
        assert!((transfer_expansion(&cyc, 10_000).unwrap() - 9.78756).abs() < 1e-5);
    }

    #[test]
    fn expansion_invariants_are_checked() {
        let a = LogPowerTerm::new(1.0, 2, 1).unwrap();
        let b = LogPowerTerm::new(1.0, 2, 0).unwrap();
        assert!(SingularExpansion::new(vec![b, a], RemainderClass::none()).is_err());
        assert!(SingularExpansion::new(vec![a, a], RemainderClass::none()).is_err());
        // (0, 2) absorbs (1-u)^-2 log^0 but not (1-u)^-2 log^1.
        assert!(SingularExpansion::new(vec![a, b], RemainderClass::new(0, 2)).is_err());
        assert!(SingularExpansion::new(vec![a], RemainderClass::new(0, 2)).is_ok());
    }

    #[test]
    fn remainder_absorption() {
        let r = RemainderClass::new(-1, 2);
        assert!(!r.absorbs(3, 0));
        assert!(!r.absorbs(2, 0));
        assert!(r.absorbs(1, 5));
        assert!(!RemainderClass::none().absorbs(1, 0));
        let r = RemainderClass::new(0, 1);
        assert!(r.absorbs(1, 0));
        assert!(!r.absorbs(1, 1));
        assert!(!r.absorbs(2, 0));
    }
}
