//! Singular expansions of the moment generating functions `f_s(u)` and the
//! two-term moment asymptotics they transfer to.
//!
//! * cycles: `f_s = (1-u)^-1 log^s`, exactly, so `β_s(n) = L^s + γ s L^(s-1) + …`
//! * inversions: `f_s = (2s)!/(4^s (1-u)^(2s+1)) - s(4s+5)(2s-1)!/(9·4^(s-1) (1-u)^(2s)) + …`,
//!   giving `β_s(n) = n^(2s)/4^s + s(2s-11)/(9·4^s) n^(2s-1) + …`
//! * quicksort: `f_s = 2^s s! (1-u)^-(s+1) log^s + s(H_s-2) 2^s s! (1-u)^-(s+1) log^(s-1) + …`,
//!   giving `β_s(n) = 2^s n^s L^s + 2^s s(γ-2) n^s L^(s-1) + …`
//!
//! with `L = ln n`.

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::exact::{self, Model, RowLimits};
use crate::moments::{factorial_moment, harmonic, ExactRational};
use crate::transfer::{
    self, euler_gamma, float_coeff_oracle, gamma_recip_derivatives, LogPowerTerm, Precision,
    RemainderClass, SingularExpansion, HIGH_PRECISION_BITS,
};

/// Asymptotic scale `n^n_pow · (ln n)^log_pow`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scale {
    pub n_pow: i64,
    pub log_pow: u32,
}

impl Scale {
    pub fn new(n_pow: i64, log_pow: u32) -> Self {
        Scale { n_pow, log_pow }
    }
}

/// `rational + gamma · γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaLinear {
    pub rational: Rational,
    pub gamma: Rational,
}

impl GammaLinear {
    pub fn rational(r: Rational) -> Self {
        GammaLinear { rational: r, gamma: Rational::new() }
    }

    pub fn eval(&self, bits: u32) -> Float {
        let mut v = Float::with_val(bits, &self.gamma) * euler_gamma(bits);
        v += &self.rational;
        v
    }
}

/// A two-term asymptotic formula `lead · scale₀ + second · scale₁`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTermAsymptotic {
    pub leading: (Scale, GammaLinear),
    pub second: (Scale, GammaLinear),
}

fn check_s(s: u32) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidArgument("moment order s must be >= 1".into()));
    }
    Ok(())
}

fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

fn rational_to_f64(r: &Rational) -> f64 {
    Float::with_val(HIGH_PRECISION_BITS, r).to_f64()
}

/// The significant terms of `f_s(u)` with their remainder class.
pub fn fs_expansion(model: Model, s: u32) -> Result<SingularExpansion> {
    check_s(s)?;
    let si = i64::from(s);
    let (terms, remainder) = match model {
        Model::Cycles => (vec![LogPowerTerm::new(1.0, 1, s)?], RemainderClass::none()),
        Model::Inversions => {
            let lead = Rational::from((factorial(2 * s), Integer::from(4).pow(s)));
            let second = -Rational::from((
                Integer::from(s) * (4 * s + 5) * factorial(2 * s - 1),
                Integer::from(9) * Integer::from(4).pow(s - 1),
            ));
            (
                vec![
                    LogPowerTerm::new(rational_to_f64(&lead), 2 * s + 1, 0)?,
                    LogPowerTerm::new(rational_to_f64(&second), 2 * s, 0)?,
                ],
                RemainderClass::new(0, 2 * si - 1),
            )
        }
        Model::Quicksort => {
            let base = Integer::from(2).pow(s) * factorial(s);
            let lead = Rational::from(base.clone());
            let second = Rational::from(s) * (harmonic(u64::from(s), 1) - 2u32) * base;
            (
                vec![
                    LogPowerTerm::new(rational_to_f64(&lead), s + 1, s)?,
                    LogPowerTerm::new(rational_to_f64(&second), s + 1, s - 1)?,
                ],
                RemainderClass::new(si - 2, si + 1),
            )
        }
    };
    SingularExpansion::new(terms, remainder)
}

/// The stated two-term asymptotic of `β_s(n)`.
pub fn theorem(model: Model, s: u32) -> Result<TwoTermAsymptotic> {
    check_s(s)?;
    let si = i64::from(s);
    let four_s = Integer::from(4).pow(s);
    let two_s = Integer::from(2).pow(s);
    Ok(match model {
        Model::Cycles => TwoTermAsymptotic {
            leading: (Scale::new(0, s), GammaLinear::rational(Rational::from(1))),
            second: (
                Scale::new(0, s - 1),
                GammaLinear { rational: Rational::new(), gamma: Rational::from(s) },
            ),
        },
        Model::Inversions => TwoTermAsymptotic {
            leading: (Scale::new(2 * si, 0), GammaLinear::rational(Rational::from((1, four_s.clone())))),
            second: (
                Scale::new(2 * si - 1, 0),
                GammaLinear::rational(Rational::from((si * (2 * si - 11), four_s * 9u32))),
            ),
        },
        Model::Quicksort => TwoTermAsymptotic {
            leading: (Scale::new(si, s), GammaLinear::rational(Rational::from(two_s.clone()))),
            second: (
                Scale::new(si, s - 1),
                GammaLinear {
                    rational: Rational::from(two_s.clone() * si * -2),
                    gamma: Rational::from(two_s * si),
                },
            ),
        },
    })
}

/// `coeff · n^p · (ln n)^q` summed over both terms, at the given precision.
pub fn beta_asym_with(model: Model, n: u64, s: u32, precision: Precision) -> Result<Float> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("asymptotic formula needs n >= 2, got {n}")));
    }
    let bits = precision.bits();
    let formula = theorem(model, s)?;
    let log_n = Float::with_val(bits, n).ln();
    let mut sum = Float::new(bits);
    for (scale, coeff) in [&formula.leading, &formula.second] {
        let mut v = Float::with_val(bits, coeff.eval(HIGH_PRECISION_BITS));
        v *= Float::with_val(bits, Float::with_val(bits, n).pow(scale.n_pow));
        v *= Float::with_val(bits, (&log_n).pow(scale.log_pow));
        sum += v;
    }
    Ok(sum)
}

pub fn beta_asym(model: Model, n: u64, s: u32) -> Result<f64> {
    Ok(beta_asym_with(model, n, s, Precision::Double)?.to_f64())
}

/// Coefficients of an expansion's transfer, keyed by scale.
///
/// `β = 0` terms transfer exactly through `binom(n+α-1, α-1)`, which keeps the
/// `n^(α-2)` correction needed for second-order coefficients. Log terms only
/// resolve the `n^(α-1)` scale; `resolved_above` is the highest `n` power at or
/// below which some log term leaves unknown contributions.
#[derive(Debug, Clone)]
pub struct SymbolicTransfer {
    pub coefficients: BTreeMap<Scale, Float>,
    pub resolved_above: Option<i64>,
}

pub fn symbolic_transfer(exp: &SingularExpansion, bits: u32) -> Result<SymbolicTransfer> {
    let mut coefficients: BTreeMap<Scale, Float> = BTreeMap::new();
    let mut resolved_above: Option<i64> = None;
    for term in exp.terms() {
        let alpha = term.alpha;
        let scale_fact = Float::with_val(bits, factorial(alpha - 1));
        let coeff = Float::with_val(bits, term.coeff) / &scale_fact;
        if term.beta == 0 {
            // (n+1)(n+2)…(n+α-1) expanded as a polynomial in n
            let mut poly = vec![Integer::from(1)];
            for i in 1..alpha {
                let mut next = vec![Integer::new(); poly.len() + 1];
                for (d, c) in poly.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] += Integer::from(c * i);
                }
                poly = next;
            }
            for (d, c) in poly.iter().enumerate() {
                let v = Float::with_val(bits, &coeff * c);
                *coefficients
                    .entry(Scale::new(d as i64, 0))
                    .or_insert_with(|| Float::new(bits)) += v;
            }
        } else {
            let c = gamma_recip_derivatives(alpha, term.beta as usize, bits)?;
            for (k, ck) in c.iter().enumerate() {
                let binom = Integer::from(Integer::binomial_u(term.beta, k as u32));
                let v = Float::with_val(bits, &coeff * ck) * binom;
                *coefficients
                    .entry(Scale::new(i64::from(alpha) - 1, term.beta - k as u32))
                    .or_insert_with(|| Float::new(bits)) += v;
            }
            let floor = i64::from(alpha) - 2;
            resolved_above = Some(resolved_above.map_or(floor, |f| f.max(floor)));
        }
    }
    coefficients.retain(|_, v| !v.is_zero());
    Ok(SymbolicTransfer { coefficients, resolved_above })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientPair {
    pub scale: Scale,
    pub from_transfer: f64,
    pub from_theorem: f64,
}

impl CoefficientPair {
    pub fn relative_error(&self) -> f64 {
        ((self.from_transfer - self.from_theorem) / self.from_theorem).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crosscheck {
    pub model: Model,
    pub s: u32,
    pub leading: CoefficientPair,
    pub second: CoefficientPair,
}

impl Crosscheck {
    pub fn max_relative_error(&self) -> f64 {
        self.leading.relative_error().max(self.second.relative_error())
    }
}

/// Transfers `fs_expansion(model, s)` and compares its two dominant scales
/// with the theorem's coefficients.
pub fn coefficient_crosscheck(model: Model, s: u32) -> Result<Crosscheck> {
    let bits = HIGH_PRECISION_BITS;
    let transferred = symbolic_transfer(&fs_expansion(model, s)?, bits)?;
    let formula = theorem(model, s)?;

    let mut dominant = transferred.coefficients.iter().rev();
    let mut pair = |(scale, coeff): &(Scale, GammaLinear)| -> Result<CoefficientPair> {
        let (got_scale, got) = dominant
            .next()
            .ok_or_else(|| Error::InvalidArgument("transfer produced too few scales".into()))?;
        if got_scale != scale {
            return Err(Error::InvalidArgument(format!(
                "{model} s={s}: transfer scale {got_scale:?} differs from the stated {scale:?}"
            )));
        }
        if transferred.resolved_above.is_some_and(|f| scale.n_pow <= f) {
            return Err(Error::InvalidArgument(format!("{model} s={s}: scale {scale:?} is unresolved")));
        }
        Ok(CoefficientPair {
            scale: *scale,
            from_transfer: got.to_f64(),
            from_theorem: coeff.eval(bits).to_f64(),
        })
    };
    let leading = pair(&formula.leading)?;
    let second = pair(&formula.second)?;
    Ok(Crosscheck { model, s, leading, second })
}

/// `E[comparisons] = 2(n+1)H_n - 4n`.
pub fn quicksort_mean(n: u64) -> ExactRational {
    Rational::from(2 * (n + 1)) * harmonic(n, 1) - Rational::from(4 * n)
}

/// Where a reference value of `β_s(n)` came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    Table,
    ClosedForm,
    Oracle,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Table => "table",
            Source::ClosedForm => "closed-form",
            Source::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceValue {
    Exact(ExactRational),
    /// 256-bit float from the series oracle.
    Approx(Float),
}

impl ReferenceValue {
    pub fn to_float(&self, bits: u32) -> Float {
        match self {
            ReferenceValue::Exact(r) => Float::with_val(bits, r),
            ReferenceValue::Approx(f) => Float::with_val(bits, f),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceMoment {
    pub value: ReferenceValue,
    pub source: Source,
}

/// Largest `n` for which cycle moments beyond the table range are computed
/// with the exact rational oracle instead of the float one.
const EXACT_ORACLE_MAX_N: u64 = 2000;

/// Best available reference for `β_s(n)`: the exact table when `n` is within
/// the row limit, otherwise a closed form (first moments of inversions and
/// quicksort) or the series oracle (cycles, whose `f_s` has no remainder).
pub fn reference_moment(model: Model, n: u64, s: u32, limits: &RowLimits) -> Result<ReferenceMoment> {
    let row = usize::try_from(n).map_err(|_| Error::InvalidArgument("n too large".into()))?;
    if limits.check(model, row).is_ok() {
        let t = exact::table(model, row, limits)?;
        return Ok(ReferenceMoment {
            value: ReferenceValue::Exact(factorial_moment(&t, u64::from(s))?),
            source: Source::Table,
        });
    }
    let closed = |r: Rational| ReferenceMoment { value: ReferenceValue::Exact(r), source: Source::ClosedForm };
    match (model, s) {
        (_, 0) => Ok(closed(Rational::from(1))),
        (Model::Quicksort, 1) => Ok(closed(quicksort_mean(n))),
        (Model::Inversions, 1) => Ok(closed(Rational::from((Integer::from(n) * n.saturating_sub(1), 4)))),
        (Model::Cycles, _) if s == 1 || n <= EXACT_ORACLE_MAX_N => Ok(ReferenceMoment {
            value: ReferenceValue::Exact(transfer::exact_coeff_oracle(1, s, n)?),
            source: Source::Oracle,
        }),
        (Model::Cycles, _) => Ok(ReferenceMoment {
            value: ReferenceValue::Approx(float_coeff_oracle(1, s, n, HIGH_PRECISION_BITS)?),
            source: Source::Oracle,
        }),
        _ => Err(Error::LimitExceeded { model, n: row, limit: limits.get(model) }),
    }
}
