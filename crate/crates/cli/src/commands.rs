use momentlab::expansions::{self, ReferenceValue, Scale};
use momentlab::simulate;
use momentlab::transfer::{self, LogPowerTerm, Precision, TransferOptions, HIGH_PRECISION_BITS};
use momentlab::{exact, Error, Model, Result, RowLimits};
use rug::Float;
use serde_json::json;

use crate::report::{format_float_decimal, format_rational, relative_error, Cell, Report};
use crate::MomentMode;

/// Relative tolerance for `verify`.
pub const VERIFY_TOLERANCE: f64 = 1e-10;

/// Largest `n` at which `transfer` compares against the exact rational oracle;
/// beyond it the 256-bit float oracle is used.
const EXACT_TRANSFER_ORACLE_MAX_N: u64 = 2000;

fn text(s: impl Into<String>) -> Cell {
    Cell::Text(s.into())
}

fn reference_text(v: &ReferenceValue) -> String {
    match v {
        ReferenceValue::Exact(r) => format_rational(r),
        ReferenceValue::Approx(f) => format_float_decimal(f),
    }
}

fn abs_diff(a: &Float, b: &Float) -> f64 {
    Float::with_val(HIGH_PRECISION_BITS, a - b).abs().to_f64()
}

pub fn table(model: Model, n: usize, limits: &RowLimits) -> Result<Report> {
    let t = exact::table(model, n, limits)?;
    let mut report = Report::new("table", vec!["k", "count"])
        .param("model", json!(model.as_str()))
        .param("n", json!(n));
    for (k, c) in t.counts().iter().enumerate() {
        if *c != 0 {
            report.push(vec![Cell::Uint(k as u64), Cell::Exact(c.to_string())]);
        }
    }
    Ok(report)
}

pub fn moment(model: Model, n: u64, s: u32, mode: MomentMode, precision: Precision, limits: &RowLimits) -> Result<Report> {
    let head = |mut r: Report| {
        r = r.param("model", json!(model.as_str())).param("n", json!(n)).param("s", json!(s));
        r
    };
    let base = vec![text(model.as_str()), Cell::Uint(s.into()), Cell::Uint(n)];
    match mode {
        MomentMode::Exact => {
            let reference = expansions::reference_moment(model, n, s, limits)?;
            let mut r = head(Report::new("moment", vec!["model", "s", "n", "exact", "source"]));
            let mut row = base;
            row.push(Cell::Exact(reference_text(&reference.value)));
            row.push(text(reference.source.as_str()));
            r.push(row);
            Ok(r)
        }
        MomentMode::Asym => {
            let asym = expansions::beta_asym_with(model, n, s, precision)?;
            let mut r = head(Report::new("moment", vec!["model", "s", "n", "asym"]))
                .param("asymptotic", json!("two-term"));
            let mut row = base;
            row.push(Cell::Real(asym.to_f64()));
            r.push(row);
            Ok(r)
        }
        MomentMode::Both => {
            let mut r = head(compare_report()).param("asymptotic", json!("two-term"));
            r.push(compare_row(model, n, s, precision, limits)?);
            Ok(r)
        }
    }
}

fn compare_report() -> Report {
    Report::new("compare", vec!["model", "s", "n", "exact", "asym", "abs_err", "rel_err", "source"])
}

fn compare_row(model: Model, n: u64, s: u32, precision: Precision, limits: &RowLimits) -> Result<Vec<Cell>> {
    let asym = expansions::beta_asym_with(model, n, s, precision)?;
    let reference = expansions::reference_moment(model, n, s, limits)?;
    let exact = reference.value.to_float(HIGH_PRECISION_BITS);
    let abs_err = abs_diff(&asym, &exact);
    Ok(vec![
        text(model.as_str()),
        Cell::Uint(s.into()),
        Cell::Uint(n),
        Cell::Exact(reference_text(&reference.value)),
        Cell::Real(asym.to_f64()),
        Cell::Real(abs_err),
        relative_error(abs_err, exact.to_f64()),
        text(reference.source.as_str()),
    ])
}

pub fn compare(model: Model, s: u32, grid: &[u64], precision: Precision, limits: &RowLimits) -> Result<Report> {
    let mut r = compare_report()
        .param("model", json!(model.as_str()))
        .param("s", json!(s))
        .param("n_grid", json!(grid))
        .param("asymptotic", json!("two-term"));
    for &n in grid {
        r.push(compare_row(model, n, s, precision, limits)?);
    }
    Ok(r)
}

pub fn transfer(alpha: u32, beta: u32, n: u64, order_limit: Option<usize>, precision: Precision) -> Result<Report> {
    let term = LogPowerTerm::new(1.0, alpha, beta)?;
    let estimate = transfer::transfer_term_with(&term, n, TransferOptions { precision, order_limit })?;
    let (oracle, oracle_text, kind) = if n <= EXACT_TRANSFER_ORACLE_MAX_N {
        let r = transfer::exact_coeff_oracle(alpha, beta, n)?;
        (Float::with_val(HIGH_PRECISION_BITS, &r), format_rational(&r), "exact")
    } else {
        let f = transfer::float_coeff_oracle(alpha, beta, n, HIGH_PRECISION_BITS)?;
        let t = format_float_decimal(&f);
        (f, t, "float256")
    };
    let abs_err = abs_diff(&estimate, &oracle);
    let order = order_limit.map_or("full".to_string(), |k| k.min(beta as usize).to_string());
    let mut r = Report::new(
        "transfer",
        vec!["alpha", "beta", "n", "order", "transfer", "oracle", "oracle_kind", "abs_err", "rel_err"],
    );
    r.push(vec![
        Cell::Uint(alpha.into()),
        Cell::Uint(beta.into()),
        Cell::Uint(n),
        text(order),
        Cell::Real(estimate.to_f64()),
        Cell::Exact(oracle_text),
        text(kind),
        Cell::Real(abs_err),
        relative_error(abs_err, oracle.to_f64()),
    ]);
    Ok(r)
}

pub fn simulate(model: Model, n: usize, s: u32, trials: u64, seed: u64, threads: usize) -> Result<Report> {
    let e = simulate::estimate_factorial_moment_threads(model, n, s, trials, seed, threads)?;
    let mut r = Report::new("simulate", vec!["model", "n", "s", "trials", "seed", "mean", "stderr"]);
    r.push(vec![
        text(model.as_str()),
        Cell::Uint(e.n as u64),
        Cell::Uint(e.s.into()),
        Cell::Uint(e.trials),
        Cell::Uint(e.seed),
        Cell::Real(e.mean),
        Cell::Real(e.stderr),
    ]);
    Ok(r)
}

fn scale_label(scale: Scale) -> String {
    format!("n^{}*ln^{}", scale.n_pow, scale.log_pow)
}

/// Cross-checks every model for `1 ≤ s ≤ 10`; the flag is false when any
/// coefficient misses [`VERIFY_TOLERANCE`].
pub fn verify() -> Result<(Report, bool)> {
    let mut r = Report::new(
        "verify",
        vec!["model", "s", "term", "scale", "from_transfer", "from_theorem", "rel_err", "status"],
    )
    .param("tolerance", json!(VERIFY_TOLERANCE));
    let mut all_ok = true;
    for model in Model::ALL {
        for s in 1..=10 {
            let check = match expansions::coefficient_crosscheck(model, s) {
                Ok(c) => c,
                Err(Error::InvalidArgument(msg)) => {
                    all_ok = false;
                    eprintln!("momentlab: {msg}");
                    continue;
                }
                Err(e) => return Err(e),
            };
            for (label, pair) in [("leading", check.leading), ("second", check.second)] {
                let err = pair.relative_error();
                let ok = err <= VERIFY_TOLERANCE;
                all_ok &= ok;
                r.push(vec![
                    text(model.as_str()),
                    Cell::Uint(s.into()),
                    text(label),
                    text(scale_label(pair.scale)),
                    Cell::Real(pair.from_transfer),
                    Cell::Real(pair.from_theorem),
                    Cell::Real(err),
                    text(if ok { "pass" } else { "fail" }),
                ]);
            }
        }
    }
    Ok((r, all_ok))
}
