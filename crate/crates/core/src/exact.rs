//! Exact distribution rows for the three cost models.
//!
//! Every row is a dense vector of counts indexed by cost `k = 0..=k_max`,
//! summing to `n!`. Cycles use the Stirling-cycle triangle, inversions the
//! Mahonian window recurrence, and quicksort the integer form of the
//! comparison-count PGF recurrence
//! `A_n(z) = z^(n-1) Σ_j binom(n-1, j-1) A_(n-j)(z) A_(j-1)(z)` with
//! `A_n = n!·G_n`.

use std::fmt;
use std::str::FromStr;

use rug::integer::Order;
use rug::Integer;

use crate::error::{Error, Result};

/// Environment variable that overrides the default row caps.
pub const ROW_LIMIT_ENV: &str = "MOMENTLAB_ROW_LIMIT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Cycles,
    Inversions,
    Quicksort,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Cycles, Model::Inversions, Model::Quicksort];

    pub fn as_str(self) -> &'static str {
        match self {
            Model::Cycles => "cycles",
            Model::Inversions => "inversions",
            Model::Quicksort => "quicksort",
        }
    }

    /// Largest attainable cost for inputs of size `n`.
    pub fn k_max(self, n: usize) -> usize {
        match self {
            Model::Cycles => n,
            Model::Inversions | Model::Quicksort => n * n.saturating_sub(1) / 2,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycles" => Ok(Model::Cycles),
            "inversions" => Ok(Model::Inversions),
            "quicksort" => Ok(Model::Quicksort),
            other => Err(Error::InvalidArgument(format!("unknown model `{other}`"))),
        }
    }
}

/// Per-model caps on the row index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowLimits {
    pub cycles: usize,
    pub inversions: usize,
    pub quicksort: usize,
}

impl Default for RowLimits {
    fn default() -> Self {
        RowLimits {
            cycles: 5000,
            inversions: 1000,
            quicksort: 120,
        }
    }
}

impl RowLimits {
    /// Same cap for every model.
    pub fn uniform(limit: usize) -> Self {
        RowLimits {
            cycles: limit,
            inversions: limit,
            quicksort: limit,
        }
    }

    pub fn get(&self, model: Model) -> usize {
        match model {
            Model::Cycles => self.cycles,
            Model::Inversions => self.inversions,
            Model::Quicksort => self.quicksort,
        }
    }

    pub fn check(&self, model: Model, n: usize) -> Result<()> {
        let limit = self.get(model);
        if n > limit {
            return Err(Error::LimitExceeded { model, n, limit });
        }
        Ok(())
    }

    /// Parses an override of the form `N` (all models) or
    /// `cycles=N,inversions=N,quicksort=N` (any subset) on top of the defaults.
    pub fn parse_override(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if let Ok(limit) = spec.parse::<usize>() {
            return Ok(RowLimits::uniform(limit));
        }
        let mut limits = RowLimits::default();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("bad row limit entry `{part}`"))
            })?;
            let value: usize = value.trim().parse().map_err(|_| {
                Error::InvalidArgument(format!("bad row limit value in `{part}`"))
            })?;
            match name.trim().parse::<Model>()? {
                Model::Cycles => limits.cycles = value,
                Model::Inversions => limits.inversions = value,
                Model::Quicksort => limits.quicksort = value,
            }
        }
        Ok(limits)
    }

    /// Defaults, overridden by [`ROW_LIMIT_ENV`] when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ROW_LIMIT_ENV) {
            Ok(spec) => Self::parse_override(&spec),
            Err(_) => Ok(RowLimits::default()),
        }
    }
}

/// One exact distribution row: `counts[k]` permutations of size `n` have cost `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionTable {
    model: Model,
    n: usize,
    counts: Vec<Integer>,
}

impl DistributionTable {
    /// Wraps externally supplied counts. Only the row length is validated;
    /// the row-sum invariant is checked by consumers such as
    /// [`factorial_moment`](crate::moments::factorial_moment).
    pub fn from_counts(model: Model, n: usize, counts: Vec<Integer>) -> Result<Self> {
        let expected = model.k_max(n) + 1;
        if counts.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "{model} row n={n} must have {expected} entries, got {}",
                counts.len()
            )));
        }
        if counts.iter().any(|c| *c < 0) {
            return Err(Error::InvalidArgument("negative count".into()));
        }
        Ok(DistributionTable { model, n, counts })
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn counts(&self) -> &[Integer] {
        &self.counts
    }

    /// Count at cost `k`; zero outside the row.
    pub fn count(&self, k: usize) -> Integer {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> Integer {
        Integer::sum(self.counts.iter()).into()
    }

    pub fn has_valid_total(&self) -> bool {
        self.total() == factorial(self.n)
    }
}

pub fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

pub fn cycle_counts(n: usize) -> Result<DistributionTable> {
    table(Model::Cycles, n, &RowLimits::default())
}

pub fn inversion_counts(n: usize) -> Result<DistributionTable> {
    table(Model::Inversions, n, &RowLimits::default())
}

pub fn quicksort_counts(n: usize) -> Result<DistributionTable> {
    table(Model::Quicksort, n, &RowLimits::default())
}

/// Row `n` of `model`, subject to `limits`.
pub fn table(model: Model, n: usize, limits: &RowLimits) -> Result<DistributionTable> {
    limits.check(model, n)?;
    let counts = match model {
        Model::Cycles => {
            let mut row = vec![Integer::from(1)];
            for m in 1..=n {
                row = next_cycle_row(&row, m);
            }
            row
        }
        Model::Inversions => {
            let mut row = vec![Integer::from(1)];
            for m in 1..=n {
                row = next_inversion_row(&row, m);
            }
            row
        }
        Model::Quicksort => quicksort_rows(n).pop().expect("row 0 always present"),
    };
    Ok(DistributionTable { model, n, counts })
}

/// Rows `0..=n` of `model`, built bottom-up in one pass.
pub fn tables_up_to(model: Model, n: usize, limits: &RowLimits) -> Result<Vec<DistributionTable>> {
    limits.check(model, n)?;
    let rows = match model {
        Model::Cycles => successive_rows(n, next_cycle_row),
        Model::Inversions => successive_rows(n, next_inversion_row),
        Model::Quicksort => quicksort_rows(n),
    };
    Ok(rows
        .into_iter()
        .enumerate()
        .map(|(m, counts)| DistributionTable { model, n: m, counts })
        .collect())
}

fn successive_rows(n: usize, next: fn(&[Integer], usize) -> Vec<Integer>) -> Vec<Vec<Integer>> {
    let mut rows = Vec::with_capacity(n + 1);
    rows.push(vec![Integer::from(1)]);
    for m in 1..=n {
        let row = next(&rows[m - 1], m);
        rows.push(row);
    }
    rows
}

// C(m, k) = (m-1)·C(m-1, k) + C(m-1, k-1)
fn next_cycle_row(prev: &[Integer], m: usize) -> Vec<Integer> {
    let mut row = vec![Integer::new(); m + 1];
    let weight = (m - 1) as u64;
    for k in 1..=m {
        let mut c = Integer::from(&prev[k - 1]);
        if k < prev.len() {
            c += Integer::from(&prev[k] * weight);
        }
        row[k] = c;
    }
    row
}

// I(m, k) = Σ_{i<m} I(m-1, k-i), evaluated as a sliding window over the previous row.
fn next_inversion_row(prev: &[Integer], m: usize) -> Vec<Integer> {
    let len = Model::Inversions.k_max(m) + 1;
    let mut row = Vec::with_capacity(len);
    let mut window = Integer::new();
    for k in 0..len {
        if let Some(entering) = prev.get(k) {
            window += entering;
        }
        if k >= m {
            if let Some(leaving) = prev.get(k - m) {
                window -= leaving;
            }
        }
        row.push(window.clone());
    }
    row
}

/// All quicksort rows `0..=n` in integer form.
///
/// Each product `A_a·A_b` is formed by Kronecker substitution: a row is packed
/// into one big integer with fixed-width slots wide enough for `m!`, which
/// bounds every coefficient of every partial sum at step `m` since all
/// terms are nonnegative.
fn quicksort_rows(n: usize) -> Vec<Vec<Integer>> {
    let mut rows: Vec<Vec<Integer>> = vec![vec![Integer::from(1)]];
    let mut packed: Vec<Integer> = Vec::new();
    let mut packed_slot = 0usize;

    for m in 1..=n {
        let slot = slot_limbs(m);
        if slot != packed_slot {
            packed = rows.iter().map(|r| pack(r, slot)).collect();
            packed_slot = slot;
        }

        let mut acc = Integer::new();
        let mut binom = Integer::from(1); // binom(m-1, j-1)
        for j in 1..=m {
            let (a, b) = (m - j, j - 1);
            if a >= b {
                let mut term = Integer::from(&packed[a] * &packed[b]);
                if a == b {
                    term *= &binom;
                } else {
                    term *= Integer::from(&binom * 2u32);
                }
                acc += term;
            }
            binom *= (m - j) as u64;
            binom /= j as u64;
        }

        let body_len = Model::Quicksort.k_max(m - 1) + 1;
        let mut row = vec![Integer::new(); m - 1];
        row.extend(unpack(&acc, slot, body_len));
        debug_assert_eq!(row.len(), Model::Quicksort.k_max(m) + 1);
        rows.push(row);

        packed.push(pack(&rows[m], slot));
    }
    rows
}

fn slot_limbs(m: usize) -> usize {
    let bits = factorial(m).significant_bits() as usize + 1;
    bits.div_ceil(64)
}

fn pack(coeffs: &[Integer], slot: usize) -> Integer {
    let mut limbs = vec![0u64; coeffs.len() * slot];
    for (i, c) in coeffs.iter().enumerate() {
        let digits = c.to_digits::<u64>(Order::Lsf);
        debug_assert!(digits.len() <= slot);
        limbs[i * slot..i * slot + digits.len()].copy_from_slice(&digits);
    }
    Integer::from_digits(&limbs, Order::Lsf)
}

fn unpack(value: &Integer, slot: usize, len: usize) -> Vec<Integer> {
    let limbs = value.to_digits::<u64>(Order::Lsf);
    (0..len)
        .map(|i| {
            let start = (i * slot).min(limbs.len());
            let end = ((i + 1) * slot).min(limbs.len());
            Integer::from_digits(&limbs[start..end], Order::Lsf)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[u64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    // Plain-vector brute force over S_n, independent of the recurrences.
    fn permutations(n: usize) -> Vec<Vec<usize>> {
        fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
            if prefix.len() == used.len() {
                out.push(prefix.clone());
                return;
            }
            for v in 0..used.len() {
                if !used[v] {
                    used[v] = true;
                    prefix.push(v);
                    go(prefix, used, out);
                    prefix.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    fn brute_cycles(p: &[usize]) -> usize {
        let mut seen = vec![false; p.len()];
        let mut cycles = 0;
        for start in 0..p.len() {
            if !seen[start] {
                cycles += 1;
                let mut i = start;
                while !seen[i] {
                    seen[i] = true;
                    i = p[i];
                }
            }
        }
        cycles
    }

    fn brute_inversions(p: &[usize]) -> usize {
        let mut inv = 0;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    inv += 1;
                }
            }
        }
        inv
    }

    fn brute_first_pivot(p: &[usize]) -> usize {
        if p.len() < 2 {
            return 0;
        }
        let pivot = p[0];
        let lo: Vec<usize> = p[1..].iter().copied().filter(|&x| x < pivot).collect();
        let hi: Vec<usize> = p[1..].iter().copied().filter(|&x| x > pivot).collect();
        p.len() - 1 + brute_first_pivot(&lo) + brute_first_pivot(&hi)
    }

    fn histogram(model: Model, n: usize, cost: fn(&[usize]) -> usize) -> Vec<Integer> {
        let mut h = vec![Integer::new(); model.k_max(n) + 1];
        for p in permutations(n) {
            h[cost(&p)] += 1;
        }
        h
    }

    #[test]
    fn cycle_rows_match_known_values() {
        assert_eq!(cycle_counts(0).unwrap().counts(), &ints(&[1])[..]);
        assert_eq!(cycle_counts(3).unwrap().counts(), &ints(&[0, 2, 3, 1])[..]);
        assert_eq!(cycle_counts(4).unwrap().counts(), &ints(&[0, 6, 11, 6, 1])[..]);
    }

    #[test]
    fn inversion_rows_match_known_values() {
        assert_eq!(inversion_counts(1).unwrap().counts(), &ints(&[1])[..]);
        assert_eq!(inversion_counts(3).unwrap().counts(), &ints(&[1, 2, 2, 1])[..]);
        assert_eq!(inversion_counts(4).unwrap().count(3), 6);
    }

    #[test]
    fn quicksort_rows_match_known_values() {
        assert_eq!(quicksort_counts(0).unwrap().counts(), &ints(&[1])[..]);
        assert_eq!(quicksort_counts(1).unwrap().counts(), &ints(&[1])[..]);
        assert_eq!(quicksort_counts(2).unwrap().counts(), &ints(&[0, 2])[..]);
        assert_eq!(quicksort_counts(3).unwrap().counts(), &ints(&[0, 0, 2, 4])[..]);
        assert_eq!(quicksort_counts(4).unwrap().count(6), 8);
    }

    #[test]
    fn rows_equal_brute_force_histograms() {
        for n in 0..=7 {
            assert_eq!(
                cycle_counts(n).unwrap().counts(),
                &histogram(Model::Cycles, n, brute_cycles)[..],
                "cycles n={n}"
            );
            assert_eq!(
                inversion_counts(n).unwrap().counts(),
                &histogram(Model::Inversions, n, brute_inversions)[..],
                "inversions n={n}"
            );
            assert_eq!(
                quicksort_counts(n).unwrap().counts(),
                &histogram(Model::Quicksort, n, brute_first_pivot)[..],
                "quicksort n={n}"
            );
        }
    }

    #[test]
    fn tables_up_to_agree_with_single_rows() {
        for model in Model::ALL {
            let rows = tables_up_to(model, 12, &RowLimits::default()).unwrap();
            assert_eq!(rows.len(), 13);
            for (m, row) in rows.iter().enumerate() {
                assert_eq!(row.n(), m);
                assert_eq!(row, &table(model, m, &RowLimits::default()).unwrap());
                assert!(row.has_valid_total());
            }
        }
    }

    #[test]
    fn structural_invariants() {
        for n in 1..=30 {
            let c = cycle_counts(n).unwrap();
            assert_eq!(c.count(0), 0);
            assert_eq!(c.count(n), 1);
            assert_eq!(c.count(1), factorial(n - 1));

            let inv = inversion_counts(n).unwrap();
            let km = inv.k_max();
            for k in 0..=km {
                assert_eq!(inv.count(k), inv.count(km - k));
            }
        }
        for n in 1..=20 {
            let q = quicksort_counts(n).unwrap();
            assert_eq!(q.count(q.k_max()), Integer::from(1) << (n as u32 - 1));
        }
    }

    #[test]
    fn limit_is_enforced() {
        let limits = RowLimits::uniform(5);
        for model in Model::ALL {
            assert!(table(model, 5, &limits).is_ok());
            assert_eq!(
                table(model, 6, &limits),
                Err(Error::LimitExceeded { model, n: 6, limit: 5 })
            );
        }
        assert!(quicksort_counts(121).is_err());
    }

    #[test]
    fn row_limit_override_parsing() {
        assert_eq!(RowLimits::parse_override("42").unwrap(), RowLimits::uniform(42));
        let l = RowLimits::parse_override("quicksort=10, cycles=7").unwrap();
        assert_eq!(l.quicksort, 10);
        assert_eq!(l.cycles, 7);
        assert_eq!(l.inversions, RowLimits::default().inversions);
        assert!(RowLimits::parse_override("heapsort=3").is_err());
        assert!(RowLimits::parse_override("cycles=x").is_err());
    }

    #[test]
    fn from_counts_validates_length() {
        assert!(DistributionTable::from_counts(Model::Cycles, 2, ints(&[0, 1])).is_err());
        assert!(DistributionTable::from_counts(Model::Cycles, 2, ints(&[0, 1, 1])).is_ok());
    }
}
