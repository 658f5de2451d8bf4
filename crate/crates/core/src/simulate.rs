//! Monte Carlo estimates of factorial moments under uniform random inputs.
//!
//! Trial `i` draws from its own ChaCha8 stream: the generator is seeded with
//! `seed` via `SeedableRng::seed_from_u64` and switched to stream `i`. Trials
//! can therefore run on any number of threads while the per-trial values, and
//! the sequential reduction over them in trial order, stay bit-identical.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;

use crate::error::{Error, Result};
use crate::exact::Model;

/// A bijection on `{1..n}` in one-line notation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn new(mapping: Vec<u32>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            let idx = (v as usize).wrapping_sub(1);
            if idx >= n || seen[idx] {
                return Err(Error::InvalidArgument(format!("not a permutation of 1..{n}")));
            }
            seen[idx] = true;
        }
        Ok(Permutation(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((1..=n as u32).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

/// Empirical counterpart of `β_s(n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentEstimate {
    pub s: u32,
    pub n: usize,
    pub trials: u64,
    pub mean: f64,
    pub stderr: f64,
    pub seed: u64,
}

/// RNG for trial `trial` of the run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Uniform permutation of `{1..n}` by Fisher–Yates.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Permutation {
    let mut v: Vec<u32> = (1..=n as u32).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i as u64) as usize;
        v.swap(i, j);
    }
    Permutation(v)
}

pub fn count_cycles(p: &Permutation) -> usize {
    let map = p.as_slice();
    let mut seen = vec![false; map.len()];
    let mut cycles = 0;
    for start in 0..map.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = map[i] as usize - 1;
        }
    }
    cycles
}

/// Inversions counted during a bottom-up merge sort.
pub fn count_inversions(p: &Permutation) -> u64 {
    let mut a = p.as_slice().to_vec();
    let mut buf = vec![0u32; a.len()];
    let n = a.len();
    let mut inversions = 0u64;
    let mut width = 1;
    while width < n {
        for lo in (0..n).step_by(2 * width) {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut i, mut j, mut k) = (lo, mid, lo);
            while i < mid && j < hi {
                if a[i] <= a[j] {
                    buf[k] = a[i];
                    i += 1;
                } else {
                    buf[k] = a[j];
                    inversions += (mid - i) as u64;
                    j += 1;
                }
                k += 1;
            }
            buf[k..k + mid - i].copy_from_slice(&a[i..mid]);
            k += mid - i;
            buf[k..k + hi - j].copy_from_slice(&a[j..hi]);
        }
        std::mem::swap(&mut a, &mut buf);
        width *= 2;
    }
    inversions
}

/// Comparisons made by randomized quicksort on `n` distinct keys: each
/// partition of `m` keys costs `m - 1` and splits at a uniform pivot rank.
pub fn quicksort_comparisons<R: Rng + ?Sized>(n: usize, rng: &mut R) -> u64 {
    let mut total = 0u64;
    let mut pending = vec![n];
    while let Some(m) = pending.pop() {
        if m < 2 {
            continue;
        }
        total += (m - 1) as u64;
        let rank = rng.gen_range(1..=m as u64) as usize;
        pending.push(rank - 1);
        pending.push(m - rank);
    }
    total
}

/// Array-based quicksort with the first element as pivot and a stable
/// partition, returning the number of key comparisons.
pub fn first_pivot_quicksort(p: &Permutation) -> u64 {
    fn sort(keys: &[u32]) -> u64 {
        let Some((&pivot, rest)) = keys.split_first() else {
            return 0;
        };
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for &k in rest {
            if k < pivot {
                lo.push(k);
            } else {
                hi.push(k);
            }
        }
        rest.len() as u64 + sort(&lo) + sort(&hi)
    }
    sort(p.as_slice())
}

/// Exact distribution of randomized quicksort comparisons, found by walking
/// every sequence of pivot choices and weighting it by its probability.
pub fn enumerate_pivot_histories(n: usize) -> BTreeMap<u64, Rational> {
    fn walk(pending: &mut Vec<usize>, cost: u64, weight: &Rational, out: &mut BTreeMap<u64, Rational>) {
        let Some(m) = pending.pop() else {
            *out.entry(cost).or_default() += weight;
            return;
        };
        if m < 2 {
            walk(pending, cost, weight, out);
        } else {
            let w = Rational::from(weight / m as u32);
            for rank in 1..=m {
                let depth = pending.len();
                pending.push(rank - 1);
                pending.push(m - rank);
                walk(pending, cost + (m - 1) as u64, &w, out);
                pending.truncate(depth);
            }
        }
        pending.push(m);
    }
    let mut out = BTreeMap::new();
    walk(&mut vec![n], 0, &Rational::from(1), &mut out);
    out
}

/// Cost of one random input under `model`.
pub fn sample_cost<R: Rng + ?Sized>(model: Model, n: usize, rng: &mut R) -> u64 {
    match model {
        Model::Cycles => count_cycles(&random_permutation(n, rng)) as u64,
        Model::Inversions => count_inversions(&random_permutation(n, rng)),
        Model::Quicksort => quicksort_comparisons(n, rng),
    }
}

/// `(x)_s` as a double, exact while it fits in 53 bits.
fn falling_factorial_f64(x: u64, s: u32) -> f64 {
    if u64::from(s) > x {
        return 0.0;
    }
    let mut acc: u128 = 1;
    for i in 0..u64::from(s) {
        match acc.checked_mul(u128::from(x - i)) {
            Some(v) => acc = v,
            None => {
                let mut f = acc as f64;
                for j in i..u64::from(s) {
                    f *= (x - j) as f64;
                }
                return f;
            }
        }
    }
    acc as f64
}

const BLOCK: u64 = 1 << 14;

pub fn estimate_factorial_moment(model: Model, n: usize, s: u32, trials: u64, seed: u64) -> Result<MomentEstimate> {
    estimate_factorial_moment_threads(model, n, s, trials, seed, 1)
}

/// Parallel estimate over `threads` workers (0 = rayon's default); the result
/// does not depend on the thread count.
pub fn estimate_factorial_moment_threads(
    model: Model,
    n: usize,
    s: u32,
    trials: u64,
    seed: u64,
    threads: usize,
) -> Result<MomentEstimate> {
    if trials < 2 {
        return Err(Error::InvalidArgument("need at least 2 trials".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;

    // Welford's update, applied in trial order.
    let (mut count, mut mean, mut m2) = (0u64, 0f64, 0f64);
    let mut start = 0;
    while start < trials {
        let end = (start + BLOCK).min(trials);
        let values: Vec<f64> = pool.install(|| {
            (start..end)
                .into_par_iter()
                .map(|t| falling_factorial_f64(sample_cost(model, n, &mut trial_rng(seed, t)), s))
                .collect()
        });
        for x in values {
            count += 1;
            let delta = x - mean;
            mean += delta / count as f64;
            m2 += delta * (x - mean);
        }
        start = end;
    }
    let variance = m2 / (count - 1) as f64;
    Ok(MomentEstimate {
        s,
        n,
        trials,
        mean,
        stderr: (variance / count as f64).sqrt(),
        seed,
    })
}
