//! Exhaustive search over all `k`-subsets: the reference value of `alpha_k`.

use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rayon::prelude::*;

use crate::alpha::alpha_subset;
use crate::bounds::{BoundReport, Method};
use crate::error::{Error, Result};
use crate::matrix::{seeded_rng, IndexSet, SensingMatrix};
use crate::subsets::{binomial, subset_chunks};

pub const DEFAULT_ESM_BUDGET: u128 = 10_000_000;

type Best = Option<(f64, IndexSet, Vec<f64>)>;

#[derive(Debug, Clone)]
pub struct EsmResult {
    pub report: BoundReport,
    /// Lexicographically smallest maximizing subset.
    pub argmax: IndexSet,
    pub witness: Vec<f64>,
}

pub fn esm_alpha(a: &SensingMatrix, k: usize, budget: Option<u128>) -> Result<EsmResult> {
    let n = a.cols();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= {n}, got {k}")));
    }
    let total = binomial(n, k);
    let budget = budget.unwrap_or(DEFAULT_ESM_BUDGET);
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "exhaustive search subsets",
            required: total,
            budget,
        });
    }
    let start = Instant::now();
    let chunk = (total / (8 * rayon::current_num_threads() as u128)).clamp(1, 4096);
    let partial: Vec<Result<Best>> = subset_chunks(n, k, chunk)?
        .into_par_iter()
        .map(|iter| {
            let mut best: Best = None;
            for s in iter {
                let sc = alpha_subset(a, &s)?;
                if best.as_ref().is_none_or(|b| sc.value > b.0) {
                    best = Some((sc.value, sc.subset, sc.witness.unwrap_or_default()));
                }
            }
            Ok(best)
        })
        .collect();
    // Chunks are in lexicographic order, so a strict comparison keeps the
    // smallest maximizer regardless of scheduling.
    let mut best: Best = None;
    for p in partial {
        if let Some(c) = p? {
            if best.as_ref().is_none_or(|b| c.0 > b.0) {
                best = Some(c);
            }
        }
    }
    let (value, argmax, witness) = best.expect("at least one subset");
    let lp_solves = (total as u64).saturating_mul(1u64 << (k - 1).min(63));
    Ok(EsmResult {
        report: BoundReport::exact(Method::Esm, k, None, value).with_cost(lp_solves, start.elapsed()),
        argmax,
        witness,
    })
}

/// Extrapolated cost of an exhaustive run: mean time of `sample_size`
/// randomly drawn subset evaluations times the number of subsets.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EsmEstimate {
    pub subsets: u128,
    pub lp_solves: u128,
    pub seconds_per_subset: f64,
    pub estimated_seconds: f64,
}

pub fn estimate_esm_cost(a: &SensingMatrix, k: usize, sample_size: usize, seed: u64) -> Result<EsmEstimate> {
    let n = a.cols();
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= {n}, got {k}")));
    }
    let subsets = binomial(n, k);
    let mut rng = seeded_rng(seed);
    let sample_size = sample_size.max(1);
    let mut spent = Duration::ZERO;
    for _ in 0..sample_size {
        let idx = sample(&mut rng, n, k).into_vec();
        let s = IndexSet::new(idx, n)?;
        let t = Instant::now();
        alpha_subset(a, &s)?;
        spent += t.elapsed();
    }
    let per = spent.as_secs_f64() / sample_size as f64;
    Ok(EsmEstimate {
        subsets,
        lp_solves: subsets.saturating_mul(1u128 << (k - 1).min(100)),
        seconds_per_subset: per,
        estimated_seconds: per * subsets as f64,
    })
}
