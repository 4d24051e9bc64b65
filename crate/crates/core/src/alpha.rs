//! Per-subset proportion values.
//!
//! For a subset `L` the value is the largest share `||z_L||_1 / ||z||_1` over
//! nonzero null-space vectors `z`. It is computed with one LP per sign
//! pattern on `L`: maximize `sum s_i z_i` over `Az = 0`, `||z||_1 <= 1`,
//! with `z = z+ - z-`. Negating `z` maps pattern `s` to `-s`, so the first
//! sign is pinned to `+` and `2^(|L|-1)` LPs suffice.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::matrix::{IndexSet, SensingMatrix};
use crate::subsets::subset_chunks;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetScore {
    pub subset: IndexSet,
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

/// LP over `(z+, z-)` with the null-space rows and the l1 ball; objective unset.
pub(crate) fn null_space_lp(a: &SensingMatrix) -> LpProblem {
    let n = a.cols();
    let mut p = LpProblem::new(vec![0.0; 2 * n]);
    for i in 0..a.rows() {
        let row = a.row(i);
        let mut lhs = Vec::with_capacity(2 * n);
        lhs.extend_from_slice(row);
        lhs.extend(row.iter().map(|v| -v));
        p.add_eq(lhs, 0.0);
    }
    p.add_le(vec![1.0; 2 * n], 1.0);
    p
}

fn check_subset(a: &SensingMatrix, l: &IndexSet) -> Result<()> {
    if l.is_empty() {
        return Err(Error::InvalidArgument("subset must be nonempty".into()));
    }
    match l.max_index() {
        Some(mx) if mx >= a.cols() => Err(Error::IndexOutOfRange {
            index: mx,
            n: a.cols(),
        }),
        _ => Ok(()),
    }
}

/// Optimum of the LP for a single sign pattern, with its witness.
pub fn sign_pattern_value(
    a: &SensingMatrix,
    l: &IndexSet,
    signs: &[f64],
) -> Result<(f64, Vec<f64>)> {
    check_subset(a, l)?;
    if signs.len() != l.len() {
        return Err(Error::Dimension("one sign per subset index".into()));
    }
    let mut p = null_space_lp(a);
    pattern_lp(&mut p, a.cols(), l, signs)
}

fn pattern_lp(
    p: &mut LpProblem,
    n: usize,
    l: &IndexSet,
    signs: &[f64],
) -> Result<(f64, Vec<f64>)> {
    p.objective.iter_mut().for_each(|c| *c = 0.0);
    for (&i, &s) in l.as_slice().iter().zip(signs) {
        p.objective[i] = s;
        p.objective[n + i] = -s;
    }
    let sol = solve_lp(p)?;
    if sol.status != LpStatus::Optimal {
        // z = 0 is always feasible and the ball is bounded.
        return Err(Error::Lp(format!("sign-pattern LP ended {:?}", sol.status)));
    }
    let z: Vec<f64> = (0..n).map(|i| sol.primal[i] - sol.primal[n + i]).collect();
    Ok((sol.objective_value, z))
}

/// Proportion value of one subset, maximized over all sign patterns.
pub fn alpha_subset(a: &SensingMatrix, l: &IndexSet) -> Result<SubsetScore> {
    check_subset(a, l)?;
    let n = a.cols();
    let size = l.len();
    if size > 30 {
        return Err(Error::InvalidArgument(format!(
            "subset of size {size} needs 2^{} sign patterns",
            size - 1
        )));
    }
    let mut p = null_space_lp(a);
    let mut best = (f64::NEG_INFINITY, Vec::new());
    let mut signs = vec![1.0; size];
    for mask in 0u32..(1 << (size - 1)) {
        for (b, s) in signs.iter_mut().enumerate().skip(1) {
            *s = if mask >> (b - 1) & 1 == 1 { -1.0 } else { 1.0 };
        }
        let (v, z) = pattern_lp(&mut p, n, l, &signs)?;
        if v > best.0 {
            best = (v, z);
        }
    }
    Ok(SubsetScore {
        subset: l.clone(),
        value: best.0.clamp(0.0, 1.0),
        witness: Some(best.1),
    })
}

/// `min_y ||e_i - A'y||_inf`, which coincides with the value of `{i}`.
pub fn alpha_column_dual(a: &SensingMatrix, i: usize) -> Result<f64> {
    let (m, n) = (a.rows(), a.cols());
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    // Variables (y+, y-, t); maximize -t.
    let mut obj = vec![0.0; 2 * m + 1];
    obj[2 * m] = -1.0;
    let mut p = LpProblem::new(obj);
    for j in 0..n {
        let col = a.column(j);
        let delta = if j == i { 1.0 } else { 0.0 };
        let mut up = Vec::with_capacity(2 * m + 1);
        up.extend_from_slice(&col);
        up.extend(col.iter().map(|v| -v));
        up.push(-1.0);
        let down: Vec<f64> = up[..2 * m].iter().map(|v| -v).chain([-1.0]).collect();
        // (A'y)_j - t <= delta  and  -(A'y)_j - t <= -delta
        p.add_le(up, delta);
        p.add_le(down, -delta);
    }
    let sol = solve_lp(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(format!("column dual LP ended {:?}", sol.status)));
    }
    Ok(-sol.objective_value)
}

/// Values for every `l`-subset of the columns, in lexicographic subset order.
/// Work is spread over the rayon pool; the output order does not depend on it.
pub fn score_all_subsets(a: &SensingMatrix, l: usize, keep_witness: bool) -> Result<Vec<SubsetScore>> {
    let chunks = subset_chunks(a.cols(), l, 64)?;
    let parts: Vec<Result<Vec<SubsetScore>>> = chunks
        .into_par_iter()
        .map(|chunk| {
            chunk
                .map(|s| {
                    let mut sc = alpha_subset(a, &s)?;
                    if !keep_witness {
                        sc.witness = None;
                    }
                    Ok(sc)
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Single-column values, indexed by column.
pub fn column_scores(a: &SensingMatrix) -> Result<Vec<f64>> {
    Ok(score_all_subsets(a, 1, false)?
        .into_iter()
        .map(|s| s.value)
        .collect())
}
