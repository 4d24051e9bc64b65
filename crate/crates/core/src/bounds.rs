//! Polynomial-time bounds on `alpha_k` and the NSC verdict.
//!
//! All pick-l style bounds start from a [`ScoreTable`]: the values of every
//! `l`-subset of the columns. For a fixed `k`-subset `K`, averaging the
//! values of its `l`-subsets gives the cheap upper bound
//! `cub(K) = sum_{L in K} alpha_L / C(k-1, l-1)`, and taking the `C(k, l)`
//! largest values overall bounds every `K` at once.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::alpha::{score_all_subsets, SubsetScore};
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LpProblem, LpStatus};
use crate::matrix::{IndexSet, SensingMatrix};
use crate::subsets::{binomial, binomial_f64, enumerate_subsets, rank_of};

/// Default cap on the number of constraints of the optimized pick-l program.
pub const DEFAULT_CONSTRAINT_BUDGET: u128 = 2_000_000;
/// Dense tableau cells the optimized pick-l program may allocate.
pub const DEFAULT_TABLEAU_BUDGET: u128 = 150_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    PickL,
    OptimizedPickL,
    Cub,
    LpBaseline,
    Tsa,
    Esm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NscDecision {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub method: Method,
    pub k: usize,
    pub l: Option<usize>,
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
    /// The lower bound is attained by an explicit null-space vector.
    pub lower_witnessed: bool,
    pub lp_solves: u64,
    pub elapsed_secs: f64,
    pub nsc_decision: NscDecision,
}

impl BoundReport {
    /// Build a report; bounds are clamped to `[0, 1]` and the verdict derived.
    pub fn new(method: Method, k: usize, l: Option<usize>, lower: f64, upper: f64) -> Self {
        let mut r = Self {
            method,
            k,
            l,
            lower: lower.clamp(0.0, 1.0),
            upper: upper.clamp(0.0, 1.0),
            exact: false,
            lower_witnessed: false,
            lp_solves: 0,
            elapsed_secs: 0.0,
            nsc_decision: NscDecision::Inconclusive,
        };
        r.nsc_decision = nsc_certify(&r);
        r
    }

    /// Exact value: lower and upper coincide and the value is attained.
    pub fn exact(method: Method, k: usize, l: Option<usize>, value: f64) -> Self {
        let mut r = Self::new(method, k, l, value, value);
        r.exact = true;
        r.lower_witnessed = true;
        r.nsc_decision = nsc_certify(&r);
        r
    }

    pub fn with_cost(mut self, lp_solves: u64, elapsed: Duration) -> Self {
        self.lp_solves = lp_solves;
        self.elapsed_secs = elapsed.as_secs_f64();
        self
    }
}

/// `holds` iff the upper bound is below 1/2; `fails` iff an exact or
/// witnessed lower bound reaches 1/2.
pub fn nsc_certify(report: &BoundReport) -> NscDecision {
    if report.upper < 0.5 {
        NscDecision::Holds
    } else if report.lower >= 0.5 && (report.exact || report.lower_witnessed) {
        NscDecision::Fails
    } else {
        NscDecision::Inconclusive
    }
}

/// Values of every `l`-subset of `0..n`, stored in lexicographic order.
#[derive(Debug, Clone)]
pub struct ScoreTable {
    n: usize,
    l: usize,
    scores: Vec<SubsetScore>,
    lp_solves: u64,
    elapsed: Duration,
}

impl ScoreTable {
    pub fn compute(a: &SensingMatrix, l: usize) -> Result<Self> {
        let start = Instant::now();
        let scores = score_all_subsets(a, l, false)?;
        let lp_solves = scores.len() as u64 * (1u64 << (l - 1));
        Ok(Self {
            n: a.cols(),
            l,
            scores,
            lp_solves,
            elapsed: start.elapsed(),
        })
    }

    /// Accept precomputed scores in any order; every `l`-subset of `0..n`
    /// must appear exactly once.
    pub fn from_scores(n: usize, l: usize, mut scores: Vec<SubsetScore>) -> Result<Self> {
        scores.sort_by(|a, b| a.subset.cmp(&b.subset));
        let mut expected = enumerate_subsets(n, l)?;
        for s in &scores {
            match expected.next() {
                Some(e) if e == s.subset => {}
                Some(e) => return Err(Error::MissingScore(e.one_based())),
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "unexpected or duplicate subset {}",
                        s.subset
                    )))
                }
            }
        }
        if let Some(e) = expected.next() {
            return Err(Error::MissingScore(e.one_based()));
        }
        Ok(Self {
            n,
            l,
            scores,
            lp_solves: 0,
            elapsed: Duration::ZERO,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn scores(&self) -> &[SubsetScore] {
        &self.scores
    }

    pub fn lp_solves(&self) -> u64 {
        self.lp_solves
    }

    pub fn elapsed(&self) -> Duration {
        self.elapsed
    }

    pub fn value(&self, subset: &[usize]) -> Option<f64> {
        if subset.len() != self.l || subset.iter().any(|&i| i >= self.n) {
            return None;
        }
        let r = usize::try_from(rank_of(subset, self.n)).ok()?;
        self.scores.get(r).map(|s| s.value)
    }

    /// Largest value in the table.
    pub fn max_value(&self) -> f64 {
        self.scores.iter().map(|s| s.value).fold(0.0, f64::max)
    }

    /// Values sorted non-increasing.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.scores.iter().map(|s| s.value).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k < self.l || k > self.n {
            return Err(Error::InvalidArgument(format!(
                "need {} <= k <= {}, got k = {k}",
                self.l, self.n
            )));
        }
        Ok(())
    }
}

/// Sum of the `C(k,l)` largest values over `C(k-1,l-1)`, capped at 1.
pub fn pick_l_upper_bound(table: &ScoreTable, k: usize) -> Result<BoundReport> {
    table.check_k(k)?;
    let start = Instant::now();
    let l = table.l;
    let take = usize::try_from(binomial(k, l)).unwrap_or(usize::MAX);
    let sum: f64 = table.sorted_values().into_iter().take(take).sum();
    let upper = (sum / binomial_f64(k - 1, l - 1)).min(1.0);
    Ok(BoundReport::new(Method::PickL, k, Some(l), 0.0, upper)
        .with_cost(table.lp_solves, table.elapsed + start.elapsed()))
}

/// Same bound as [`pick_l_upper_bound`], obtained from the LP over
/// coefficients `0 <= gamma_i <= 1/C(k-1,l-1)`, `sum gamma <= k/l`.
pub fn pick_l_upper_bound_lp(table: &ScoreTable, k: usize) -> Result<BoundReport> {
    table.check_k(k)?;
    let start = Instant::now();
    let l = table.l;
    let vals: Vec<f64> = table.scores.iter().map(|s| s.value).collect();
    let cap = 1.0 / binomial_f64(k - 1, l - 1);
    let count = vals.len();
    let mut p = LpProblem::new(vals);
    p.add_le(vec![1.0; count], k as f64 / l as f64)
        .with_upper_bounds(vec![cap; count]);
    let sol = solve_lp(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(format!("pick-l LP ended {:?}", sol.status)));
    }
    Ok(
        BoundReport::new(Method::PickL, k, Some(l), 0.0, sol.objective_value.min(1.0))
            .with_cost(table.lp_solves + 1, table.elapsed + start.elapsed()),
    )
}

/// Cheap upper bound on the value of one `k`-subset from its `l`-subsets.
pub fn cub(table: &ScoreTable, k_set: &IndexSet) -> Result<f64> {
    let k = k_set.len();
    let l = table.l;
    if k < l {
        return Err(Error::InvalidArgument(format!(
            "subset of size {k} is smaller than l = {l}"
        )));
    }
    let members = k_set.as_slice();
    let mut sum = 0.0;
    for pos in enumerate_subsets(k, l)? {
        let sub: Vec<usize> = pos.as_slice().iter().map(|&p| members[p]).collect();
        sum += table
            .value(&sub)
            .ok_or_else(|| Error::MissingScore(sub.iter().map(|i| i + 1).collect()))?;
    }
    Ok(sum / binomial_f64(k - 1, l - 1))
}

/// Size of the optimized pick-l program: (constraints, tableau rows, variables).
pub fn gamma_program_size(n: usize, l: usize) -> (u128, u128, u128) {
    let vars = binomial(n, l);
    let below: u128 = (1..l).map(|b| binomial(n, b)).sum();
    // constraints include the per-variable caps (b = l) and the total.
    let constraints = below.saturating_add(vars).saturating_add(1);
    (constraints, below + 1, vars)
}

/// Optimized pick-l: maximize `sum gamma_i alpha_i` subject to
/// `sum gamma <= k/l` and, for every `b`-subset `B` with `1 <= b <= l`,
/// `sum_{L_i contains B} gamma_i <= C(k-b, l-b)/C(k-1, l-1)`.
/// The `b = l` family is carried as variable upper bounds.
pub fn optimized_pick_l(
    table: &ScoreTable,
    k: usize,
    constraint_budget: u128,
) -> Result<BoundReport> {
    table.check_k(k)?;
    let start = Instant::now();
    let (n, l) = (table.n, table.l);
    let (constraints, rows, vars) = gamma_program_size(n, l);
    if constraints > constraint_budget {
        return Err(Error::BudgetExceeded {
            what: "optimized pick-l constraints",
            required: constraints,
            budget: constraint_budget,
        });
    }
    let cells = rows.saturating_mul(vars.saturating_add(rows));
    if cells > DEFAULT_TABLEAU_BUDGET {
        return Err(Error::BudgetExceeded {
            what: "optimized pick-l tableau cells",
            required: cells,
            budget: DEFAULT_TABLEAU_BUDGET,
        });
    }
    let vars = vars as usize;
    let denom = binomial_f64(k - 1, l - 1);

    // Row index of each b-subset B (b < l): offset of its size block + rank.
    let mut offsets = vec![0usize; l];
    for b in 1..l {
        offsets[b] = if b == 1 { 0 } else { offsets[b - 1] + binomial(n, b - 1) as usize };
    }
    let n_rows = rows as usize - 1;
    let mut family = vec![vec![0.0; vars]; n_rows];
    for (i, score) in table.scores.iter().enumerate() {
        let members = score.subset.as_slice();
        for b in 1..l {
            for pos in enumerate_subsets(l, b)? {
                let sub: Vec<usize> = pos.as_slice().iter().map(|&p| members[p]).collect();
                let row = offsets[b] + rank_of(&sub, n) as usize;
                family[row][i] = 1.0;
            }
        }
    }

    let mut p = LpProblem::new(table.scores.iter().map(|s| s.value).collect());
    p.add_le(vec![1.0; vars], k as f64 / l as f64);
    for b in 1..l {
        let rhs = binomial_f64(k - b, l - b) / denom;
        for row in family.drain(..binomial(n, b) as usize) {
            p.add_le(row, rhs);
        }
    }
    p.with_upper_bounds(vec![1.0 / denom; vars]);
    let sol = solve_lp(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(format!("optimized pick-l LP ended {:?}", sol.status)));
    }
    Ok(BoundReport::new(
        Method::OptimizedPickL,
        k,
        Some(l),
        0.0,
        sol.objective_value.min(1.0),
    )
    .with_cost(table.lp_solves + 1, table.elapsed + start.elapsed()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct KmaxBound {
    pub k: usize,
    /// The input was 0: the null space is trivial and every sparsity up to
    /// `n` is recoverable.
    pub trivial_null_space: bool,
}

/// Recoverable sparsity implied by (an upper bound on) `alpha_l`:
/// the largest `k` with `alpha_l * k / l < 1/2`, i.e. `ceil(l/(2 alpha_l)) - 1`,
/// capped at `n`.
pub fn kmax_lower_bound(alpha_l: f64, l: usize, n: usize) -> Result<KmaxBound> {
    if !(0.0..=1.0).contains(&alpha_l) || l == 0 {
        return Err(Error::InvalidArgument(format!(
            "need 0 <= alpha_l <= 1 and l >= 1, got alpha_l = {alpha_l}, l = {l}"
        )));
    }
    if alpha_l == 0.0 {
        return Ok(KmaxBound {
            k: n,
            trivial_null_space: true,
        });
    }
    let x = l as f64 * 0.5 / alpha_l;
    let mut k = (x.ceil() as usize).saturating_sub(1);
    // Guard the strict inequality against rounding in the division.
    while k > 0 && alpha_l * k as f64 / l as f64 >= 0.5 {
        k -= 1;
    }
    Ok(KmaxBound {
        k: k.min(n),
        trivial_null_space: false,
    })
}

/// Sum of the `k` largest magnitudes.
pub fn norm_k1(x: &[f64], k: usize) -> f64 {
    let mut mags: Vec<f64> = x.iter().map(|v| v.abs()).collect();
    mags.sort_by(|a, b| b.total_cmp(a));
    mags.into_iter().take(k).sum()
}

/// Solution of the LP-relaxation baseline.
#[derive(Debug, Clone)]
pub struct LpBaseline {
    pub report: BoundReport,
    /// Optimal `Y`, row-major `m x n`.
    pub y: Vec<f64>,
}

/// Upper bound `min_Y max_j ||(I - Y'A) e_j||_{k,1}`.
///
/// Entry `(i, j)` of `I - Y'A` is `delta_ij - y_i . a_j`; each column norm is
/// bounded through the epigraph `k lambda_j + sum_i u_ij <= t` with
/// `u_ij >= |x_ij| - lambda_j`, `u, lambda >= 0`.
pub fn lp_baseline_alpha(a: &SensingMatrix, k: usize) -> Result<LpBaseline> {
    let (m, n) = (a.rows(), a.cols());
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("need 1 <= k <= {n}, got {k}")));
    }
    let start = Instant::now();
    // Layout: Y+ (m*n), Y- (m*n), lambda (n), u (n*n), t.
    let y_pos = |r: usize, i: usize| r * n + i;
    let y_neg = |r: usize, i: usize| m * n + r * n + i;
    let lam = |j: usize| 2 * m * n + j;
    let u = |i: usize, j: usize| 2 * m * n + n + i * n + j;
    let t = 2 * m * n + n + n * n;
    let nv = t + 1;

    let mut obj = vec![0.0; nv];
    obj[t] = -1.0;
    let mut p = LpProblem::new(obj);
    for j in 0..n {
        for i in 0..n {
            let delta = if i == j { 1.0 } else { 0.0 };
            //  x_ij - lambda_j - u_ij <= 0
            let mut plus = vec![0.0; nv];
            // -x_ij - lambda_j - u_ij <= 0
            let mut minus = vec![0.0; nv];
            for r in 0..m {
                let arj = a.get(r, j);
                plus[y_pos(r, i)] = -arj;
                plus[y_neg(r, i)] = arj;
                minus[y_pos(r, i)] = arj;
                minus[y_neg(r, i)] = -arj;
            }
            for row in [&mut plus, &mut minus] {
                row[lam(j)] = -1.0;
                row[u(i, j)] = -1.0;
            }
            p.add_le(plus, -delta);
            p.add_le(minus, delta);
        }
        let mut epi = vec![0.0; nv];
        epi[lam(j)] = k as f64;
        for i in 0..n {
            epi[u(i, j)] = 1.0;
        }
        epi[t] = -1.0;
        p.add_le(epi, 0.0);
    }
    let sol = solve_lp(&p)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::Lp(format!("LP baseline ended {:?}", sol.status)));
    }
    let y = (0..m * n)
        .map(|idx| sol.primal[idx] - sol.primal[m * n + idx])
        .collect();
    let report = BoundReport::new(Method::LpBaseline, k, None, 0.0, -sol.objective_value)
        .with_cost(1, start.elapsed());
    Ok(LpBaseline { report, y })
}

/// Objective of the baseline at a given `Y` (row-major `m x n`).
pub fn lp_baseline_objective(a: &SensingMatrix, y: &[f64], k: usize) -> f64 {
    let (m, n) = (a.rows(), a.cols());
    (0..n)
        .map(|j| {
            let col: Vec<f64> = (0..n)
                .map(|i| {
                    let dot: f64 = (0..m).map(|r| y[r * n + i] * a.get(r, j)).sum();
                    (if i == j { 1.0 } else { 0.0 }) - dot
                })
                .collect();
            norm_k1(&col, k)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::alpha_subset;
    use crate::matrix::gen_gaussian;

    fn ones() -> SensingMatrix {
        SensingMatrix::from_rows(&[vec![1.0, 1.0, 1.0]]).unwrap()
    }

    fn uniform_table(n: usize, l: usize, c: f64) -> ScoreTable {
        let scores = enumerate_subsets(n, l)
            .unwrap()
            .map(|s| SubsetScore {
                subset: s,
                value: c,
                witness: None,
            })
            .collect();
        ScoreTable::from_scores(n, l, scores).unwrap()
    }

    #[test]
    fn pick1_on_ones_row_is_capped() {
        let t = ScoreTable::compute(&ones(), 1).unwrap();
        let r = pick_l_upper_bound(&t, 2).unwrap();
        assert_eq!(r.upper, 1.0);
        assert_eq!(r.lower, 0.0);
        assert_eq!(r.nsc_decision, NscDecision::Inconclusive);
        let k1 = pick_l_upper_bound(&t, 1).unwrap();
        assert!((k1.upper - 0.5).abs() < 1e-12);
    }

    #[test]
    fn pick2_coefficient() {
        // Ten largest of C(6,2)=15 scores, divided by C(4,1) = 4.
        let scores: Vec<SubsetScore> = enumerate_subsets(6, 2)
            .unwrap()
            .enumerate()
            .map(|(i, s)| SubsetScore {
                subset: s,
                value: 0.01 * (i + 1) as f64,
                witness: None,
            })
            .collect();
        let t = ScoreTable::from_scores(6, 2, scores).unwrap();
        let expected: f64 = (6..=15).map(|i| 0.01 * i as f64).sum::<f64>() / 4.0;
        let r = pick_l_upper_bound(&t, 5).unwrap();
        assert!((r.upper - expected).abs() < 1e-12);
        let lp = pick_l_upper_bound_lp(&t, 5).unwrap();
        assert!((lp.upper - expected).abs() < 1e-9);
    }

    #[test]
    fn uniform_scores_and_l_equals_k() {
        let t = uniform_table(8, 2, 0.1);
        for k in 2..=8 {
            let want = (0.1 * k as f64 / 2.0).min(1.0);
            assert!((pick_l_upper_bound(&t, k).unwrap().upper - want).abs() < 1e-12);
            assert!((pick_l_upper_bound_lp(&t, k).unwrap().upper - want).abs() < 1e-9);
        }
        let a = gen_gaussian(4, 7, 3).unwrap();
        let t = ScoreTable::compute(&a, 2).unwrap();
        let r = pick_l_upper_bound(&t, 2).unwrap();
        assert!((r.upper - t.max_value()).abs() < 1e-12);
    }

    #[test]
    fn incomplete_tables_are_rejected() {
        let mut scores: Vec<SubsetScore> = enumerate_subsets(5, 2)
            .unwrap()
            .map(|s| SubsetScore {
                subset: s,
                value: 0.2,
                witness: None,
            })
            .collect();
        scores.remove(3);
        assert!(matches!(
            ScoreTable::from_scores(5, 2, scores.clone()),
            Err(Error::MissingScore(_))
        ));
        scores.push(scores[0].clone());
        assert!(ScoreTable::from_scores(5, 2, scores).is_err());
        let t = uniform_table(5, 2, 0.2);
        assert!(pick_l_upper_bound(&t, 1).is_err());
        assert!(pick_l_upper_bound(&t, 6).is_err());
    }

    #[test]
    fn cub_cases() {
        let t = ScoreTable::compute(&ones(), 1).unwrap();
        let k = IndexSet::from_sorted(vec![0, 1]);
        assert!((cub(&t, &k).unwrap() - 1.0).abs() < 1e-12);

        let a = gen_gaussian(5, 8, 4).unwrap();
        let t2 = ScoreTable::compute(&a, 2).unwrap();
        let k = IndexSet::from_sorted(vec![1, 6]);
        assert_eq!(cub(&t2, &k).unwrap(), t2.value(&[1, 6]).unwrap());
        assert!(cub(&t2, &IndexSet::from_sorted(vec![1])).is_err());
        assert!(cub(&t2, &IndexSet::from_sorted(vec![1, 9])).is_err());
    }

    #[test]
    fn optimized_l1_equals_basic() {
        let a = gen_gaussian(5, 10, 9).unwrap();
        let t = ScoreTable::compute(&a, 1).unwrap();
        for k in 1..=5 {
            let basic = pick_l_upper_bound(&t, k).unwrap().upper;
            let opt = optimized_pick_l(&t, k, DEFAULT_CONSTRAINT_BUDGET).unwrap().upper;
            assert!((basic - opt).abs() < 1e-9, "k={k}: {basic} vs {opt}");
        }
    }

    #[test]
    fn optimized_budget_guard() {
        let t = uniform_table(12, 3, 0.1);
        let err = optimized_pick_l(&t, 4, 100).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }

    #[test]
    fn kmax_values() {
        assert_eq!(kmax_lower_bound(0.28, 1, 40).unwrap().k, 1);
        assert_eq!(kmax_lower_bound(0.45, 2, 40).unwrap().k, 2);
        assert_eq!(kmax_lower_bound(0.5, 1, 40).unwrap().k, 0);
        assert_eq!(kmax_lower_bound(0.25, 1, 40).unwrap().k, 1);
        assert_eq!(kmax_lower_bound(0.1, 1, 3).unwrap().k, 3);
        let z = kmax_lower_bound(0.0, 2, 17).unwrap();
        assert!(z.trivial_null_space && z.k == 17);
        assert!(kmax_lower_bound(-0.1, 1, 4).is_err());
    }

    #[test]
    fn certify_rules() {
        let r = BoundReport::new(Method::Tsa, 3, Some(1), 0.45, 0.47);
        assert_eq!(r.nsc_decision, NscDecision::Holds);
        let r = BoundReport::exact(Method::Esm, 3, None, 0.52);
        assert_eq!(r.nsc_decision, NscDecision::Fails);
        let r = BoundReport::new(Method::Tsa, 3, Some(1), 0.45, 0.55);
        assert_eq!(r.nsc_decision, NscDecision::Inconclusive);
        // A lower bound without a witness never fails the condition.
        let r = BoundReport::new(Method::Tsa, 3, Some(1), 0.52, 0.55);
        assert_eq!(r.nsc_decision, NscDecision::Inconclusive);
    }

    #[test]
    fn norm_k1_basics() {
        assert_eq!(norm_k1(&[1.0, -3.0, 2.0], 2), 5.0);
        assert_eq!(norm_k1(&[1.0, -3.0, 2.0], 5), 6.0);
    }

    /// Same program with the (k,1)-norm written out as one constraint per
    /// k-subset of rows: sum_{i in S} |x_ij| <= t.
    fn baseline_by_subsets(a: &SensingMatrix, k: usize) -> f64 {
        let (m, n) = (a.rows(), a.cols());
        // Y+ , Y-, w (|x_ij| epigraph, n*n), t
        let nv = 2 * m * n + n * n + 1;
        let t = nv - 1;
        let mut obj = vec![0.0; nv];
        obj[t] = -1.0;
        let mut p = LpProblem::new(obj);
        for j in 0..n {
            for i in 0..n {
                let delta = if i == j { 1.0 } else { 0.0 };
                let w = 2 * m * n + i * n + j;
                let mut plus = vec![0.0; nv];
                let mut minus = vec![0.0; nv];
                for r in 0..m {
                    plus[r * n + i] = -a.get(r, j);
                    plus[m * n + r * n + i] = a.get(r, j);
                    minus[r * n + i] = a.get(r, j);
                    minus[m * n + r * n + i] = -a.get(r, j);
                }
                plus[w] = -1.0;
                minus[w] = -1.0;
                p.add_le(plus, -delta);
                p.add_le(minus, delta);
            }
            for s in enumerate_subsets(n, k).unwrap() {
                let mut row = vec![0.0; nv];
                for &i in s.as_slice() {
                    row[2 * m * n + i * n + j] = 1.0;
                }
                row[t] = -1.0;
                p.add_le(row, 0.0);
            }
        }
        -solve_lp(&p).unwrap().objective_value
    }

    #[test]
    fn baseline_matches_subset_formulation() {
        let a = gen_gaussian(2, 5, 21).unwrap();
        for k in 1..=3 {
            let fast = lp_baseline_alpha(&a, k).unwrap();
            let slow = baseline_by_subsets(&a, k);
            assert!((fast.report.upper - slow).abs() < 1e-7, "k={k}");
            let direct = lp_baseline_objective(&a, &fast.y, k);
            assert!((direct - fast.report.upper).abs() < 1e-7);
        }
    }

    #[test]
    fn baseline_k1_is_max_column_value() {
        let a = gen_gaussian(3, 7, 2).unwrap();
        let b = lp_baseline_alpha(&a, 1).unwrap().report.upper;
        let best = (0..7)
            .map(|i| alpha_subset(&a, &IndexSet::from_sorted(vec![i])).unwrap().value)
            .fold(0.0, f64::max);
        assert!((b - best).abs() < 1e-6);
    }
}
