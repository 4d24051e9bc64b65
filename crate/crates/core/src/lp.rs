//! Dense two-phase primal simplex.
//!
//! Problems are stated as
//!
//! ```text
//! maximize    c'x
//! subject to  A_eq x  = b_eq
//!             A_le x <= b_le
//!             0 <= x <= u        (u defaults to +inf)
//! ```
//!
//! The solver keeps a full tableau, which is adequate for the few-thousand
//! variable programs that show up in certification. Pricing is Dantzig's
//! largest reduced cost, falling back to Bland's smallest-index rule once a
//! run of degenerate pivots is detected; Bland stays in effect until the
//! objective moves again, so the method cannot cycle. Everything is a pure
//! function of the input: identical problems give identical solutions.

use crate::error::{Error, Result};

/// Primal feasibility tolerance.
pub const FEAS_TOL: f64 = 1e-9;
/// Reduced-cost optimality tolerance.
pub const OPT_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STREAK: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct LpProblem {
    pub num_vars: usize,
    /// Maximized.
    pub objective: Vec<f64>,
    pub eq_lhs: Vec<Vec<f64>>,
    pub eq_rhs: Vec<f64>,
    pub le_lhs: Vec<Vec<f64>>,
    pub le_rhs: Vec<f64>,
    /// Per-variable upper bounds; `None` means every variable is unbounded above.
    pub upper: Option<Vec<f64>>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            num_vars: objective.len(),
            objective,
            eq_lhs: Vec::new(),
            eq_rhs: Vec::new(),
            le_lhs: Vec::new(),
            le_rhs: Vec::new(),
            upper: None,
        }
    }

    pub fn add_eq(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.eq_lhs.push(row);
        self.eq_rhs.push(rhs);
        self
    }

    pub fn add_le(&mut self, row: Vec<f64>, rhs: f64) -> &mut Self {
        self.le_lhs.push(row);
        self.le_rhs.push(rhs);
        self
    }

    pub fn with_upper_bounds(&mut self, upper: Vec<f64>) -> &mut Self {
        self.upper = Some(upper);
        self
    }

    pub fn num_rows(&self) -> usize {
        self.eq_lhs.len() + self.le_lhs.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars;
        if self.objective.len() != n {
            return Err(Error::Dimension(format!(
                "objective has {} entries, expected {n}",
                self.objective.len()
            )));
        }
        if self.eq_lhs.len() != self.eq_rhs.len() || self.le_lhs.len() != self.le_rhs.len() {
            return Err(Error::Dimension("row count and rhs length differ".into()));
        }
        for (kind, rows) in [("eq", &self.eq_lhs), ("le", &self.le_lhs)] {
            for (i, row) in rows.iter().enumerate() {
                if row.len() != n {
                    return Err(Error::Dimension(format!(
                        "{kind} row {i} has {} entries, expected {n}",
                        row.len()
                    )));
                }
                if row.iter().any(|v| !v.is_finite()) {
                    return Err(Error::NonFinite(format!("{kind} row {i}")));
                }
            }
        }
        if self.objective.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("objective".into()));
        }
        if self.eq_rhs.iter().chain(&self.le_rhs).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("right-hand side".into()));
        }
        if let Some(u) = &self.upper {
            if u.len() != n {
                return Err(Error::Dimension(format!(
                    "upper bounds have {} entries, expected {n}",
                    u.len()
                )));
            }
            if u.iter().any(|v| v.is_nan() || *v < 0.0 || *v == f64::NEG_INFINITY) {
                return Err(Error::InvalidArgument(
                    "upper bounds must be nonnegative or +inf".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Meaningful only when `status` is optimal.
    pub objective_value: f64,
    pub primal: Vec<f64>,
    /// Row multipliers from the final basis, equality rows first, then the
    /// inequality rows. Empty unless optimal.
    pub dual: Vec<f64>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

pub fn solve_lp(p: &LpProblem) -> Result<LpSolution> {
    p.validate()?;
    let mut tab = Tableau::build(p);
    tab.run()
}

enum Outcome {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: usize,
    cols: usize,
    n_struct: usize,
    n_slack: usize,
    /// Row-major `rows x cols`, holds `B^-1 A`.
    t: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    upper: Vec<f64>,
    at_upper: Vec<bool>,
    in_basis: Vec<bool>,
    d: Vec<f64>,
    cost: Vec<f64>,
    may_enter: Vec<bool>,
    /// Column that started as the unit vector of each row.
    unit_col: Vec<usize>,
    /// +1 or -1: the factor each original row was multiplied by.
    row_sign: Vec<f64>,
    objective: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
}

impl Tableau {
    fn build(p: &LpProblem) -> Self {
        let n = p.num_vars;
        let n_eq = p.eq_lhs.len();
        let n_le = p.le_lhs.len();
        let rows = n_eq + n_le;

        let needs_art: Vec<bool> = (0..rows)
            .map(|i| i < n_eq || p.le_rhs[i - n_eq] < 0.0)
            .collect();
        let n_art = needs_art.iter().filter(|&&b| b).count();
        let cols = n + n_le + n_art;

        let mut t = vec![0.0; rows * cols];
        let mut beta = vec![0.0; rows];
        let mut basis = vec![0; rows];
        let mut unit_col = vec![0; rows];
        let mut row_sign = vec![1.0; rows];
        let mut next_art = n + n_le;
        for i in 0..rows {
            let (lhs, rhs) = if i < n_eq {
                (&p.eq_lhs[i], p.eq_rhs[i])
            } else {
                (&p.le_lhs[i - n_eq], p.le_rhs[i - n_eq])
            };
            let sign = if rhs < 0.0 { -1.0 } else { 1.0 };
            row_sign[i] = sign;
            let row = &mut t[i * cols..(i + 1) * cols];
            for (dst, &a) in row[..n].iter_mut().zip(lhs) {
                *dst = sign * a;
            }
            if i >= n_eq {
                row[n + i - n_eq] = sign;
            }
            beta[i] = sign * rhs;
            if needs_art[i] {
                row[next_art] = 1.0;
                basis[i] = next_art;
                unit_col[i] = next_art;
                next_art += 1;
            } else {
                basis[i] = n + i - n_eq;
                unit_col[i] = basis[i];
            }
        }

        let mut upper = vec![f64::INFINITY; cols];
        if let Some(u) = &p.upper {
            upper[..n].copy_from_slice(u);
        }
        let mut in_basis = vec![false; cols];
        for &b in &basis {
            in_basis[b] = true;
        }

        Self {
            rows,
            cols,
            n_struct: n,
            n_slack: n_le,
            t,
            beta,
            basis,
            upper,
            at_upper: vec![false; cols],
            in_basis,
            d: vec![0.0; cols],
            cost: vec![0.0; cols],
            may_enter: vec![true; cols],
            unit_col,
            row_sign,
            objective: p.objective.clone(),
            iterations: 0,
            max_iterations: 50_000 + 50 * (rows + cols),
        }
    }

    fn is_artificial(&self, j: usize) -> bool {
        j >= self.n_struct + self.n_slack
    }

    fn run(&mut self) -> Result<LpSolution> {
        // Phase 1: maximize -sum(artificials).
        let has_art = self.cols > self.n_struct + self.n_slack;
        if has_art {
            let mut cost = vec![0.0; self.cols];
            for c in cost.iter_mut().skip(self.n_struct + self.n_slack) {
                *c = -1.0;
            }
            self.set_cost(cost);
            let scale = 1.0 + self.beta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if self.objective_value() < -FEAS_TOL * scale {
                // Phase 1 is bounded below by construction.
                let _ = self.iterate()?;
            }
            if self.objective_value() < -FEAS_TOL * scale {
                return Ok(self.failed(LpStatus::Infeasible));
            }
            self.drive_out_artificials();
            for j in self.n_struct + self.n_slack..self.cols {
                self.may_enter[j] = false;
            }
        }

        let mut cost = vec![0.0; self.cols];
        cost[..self.n_struct].copy_from_slice(&self.objective);
        self.set_cost(cost);
        match self.iterate()? {
            Outcome::Unbounded => Ok(self.failed(LpStatus::Unbounded)),
            Outcome::Optimal => Ok(self.optimal()),
        }
    }

    fn set_cost(&mut self, cost: Vec<f64>) {
        self.cost = cost;
        self.d.copy_from_slice(&self.cost);
        for r in 0..self.rows {
            let cb = self.cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.t[r * self.cols..(r + 1) * self.cols];
                for (d, &a) in self.d.iter_mut().zip(row) {
                    *d -= cb * a;
                }
            }
        }
        for r in 0..self.rows {
            self.d[self.basis[r]] = 0.0;
        }
    }

    fn objective_value(&self) -> f64 {
        let mut v: f64 = (0..self.rows)
            .map(|r| self.cost[self.basis[r]] * self.beta[r])
            .sum();
        for j in 0..self.cols {
            if self.at_upper[j] && !self.in_basis[j] {
                v += self.cost[j] * self.upper[j];
            }
        }
        v
    }

    fn choose_entering(&self, bland: bool) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for j in 0..self.cols {
            if self.in_basis[j] || !self.may_enter[j] {
                continue;
            }
            let dj = self.d[j];
            let improving = if self.at_upper[j] { dj < -OPT_TOL } else { dj > OPT_TOL };
            if !improving {
                continue;
            }
            if bland {
                return Some(j);
            }
            if best.is_none_or(|(_, b)| dj.abs() > b) {
                best = Some((j, dj.abs()));
            }
        }
        best.map(|(j, _)| j)
    }

    fn iterate(&mut self) -> Result<Outcome> {
        let mut degenerate_run = 0usize;
        loop {
            let bland = degenerate_run >= DEGENERATE_STREAK;
            let Some(j) = self.choose_entering(bland) else {
                return Ok(Outcome::Optimal);
            };
            if self.iterations >= self.max_iterations {
                return Err(Error::Lp(format!(
                    "iteration limit {} reached",
                    self.max_iterations
                )));
            }
            self.iterations += 1;

            let dir = if self.at_upper[j] { -1.0 } else { 1.0 };
            // Ratio test; ties go to the smallest basic variable index.
            let mut leave: Option<(usize, f64, bool)> = None;
            for r in 0..self.rows {
                let a = self.t[r * self.cols + j] * dir;
                let b = self.basis[r];
                let limit = if a > PIVOT_TOL {
                    Some((self.beta[r].max(0.0) / a, false))
                } else if a < -PIVOT_TOL && self.upper[b].is_finite() {
                    Some(((self.upper[b] - self.beta[r]).max(0.0) / -a, true))
                } else {
                    None
                };
                if let Some((ratio, to_upper)) = limit {
                    let better = match leave {
                        None => true,
                        Some((lr, best, _)) => {
                            ratio < best || (ratio == best && b < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio, to_upper));
                    }
                }
            }

            let flip = self.upper[j];
            let step = match leave {
                Some((_, ratio, _)) if ratio < flip => ratio,
                _ if flip.is_finite() => flip,
                _ => return Ok(Outcome::Unbounded),
            };
            if step * self.d[j].abs() > 1e-12 {
                degenerate_run = 0;
            } else {
                degenerate_run += 1;
            }

            for r in 0..self.rows {
                let a = self.t[r * self.cols + j];
                if a != 0.0 {
                    self.beta[r] -= a * dir * step;
                }
            }

            match leave {
                Some((r, ratio, to_upper)) if ratio < flip => {
                    let entering_value = if self.at_upper[j] {
                        self.upper[j] - step
                    } else {
                        step
                    };
                    let out = self.basis[r];
                    self.pivot(r, j);
                    self.beta[r] = entering_value;
                    self.in_basis[out] = false;
                    self.at_upper[out] = to_upper;
                    self.in_basis[j] = true;
                    self.at_upper[j] = false;
                    self.basis[r] = j;
                }
                _ => {
                    self.at_upper[j] = !self.at_upper[j];
                }
            }
            self.clean_beta();
        }
    }

    fn clean_beta(&mut self) {
        for r in 0..self.rows {
            let u = self.upper[self.basis[r]];
            if self.beta[r] < 0.0 && self.beta[r] > -FEAS_TOL {
                self.beta[r] = 0.0;
            }
            if u.is_finite() && self.beta[r] > u && self.beta[r] < u + FEAS_TOL {
                self.beta[r] = u;
            }
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cols = self.cols;
        let p = self.t[r * cols + j];
        {
            let row = &mut self.t[r * cols..(r + 1) * cols];
            for v in row.iter_mut() {
                *v /= p;
            }
            row[j] = 1.0;
        }
        let (before, rest) = self.t.split_at_mut(r * cols);
        let (pivot_row, after) = rest.split_at_mut(cols);
        for other in before
            .chunks_exact_mut(cols)
            .chain(after.chunks_exact_mut(cols))
        {
            let f = other[j];
            if f != 0.0 {
                for (v, &pv) in other.iter_mut().zip(pivot_row.iter()) {
                    *v -= f * pv;
                }
                other[j] = 0.0;
            }
        }
        let f = self.d[j];
        if f != 0.0 {
            for (v, &pv) in self.d.iter_mut().zip(pivot_row.iter()) {
                *v -= f * pv;
            }
            self.d[j] = 0.0;
        }
    }

    /// Replace artificials still basic (at zero) with real columns where
    /// possible. Rows where no real column has a usable pivot are redundant;
    /// their artificial stays basic at zero and is never touched again.
    fn drive_out_artificials(&mut self) {
        for r in 0..self.rows {
            if !self.is_artificial(self.basis[r]) {
                continue;
            }
            let row = &self.t[r * self.cols..(r + 1) * self.cols];
            let mut best: Option<(usize, f64)> = None;
            for (j, &a) in row.iter().enumerate().take(self.n_struct + self.n_slack) {
                if self.in_basis[j] || a.abs() <= PIVOT_TOL {
                    continue;
                }
                if best.is_none_or(|(_, b)| a.abs() > b) {
                    best = Some((j, a.abs()));
                }
            }
            if let Some((j, _)) = best {
                let out = self.basis[r];
                let value = if self.at_upper[j] { self.upper[j] } else { 0.0 };
                self.pivot(r, j);
                self.beta[r] = value;
                self.in_basis[out] = false;
                self.at_upper[out] = false;
                self.in_basis[j] = true;
                self.at_upper[j] = false;
                self.basis[r] = j;
            }
        }
    }

    fn primal(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.n_struct];
        for j in 0..self.n_struct {
            if self.at_upper[j] && !self.in_basis[j] {
                x[j] = self.upper[j];
            }
        }
        for r in 0..self.rows {
            if self.basis[r] < self.n_struct {
                x[self.basis[r]] = self.beta[r];
            }
        }
        x
    }

    fn optimal(&self) -> LpSolution {
        let primal = self.primal();
        let objective_value = primal
            .iter()
            .zip(&self.objective)
            .map(|(x, c)| x * c)
            .sum();
        let dual = (0..self.rows)
            .map(|i| {
                let col = self.unit_col[i];
                let y: f64 = (0..self.rows)
                    .map(|r| self.cost[self.basis[r]] * self.t[r * self.cols + col])
                    .sum();
                y * self.row_sign[i]
            })
            .collect();
        LpSolution {
            status: LpStatus::Optimal,
            objective_value,
            primal,
            dual,
            iterations: self.iterations,
        }
    }

    fn failed(&self, status: LpStatus) -> LpSolution {
        LpSolution {
            status,
            objective_value: match status {
                LpStatus::Unbounded => f64::INFINITY,
                _ => f64::NEG_INFINITY,
            },
            primal: Vec::new(),
            dual: Vec::new(),
            iterations: self.iterations,
        }
    }
}
