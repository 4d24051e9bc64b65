//! Best-first branch and bound over subset trees.
//!
//! Columns are first permuted so single-column values are non-increasing.
//! A node `J` stands for every `k`-subset that extends `J` with larger
//! indices; its bound covers all of them. Children are attached lazily, one
//! at a time in increasing new index, and the most recently attached child
//! of a node also stands in for its not-yet-attached younger siblings, whose
//! bounds can only be smaller.
//!
//! Each iteration pops the leaf with the largest bound. An unevaluated leaf
//! gets its value computed, its bound tightened, and its parent's next child
//! attached. An evaluated leaf of height `k` ends the search with the exact
//! value; any other evaluated leaf gets its first child.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::alpha::{alpha_subset, column_scores};
use crate::bounds::{BoundReport, Method, ScoreTable};
use crate::error::{Error, Result};
use crate::matrix::{descending_order, IndexSet, SensingMatrix};
use crate::subsets::binomial_f64;

#[derive(Debug, Clone, Copy, Default)]
pub struct TsaLimits {
    pub max_iterations: Option<u64>,
    pub max_time: Option<Duration>,
    /// Stop as soon as the NSC verdict is settled.
    pub certify_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Proved,
    CertifiedHolds,
    CertifiedFails,
    IterationLimit,
    TimeLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    pub iteration: u64,
    pub glb: f64,
    pub gub: f64,
    pub nodes_attached: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TsaWitness {
    /// Maximizing subset in original column indices.
    pub subset: IndexSet,
    /// Null-space vector in original column order.
    pub vector: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TsaResult {
    pub k: usize,
    pub l: usize,
    pub glb: f64,
    pub gub: f64,
    pub exact: bool,
    pub witness: Option<TsaWitness>,
    pub iterations: u64,
    pub nodes_attached: u64,
    pub height_k_nodes: u64,
    pub lp_solves: u64,
    pub elapsed_secs: f64,
    pub stop_reason: StopReason,
    pub trace: Vec<TracePoint>,
}

impl TsaResult {
    pub fn report(&self) -> BoundReport {
        let mut r = if self.exact {
            BoundReport::exact(Method::Tsa, self.k, Some(self.l), self.glb)
        } else {
            let mut r = BoundReport::new(Method::Tsa, self.k, Some(self.l), self.glb, self.gub);
            r.lower_witnessed = self.witness.is_some();
            r.nsc_decision = crate::bounds::nsc_certify(&r);
            r
        };
        r.lp_solves = self.lp_solves;
        r.elapsed_secs = self.elapsed_secs;
        r
    }

    /// Write the bound trace as CSV.
    pub fn write_trace_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "iteration,glb,gub,nodes_attached")?;
        for p in &self.trace {
            writeln!(w, "{},{:.17e},{:.17e},{}", p.iteration, p.glb, p.gub, p.nodes_attached)?;
        }
        Ok(())
    }
}

/// Upper bounds on the best completion of a partial subset.
///
/// Positions refer to the permuted matrix, where single-column values are
/// sorted non-increasing.
#[derive(Debug, Clone)]
pub struct TailBounds {
    n: usize,
    k: usize,
    /// Prefix sums of sorted single-column values.
    prefix: Vec<f64>,
    l_tail: Option<LTail>,
}

#[derive(Debug, Clone)]
struct LTail {
    l: usize,
    /// `(value, smallest member)` sorted by value, descending.
    sorted: Vec<(f64, usize)>,
    cache: HashMap<(usize, usize), f64>,
}

impl LTail {
    /// Pick-l bound on any `len`-subset of `start..n`.
    fn bound(&mut self, start: usize, len: usize) -> f64 {
        if len < self.l {
            return f64::INFINITY;
        }
        if let Some(&v) = self.cache.get(&(start, len)) {
            return v;
        }
        let want = crate::subsets::binomial(len, self.l);
        let mut taken = 0u128;
        let mut sum = 0.0;
        for &(v, min) in &self.sorted {
            if taken == want {
                break;
            }
            if min >= start {
                sum += v;
                taken += 1;
            }
        }
        let b = sum / binomial_f64(len - 1, self.l - 1);
        self.cache.insert((start, len), b);
        b
    }
}

impl TailBounds {
    /// `sorted_alpha1` must be non-increasing. `l_table`, if given, holds the
    /// values of every `l`-subset of the same permuted columns.
    pub fn new(sorted_alpha1: &[f64], k: usize, l_table: Option<&ScoreTable>) -> Result<Self> {
        let n = sorted_alpha1.len();
        if k == 0 || k > n {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= {n}, got {k}")));
        }
        if sorted_alpha1.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(
                "single-column values must be sorted non-increasing".into(),
            ));
        }
        let mut prefix = Vec::with_capacity(n + 1);
        prefix.push(0.0);
        for v in sorted_alpha1 {
            prefix.push(prefix.last().unwrap() + v);
        }
        let l_tail = l_table.filter(|t| t.l() >= 2).map(|t| {
            let mut sorted: Vec<(f64, usize)> = t
                .scores()
                .iter()
                .map(|s| (s.value, s.subset.as_slice()[0]))
                .collect();
            // stable: equal values keep lexicographic order
            sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
            LTail {
                l: t.l(),
                sorted,
                cache: HashMap::new(),
            }
        });
        Ok(Self { n, k, prefix, l_tail })
    }

    fn tail1(&self, start: usize, len: usize) -> f64 {
        self.prefix[start + len] - self.prefix[start]
    }

    /// Best bound on the total value `len` more indices from `start..n` can add.
    fn tail(&mut self, start: usize, len: usize) -> f64 {
        let one = self.tail1(start, len);
        match &mut self.l_tail {
            Some(lt) => one.min(lt.bound(start, len)),
            None => one,
        }
    }

    /// Bound of an evaluated node: `alpha_J + tail(max(J)+1, k - |J|)`.
    pub fn bound_node(&mut self, alpha_j: f64, subset: &IndexSet) -> Result<f64> {
        let height = subset.len();
        if height > self.k {
            return Err(Error::InvalidArgument(format!(
                "node of height {height} exceeds k = {}",
                self.k
            )));
        }
        let start = subset.max_index().map_or(0, |m| m + 1);
        let t = self.k - height;
        if start + t > self.n {
            return Err(Error::InvalidArgument(format!(
                "node {subset} cannot be completed to {} indices",
                self.k
            )));
        }
        Ok(alpha_j + self.tail(start, t))
    }

    /// Bound of the child `J + {q}` before its own value is known:
    /// `alpha_J + tail(q, k - |J|)`, where the tail is forced to contain `q`
    /// in the single-column form.
    pub fn bound_child(&mut self, alpha_j: f64, parent: &IndexSet, q: usize) -> Result<f64> {
        let j = parent.len();
        if j >= self.k {
            return Err(Error::InvalidArgument("parent already has height k".into()));
        }
        if parent.max_index().is_some_and(|m| q <= m) {
            return Err(Error::InvalidArgument(format!(
                "child index {} must exceed every index of {parent}",
                q + 1
            )));
        }
        let len = self.k - j;
        if q + len > self.n {
            return Err(Error::InvalidArgument(format!(
                "child index {} leaves no room for {} more indices",
                q + 1,
                len - 1
            )));
        }
        Ok(alpha_j + self.tail(q, len))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchNode {
    /// Indices of the permuted matrix.
    pub subset: IndexSet,
    pub bound: f64,
    pub alpha: Option<f64>,
    /// Next index to try as a child.
    pub next_child: usize,
    pub parent: Option<usize>,
}

impl SearchNode {
    pub fn height(&self) -> usize {
        self.subset.len()
    }
}

#[derive(Debug, Clone)]
struct Entry {
    bound: f64,
    height: usize,
    node: usize,
    subset: IndexSet,
}

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    // Largest bound first, then greater height, then lexicographically smaller subset.
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then(self.height.cmp(&other.height))
            .then_with(|| other.subset.cmp(&self.subset))
            .then_with(|| other.node.cmp(&self.node))
    }
}

pub struct TreeSearch {
    matrix: SensingMatrix,
    k: usize,
    l: usize,
    limits: TsaLimits,
    tails: TailBounds,
    alpha1: Vec<f64>,
    l_table: Option<ScoreTable>,
    nodes: Vec<SearchNode>,
    heap: BinaryHeap<Entry>,
    lp_solves: u64,
    start: Instant,
}

impl TreeSearch {
    /// Run the pre-computation: column values, the column permutation and,
    /// for `l >= 2`, the values of all `l`-subsets.
    pub fn new(a: &SensingMatrix, k: usize, l: usize, limits: TsaLimits) -> Result<Self> {
        let n = a.cols();
        if l == 0 || l > k || k > n {
            return Err(Error::InvalidArgument(format!(
                "need 1 <= l <= k <= {n}, got l = {l}, k = {k}"
            )));
        }
        if limits.max_iterations == Some(0) || limits.max_time == Some(Duration::ZERO) {
            return Err(Error::InvalidArgument("limits must be positive".into()));
        }
        let start = Instant::now();
        let scores = column_scores(a)?;
        let order = descending_order(&scores);
        let matrix = a.select_columns(&order)?;
        let alpha1: Vec<f64> = order.iter().map(|&j| scores[j]).collect();
        let mut lp_solves = n as u64;
        let l_table = if l >= 2 {
            let t = ScoreTable::compute(&matrix, l)?;
            lp_solves += t.lp_solves();
            Some(t)
        } else {
            None
        };
        let tails = TailBounds::new(&alpha1, k, l_table.as_ref())?;
        Ok(Self {
            matrix,
            k,
            l,
            limits,
            tails,
            alpha1,
            l_table,
            nodes: Vec::new(),
            heap: BinaryHeap::new(),
            lp_solves,
            start,
        })
    }

    /// Tree built so far (positions refer to the permuted matrix).
    pub fn nodes(&self) -> &[SearchNode] {
        &self.nodes
    }

    pub fn permuted_matrix(&self) -> &SensingMatrix {
        &self.matrix
    }

    fn push(&mut self, node: usize) {
        let nd = &self.nodes[node];
        self.heap.push(Entry {
            bound: nd.bound,
            height: nd.height(),
            node,
            subset: nd.subset.clone(),
        });
    }

    /// Attach the next unattached child of `parent`, if any is left.
    fn expand(&mut self, parent: usize) -> Result<Option<usize>> {
        let (subset, alpha, q) = {
            let p = &self.nodes[parent];
            (p.subset.clone(), p.alpha.expect("expanded nodes are evaluated"), p.next_child)
        };
        let j = subset.len();
        if j >= self.k || q + (self.k - j) > self.matrix.cols() {
            return Ok(None);
        }
        let bound = self.tails.bound_child(alpha, &subset, q)?;
        self.nodes[parent].next_child = q + 1;
        let child = SearchNode {
            subset: subset.extended(q),
            bound,
            alpha: None,
            next_child: q + 1,
            parent: Some(parent),
        };
        self.nodes.push(child);
        let id = self.nodes.len() - 1;
        self.push(id);
        Ok(Some(id))
    }

    fn evaluate(&mut self, subset: &IndexSet) -> Result<(f64, Option<Vec<f64>>)> {
        match subset.len() {
            1 => Ok((self.alpha1[subset.as_slice()[0]], None)),
            h if h == self.l && h < self.k => {
                let v = self
                    .l_table
                    .as_ref()
                    .and_then(|t| t.value(subset.as_slice()))
                    .expect("l-subset values were precomputed");
                Ok((v, None))
            }
            h => {
                self.lp_solves += 1u64 << (h - 1);
                let s = alpha_subset(&self.matrix, subset)?;
                Ok((s.value, s.witness))
            }
        }
    }

    pub fn run(&mut self) -> Result<TsaResult> {
        let k = self.k;
        let root_bound = self.tails.bound_node(0.0, &IndexSet::empty())?;
        self.nodes.push(SearchNode {
            subset: IndexSet::empty(),
            bound: root_bound,
            alpha: Some(0.0),
            next_child: 0,
            parent: None,
        });
        self.push(0);

        let mut glb = 0.0f64;
        let mut gub = root_bound.min(1.0);
        let mut best: Option<(IndexSet, Vec<f64>)> = None;
        let mut iterations = 0u64;
        let mut attached = 0u64;
        let mut height_k = 0u64;
        let mut trace = vec![TracePoint {
            iteration: 0,
            glb,
            gub,
            nodes_attached: 0,
        }];

        let stop = loop {
            if self.limits.certify_only {
                if gub < 0.5 {
                    break StopReason::CertifiedHolds;
                }
                if glb >= 0.5 {
                    break StopReason::CertifiedFails;
                }
            }
            if self.limits.max_iterations.is_some_and(|m| iterations >= m) {
                break StopReason::IterationLimit;
            }
            if self.limits.max_time.is_some_and(|t| self.start.elapsed() >= t) {
                break StopReason::TimeLimit;
            }
            let Some(top) = self.heap.pop() else {
                // Every completion was evaluated.
                gub = glb;
                break StopReason::Proved;
            };
            iterations += 1;
            let id = top.node;
            let height = top.height;

            if self.nodes[id].alpha.is_none() {
                let subset = self.nodes[id].subset.clone();
                let (value, witness) = self.evaluate(&subset)?;
                let bound = self.tails.bound_node(value, &subset)?;
                let node = &mut self.nodes[id];
                node.alpha = Some(value);
                node.bound = bound;
                if height == k && value > glb {
                    glb = value;
                    let witness = match witness {
                        Some(w) => w,
                        None => alpha_subset(&self.matrix, &subset)?.witness.unwrap_or_default(),
                    };
                    best = Some((subset, witness));
                }
                self.push(id);
                let parent = self.nodes[id].parent.expect("only the root lacks a parent");
                if let Some(c) = self.expand(parent)? {
                    attached += 1;
                    if self.nodes[c].height() == k {
                        height_k += 1;
                    }
                }
            } else if height == k {
                glb = glb.max(top.bound);
                gub = glb;
                trace.push(TracePoint {
                    iteration: iterations,
                    glb,
                    gub,
                    nodes_attached: attached,
                });
                break StopReason::Proved;
            } else if let Some(c) = self.expand(id)? {
                attached += 1;
                if self.nodes[c].height() == k {
                    height_k += 1;
                }
            }

            let leaf_max = self.heap.peek().map_or(glb, |e| e.bound).min(1.0);
            let new_gub = gub.min(leaf_max).max(glb);
            if new_gub != gub || trace.last().is_some_and(|p| p.glb != glb) {
                gub = new_gub;
                trace.push(TracePoint {
                    iteration: iterations,
                    glb,
                    gub,
                    nodes_attached: attached,
                });
            }
            if glb >= gub && best.is_some() {
                gub = glb;
                break StopReason::Proved;
            }
        };

        if trace.last().is_none_or(|p| p.iteration != iterations) {
            trace.push(TracePoint {
                iteration: iterations,
                glb,
                gub,
                nodes_attached: attached,
            });
        }
        let exact = stop == StopReason::Proved;
        let witness = best.map(|(s, z)| {
            let mut vector = vec![0.0; z.len()];
            for (p, v) in z.iter().enumerate() {
                vector[self.matrix.original_column(p)] = *v;
            }
            TsaWitness {
                subset: s.to_original(&self.matrix),
                vector,
            }
        });
        Ok(TsaResult {
            k,
            l: self.l,
            glb,
            gub: if exact { glb } else { gub },
            exact,
            witness,
            iterations,
            nodes_attached: attached,
            height_k_nodes: height_k,
            lp_solves: self.lp_solves,
            elapsed_secs: self.start.elapsed().as_secs_f64(),
            stop_reason: stop,
            trace,
        })
    }
}

/// Exact `alpha_k` (or a certified interval when a limit stops the search).
pub fn tsa(a: &SensingMatrix, k: usize, l: usize, limits: TsaLimits) -> Result<TsaResult> {
    TreeSearch::new(a, k, l, limits)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exhaustive::esm_alpha;
    use crate::matrix::gen_gaussian;
    use crate::subsets::enumerate_subsets;

    fn ones() -> SensingMatrix {
        SensingMatrix::from_rows(&[vec![1.0, 1.0, 1.0]]).unwrap()
    }

    #[test]
    fn node_and_child_bounds_by_formula() {
        let mut tb = TailBounds::new(&[0.3, 0.25, 0.2], 2, None).unwrap();
        // J = {2} (position 1), alpha = 0.25: 0.25 + 0.2
        let b = tb.bound_node(0.25, &IndexSet::from_sorted(vec![1])).unwrap();
        assert!((b - 0.45).abs() < 1e-12);
        // height-k node: bound is its own value
        let b = tb.bound_node(0.4, &IndexSet::from_sorted(vec![0, 2])).unwrap();
        assert!((b - 0.4).abs() < 1e-12);
        // child {1} of the root equals the root bound
        let root = tb.bound_node(0.0, &IndexSet::empty()).unwrap();
        let c = tb.bound_child(0.0, &IndexSet::empty(), 0).unwrap();
        assert!((root - 0.55).abs() < 1e-12 && (c - 0.55).abs() < 1e-12);
        // ineligible children
        assert!(tb.bound_child(0.0, &IndexSet::empty(), 2).is_err());
        assert!(tb.bound_child(0.3, &IndexSet::from_sorted(vec![1]), 0).is_err());
        assert!(TailBounds::new(&[0.1, 0.2], 1, None).is_err());
    }

    #[test]
    fn sibling_bounds_non_increasing() {
        let a = gen_gaussian(5, 10, 3).unwrap();
        let mut s = column_scores(&a).unwrap();
        s.sort_by(|x, y| y.total_cmp(x));
        let mut tb = TailBounds::new(&s, 3, None).unwrap();
        let parent = IndexSet::from_sorted(vec![1]);
        let pb = tb.bound_node(s[1], &parent).unwrap();
        let mut prev = f64::INFINITY;
        for q in 2..=8 {
            let b = tb.bound_child(s[1], &parent, q).unwrap();
            assert!(b <= prev + 1e-15 && b <= pb + 1e-15);
            prev = b;
        }
    }

    #[test]
    fn ones_row_k2() {
        let r = tsa(&ones(), 2, 1, TsaLimits::default()).unwrap();
        assert!(r.exact);
        assert_eq!(r.stop_reason, StopReason::Proved);
        assert!((r.glb - 1.0).abs() < 1e-9 && (r.gub - 1.0).abs() < 1e-9);
        assert_eq!(r.witness.as_ref().unwrap().subset.len(), 2);
        assert_eq!(r.report().nsc_decision, crate::bounds::NscDecision::Fails);
    }

    #[test]
    fn k1_and_k_equals_n() {
        let a = gen_gaussian(3, 6, 8).unwrap();
        let r = tsa(&a, 1, 1, TsaLimits::default()).unwrap();
        let e = esm_alpha(&a, 1, None).unwrap();
        assert!((r.glb - e.report.upper).abs() < 1e-9);
        let r = tsa(&a, 6, 2, TsaLimits::default()).unwrap();
        assert!((r.glb - 1.0).abs() < 1e-9);
    }

    #[test]
    fn invalid_arguments() {
        let a = ones();
        assert!(tsa(&a, 2, 3, TsaLimits::default()).is_err());
        assert!(tsa(&a, 4, 1, TsaLimits::default()).is_err());
        let bad = TsaLimits {
            max_iterations: Some(0),
            ..Default::default()
        };
        assert!(tsa(&a, 2, 1, bad).is_err());
    }

    /// Brute force: best value over completions of `j` by larger positions.
    fn best_completion(m: &SensingMatrix, j: &IndexSet, k: usize) -> f64 {
        let n = m.cols();
        let start = j.max_index().map_or(0, |x| x + 1);
        let need = k - j.len();
        if need == 0 {
            return alpha_subset(m, j).unwrap().value;
        }
        let rest = n - start;
        if rest < need {
            return f64::NEG_INFINITY;
        }
        enumerate_subsets(rest, need)
            .unwrap()
            .map(|t| {
                let mut v = j.as_slice().to_vec();
                v.extend(t.as_slice().iter().map(|&x| x + start));
                alpha_subset(m, &IndexSet::from_sorted(v)).unwrap().value
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[test]
    fn bounds_are_admissible() {
        let a = gen_gaussian(6, 12, 17).unwrap();
        let k = 3;
        for l in [1, 2] {
            let search = TreeSearch::new(&a, k, l, TsaLimits::default()).unwrap();
            let m = search.permuted_matrix().clone();
            let mut tails = search.tails.clone();
            for h in 1..=2 {
                for j in enumerate_subsets(12, h).unwrap() {
                    if j.max_index().unwrap() + (k - h) >= 12 {
                        continue;
                    }
                    let aj = alpha_subset(&m, &j).unwrap().value;
                    let b = tails.bound_node(aj, &j).unwrap();
                    let best = best_completion(&m, &j, k);
                    assert!(b >= best - 1e-9, "l={l} J={j}: {b} < {best}");
                }
            }
        }
    }

    #[test]
    fn tree_is_legal_and_matches_esm() {
        let a = gen_gaussian(5, 11, 2).unwrap();
        for (k, l) in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)] {
            let mut s = TreeSearch::new(&a, k, l, TsaLimits::default()).unwrap();
            let r = s.run().unwrap();
            let e = esm_alpha(&a, k, None).unwrap().report.upper;
            assert!(r.exact && (r.glb - e).abs() < 1e-6, "k={k} l={l}");
            let n = a.cols();
            for node in s.nodes().iter().skip(1) {
                let p = &s.nodes()[node.parent.unwrap()];
                assert!(p.subset.is_subset_of(&node.subset));
                assert_eq!(node.height(), p.height() + 1);
                let new = node.subset.max_index().unwrap();
                assert!(p.subset.max_index().is_none_or(|m| new > m));
                assert!(new + (k - node.height()) < n);
                assert!(node.height() <= k);
            }
            for w in r.trace.windows(2) {
                assert!(w[0].glb <= w[1].glb && w[0].gub >= w[1].gub);
            }
            for p in &r.trace {
                assert!(p.glb <= e + 1e-9 && e <= p.gub + 1e-9);
            }
            let wit = r.witness.as_ref().unwrap();
            let direct = alpha_subset(&a, &wit.subset).unwrap().value;
            assert!((direct - r.glb).abs() < 1e-7);
        }
    }

    #[test]
    fn iteration_limit_gives_sound_interval() {
        let a = gen_gaussian(8, 16, 5).unwrap();
        let e = esm_alpha(&a, 3, None).unwrap().report.upper;
        let r = tsa(
            &a,
            3,
            1,
            TsaLimits {
                max_iterations: Some(15),
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(r.stop_reason, StopReason::IterationLimit);
        assert!(!r.exact);
        assert!(r.glb <= e + 1e-9 && e <= r.gub + 1e-9);
        assert_eq!(r.iterations, 15);
    }

    #[test]
    fn certify_only_stops_early() {
        let r = tsa(
            &ones(),
            2,
            1,
            TsaLimits {
                certify_only: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(matches!(r.stop_reason, StopReason::CertifiedFails | StopReason::Proved));
        let a = gen_gaussian(12, 16, 3).unwrap();
        let r = tsa(
            &a,
            1,
            1,
            TsaLimits {
                certify_only: true,
                ..Default::default()
            },
        )
        .unwrap();
        if r.stop_reason == StopReason::CertifiedHolds {
            assert!(r.gub < 0.5);
        }
    }

    #[test]
    fn trace_csv_header() {
        let r = tsa(&ones(), 2, 1, TsaLimits::default()).unwrap();
        let mut buf = Vec::new();
        r.write_trace_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("iteration,glb,gub,nodes_attached\n"));
        assert_eq!(text.lines().count(), r.trace.len() + 1);
    }
}
