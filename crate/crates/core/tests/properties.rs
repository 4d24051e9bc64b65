//! Property tests over randomly drawn instances.

use proptest::prelude::*;

use nsc_core::alpha::{alpha_subset, sign_pattern_value};
use nsc_core::bounds::{
    cub, optimized_pick_l, pick_l_upper_bound, pick_l_upper_bound_lp, ScoreTable,
    DEFAULT_CONSTRAINT_BUDGET,
};
use nsc_core::exhaustive::esm_alpha;
use nsc_core::matrix::{
    gen_gaussian, gen_partial_fourier, load_matrix, permute_columns_desc, IndexSet, MatrixFormat,
};
use nsc_core::subsets::enumerate_subsets;
use nsc_core::tomography::{build_random_walk_instance, wilson_spanning_tree, Graph};
use nsc_core::tsa::{tsa, TreeSearch, TsaLimits};

fn subset(n: usize) -> impl Strategy<Value = IndexSet> {
    proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 1..=3)
        .prop_map(move |v| IndexSet::new(v, n).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn csv_round_trip_is_bit_exact(m in 1usize..6, n in 1usize..9, seed: u64) {
        let a = gen_gaussian(m, n, seed).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        a.save_csv(&path).unwrap();
        let b = load_matrix(&path, MatrixFormat::Csv).unwrap();
        prop_assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn generators_are_pure(m in 1usize..6, extra in 0usize..6, seed: u64) {
        let n = m + extra;
        let (g1, g2) = (gen_gaussian(m, n, seed).unwrap(), gen_gaussian(m, n, seed).unwrap());
        prop_assert_eq!(g1.entries(), g2.entries());
        let (f1, f2) = (gen_partial_fourier(m, n, seed).unwrap(), gen_partial_fourier(m, n, seed).unwrap());
        prop_assert_eq!(f1.entries(), f2.entries());
    }

    #[test]
    fn permutation_inverts(seed: u64, scores in proptest::collection::vec(0.0f64..1.0, 7)) {
        let a = gen_gaussian(3, 7, seed).unwrap();
        let p = permute_columns_desc(&a, &scores).unwrap();
        prop_assert!((0..6).all(|j| scores[p.original_column(j)] >= scores[p.original_column(j + 1)]));
        let back = p.unpermuted();
        prop_assert_eq!(back.entries(), a.entries());
    }

    #[test]
    fn subset_value_laws(seed: u64, j in subset(9), t in subset(9), c in prop_oneof![-4.0f64..-0.1, 0.1f64..4.0]) {
        let a = gen_gaussian(4, 9, seed).unwrap();
        let v = |s: &IndexSet| alpha_subset(&a, s).unwrap().value;
        let mut union: Vec<usize> = j.as_slice().iter().chain(t.as_slice()).copied().collect();
        union.sort_unstable();
        union.dedup();
        let u = IndexSet::new(union, 9).unwrap();
        prop_assert!(v(&j) <= v(&u) + 1e-9);
        let disjoint = !j.as_slice().iter().any(|x| t.contains(*x));
        if disjoint {
            prop_assert!(v(&u) <= v(&j) + v(&t) + 1e-9);
        }
        let scaled = a.scaled(c);
        prop_assert!((alpha_subset(&scaled, &j).unwrap().value - v(&j)).abs() <= 1e-9);
        let signs: Vec<f64> = (0..j.len()).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let neg: Vec<f64> = signs.iter().map(|s| -s).collect();
        let p = sign_pattern_value(&a, &j, &signs).unwrap().0;
        let q = sign_pattern_value(&a, &j, &neg).unwrap().0;
        prop_assert!((p - q).abs() <= 1e-9);
    }

    #[test]
    fn bound_chain(seed: u64, k in 2usize..5) {
        let a = gen_gaussian(4, 9, seed).unwrap();
        let esm = esm_alpha(&a, k, None).unwrap();
        let mut prev_opt = f64::INFINITY;
        for l in 1..=k.min(3) {
            let table = ScoreTable::compute(&a, l).unwrap();
            let basic = pick_l_upper_bound(&table, k).unwrap().upper;
            let lp = pick_l_upper_bound_lp(&table, k).unwrap().upper;
            let opt = optimized_pick_l(&table, k, DEFAULT_CONSTRAINT_BUDGET).unwrap().upper;
            prop_assert!((basic - lp).abs() <= 1e-7);
            prop_assert!(esm.report.upper <= opt + 1e-9);
            prop_assert!(opt <= basic + 1e-9);
            prop_assert!(opt <= prev_opt + 1e-9);
            prop_assert!(esm.report.upper <= table.max_value() * k as f64 / l as f64 + 1e-9);
            prop_assert!(cub(&table, &esm.argmax).unwrap() >= esm.report.upper - 1e-9);
            prev_opt = opt;
        }
    }

    #[test]
    fn esm_monotone_in_k(seed: u64) {
        let a = gen_gaussian(3, 7, seed).unwrap();
        let v: Vec<f64> = (1..=7).map(|k| esm_alpha(&a, k, None).unwrap().report.upper).collect();
        prop_assert!(v.windows(2).all(|w| w[0] <= w[1] + 1e-9));
        prop_assert!((v[6] - 1.0).abs() <= 1e-9);
        let mut best = f64::NEG_INFINITY;
        for s in enumerate_subsets(7, 3).unwrap() {
            best = best.max(alpha_subset(&a, &s).unwrap().value);
        }
        prop_assert!((best - v[2]).abs() <= 1e-12);
    }

    #[test]
    fn tsa_exact_sound_and_legal(seed: u64, k in 1usize..5, l in 1usize..3) {
        prop_assume!(l <= k);
        let a = gen_gaussian(5, 11, seed).unwrap();
        let e = esm_alpha(&a, k, None).unwrap().report.upper;
        let mut s = TreeSearch::new(&a, k, l, TsaLimits::default()).unwrap();
        let r = s.run().unwrap();
        prop_assert!(r.exact);
        prop_assert!((r.glb - e).abs() <= 1e-6);
        for p in &r.trace {
            prop_assert!(p.glb <= e + 1e-9 && e <= p.gub + 1e-9);
        }
        for w in r.trace.windows(2) {
            prop_assert!(w[0].glb <= w[1].glb && w[0].gub >= w[1].gub);
        }
        for node in s.nodes().iter().skip(1) {
            let parent = &s.nodes()[node.parent.unwrap()];
            let q = node.subset.max_index().unwrap();
            prop_assert!(parent.subset.is_subset_of(&node.subset));
            prop_assert!(parent.subset.max_index().is_none_or(|m| q > m));
            prop_assert!(q + (k - node.height()) < 11);
        }
    }

    #[test]
    fn tsa_limited_runs_stay_sound(seed: u64, iters in 1u64..40) {
        let a = gen_gaussian(5, 12, seed).unwrap();
        let e = esm_alpha(&a, 3, None).unwrap().report.upper;
        let r = tsa(&a, 3, 2, TsaLimits { max_iterations: Some(iters), ..Default::default() }).unwrap();
        prop_assert!(r.glb <= e + 1e-9 && e <= r.gub + 1e-9);
    }

    #[test]
    fn tomography_invariants(seed: u64, nodes in 3usize..10, paths in 1usize..12, walk in 1usize..8) {
        let max_edges = nodes * (nodes - 1) / 2;
        let g = Graph::random_connected(nodes, (nodes + 2).min(max_edges), seed).unwrap();
        let tree = wilson_spanning_tree(&g, seed).unwrap();
        prop_assert_eq!(tree.len(), nodes - 1);
        let inst = build_random_walk_instance(&g, paths, walk, seed).unwrap();
        let a = &inst.routing;
        prop_assert_eq!((a.rows(), a.cols()), (paths, g.edges.len()));
        prop_assert!(a.entries().iter().all(|&v| v == 0.0 || v == 1.0));
        for (r, p) in inst.paths.iter().enumerate() {
            prop_assert!(p.iter().all(|&e| e < g.edges.len()));
            prop_assert_eq!(a.row(r).iter().filter(|&&v| v == 1.0).count(), p.len());
        }
        let again = build_random_walk_instance(&g, paths, walk, seed).unwrap();
        prop_assert_eq!(again.paths, inst.paths);
    }
}
