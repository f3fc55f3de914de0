//! Randomized invariants across modules.

mod common;

use common::pairs;
use cutree::approx::{approx_all_pairs, build_approx_ds, expansion_operation, flow_equivalent_from_emulator};
use cutree::capacity::Epsilon;
use cutree::expansion::{build_via_expansion_with, select_pivot, Cag, ExpansionOptions};
use cutree::flow::all_pairs_min_cut_bruteforce;
use cutree::generators::random_connected;
use cutree::gomory_hu::build_gusfield;
use cutree::graph::{perturb, NodeId};
use cutree::io::{parse_graph, parse_newick, parse_tree, write_graph, write_newick, write_tree};
use cutree::oracle::{make_exact_oracle, make_noisy_oracle, ExactFactory};
use cutree::query_ds::{lightest_edge_on_path, preprocess_query_ds, report_min_cut_edges};
use cutree::range_tree::{Point, RangeTree2D, Rect};
use cutree::tree::{tree_all_pairs, tree_cut_bipartition, validate_cut_equivalent, PairSelection};
use cutree::ultrametric::{recover_with_report, synthesize_ultrametric, MatrixDistance};
use fixedbitset::FixedBitSet;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `(n, m, seed)` for a connected graph with `n <= max_n`.
fn graph_params(max_n: usize, max_m: usize) -> impl Strategy<Value = (usize, usize, u64)> {
    (2..=max_n).prop_flat_map(move |n| {
        let hi = (n * (n - 1) / 2).min(max_m);
        (Just(n), n - 1..=hi, any::<u64>())
    })
}

fn random_tournament(n: usize, rng: &mut ChaCha8Rng) -> Vec<FixedBitSet> {
    let mut out = vec![FixedBitSet::with_capacity(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(0.5) {
                out[i].insert(j);
            } else {
                out[j].insert(i);
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graph_text_round_trips((n, m, seed) in graph_params(14, 40), cap in 1u64..1000) {
        let g = random_connected(n, m, cap, seed).unwrap();
        let text = write_graph(&g);
        prop_assert_eq!(parse_graph(&text).unwrap(), g.clone());
        let p = perturb(&g, seed).unwrap();
        prop_assert_eq!(parse_graph(&write_graph(&p)).unwrap(), p);
    }

    #[test]
    fn tree_text_round_trips((n, m, seed) in graph_params(12, 30)) {
        let g = random_connected(n, m, 50, seed).unwrap();
        let t = build_gusfield(&g, &make_exact_oracle(&g)).unwrap();
        let text = write_tree(&t, Some(&g.content_hash()));
        let back = parse_tree(&text).unwrap();
        prop_assert_eq!(&back.tree, &t);
        prop_assert_eq!(back.source_hash, Some(g.content_hash()));
        prop_assert_eq!(write_tree(&back.tree, Some(&g.content_hash())), text);
    }

    #[test]
    fn newick_round_trips(n in 1usize..80, seed in any::<u64>()) {
        let t = synthesize_ultrametric(n, seed).unwrap();
        let text = write_newick(&t);
        let back = parse_newick(&text).unwrap();
        prop_assert_eq!(write_newick(&back), text);
    }

    #[test]
    fn expansion_tree_is_cut_equivalent((n, m, seed) in graph_params(10, 25)) {
        let g = random_connected(n, m, 30, seed).unwrap();
        let run = build_via_expansion_with(&g, &ExactFactory, seed, &ExpansionOptions::default()).unwrap();
        let report = validate_cut_equivalent(&run.perturbed, &run.unrounded, PairSelection::All).unwrap();
        prop_assert!(report.is_ok());
        prop_assert_eq!(tree_all_pairs(&run.tree), all_pairs_min_cut_bruteforce(&g).unwrap());
    }

    #[test]
    fn approx_values_and_emulator_bounds((n, m, seed) in graph_params(10, 24), k in 0u64..3) {
        let eps = Epsilon::new(k, 8).unwrap();
        let g = random_connected(n, m, 20, seed).unwrap();
        let opt = all_pairs_min_cut_bruteforce(&g).unwrap();
        let oracle = make_noisy_oracle(&g, eps, seed);
        let (ds, h) = build_approx_ds(&g, &oracle, eps, seed).unwrap();
        let got = approx_all_pairs(&ds).unwrap();
        let mst = tree_all_pairs(&flow_equivalent_from_emulator(&h).unwrap());
        for (s, t) in pairs(n) {
            prop_assert!(got[s][t] >= opt[s][t]);
            prop_assert!(eps.within(&got[s][t], &opt[s][t], 2));
            // emulator weights are (1+eps) times the stored bases
            prop_assert!(eps.within(&opt[s][t], &mst[s][t], 1));
            prop_assert!(eps.within(&mst[s][t], &opt[s][t], 2));
        }
    }

    #[test]
    fn property_star_holds((n, m, seed) in graph_params(10, 24), k in 0u64..3) {
        let eps = Epsilon::new(k, 8).unwrap();
        let g = random_connected(n, m, 20, seed).unwrap();
        let oracle = make_noisy_oracle(&g, eps, seed);
        let nodes: Vec<NodeId> = (0..n).collect();
        let res = expansion_operation(&g, &nodes, &oracle, eps, false, seed).unwrap();
        for i in 0..n {
            for j in i + 1..n {
                let (pi, pj) = (res.part_of[i], res.part_of[j]);
                if pi == pj || pi == 0 || pj == 0 {
                    continue;
                }
                let sep = |c: Option<usize>| c.is_some_and(|c| {
                    let side = &res.cuts[c].0;
                    side.contains(i) != side.contains(j)
                });
                prop_assert!(sep(res.assigned[i]) || sep(res.assigned[j]));
            }
        }
    }

    #[test]
    fn reported_edges_equal_tree_bipartition((n, m, seed) in graph_params(12, 30)) {
        let g = perturb(&random_connected(n, m, 50, seed).unwrap(), seed).unwrap();
        let t = build_gusfield(&g, &make_exact_oracle(&g)).unwrap();
        let ds = preprocess_query_ds(&g, &t, false).unwrap();
        for (s, u) in pairs(n) {
            let r = report_min_cut_edges(&ds, s, u).unwrap();
            let mut dedup = r.edge_ids.clone();
            dedup.dedup();
            prop_assert_eq!(&dedup, &r.edge_ids);
            let b = tree_cut_bipartition(&t, s, u).unwrap();
            prop_assert_eq!(&r.edge_ids, &g.crossing_edges(&b.side));
            let e = lightest_edge_on_path(&ds, s, u).unwrap();
            prop_assert_eq!(e.weight, b.value);
        }
    }

    #[test]
    fn range_reports_match_scan(
        pts in prop::collection::vec((1usize..50, 1usize..50), 0..200),
        rect in (0usize..52, 0usize..52, 0usize..52, 0usize..52),
    ) {
        let points: Vec<Point> = pts.iter().enumerate().map(|(e, &(x, y))| Point { x, y, edge: e }).collect();
        let rt = RangeTree2D::new(&points);
        let rect = Rect { x_lo: rect.0, x_hi: rect.1, y_lo: rect.2, y_hi: rect.3 };
        let (mut got, _) = rt.report(&rect);
        got.sort();
        let mut want: Vec<Point> = points.iter().copied().filter(|p| rect.contains(p)).collect();
        want.sort();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn recovery_reproduces_synthesized_ultrametrics(n in 2usize..120, seed in any::<u64>()) {
        let src = synthesize_ultrametric(n, seed).unwrap();
        let d = MatrixDistance::from_tree(&src);
        let (t, _) = recover_with_report(&d, seed ^ 1).unwrap();
        prop_assert!(t.is_binary() && t.labels_decrease_downward());
        for (u, v) in pairs(n) {
            prop_assert_eq!(t.lca_label(u, v).unwrap(), src.lca_label(u, v).unwrap());
        }
    }

    #[test]
    fn maxflow_values_are_ultrametric_after_inversion((n, m, seed) in graph_params(10, 24)) {
        let g = random_connected(n, m, 20, seed).unwrap();
        let mf = all_pairs_min_cut_bruteforce(&g).unwrap();
        let big = g.total_capacity() + cutree::Capacity::one();
        let d = |a: usize, b: usize| &big - &mf[a][b];
        for u in 0..n {
            for v in 0..n {
                for w in 0..n {
                    if u == v || v == w || u == w {
                        continue;
                    }
                    prop_assert!(mf[u][w] >= mf[u][v].clone().min(mf[v][w].clone()));
                    prop_assert!(d(u, w) <= d(u, v).max(d(v, w)));
                }
            }
        }
    }

    #[test]
    fn tournaments_have_many_high_outdegree_nodes(n in 1usize..200, seed in any::<u64>()) {
        let t = random_tournament(n, &mut ChaCha8Rng::seed_from_u64(seed));
        // at least ceil(n/2) nodes reach out-degree floor(n/2)/2
        let high = t.iter().filter(|o| 4 * o.count_ones(..) >= 2 * (n / 2)).count();
        prop_assert!(2 * high >= n);
    }
}

#[test]
fn literal_tournament_bound_fails_for_some_odd_sizes() {
    // a 3-cycle beaten by two dominant nodes: only 2 of 5 reach n/4
    let mut out = vec![FixedBitSet::with_capacity(5); 5];
    for (a, b) in [(0, 1), (1, 2), (2, 0), (3, 4)] {
        out[a].insert(b);
    }
    for top in [3, 4] {
        for low in 0..3 {
            out[top].insert(low);
        }
    }
    assert_eq!(cutree::expansion::high_outdegree_count(&out), 2);
    assert!(!cutree::expansion::satisfies_tournament_bound(&out));
}

#[test]
fn expansion_pivot_retries_are_rare() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut total = 0;
    let mut worst = 0;
    let runs = 1000;
    for i in 0..runs {
        let n = rng.random_range(2..=50);
        let m = rng.random_range(n - 1..=(n * (n - 1) / 2).min(3 * n));
        let g = perturb(&random_connected(n, m, 30, i).unwrap(), i).unwrap();
        let choice = select_pivot(&Cag::whole(&g), &ExactFactory, false, i).unwrap();
        total += choice.retries;
        worst = worst.max(choice.retries);
        assert!(choice.retries < cutree::expansion::pivot_budget(n));
    }
    let mean = total as f64 / runs as f64;
    assert!(mean < 2.0, "mean retries {mean}");
    assert!(worst < 40);
}

#[test]
fn ultrametric_pivots_succeed_often() {
    let mut attempts = 0;
    let mut instances = 0;
    for seed in 0..1000u64 {
        let n = 2 + (seed as usize * 37) % 150;
        let d = MatrixDistance::from_tree(&synthesize_ultrametric(n, seed).unwrap());
        let (_, report) = recover_with_report(&d, seed).unwrap();
        attempts += report.pivot_attempts;
        instances += report.instances;
    }
    let mean = attempts as f64 / instances as f64;
    assert!(mean < 4.0, "mean pivot attempts {mean}");
}
