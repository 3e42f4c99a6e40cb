//! Property tests for the library's contract invariants: graph identities, metric
//! symmetry and bounds, imputation monotonicity, scorer scale invariance and
//! sampler correctness.

mod support;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use linkfuse::aggregate::{ScorerConfig, WeightSource};
use linkfuse::attributes::ImputationPolicy;
use linkfuse::evaluation::{auc_with_scorer, holdout, sample_non_edge, HoldoutMode};
use linkfuse::homophily::{homophily_score, HomophilyMetricKind};
use linkfuse::structural::{structural_score, StructuralMetricKind};
use linkfuse::weights::{homophily_weight, StructuralEstimator, WeightSet};

use support::*;

/// Strategy: a connected-ish random graph as (n, edge list).
fn arb_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (4usize..24, any::<u64>()).prop_map(|(n, seed)| {
        let mut edges = gnp_edges(n, 0.3, seed);
        if edges.is_empty() {
            edges.push((0, 1));
        }
        (n, edges)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn handshake_holds((n, edges) in arb_graph()) {
        let g = ident_graph(&edges, n);
        let degree_sum: usize = (0..n).map(|i| g.degree(i)).sum();
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn common_neighbors_symmetric((n, edges) in arb_graph(), a in 0usize..24, b in 0usize..24) {
        let g = ident_graph(&edges, n);
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        prop_assert_eq!(
            g.common_neighbors(a, b).unwrap(),
            g.common_neighbors(b, a).unwrap()
        );
    }

    #[test]
    fn bfs_sample_is_induced_subgraph((n, edges) in arb_graph(), start in 0usize..24, cap in 1usize..12) {
        let g = ident_graph(&edges, n);
        let s = g.bfs_sample(start % n, cap).unwrap();
        prop_assert!(s.node_count() <= cap);
        for &(u, v) in s.edges() {
            let pu = g.id_of(s.label(u)).unwrap();
            let pv = g.id_of(s.label(v)).unwrap();
            prop_assert!(g.has_edge(pu, pv));
        }
        // Every parent edge between sampled nodes must be present.
        let sampled: Vec<usize> = s.labels().iter().map(|l| g.id_of(l).unwrap()).collect();
        for (i, &pu) in sampled.iter().enumerate() {
            for &pv in sampled.iter().skip(i + 1) {
                if g.has_edge(pu, pv) {
                    let su = s.id_of(g.label(pu)).unwrap();
                    let sv = s.id_of(g.label(pv)).unwrap();
                    prop_assert!(s.has_edge(su, sv));
                }
            }
        }
    }

    #[test]
    fn structural_symmetry_and_bounds((n, edges) in arb_graph(), a in 0usize..24, b in 0usize..24) {
        let g = ident_graph(&edges, n);
        let (a, b) = (a % n, b % n);
        prop_assume!(a != b);
        for kind in StructuralMetricKind::ALL {
            let xy = structural_score(&g, kind, a, b).unwrap();
            let yx = structural_score(&g, kind, b, a).unwrap();
            prop_assert_eq!(xy, yx, "asymmetry under {:?}", kind);
            match kind {
                StructuralMetricKind::Jaccard
                | StructuralMetricKind::Cosine
                | StructuralMetricKind::L1Norm
                | StructuralMetricKind::NetworkSimilarity => {
                    prop_assert!((0.0..=1.0).contains(&xy));
                }
                StructuralMetricKind::AdamicAdar => prop_assert!(xy >= 0.0),
                StructuralMetricKind::Pmi => prop_assert!(xy.is_finite()),
            }
        }
        // Jaccard never exceeds the L1-normalized (Dice) score.
        let j = structural_score(&g, StructuralMetricKind::Jaccard, a, b).unwrap();
        let l1 = structural_score(&g, StructuralMetricKind::L1Norm, a, b).unwrap();
        prop_assert!(j <= l1 + 1e-15);
    }

    #[test]
    fn homophily_symmetry_and_range(seed in any::<u64>(), a in 0usize..20, b in 0usize..20) {
        let n = 20;
        let values = random_column(n, 3, 0.2, seed);
        let refs: Vec<Option<&str>> = values.iter().map(|v| v.as_deref()).collect();
        let tab = table_from(n, vec![("c", values.clone())]);
        let (a, b) = (a % n, b % n);
        for kind in HomophilyMetricKind::ALL {
            let xy = homophily_score(&tab, kind, "c", a, b).unwrap();
            let yx = homophily_score(&tab, kind, "c", b, a).unwrap();
            prop_assert_eq!(xy, yx);
            if let Some(s) = xy {
                prop_assert!((0.0..=1.0).contains(&s), "{:?} out of range: {}", kind, s);
                prop_assert_eq!(refs[a].is_some() && refs[b].is_some(), true);
            }
        }
    }

    #[test]
    fn impute_monotone_in_thresholds((n, edges) in arb_graph(), seed in any::<u64>()) {
        let g = ident_graph(&edges, n);
        let tab = table_from(n, vec![("c", random_column(n, 2, 0.4, seed))]);
        let predicted = |f: usize, t: f64| -> usize {
            let policy = ImputationPolicy { f_min: f, t_min: t };
            tab.impute(&g, "c", policy).unwrap().1.predicted
        };
        for f in 1..4usize {
            for t in [0.2, 0.5, 0.8] {
                prop_assert!(predicted(f + 1, t) <= predicted(f, t));
                prop_assert!(predicted(f, (t + 0.2).min(1.0)) <= predicted(f, t));
            }
        }
    }

    #[test]
    fn weight_invariant_under_value_relabeling((n, edges) in arb_graph(), seed in any::<u64>()) {
        let g = ident_graph(&edges, n);
        let col = random_column(n, 3, 0.1, seed);
        let renamed: Vec<Option<String>> = col
            .iter()
            .map(|v| v.as_ref().map(|s| format!("relabeled-{s}")))
            .collect();
        let t1 = table_from(n, vec![("c", col.clone())]);
        let t2 = table_from(n, vec![("c", renamed)]);
        prop_assume!(col.iter().any(|v| v.is_some()));
        let w1 = homophily_weight(&g, &t1, "c").unwrap();
        let w2 = homophily_weight(&g, &t2, "c").unwrap();
        prop_assert!((w1 - w2).abs() < 1e-12);
    }

    #[test]
    fn score_scale_invariant_and_symmetric(
        (n, edges) in arb_graph(),
        seed in any::<u64>(),
        w_attr in 0.05f64..2.0,
        w_s in 0.05f64..2.0,
        alpha in prop::sample::select(vec![0.5f64, 2.0, 10.0]),
    ) {
        let g = ident_graph(&edges, n);
        let tab = table_from(n, vec![("c", random_column(n, 2, 0.0, seed))]);
        let supplied = |wa: f64, ws: f64| {
            let mut attributes = BTreeMap::new();
            attributes.insert("c".to_owned(), wa);
            WeightSource::Supplied {
                weights: WeightSet {
                    attributes,
                    structural: ws,
                    estimator: StructuralEstimator::AvgLocalCc,
                },
            }
        };
        let base = ScorerConfig {
            attributes: vec!["c".into()],
            weights: supplied(w_attr, w_s),
            ..Default::default()
        };
        let scaled = ScorerConfig { weights: supplied(w_attr * alpha, w_s * alpha), ..base.clone() };
        let s1 = base.resolve(&g, &tab).unwrap();
        let s2 = scaled.resolve(&g, &tab).unwrap();
        for a in 0..n.min(6) {
            for b in (a + 1)..n.min(6) {
                let x = s1.score(a, b).unwrap();
                prop_assert!((x - s2.score(a, b).unwrap()).abs() < 1e-12);
                prop_assert_eq!(x, s1.score(b, a).unwrap());
                // Convex combination: bounded by the included terms under
                // nonnegative weights.
                let h = homophily_score(&tab, HomophilyMetricKind::Of, "c", a, b)
                    .unwrap()
                    .unwrap();
                let s = structural_score(&g, StructuralMetricKind::NetworkSimilarity, a, b)
                    .unwrap();
                prop_assert!(x >= h.min(s) - 1e-12 && x <= h.max(s) + 1e-12);
            }
        }
    }

    #[test]
    fn non_edge_sampler_avoids_originals((n, edges) in arb_graph(), seed in any::<u64>()) {
        let g = ident_graph(&edges, n);
        let total_pairs = n * (n - 1) / 2;
        prop_assume!(g.edge_count() >= 10 && total_pairs > g.edge_count());
        let split = holdout(&g, 0.2, HoldoutMode::Random, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..200 {
            let (u, v) = sample_non_edge(&split, &mut rng);
            prop_assert!(u != v);
            prop_assert!(!split.is_original_edge(u, v));
        }
    }
}

/// Mismatch score under OF grows with the value frequencies (common values
/// are less surprising to differ), and shrinks under IOF.
#[test]
fn of_iof_frequency_monotonicity() {
    let score_at = |fx: usize, n: usize, kind: HomophilyMetricKind| -> f64 {
        // Node 0 holds "x" with frequency fx, node 1 holds "y" with
        // frequency 2; filler values keep N constant at n.
        let mut vals: Vec<Option<String>> = Vec::new();
        vals.extend((0..fx).map(|_| Some("x".to_owned())));
        vals.extend((0..2).map(|_| Some("y".to_owned())));
        vals.extend((0..n - fx - 2).map(|i| Some(format!("z{i}"))));
        let tab = table_from(n, vec![("c", vals)]);
        homophily_score(&tab, kind, "c", 0, fx).unwrap().unwrap()
    };
    let n = 24;
    let mut last_of = f64::NEG_INFINITY;
    let mut last_iof = f64::INFINITY;
    for fx in [2usize, 4, 8, 16] {
        let of = score_at(fx, n, HomophilyMetricKind::Of);
        let iof = score_at(fx, n, HomophilyMetricKind::Iof);
        assert!(of > last_of, "OF mismatch must grow with frequency");
        assert!(iof < last_iof, "IOF mismatch must shrink with frequency");
        last_of = of;
        last_iof = iof;
    }
}

/// Assortative block labels weigh positive, disassortative (bipartite-style)
/// labels weigh negative.
#[test]
fn weight_sign_semantics() {
    // Assortative: two cliques sharing one bridge edge.
    let mut edges = Vec::new();
    for base in [0usize, 5] {
        for i in 0..5 {
            for j in (i + 1)..5 {
                edges.push((base + i, base + j));
            }
        }
    }
    edges.push((0, 5));
    let g = ident_graph(&edges, 10);
    let col: Vec<Option<String>> = (0..10)
        .map(|i| {
            Some(if i < 5 {
                "a".to_owned()
            } else {
                "b".to_owned()
            })
        })
        .collect();
    let tab = table_from(10, vec![("c", col)]);
    assert!(homophily_weight(&g, &tab, "c").unwrap() > 0.0);

    // Disassortative: complete bipartite K5,5 with block labels.
    let mut edges = Vec::new();
    for i in 0..5 {
        for j in 5..10 {
            edges.push((i, j));
        }
    }
    let g = ident_graph(&edges, 10);
    let col: Vec<Option<String>> = (0..10)
        .map(|i| {
            Some(if i < 5 {
                "a".to_owned()
            } else {
                "b".to_owned()
            })
        })
        .collect();
    let tab = table_from(10, vec![("c", col)]);
    assert!(homophily_weight(&g, &tab, "c").unwrap() < 0.0);
}

/// Local clustering is 1 on every node of a complete graph and 0 on trees;
/// the average stays within [0, 1].
#[test]
fn clustering_extremes() {
    for n in [3usize, 5, 8] {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                edges.push((i, j));
            }
        }
        let g = ident_graph(&edges, n);
        for i in 0..n {
            assert_eq!(g.local_clustering(i).unwrap(), 1.0);
        }
        assert_eq!(linkfuse::weights::structural_weight_avg_cc(&g), 1.0);
    }
    // A path is a tree: no node closes a triangle.
    let path: Vec<(usize, usize)> = (0..9).map(|i| (i, i + 1)).collect();
    let g = ident_graph(&path, 10);
    for i in 0..10 {
        assert_eq!(g.local_clustering(i).unwrap(), 0.0);
    }
    for seed in 0..5u64 {
        let g = ident_graph(&gnp_edges(20, 0.3, seed), 20);
        let avg = linkfuse::weights::structural_weight_avg_cc(&g);
        assert!((0.0..=1.0).contains(&avg));
    }
}

/// A heterophilous attribute weighs negative and, used alone, ranks held-out
/// edges below random non-edges (mean AUC under 0.5).
#[test]
fn heterophilous_attribute_scores_below_half() {
    // Bipartite-leaning graph: 85% of edges run across the two blocks.
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let n = 600usize;
    let half = n / 2;
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    while edges.len() < 2_400 {
        use rand::Rng;
        let u = rng.gen_range(0..n);
        let cross = rng.gen_bool(0.85);
        let v = if (u < half) == cross {
            rng.gen_range(half..n)
        } else {
            rng.gen_range(0..half)
        };
        if u != v && seen.insert((u.min(v), u.max(v))) {
            edges.push((u.min(v), u.max(v)));
        }
    }
    let g = ident_graph(&edges, n);
    let column: Vec<Option<String>> = (0..n)
        .map(|i| {
            Some(if i < half {
                "a".to_owned()
            } else {
                "b".to_owned()
            })
        })
        .collect();
    let tab = table_from(n, vec![("side", column)]);
    assert!(homophily_weight(&g, &tab, "side").unwrap() < 0.0);

    let cfg = ScorerConfig {
        weights: WeightSource::Uniform,
        ..ScorerConfig::homophily_only(HomophilyMetricKind::Of, &["side"])
    };
    let params = linkfuse::EvalParams {
        repetitions: 10,
        fraction: 0.10,
        mode: Some(HoldoutMode::Random),
        rounds: linkfuse::evaluation::RoundsPolicy::HalfRemoved,
        master_seed: 33,
    };
    let report = linkfuse::evaluate(&g, &tab, &cfg, &params).unwrap();
    assert!(
        report.mean_auc < 0.5,
        "heterophilous attribute scored {:.4}",
        report.mean_auc
    );
}

/// Planting triangles into a sparse random graph raises its closed-triad
/// z-score against the degree-preserving null model.
#[test]
fn motif_z_orders_planted_triangles_above_random() {
    use linkfuse::weights::closed_triad_motif_z;
    let base_edges = gnp_edges(100, 0.05, 51);
    let base = ident_graph(&base_edges, 100);

    // Planted variant: close twenty wedges of the same graph.
    let mut rng = ChaCha8Rng::seed_from_u64(52);
    let mut present: std::collections::HashSet<(usize, usize)> =
        base_edges.iter().copied().collect();
    let mut edges = base_edges.clone();
    let mut adj = vec![Vec::new(); 100];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut planted_count = 0;
    while planted_count < 20 {
        use rand::Rng;
        let c = rng.gen_range(0..100);
        if adj[c].len() < 2 {
            continue;
        }
        let a = adj[c][rng.gen_range(0..adj[c].len())];
        let b = adj[c][rng.gen_range(0..adj[c].len())];
        if a != b && present.insert((a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
            adj[a].push(b);
            adj[b].push(a);
            planted_count += 1;
        }
    }
    let planted = ident_graph(&edges, 100);

    let z_base = closed_triad_motif_z(&base, 10, 10, 7).unwrap();
    let z_planted = closed_triad_motif_z(&planted, 10, 10, 7).unwrap();
    assert!(
        z_planted > z_base,
        "planted triangles must raise the z-score: {z_planted} vs {z_base}"
    );
}

/// Smallest enumerable instance: a 4-node graph where the sampled AUC at 1e5
/// rounds agrees with full probe-times-non-edge enumeration within 0.01.
#[test]
fn four_node_auc_matches_enumeration() {
    let g = ident_graph(&[(0, 1), (1, 2), (2, 3), (3, 0)], 4);
    let split = holdout(&g, 0.25, HoldoutMode::Random, 5).unwrap();
    let score =
        |u: usize, v: usize| structural_score(&g, StructuralMetricKind::Jaccard, u, v).unwrap();
    let exact = exact_auc(&split, score);
    let sampled = auc_with_scorer(&split, 100_000, 6, |u, v| Ok(score(u, v)))
        .unwrap()
        .auc;
    assert!(
        (sampled - exact).abs() <= 0.01,
        "sampled {sampled} vs exact {exact}"
    );
}

/// Sampled AUC converges to the enumerated value within the binomial bound.
#[test]
fn sampled_auc_tracks_exact_enumeration() {
    let edges = gnp_edges(12, 0.35, 99);
    let g = ident_graph(&edges, 12);
    let rounds = 4000;
    let bound = 3.0 * (0.25f64 / rounds as f64).sqrt();
    for seed in [1u64, 2, 3] {
        let split = holdout(&g, 0.2, HoldoutMode::Random, seed).unwrap();
        let score = |u: usize, v: usize| {
            structural_score(&g, StructuralMetricKind::AdamicAdar, u, v).unwrap()
        };
        let exact = exact_auc(&split, score);
        let sampled = auc_with_scorer(&split, rounds, seed ^ 0xabcd, |u, v| Ok(score(u, v)))
            .unwrap()
            .auc;
        assert!(
            (sampled - exact).abs() <= bound,
            "seed {seed}: sampled {sampled} vs exact {exact} (bound {bound})"
        );
    }
}
