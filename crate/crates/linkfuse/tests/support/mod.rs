//! Shared test fixtures: naive set-based reimplementations used as oracles,
//! random and planted graph generators, and exact AUC enumeration. The
//! oracles deliberately avoid the library's data layout so they only share
//! the mathematical definitions with the code under test.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use linkfuse::attributes::AttributeTable;
use linkfuse::evaluation::HoldoutSplit;
use linkfuse::graph::{Graph, NodeId};
use linkfuse::homophily::HomophilyMetricKind;
use linkfuse::structural::StructuralMetricKind;

/// Graph with identity labels, so dense ids equal the input ids.
pub fn ident_graph(edges: &[(usize, usize)], n: usize) -> Graph {
    let labels = (0..n).map(|i| i.to_string()).collect();
    Graph::from_parts(labels, edges.to_vec(), None).unwrap()
}

/// Single- or multi-column table from raw optional values.
pub fn table_from(n: usize, columns: Vec<(&str, Vec<Option<String>>)>) -> AttributeTable {
    let names = columns.iter().map(|(name, _)| (*name).to_owned()).collect();
    let cols = columns.into_iter().map(|(_, c)| c).collect();
    AttributeTable::from_columns(n, names, cols).unwrap()
}

/// Erdős–Rényi G(n, p) edge list.
pub fn gnp_edges(n: usize, p: f64, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    edges
}

/// Random categorical column with the given arity and missing probability.
pub fn random_column(n: usize, arity: usize, missing: f64, seed: u64) -> Vec<Option<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            if missing > 0.0 && rng.gen_bool(missing) {
                None
            } else {
                Some(format!("v{}", rng.gen_range(0..arity)))
            }
        })
        .collect()
}

// ------------------------------------------------------------- set oracle --

/// Adjacency-set view of a graph for naive reimplementations.
pub struct SetGraph {
    pub adj: Vec<HashSet<usize>>,
    pub m: usize,
}

impl SetGraph {
    pub fn of(g: &Graph) -> Self {
        let mut adj = vec![HashSet::new(); g.node_count()];
        for &(u, v) in g.edges() {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        SetGraph {
            adj,
            m: g.edge_count(),
        }
    }

    pub fn common(&self, u: usize, v: usize) -> HashSet<usize> {
        self.adj[u].intersection(&self.adj[v]).copied().collect()
    }
}

/// Naive structural metric evaluation using explicit set objects.
pub fn naive_structural(sg: &SetGraph, kind: StructuralMetricKind, u: usize, v: usize) -> f64 {
    let inter = sg.common(u, v);
    let i = inter.len() as f64;
    let ku = sg.adj[u].len() as f64;
    let kv = sg.adj[v].len() as f64;
    match kind {
        StructuralMetricKind::Jaccard => {
            let union: HashSet<usize> = sg.adj[u].union(&sg.adj[v]).copied().collect();
            if union.is_empty() {
                0.0
            } else {
                i / union.len() as f64
            }
        }
        StructuralMetricKind::Cosine => {
            if ku == 0.0 || kv == 0.0 {
                0.0
            } else {
                i / (ku * kv).sqrt()
            }
        }
        StructuralMetricKind::L1Norm => {
            if ku + kv == 0.0 {
                0.0
            } else {
                2.0 * i / (ku + kv)
            }
        }
        StructuralMetricKind::AdamicAdar => {
            let mut sorted: Vec<usize> = inter.into_iter().collect();
            sorted.sort_unstable();
            sorted
                .iter()
                .map(|&z| 1.0 / (sg.adj[z].len() as f64).ln())
                .sum()
        }
        StructuralMetricKind::Pmi => {
            if i == 0.0 {
                0.0
            } else {
                (2.0 * sg.m as f64 * i / (ku * kv)).ln()
            }
        }
        StructuralMetricKind::NetworkSimilarity => {
            let mut cu = sg.adj[u].clone();
            cu.insert(u);
            let mut cv = sg.adj[v].clone();
            cv.insert(v);
            let ci = cu.intersection(&cv).count() as f64;
            let un = cu.union(&cv).count() as f64;
            ci / un
        }
    }
}

/// Brute-force local clustering: check every neighbor pair for adjacency.
pub fn naive_local_clustering(sg: &SetGraph, i: usize) -> f64 {
    let nbrs: Vec<usize> = sg.adj[i].iter().copied().collect();
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let mut e = 0usize;
    for a in 0..k {
        for b in (a + 1)..k {
            if sg.adj[nbrs[a]].contains(&nbrs[b]) {
                e += 1;
            }
        }
    }
    2.0 * e as f64 / (k as f64 * (k - 1) as f64)
}

/// Exhaustive triangle and connected-triple enumeration.
pub fn naive_global_clustering(sg: &SetGraph) -> f64 {
    let n = sg.adj.len();
    let mut triangles = 0usize;
    for a in 0..n {
        for b in (a + 1)..n {
            if !sg.adj[a].contains(&b) {
                continue;
            }
            for c in (b + 1)..n {
                if sg.adj[b].contains(&c) && sg.adj[a].contains(&c) {
                    triangles += 1;
                }
            }
        }
    }
    let triples: usize = sg
        .adj
        .iter()
        .map(|nb| nb.len() * nb.len().saturating_sub(1) / 2)
        .sum();
    if triples == 0 {
        return 0.0;
    }
    (3 * triangles) as f64 / triples as f64
}

/// Double-loop evaluation of the homophily weight over all ordered pairs,
/// diagonal included, skipping pairs with a missing value. The leading term
/// of the normalizer is the labeled adjacency total.
pub fn naive_homophily_weight(
    sg: &SetGraph,
    values: &[Option<&str>],
) -> std::result::Result<f64, &'static str> {
    if values.iter().all(|v| v.is_none()) {
        return Err("all missing");
    }
    if sg.m == 0 {
        return Ok(0.0);
    }
    let n = sg.adj.len();
    let two_m = 2.0 * sg.m as f64;
    let mut w = 0.0;
    let mut expectation = 0.0;
    let mut labeled_adjacency = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (Some(a), Some(b)) = (values[i], values[j]) else {
                continue;
            };
            let a_ij = if i != j && sg.adj[i].contains(&j) {
                1.0
            } else {
                0.0
            };
            labeled_adjacency += a_ij;
            if a == b {
                let expect = sg.adj[i].len() as f64 * sg.adj[j].len() as f64 / two_m;
                w += a_ij - expect;
                expectation += expect;
            }
        }
    }
    let w_max = labeled_adjacency - expectation;
    if w_max <= 0.0 {
        Ok(0.0)
    } else {
        Ok(w / w_max)
    }
}

/// Naive homophily similarity with frequencies counted from the raw values.
pub fn naive_homophily(
    values: &[Option<&str>],
    kind: HomophilyMetricKind,
    x: usize,
    y: usize,
) -> Option<f64> {
    let vx = values[x]?;
    let vy = values[y]?;
    let mut freq: HashMap<&str, usize> = HashMap::new();
    for v in values.iter().flatten() {
        *freq.entry(v).or_insert(0) += 1;
    }
    let n = freq.values().sum::<usize>() as f64;
    let nk = freq.len() as f64;
    let fx = freq[vx] as f64;
    let fy = freq[vy] as f64;
    let matched = vx == vy;
    Some(match kind {
        HomophilyMetricKind::Overlap => {
            if matched {
                1.0
            } else {
                0.0
            }
        }
        HomophilyMetricKind::Eskin => {
            if matched {
                1.0
            } else {
                nk * nk / (nk * nk + 2.0)
            }
        }
        HomophilyMetricKind::Iof => {
            if matched {
                1.0
            } else {
                1.0 / (1.0 + fx.ln() * fy.ln())
            }
        }
        HomophilyMetricKind::Of => {
            if matched {
                1.0
            } else {
                1.0 / (1.0 + (n / fx).ln() * (n / fy).ln())
            }
        }
        HomophilyMetricKind::Goodall => {
            if matched {
                let p2 = if n < 2.0 {
                    0.0
                } else {
                    fx * (fx - 1.0) / (n * (n - 1.0))
                };
                1.0 - p2
            } else {
                0.0
            }
        }
    })
}

// ----------------------------------------------------------- exact AUC ----

/// Exact AUC by full enumeration: every probe edge against every pair absent
/// from the original graph.
pub fn exact_auc(split: &HoldoutSplit, score: impl Fn(NodeId, NodeId) -> f64) -> f64 {
    let n = split.train.node_count();
    let mut non_edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if !split.is_original_edge(u, v) {
                non_edges.push((u, v));
            }
        }
    }
    assert!(!non_edges.is_empty(), "graph must have non-edges");
    let mut total = 0.0;
    for &(pu, pv) in &split.probe {
        let sp = score(pu, pv);
        for &(qu, qv) in &non_edges {
            let sq = score(qu, qv);
            if sp > sq {
                total += 1.0;
            } else if sp == sq {
                total += 0.5;
            }
        }
    }
    total / (split.probe.len() * non_edges.len()) as f64
}

// ------------------------------------------------------ planted graphs ----

/// Two equal blocks with in-block edge bias, then triadic closure: randomly
/// chosen wedges are closed into triangles. Returns the graph and the block
/// attribute column.
pub fn planted_fusion_graph(
    n: usize,
    base_edges: usize,
    p_in: f64,
    closures: usize,
    seed: u64,
) -> (Graph, Vec<Option<String>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = n / 2;
    let block = |v: usize| usize::from(v >= half);
    let mut present: HashSet<(usize, usize)> = HashSet::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let add = |u: usize,
               v: usize,
               present: &mut HashSet<(usize, usize)>,
               edges: &mut Vec<(usize, usize)>| {
        if u == v {
            return false;
        }
        let key = (u.min(v), u.max(v));
        if present.insert(key) {
            edges.push(key);
            true
        } else {
            false
        }
    };
    while edges.len() < base_edges {
        let u = rng.gen_range(0..n);
        let v = if rng.gen_bool(p_in) {
            // Same block as u.
            rng.gen_range(0..half) + if u < half { 0 } else { half }
        } else {
            rng.gen_range(0..half) + if u < half { half } else { 0 }
        };
        add(u, v, &mut present, &mut edges);
    }
    // Close random wedges: pick a node with two neighbors and connect them.
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    let mut done = 0usize;
    let mut attempts = 0usize;
    while done < closures && attempts < closures * 50 {
        attempts += 1;
        let c = rng.gen_range(0..n);
        if adj[c].len() < 2 {
            continue;
        }
        let a = adj[c][rng.gen_range(0..adj[c].len())];
        let b = adj[c][rng.gen_range(0..adj[c].len())];
        if a != b && add(a, b, &mut present, &mut edges) {
            adj[a].push(b);
            adj[b].push(a);
            done += 1;
        }
    }
    let g = ident_graph(&edges, n);
    let column = (0..n)
        .map(|v| {
            Some(if block(v) == 0 {
                "a".to_owned()
            } else {
                "b".to_owned()
            })
        })
        .collect();
    (g, column)
}

/// Two-block graph whose attribute matches the block with the given
/// consistency, for imputation experiments. Returns the graph, the full
/// ground-truth column and a copy with `hidden_fraction` of the entries
/// blanked out.
pub fn planted_imputation_instance(
    n: usize,
    base_edges: usize,
    p_in: f64,
    consistency: f64,
    hidden_fraction: f64,
    seed: u64,
) -> (Graph, Vec<Option<String>>, Vec<Option<String>>) {
    let (g, truth_blocks) = planted_fusion_graph(n, base_edges, p_in, 0, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let truth: Vec<Option<String>> = truth_blocks
        .iter()
        .map(|v| {
            let val = v.clone().unwrap();
            if rng.gen_bool(consistency) {
                Some(val)
            } else {
                Some(if val == "a" {
                    "b".to_owned()
                } else {
                    "a".to_owned()
                })
            }
        })
        .collect();
    let visible: Vec<Option<String>> = truth
        .iter()
        .map(|v| {
            if rng.gen_bool(hidden_fraction) {
                None
            } else {
                v.clone()
            }
        })
        .collect();
    (g, truth, visible)
}
