//! Data-driven importance weights for the fusion scorer.
//!
//! The homophily weight of an attribute compares the number of same-value
//! edges against the configuration-model expectation, normalized by the
//! maximum attainable surplus:
//!
//! ```text
//! W(c)     = Σ_ij (A_ij − k_i k_j / 2m) δ(c_i, c_j)
//! W_max(c) = 2m  − Σ_ij (k_i k_j / 2m) δ(c_i, c_j)
//! weight   = W(c) / W_max(c)
//! ```
//!
//! Both sums run over all ordered pairs including the diagonal (`A_ii = 0`,
//! so only the expectation term picks up `k_i²/2m`); that convention makes a
//! single-valued attribute land on exactly 0/0, reported as weight 0. With
//! missing values, pairs with an undefined equality indicator drop out of
//! both sums and the leading `2m` shrinks to twice the count of edges whose
//! endpoints are both labeled.
//!
//! The structural weight defaults to the average local clustering
//! coefficient; the global clustering coefficient and a closed-triad motif
//! z-score against degree-preserving rewirings are available as alternative
//! estimators.

use std::collections::{BTreeMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::attributes::AttributeTable;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// How the structural weight is estimated.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructuralEstimator {
    /// Mean local clustering coefficient over all nodes (the default).
    #[default]
    AvgLocalCc,
    /// `3 · triangles / connected triples`.
    GlobalCc,
    /// Closed-triad count in standard deviations above a degree-preserving
    /// null model built by double-edge swaps.
    MotifZ {
        replicas: usize,
        swaps_per_edge: usize,
        seed: u64,
    },
}

/// Normalized homophily weight per attribute plus one structural weight.
/// Homophily weights never exceed 1 and may be negative (heterophily).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSet {
    pub attributes: BTreeMap<String, f64>,
    pub structural: f64,
    pub estimator: StructuralEstimator,
}

impl WeightSet {
    pub fn uniform<S: AsRef<str>>(attrs: &[S]) -> Self {
        WeightSet {
            attributes: attrs.iter().map(|a| (a.as_ref().to_owned(), 1.0)).collect(),
            structural: 1.0,
            estimator: StructuralEstimator::AvgLocalCc,
        }
    }
}

/// Structural weight under the chosen estimator.
pub fn estimate_structural_weight(g: &Graph, estimator: StructuralEstimator) -> Result<f64> {
    match estimator {
        StructuralEstimator::AvgLocalCc => Ok(structural_weight_avg_cc(g)),
        StructuralEstimator::GlobalCc => global_clustering(g),
        StructuralEstimator::MotifZ {
            replicas,
            swaps_per_edge,
            seed,
        } => closed_triad_motif_z(g, replicas, swaps_per_edge, seed),
    }
}

/// Computes the full weight set: one homophily weight per listed attribute
/// and the structural weight under the chosen estimator.
pub fn compute_weight_set<S: AsRef<str>>(
    g: &Graph,
    tab: &AttributeTable,
    attrs: &[S],
    estimator: StructuralEstimator,
) -> Result<WeightSet> {
    let mut attributes = BTreeMap::new();
    for attr in attrs {
        let name = attr.as_ref();
        attributes.insert(name.to_owned(), homophily_weight(g, tab, name)?);
    }
    let structural = estimate_structural_weight(g, estimator)?;
    Ok(WeightSet {
        attributes,
        structural,
        estimator,
    })
}

/// Normalized homophily weight `W(c) / W_max(c)` of one attribute.
///
/// Grouping nodes by value turns the double sum into per-value aggregates:
/// `Σ_{i,j same value} A_ij = 2 E_v` and `Σ_{i,j same value} k_i k_j = K_v²`
/// with `E_v` the within-value edge count and `K_v` the summed degree, which
/// brings the cost down to `O(n + m)`.
pub fn homophily_weight(g: &Graph, tab: &AttributeTable, attr_name: &str) -> Result<f64> {
    let attr = tab.attribute_index(attr_name)?;
    if g.node_count() != tab.node_count() {
        return Err(Error::InvalidParameter(
            "graph and attribute table disagree on node count".into(),
        ));
    }
    if tab.labeled_count_by_index(attr) == 0 {
        return Err(Error::UnweightableAttribute(attr_name.to_owned()));
    }
    let m = g.edge_count();
    if m == 0 {
        log::warn!("homophily weight of '{attr_name}' undefined on an edgeless graph; using 0");
        return Ok(0.0);
    }
    let two_m = 2.0 * m as f64;

    let value_count = (0..g.node_count())
        .filter_map(|i| tab.value_id(attr, i))
        .max()
        .map_or(0, |v| v as usize + 1);
    let mut degree_sum = vec![0.0f64; value_count];
    for node in 0..g.node_count() {
        if let Some(v) = tab.value_id(attr, node) {
            degree_sum[v as usize] += g.degree(node) as f64;
        }
    }
    let mut within_edges = vec![0usize; value_count];
    let mut labeled_edges = 0usize;
    for &(u, v) in g.edges() {
        if let (Some(a), Some(b)) = (tab.value_id(attr, u), tab.value_id(attr, v)) {
            labeled_edges += 1;
            if a == b {
                within_edges[a as usize] += 1;
            }
        }
    }

    let expectation: f64 = degree_sum.iter().map(|k| k * k / two_m).sum();
    let observed: f64 = within_edges.iter().map(|&e| 2.0 * e as f64).sum();
    let w = observed - expectation;
    let w_max = 2.0 * labeled_edges as f64 - expectation;
    if w_max <= 0.0 {
        log::warn!(
            "attribute '{attr_name}' has non-positive weight normalizer ({w_max:.3}); \
             treating it as uninformative (weight 0)"
        );
        return Ok(0.0);
    }
    Ok(w / w_max)
}

/// Per-node local clustering coefficients, computed in parallel but returned
/// in node order so downstream reductions stay deterministic.
fn local_clustering_all(g: &Graph) -> Vec<f64> {
    (0..g.node_count())
        .into_par_iter()
        .map(|i| {
            let k = g.degree(i);
            if k < 2 {
                0.0
            } else {
                2.0 * g.edges_among_neighbors(i) as f64 / (k as f64 * (k - 1) as f64)
            }
        })
        .collect()
}

/// Mean local clustering coefficient. The default averages over all `n`
/// nodes with degree-<2 nodes contributing 0; `exclude_low_degree` restricts
/// the average to nodes where the coefficient is defined (degree >= 2).
pub fn avg_local_clustering(g: &Graph, exclude_low_degree: bool) -> f64 {
    let per_node = local_clustering_all(g);
    let denominator = if exclude_low_degree {
        (0..g.node_count()).filter(|&i| g.degree(i) >= 2).count()
    } else {
        g.node_count()
    };
    if denominator == 0 {
        return 0.0;
    }
    let sum: f64 = if exclude_low_degree {
        (0..g.node_count())
            .filter(|&i| g.degree(i) >= 2)
            .map(|i| per_node[i])
            .sum()
    } else {
        per_node.iter().sum()
    };
    sum / denominator as f64
}

/// Mean local clustering coefficient over all `n` nodes; degree-<2 nodes
/// contribute 0.
pub fn structural_weight_avg_cc(g: &Graph) -> f64 {
    avg_local_clustering(g, false)
}

/// Triangles in the graph; `Σ_i e_i` counts each triangle once per corner.
pub fn triangle_count(g: &Graph) -> usize {
    let total: usize = (0..g.node_count())
        .into_par_iter()
        .map(|i| g.edges_among_neighbors(i))
        .sum();
    total / 3
}

/// Global clustering coefficient `3 · triangles / connected triples`.
pub fn global_clustering(g: &Graph) -> Result<f64> {
    if g.node_count() < 3 {
        return Err(Error::InvalidParameter(
            "global clustering needs at least 3 nodes".into(),
        ));
    }
    let triples: usize = (0..g.node_count())
        .map(|i| {
            let k = g.degree(i);
            k * (k.saturating_sub(1)) / 2
        })
        .sum();
    if triples == 0 {
        log::warn!("graph has no connected triples; global clustering reported as 0");
        return Ok(0.0);
    }
    let closed: usize = (0..g.node_count())
        .map(|i| g.edges_among_neighbors(i))
        .sum();
    Ok(closed as f64 / triples as f64)
}

/// Degree-preserving randomization by attempted double-edge swaps: picks two
/// edges, rewires them across, and rejects any swap that would create a
/// self-loop or duplicate edge. Attempts `swaps_per_edge * m` swaps. Edge
/// timestamps do not survive rewiring.
pub fn rewire_degree_preserving(g: &Graph, swaps_per_edge: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = g.edges().to_vec();
    let m = edges.len();
    if m < 2 {
        return Graph::from_parts(g.labels().to_vec(), edges, None).expect("valid parts");
    }
    let mut present: HashSet<(usize, usize)> = edges.iter().copied().collect();
    for _ in 0..swaps_per_edge.saturating_mul(m) {
        let i = rng.gen_range(0..m);
        let j = rng.gen_range(0..m);
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.gen_bool(0.5) {
            std::mem::swap(&mut c, &mut d);
        }
        // Proposed rewiring: (a, b), (c, d) -> (a, d), (c, b).
        if a == d || c == b {
            continue;
        }
        let e1 = (a.min(d), a.max(d));
        let e2 = (c.min(b), c.max(b));
        if present.contains(&e1) || present.contains(&e2) {
            continue;
        }
        present.remove(&edges[i]);
        present.remove(&edges[j]);
        present.insert(e1);
        present.insert(e2);
        edges[i] = e1;
        edges[j] = e2;
    }
    Graph::from_parts(g.labels().to_vec(), edges, None).expect("swaps preserve simplicity")
}

/// Closed-triad motif z-score: `(observed − mean_random) / sd_random` over
/// `replicas` degree-preserving rewirings, with replica `r` seeded as
/// `seed + r`. Replicas run in parallel. The spread is the sample standard
/// deviation; a zero spread (e.g. rigid graphs like K4) is an error.
pub fn closed_triad_motif_z(
    g: &Graph,
    replicas: usize,
    swaps_per_edge: usize,
    seed: u64,
) -> Result<f64> {
    if replicas < 2 {
        return Err(Error::InvalidParameter(
            "motif z needs at least 2 replicas".into(),
        ));
    }
    let observed = triangle_count(g) as f64;
    let counts: Vec<f64> = (0..replicas)
        .into_par_iter()
        .map(|r| {
            let rewired = rewire_degree_preserving(g, swaps_per_edge, seed.wrapping_add(r as u64));
            triangle_count(&rewired) as f64
        })
        .collect();
    let mean = counts.iter().sum::<f64>() / replicas as f64;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (replicas - 1) as f64;
    let sd = var.sqrt();
    if sd == 0.0 {
        return Err(Error::DegenerateNullModel);
    }
    Ok((observed - mean) / sd)
}
