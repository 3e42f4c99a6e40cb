//! Neighborhood-based structural similarity.
//!
//! All scores derive from the neighbor sets of the query pair, so nothing
//! beyond the two adjacency rows (plus degrees and the global edge count) is
//! touched. With `I = |Γ(u) ∩ Γ(v)|` and `U = |Γ(u) ∪ Γ(v)|`:
//!
//! - jaccard:       `I / U`
//! - cosine:        `I / sqrt(k_u * k_v)`
//! - l1-normalized: `2I / (k_u + k_v)` (Dice form of 1 − normalized L1
//!   distance between the binary adjacency rows)
//! - adamic-adar:   `Σ_z 1 / ln(k_z)` over common neighbors `z`
//! - pmi:           `ln(2m * I / (k_u * k_v))` when `I > 0`, else 0
//! - network similarity: Jaccard over closed neighborhoods `Γ(x) ∪ {x}`,
//!   which additionally credits direct adjacency

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{merge_intersection, Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StructuralMetricKind {
    Jaccard,
    Cosine,
    L1Norm,
    AdamicAdar,
    Pmi,
    NetworkSimilarity,
}

impl StructuralMetricKind {
    pub const ALL: [StructuralMetricKind; 6] = [
        StructuralMetricKind::Jaccard,
        StructuralMetricKind::Cosine,
        StructuralMetricKind::L1Norm,
        StructuralMetricKind::AdamicAdar,
        StructuralMetricKind::Pmi,
        StructuralMetricKind::NetworkSimilarity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructuralMetricKind::Jaccard => "jaccard",
            StructuralMetricKind::Cosine => "cosine",
            StructuralMetricKind::L1Norm => "l1",
            StructuralMetricKind::AdamicAdar => "adamic-adar",
            StructuralMetricKind::Pmi => "pmi",
            StructuralMetricKind::NetworkSimilarity => "ns",
        }
    }
}

impl std::str::FromStr for StructuralMetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jaccard" => Ok(StructuralMetricKind::Jaccard),
            "cosine" => Ok(StructuralMetricKind::Cosine),
            "l1" => Ok(StructuralMetricKind::L1Norm),
            "adamic-adar" => Ok(StructuralMetricKind::AdamicAdar),
            "pmi" => Ok(StructuralMetricKind::Pmi),
            "ns" => Ok(StructuralMetricKind::NetworkSimilarity),
            other => Err(Error::InvalidParameter(format!(
                "unknown structural metric '{other}' (expected jaccard|cosine|l1|adamic-adar|pmi|ns)"
            ))),
        }
    }
}

/// Scores a distinct node pair under the chosen metric. Adjacent pairs are
/// legal queries; evaluation only ever asks about non-edges.
pub fn structural_score(
    g: &Graph,
    kind: StructuralMetricKind,
    u: NodeId,
    v: NodeId,
) -> Result<f64> {
    g.check_node(u)?;
    g.check_node(v)?;
    if u == v {
        return Err(Error::InvalidParameter(
            "structural_score requires distinct nodes".into(),
        ));
    }
    let ku = g.degree(u);
    let kv = g.degree(v);
    let score = match kind {
        StructuralMetricKind::Jaccard => {
            let i = g.common_neighbor_count(u, v);
            let union = ku + kv - i;
            if union == 0 {
                0.0
            } else {
                i as f64 / union as f64
            }
        }
        StructuralMetricKind::Cosine => {
            if ku == 0 || kv == 0 {
                0.0
            } else {
                g.common_neighbor_count(u, v) as f64 / ((ku * kv) as f64).sqrt()
            }
        }
        StructuralMetricKind::L1Norm => {
            if ku + kv == 0 {
                0.0
            } else {
                2.0 * g.common_neighbor_count(u, v) as f64 / (ku + kv) as f64
            }
        }
        StructuralMetricKind::AdamicAdar => {
            // Every common neighbor touches both u and v, so its degree is
            // at least 2 and ln never vanishes.
            let mut sum = 0.0;
            merge_intersection(g.neighbors(u), g.neighbors(v), |z| {
                sum += 1.0 / (g.degree(z) as f64).ln();
            });
            sum
        }
        StructuralMetricKind::Pmi => {
            let i = g.common_neighbor_count(u, v);
            if i == 0 {
                0.0
            } else {
                ((2 * g.edge_count() * i) as f64 / (ku * kv) as f64).ln()
            }
        }
        StructuralMetricKind::NetworkSimilarity => {
            let i = g.common_neighbor_count(u, v) + if g.has_edge(u, v) { 2 } else { 0 };
            let union = (ku + 1) + (kv + 1) - i;
            i as f64 / union as f64
        }
    };
    Ok(score)
}
