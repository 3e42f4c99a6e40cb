//! Weighted fusion of homophily and structural similarity.
//!
//! A pair score is the weight-normalized sum of the included terms: one term
//! per configured attribute (1 on a value match, the configured homophily
//! similarity on a mismatch) plus one structural term. With a single
//! attribute this reduces to the classic two-branch form
//! `(w_h·h + w_s·s) / (w_h + w_s)`; with every weight set to 1 it becomes
//! the plain mean that the simple-aggregation baseline uses. Negative
//! homophily weights (heterophily) are accepted; only a non-positive
//! denominator is an error, so a dominant negative weight cannot silently
//! flip the ranking order.

use serde::{Deserialize, Serialize};

use crate::attributes::AttributeTable;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};
use crate::homophily::{homophily_score_by_index, HomophilyMetricKind};
use crate::structural::{structural_score, StructuralMetricKind};
use crate::weights::{
    estimate_structural_weight, homophily_weight, StructuralEstimator, WeightSet,
};

/// Treatment of an attribute term whose similarity is undefined because a
/// value is missing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MissingPolicy {
    /// Drop the term from numerator and denominator (renormalize).
    #[default]
    SkipTerm,
    /// Score the term 0 but keep its weight in the denominator.
    Zero,
}

/// Where the weights come from when a scorer is resolved.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum WeightSource {
    Computed { estimator: StructuralEstimator },
    Supplied { weights: WeightSet },
    Uniform,
}

/// Full description of a pair scorer: metric choices, attribute subset,
/// weight source and missing-value handling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScorerConfig {
    /// `None` drops the structural term entirely (homophily-only scoring).
    pub structural: Option<StructuralMetricKind>,
    pub homophily: HomophilyMetricKind,
    pub attributes: Vec<String>,
    pub weights: WeightSource,
    pub missing_policy: MissingPolicy,
}

impl Default for ScorerConfig {
    fn default() -> Self {
        ScorerConfig {
            structural: Some(StructuralMetricKind::NetworkSimilarity),
            homophily: HomophilyMetricKind::Of,
            attributes: Vec::new(),
            weights: WeightSource::Computed {
                estimator: StructuralEstimator::AvgLocalCc,
            },
            missing_policy: MissingPolicy::SkipTerm,
        }
    }
}

impl ScorerConfig {
    /// Structural-only configuration with the given metric.
    pub fn structural_only(kind: StructuralMetricKind) -> Self {
        ScorerConfig {
            structural: Some(kind),
            ..Default::default()
        }
    }

    /// Homophily-only configuration over the given attributes.
    pub fn homophily_only<S: AsRef<str>>(kind: HomophilyMetricKind, attrs: &[S]) -> Self {
        ScorerConfig {
            structural: None,
            homophily: kind,
            attributes: attrs.iter().map(|a| a.as_ref().to_owned()).collect(),
            ..Default::default()
        }
    }

    /// Binds the configuration to a graph and table, resolving weights. Call
    /// once and reuse the scorer when scoring many pairs.
    pub fn resolve<'a>(&self, g: &'a Graph, tab: &'a AttributeTable) -> Result<PairScorer<'a>> {
        if self.structural.is_none() && self.attributes.is_empty() {
            return Err(Error::DegenerateScorer(
                "no similarity terms configured".into(),
            ));
        }
        let mut attr_terms = Vec::with_capacity(self.attributes.len());
        for name in &self.attributes {
            let index = tab.attribute_index(name)?;
            let weight = match &self.weights {
                WeightSource::Computed { .. } => homophily_weight(g, tab, name)?,
                WeightSource::Supplied { weights } => *weights
                    .attributes
                    .get(name)
                    .ok_or_else(|| Error::MissingWeight(name.clone()))?,
                WeightSource::Uniform => 1.0,
            };
            attr_terms.push(AttrTerm { index, weight });
        }
        let structural = match self.structural {
            None => None,
            Some(kind) => {
                let weight = match &self.weights {
                    WeightSource::Computed { estimator } => {
                        estimate_structural_weight(g, *estimator)?
                    }
                    WeightSource::Supplied { weights } => weights.structural,
                    WeightSource::Uniform => 1.0,
                };
                Some((kind, weight))
            }
        };
        let weights = WeightSet {
            attributes: self
                .attributes
                .iter()
                .cloned()
                .zip(attr_terms.iter().map(|t| t.weight))
                .collect(),
            structural: structural.map_or(0.0, |(_, w)| w),
            estimator: match &self.weights {
                WeightSource::Computed { estimator } => *estimator,
                WeightSource::Supplied { weights } => weights.estimator,
                WeightSource::Uniform => StructuralEstimator::AvgLocalCc,
            },
        };
        Ok(PairScorer {
            graph: g,
            table: tab,
            structural,
            homophily: self.homophily,
            attr_terms,
            missing_policy: self.missing_policy,
            weights,
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct AttrTerm {
    index: usize,
    weight: f64,
}

/// A scorer bound to one graph and table with resolved weights. Scoring is
/// read-only, so one scorer can serve many threads.
pub struct PairScorer<'a> {
    graph: &'a Graph,
    table: &'a AttributeTable,
    structural: Option<(StructuralMetricKind, f64)>,
    homophily: HomophilyMetricKind,
    attr_terms: Vec<AttrTerm>,
    missing_policy: MissingPolicy,
    weights: WeightSet,
}

impl PairScorer<'_> {
    /// The weight set this scorer resolved (computed, supplied or uniform).
    pub fn weight_set(&self) -> &WeightSet {
        &self.weights
    }

    pub fn score(&self, x: NodeId, y: NodeId) -> Result<f64> {
        self.graph.check_node(x)?;
        self.graph.check_node(y)?;
        if x == y {
            return Err(Error::InvalidParameter(
                "score requires distinct nodes".into(),
            ));
        }
        let mut numerator = 0.0;
        let mut denominator = 0.0;
        for term in &self.attr_terms {
            match homophily_score_by_index(self.table, self.homophily, term.index, x, y) {
                Some(h) => {
                    numerator += term.weight * h;
                    denominator += term.weight;
                }
                None => match self.missing_policy {
                    MissingPolicy::SkipTerm => {}
                    MissingPolicy::Zero => denominator += term.weight,
                },
            }
        }
        if let Some((kind, weight)) = self.structural {
            numerator += weight * structural_score(self.graph, kind, x, y)?;
            denominator += weight;
        }
        if denominator <= 0.0 {
            return Err(Error::DegenerateScorer(format!(
                "non-positive weight denominator {denominator} for pair ({x}, {y})"
            )));
        }
        Ok(numerator / denominator)
    }
}

/// One-shot scoring of a pair under a configuration. Resolves weights on
/// every call; prefer [`ScorerConfig::resolve`] in loops.
pub fn score_pair(
    g: &Graph,
    tab: &AttributeTable,
    cfg: &ScorerConfig,
    x: NodeId,
    y: NodeId,
) -> Result<f64> {
    cfg.resolve(g, tab)?.score(x, y)
}

/// Like [`score_pair`] but with every included weight forced to 1 (the
/// simple-aggregation baseline).
pub fn score_pair_uniform(
    g: &Graph,
    tab: &AttributeTable,
    cfg: &ScorerConfig,
    x: NodeId,
    y: NodeId,
) -> Result<f64> {
    let uniform = ScorerConfig {
        weights: WeightSource::Uniform,
        ..cfg.clone()
    };
    uniform.resolve(g, tab)?.score(x, y)
}
