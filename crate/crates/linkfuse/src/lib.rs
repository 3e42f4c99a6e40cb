//! Link prediction in attributed social graphs.
//!
//! New edges tend to appear between nodes that are close in the graph and
//! between nodes that are alike, and how much each force matters differs per
//! network. This crate measures both from the observed graph — a normalized
//! assortativity weight per categorical attribute and a clustering-based
//! structural weight — and fuses a neighborhood similarity metric with
//! per-attribute categorical similarity under those weights. It also ships
//! the surrounding machinery: BFS subgraph sampling, majority-vote
//! imputation of missing attribute values with tunable acceptance
//! thresholds, and a repeated-holdout sampled-AUC evaluation protocol.

#![forbid(unsafe_code)]

pub mod aggregate;
pub mod attributes;
pub mod error;
pub mod evaluation;
pub mod graph;
pub mod homophily;
pub mod io;
pub mod structural;
pub mod weights;

pub use aggregate::{score_pair, score_pair_uniform, MissingPolicy, ScorerConfig, WeightSource};
pub use attributes::{AttributeTable, ImputationPolicy, ImputationReport};
pub use error::{Error, Result};
pub use evaluation::{evaluate, holdout, EvalParams, EvaluationReport, HoldoutMode, HoldoutSplit};
pub use graph::{BuildReport, Graph, GraphBuilder, NodeId};
pub use homophily::{homophily_score, HomophilyMetricKind};
pub use structural::{structural_score, StructuralMetricKind};
pub use weights::{compute_weight_set, StructuralEstimator, WeightSet};
