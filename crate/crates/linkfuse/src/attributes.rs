//! Categorical node attributes with explicit missing markers.
//!
//! Stores per-node values for a set of named attributes, maintains the value
//! frequencies the occurrence-frequency similarity measures need, and
//! implements majority-vote imputation gated by minimum-vote and vote-share
//! thresholds, with a grid search that tunes those thresholds on a hidden
//! subset of the labeled nodes.

use std::collections::HashMap;

use rand::seq::index::sample as index_sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

/// Compact per-attribute value id.
pub type ValueId = u32;

#[derive(Debug, Clone, PartialEq)]
struct Column {
    name: String,
    value_names: Vec<String>,
    value_index: HashMap<String, ValueId>,
    values: Vec<Option<ValueId>>,
    /// Occurrences of each value over non-missing nodes.
    counts: Vec<usize>,
    /// Non-missing entries (the `N` of the frequency-based measures).
    labeled: usize,
}

impl Column {
    fn recount(&mut self) {
        self.counts = vec![0; self.value_names.len()];
        self.labeled = 0;
        for v in self.values.iter().flatten() {
            self.counts[*v as usize] += 1;
            self.labeled += 1;
        }
    }
}

/// Per-node categorical attribute storage. Value frequencies always reflect
/// the current table state; imputation returns a new table.
#[derive(Debug, Clone, PartialEq)]
pub struct AttributeTable {
    node_count: usize,
    columns: Vec<Column>,
    name_index: HashMap<String, usize>,
}

impl AttributeTable {
    /// Builds a table from one column of optional values per attribute.
    /// `columns[k][i]` is the value of attribute `k` on node `i`.
    pub fn from_columns(
        node_count: usize,
        names: Vec<String>,
        columns: Vec<Vec<Option<String>>>,
    ) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::InvalidParameter(
                "attribute names and columns must align".into(),
            ));
        }
        let mut cols = Vec::with_capacity(names.len());
        let mut name_index = HashMap::new();
        for (k, (name, raw)) in names.into_iter().zip(columns).enumerate() {
            if raw.len() != node_count {
                return Err(Error::InvalidParameter(format!(
                    "column '{name}' has {} entries, expected {node_count}",
                    raw.len()
                )));
            }
            if name_index.insert(name.clone(), k).is_some() {
                return Err(Error::InvalidParameter(format!(
                    "duplicate attribute '{name}'"
                )));
            }
            let mut col = Column {
                name,
                value_names: Vec::new(),
                value_index: HashMap::new(),
                values: Vec::with_capacity(node_count),
                counts: Vec::new(),
                labeled: 0,
            };
            for cell in raw {
                let id = cell.map(|text| match col.value_index.get(&text) {
                    Some(&id) => id,
                    None => {
                        let id = col.value_names.len() as ValueId;
                        col.value_index.insert(text.clone(), id);
                        col.value_names.push(text);
                        id
                    }
                });
                col.values.push(id);
            }
            col.recount();
            cols.push(col);
        }
        Ok(Self {
            node_count,
            columns: cols,
            name_index,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn attribute_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn attribute_index(&self, name: &str) -> Result<usize> {
        self.name_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAttribute(name.to_owned()))
    }

    pub(crate) fn value_id(&self, attr: usize, node: NodeId) -> Option<ValueId> {
        self.columns[attr].values[node]
    }

    /// Value text for a node, `None` when missing.
    pub fn value(&self, attr_name: &str, node: NodeId) -> Result<Option<&str>> {
        let k = self.attribute_index(attr_name)?;
        let col = &self.columns[k];
        Ok(col.values[node].map(|v| col.value_names[v as usize].as_str()))
    }

    /// Occurrence count of a value id over non-missing nodes.
    pub(crate) fn frequency(&self, attr: usize, value: ValueId) -> usize {
        self.columns[attr].counts[value as usize]
    }

    /// Non-missing entry count for an attribute.
    pub fn labeled_count(&self, attr_name: &str) -> Result<usize> {
        Ok(self.columns[self.attribute_index(attr_name)?].labeled)
    }

    pub(crate) fn labeled_count_by_index(&self, attr: usize) -> usize {
        self.columns[attr].labeled
    }

    /// Number of distinct values currently observed for an attribute.
    pub fn domain_size(&self, attr_name: &str) -> Result<usize> {
        Ok(self.domain_size_by_index(self.attribute_index(attr_name)?))
    }

    pub(crate) fn domain_size_by_index(&self, attr: usize) -> usize {
        self.columns[attr].counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn missing_count(&self, attr_name: &str) -> Result<usize> {
        let k = self.attribute_index(attr_name)?;
        Ok(self.node_count - self.columns[k].labeled)
    }

    /// Equality indicator for a node pair: `Some(true)` when both values are
    /// present and equal, `Some(false)` when both present and different,
    /// `None` when either is missing.
    pub fn delta(&self, attr_name: &str, i: NodeId, j: NodeId) -> Result<Option<bool>> {
        let k = self.attribute_index(attr_name)?;
        Ok(self.delta_by_index(k, i, j))
    }

    pub(crate) fn delta_by_index(&self, attr: usize, i: NodeId, j: NodeId) -> Option<bool> {
        match (self.columns[attr].values[i], self.columns[attr].values[j]) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        }
    }

    /// One synchronous majority-vote pass over the missing nodes of `attr`.
    ///
    /// Every neighbor holding a value casts one vote for it, read from the
    /// pre-pass table, so nodes filled in this pass never vote in it. The top
    /// value (ties broken by lexicographically smallest value text) is
    /// assigned iff it received at least `f_min` votes and at least a `t_min`
    /// share of the votes cast.
    pub fn impute(
        &self,
        graph: &Graph,
        attr_name: &str,
        policy: ImputationPolicy,
    ) -> Result<(AttributeTable, ImputationReport)> {
        policy.validate()?;
        let k = self.attribute_index(attr_name)?;
        if graph.node_count() != self.node_count {
            return Err(Error::InvalidParameter(
                "graph and attribute table disagree on node count".into(),
            ));
        }
        let col = &self.columns[k];
        let missing_before = self.node_count - col.labeled;

        let mut assignments: Vec<(NodeId, ValueId)> = Vec::new();
        let mut tally: Vec<usize> = vec![0; col.value_names.len()];
        for node in 0..self.node_count {
            if col.values[node].is_some() {
                continue;
            }
            let mut total = 0usize;
            let mut used: Vec<ValueId> = Vec::new();
            for &nb in graph.neighbors(node) {
                if let Some(v) = col.values[nb] {
                    if tally[v as usize] == 0 {
                        used.push(v);
                    }
                    tally[v as usize] += 1;
                    total += 1;
                }
            }
            if total > 0 {
                let &top = used
                    .iter()
                    .max_by(|&&a, &&b| {
                        tally[a as usize].cmp(&tally[b as usize]).then_with(|| {
                            col.value_names[b as usize].cmp(&col.value_names[a as usize])
                        })
                    })
                    .unwrap();
                let votes = tally[top as usize];
                if votes >= policy.f_min && votes as f64 / total as f64 >= policy.t_min {
                    assignments.push((node, top));
                }
            }
            for v in used {
                tally[v as usize] = 0;
            }
        }

        let mut next = self.clone();
        for &(node, value) in &assignments {
            next.columns[k].values[node] = Some(value);
        }
        next.columns[k].recount();

        let report = ImputationReport {
            attribute: attr_name.to_owned(),
            policy,
            missing_before,
            predicted: assignments.len(),
            remaining_missing: missing_before - assignments.len(),
            precision: None,
        };
        Ok((next, report))
    }

    /// Runs up to `passes` imputation passes, stopping early once a pass
    /// predicts nothing. Reports the cumulative prediction count.
    pub fn impute_repeated(
        &self,
        graph: &Graph,
        attr_name: &str,
        policy: ImputationPolicy,
        passes: usize,
    ) -> Result<(AttributeTable, ImputationReport)> {
        if passes == 0 {
            return Err(Error::InvalidParameter("passes must be >= 1".into()));
        }
        let (mut table, mut report) = self.impute(graph, attr_name, policy)?;
        for _ in 1..passes {
            if report.predicted == report.missing_before {
                break;
            }
            let (next, pass) = table.impute(graph, attr_name, policy)?;
            if pass.predicted == 0 {
                break;
            }
            table = next;
            report.predicted += pass.predicted;
            report.remaining_missing = pass.remaining_missing;
        }
        Ok((table, report))
    }

    /// Grid-searches `(f, t)` by hiding a random share of the labeled nodes,
    /// imputing, and scoring each cell with `precision * ln(correct)`.
    /// Ties break toward higher precision, then smaller `f`, then larger `t`.
    pub fn tune_thresholds(
        &self,
        graph: &Graph,
        attr_name: &str,
        f_grid: &[usize],
        t_grid: &[f64],
        holdout_fraction: f64,
        seed: u64,
    ) -> Result<(ImputationPolicy, Vec<TuneScore>)> {
        let k = self.attribute_index(attr_name)?;
        if !(0.0..1.0).contains(&holdout_fraction) || holdout_fraction <= 0.0 {
            return Err(Error::InvalidParameter(
                "holdout_fraction must lie in (0, 1)".into(),
            ));
        }
        if f_grid.is_empty() || t_grid.is_empty() {
            return Err(Error::InvalidParameter("empty tuning grid".into()));
        }
        let labeled: Vec<NodeId> = (0..self.node_count)
            .filter(|&i| self.columns[k].values[i].is_some())
            .collect();
        let hide = ((labeled.len() as f64 * holdout_fraction - 1e-9).ceil() as usize).max(1);
        if labeled.len() < 2 || hide >= labeled.len() {
            return Err(Error::InvalidParameter(format!(
                "attribute '{attr_name}' has too few labeled nodes to hide {holdout_fraction} of them"
            )));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hidden: Vec<NodeId> = index_sample(&mut rng, labeled.len(), hide)
            .iter()
            .map(|i| labeled[i])
            .collect();

        let mut masked = self.clone();
        for &node in &hidden {
            masked.columns[k].values[node] = None;
        }
        masked.columns[k].recount();

        let mut scores = Vec::with_capacity(f_grid.len() * t_grid.len());
        let mut best: Option<(f64, f64, usize, f64)> = None; // (objective, precision, f, t)
        let mut best_policy = None;
        for &f in f_grid {
            for &t in t_grid {
                let policy = ImputationPolicy { f_min: f, t_min: t };
                policy.validate()?;
                let (filled, _) = masked.impute(graph, attr_name, policy)?;
                let mut predicted = 0usize;
                let mut correct = 0usize;
                for &node in &hidden {
                    if let Some(v) = filled.columns[k].values[node] {
                        predicted += 1;
                        if self.columns[k].values[node] == Some(v) {
                            correct += 1;
                        }
                    }
                }
                let precision = (predicted > 0).then(|| correct as f64 / predicted as f64);
                let objective = match (precision, correct) {
                    (Some(p), c) if c >= 1 => Some(tuning_objective(p, c)),
                    _ => None,
                };
                scores.push(TuneScore {
                    f_min: f,
                    t_min: t,
                    predicted,
                    correct,
                    precision,
                    objective,
                });
                if let (Some(l), Some(p)) = (objective, precision) {
                    let better = match best {
                        None => true,
                        Some((bl, bp, bf, bt)) => {
                            (l, p, std::cmp::Reverse(f), t) > (bl, bp, std::cmp::Reverse(bf), bt)
                        }
                    };
                    if better {
                        best = Some((l, p, f, t));
                        best_policy = Some(policy);
                    }
                }
            }
        }
        best_policy
            .map(|p| (p, scores))
            .ok_or(Error::NoViablePolicy)
    }
}

/// `L(f, t) = precision * ln(correct)`: breadth-discounted precision, so a
/// single correct guess scores zero.
pub fn tuning_objective(precision: f64, correct: usize) -> f64 {
    precision * (correct as f64).ln()
}

/// Vote thresholds for majority-vote imputation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImputationPolicy {
    /// Minimum number of votes the winning value must collect.
    pub f_min: usize,
    /// Minimum share of cast votes the winning value must hold, in `(0, 1]`.
    pub t_min: f64,
}

impl ImputationPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.f_min < 1 {
            return Err(Error::InvalidParameter("f_min must be >= 1".into()));
        }
        if !(self.t_min > 0.0 && self.t_min <= 1.0) {
            return Err(Error::InvalidParameter("t_min must lie in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Outcome of an imputation run on one attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImputationReport {
    pub attribute: String,
    pub policy: ImputationPolicy,
    pub missing_before: usize,
    pub predicted: usize,
    pub remaining_missing: usize,
    /// Fraction of predictions that matched the hidden truth, when measured
    /// against a labeled holdout.
    pub precision: Option<f64>,
}

/// One grid cell of a threshold tuning run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneScore {
    pub f_min: usize,
    pub t_min: f64,
    pub predicted: usize,
    pub correct: usize,
    pub precision: Option<f64>,
    pub objective: Option<f64>,
}
