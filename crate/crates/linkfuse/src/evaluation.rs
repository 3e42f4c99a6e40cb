//! Holdout evaluation with sampled AUC.
//!
//! One trial removes a fraction of the edges (uniformly, or the most recent
//! ones when timestamps exist), recomputes weights on the residual graph,
//! then repeatedly draws one removed (probe) edge and one never-existing
//! pair, scoring both on the residual graph. The AUC is
//! `(wins + 0.5 * ties) / rounds` where a win means the probe edge outscored
//! the non-edge and a tie means exact score equality. An evaluation averages
//! a configured number of independent trials; everything is driven by seeds
//! derived from one master seed, so reports are bit-reproducible.

use std::collections::HashSet;

use rand::seq::index::sample as index_sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregate::ScorerConfig;
use crate::attributes::AttributeTable;
use crate::error::{Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HoldoutMode {
    Random,
    Latest,
}

impl HoldoutMode {
    /// Latest-edge holdout when timestamps are present, random otherwise.
    pub fn auto_for(g: &Graph) -> Self {
        if g.has_timestamps() {
            HoldoutMode::Latest
        } else {
            HoldoutMode::Random
        }
    }
}

/// A train/probe split. Probe edges were removed from the original graph;
/// the non-edge universe is every pair absent from the original graph, i.e.
/// absent from the train graph and not a probe edge.
#[derive(Debug, Clone)]
pub struct HoldoutSplit {
    pub train: Graph,
    pub probe: Vec<(NodeId, NodeId)>,
    pub mode: HoldoutMode,
    probe_set: HashSet<(NodeId, NodeId)>,
}

impl HoldoutSplit {
    pub fn is_original_edge(&self, u: NodeId, v: NodeId) -> bool {
        let key = (u.min(v), u.max(v));
        self.train.has_edge(u, v) || self.probe_set.contains(&key)
    }

    fn original_edge_count(&self) -> usize {
        self.train.edge_count() + self.probe.len()
    }
}

/// Removes `ceil(fraction * m)` edges. Random mode samples uniformly without
/// replacement; latest mode removes the most recent edges (ties broken by
/// input order, later lines counting as more recent). The train graph keeps
/// all nodes, so isolated nodes are possible.
pub fn holdout(g: &Graph, fraction: f64, mode: HoldoutMode, seed: u64) -> Result<HoldoutSplit> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter(
            "holdout fraction must lie in (0, 1)".into(),
        ));
    }
    let m = g.edge_count();
    if fraction * (m as f64) < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "holdout fraction {fraction} removes less than one of {m} edges"
        )));
    }
    let remove = ((fraction * m as f64) - 1e-9).ceil() as usize;
    let remove = remove.clamp(1, m - 1);

    let removed_indices: HashSet<usize> = match mode {
        HoldoutMode::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            index_sample(&mut rng, m, remove).iter().collect()
        }
        HoldoutMode::Latest => {
            let ts = g.timestamps().ok_or(Error::MissingTimestamps)?;
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by_key(|&i| (ts[i], i));
            order[m - remove..].iter().copied().collect()
        }
    };

    let mut probe = Vec::with_capacity(remove);
    let mut train_edges = Vec::with_capacity(m - remove);
    let mut train_ts = g.timestamps().map(|_| Vec::with_capacity(m - remove));
    for (i, &e) in g.edges().iter().enumerate() {
        if removed_indices.contains(&i) {
            probe.push(e);
        } else {
            train_edges.push(e);
            if let (Some(out), Some(ts)) = (train_ts.as_mut(), g.timestamps()) {
                out.push(ts[i]);
            }
        }
    }
    let train = Graph::from_parts(g.labels().to_vec(), train_edges, train_ts)?;
    let probe_set = probe.iter().copied().collect();
    Ok(HoldoutSplit {
        train,
        probe,
        mode,
        probe_set,
    })
}

/// Draws a uniformly random pair that is not an edge of the original graph.
/// Rejection sampling; the caller must ensure a non-edge exists.
pub fn sample_non_edge(split: &HoldoutSplit, rng: &mut impl Rng) -> (NodeId, NodeId) {
    let n = split.train.node_count();
    loop {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v {
            continue;
        }
        let pair = (u.min(v), u.max(v));
        if !split.is_original_edge(pair.0, pair.1) {
            return pair;
        }
    }
}

/// Counts from one AUC trial: `wins` probe-over-non-edge comparisons and
/// `ties` exact score equalities out of `rounds` draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AucOutcome {
    pub auc: f64,
    pub rounds: usize,
    pub wins: usize,
    pub ties: usize,
}

/// Runs the sampled-AUC comparison rounds with an arbitrary scoring
/// function. Each round independently draws one probe edge and one non-edge,
/// both uniformly with replacement.
pub fn auc_with_scorer(
    split: &HoldoutSplit,
    rounds: usize,
    seed: u64,
    score: impl Fn(NodeId, NodeId) -> Result<f64>,
) -> Result<AucOutcome> {
    if rounds == 0 {
        return Err(Error::InvalidParameter("rounds must be >= 1".into()));
    }
    if split.probe.is_empty() {
        return Err(Error::InvalidParameter("probe edge set is empty".into()));
    }
    let n = split.train.node_count();
    if n * (n - 1) / 2 <= split.original_edge_count() {
        return Err(Error::InvalidParameter(
            "graph is complete: no non-edges to sample".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut wins = 0usize;
    let mut ties = 0usize;
    for _ in 0..rounds {
        let probe = split.probe[rng.gen_range(0..split.probe.len())];
        let absent = sample_non_edge(split, &mut rng);
        let sp = score(probe.0, probe.1)?;
        let sa = score(absent.0, absent.1)?;
        if sp > sa {
            wins += 1;
        } else if sp == sa {
            ties += 1;
        }
    }
    Ok(AucOutcome {
        auc: (wins as f64 + 0.5 * ties as f64) / rounds as f64,
        rounds,
        wins,
        ties,
    })
}

/// One full trial: resolves the scorer configuration on the train graph
/// (recomputing weights there when the config says so) and runs the
/// comparison rounds.
pub fn auc_trial(
    split: &HoldoutSplit,
    tab: &AttributeTable,
    cfg: &ScorerConfig,
    rounds: usize,
    seed: u64,
) -> Result<AucOutcome> {
    let scorer = cfg.resolve(&split.train, tab)?;
    auc_with_scorer(split, rounds, seed, |x, y| scorer.score(x, y))
}

/// How many comparison rounds a trial runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RoundsPolicy {
    /// Half the number of removed edges (5% of all edges at the default
    /// 10% holdout).
    #[default]
    HalfRemoved,
    Fixed(usize),
}

/// Evaluation parameters around a scorer configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalParams {
    pub repetitions: usize,
    pub fraction: f64,
    /// `None` selects latest-edge holdout when timestamps exist.
    pub mode: Option<HoldoutMode>,
    pub rounds: RoundsPolicy,
    pub master_seed: u64,
}

impl Default for EvalParams {
    fn default() -> Self {
        EvalParams {
            repetitions: 10,
            fraction: 0.10,
            mode: None,
            rounds: RoundsPolicy::HalfRemoved,
            master_seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub seed: u64,
    pub rounds: usize,
    pub wins: usize,
    pub ties: usize,
    pub auc: f64,
}

/// Per-trial outcomes plus their mean, with the full configuration echoed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub mean_auc: f64,
    pub trials: Vec<TrialReport>,
    pub scorer: ScorerConfig,
    pub params: EvalParams,
    pub mode: HoldoutMode,
}

/// Runs `repetitions` independent holdout-and-sample trials. Trial seeds are
/// drawn sequentially from a generator seeded with the master seed, then the
/// trials run in parallel; results come back in trial order, so the report
/// is identical regardless of scheduling.
pub fn evaluate(
    g: &Graph,
    tab: &AttributeTable,
    cfg: &ScorerConfig,
    params: &EvalParams,
) -> Result<EvaluationReport> {
    if params.repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be >= 1".into()));
    }
    let mode = params.mode.unwrap_or_else(|| HoldoutMode::auto_for(g));
    let mut seeder = ChaCha8Rng::seed_from_u64(params.master_seed);
    let trial_seeds: Vec<u64> = (0..params.repetitions).map(|_| seeder.next_u64()).collect();

    let trials: Vec<TrialReport> = trial_seeds
        .par_iter()
        .map(|&trial_seed| {
            let split = holdout(g, params.fraction, mode, trial_seed)?;
            let rounds = match params.rounds {
                RoundsPolicy::HalfRemoved => {
                    (((params.fraction * g.edge_count() as f64) / 2.0 - 1e-9).ceil() as usize)
                        .max(1)
                }
                RoundsPolicy::Fixed(n) => n,
            };
            // Separate stream for the sampling rounds so holdout and
            // sampling draws cannot interleave.
            let sampler_seed = trial_seed ^ 0x9e37_79b9_7f4a_7c15;
            let outcome = auc_trial(&split, tab, cfg, rounds, sampler_seed)?;
            Ok(TrialReport {
                seed: trial_seed,
                rounds: outcome.rounds,
                wins: outcome.wins,
                ties: outcome.ties,
                auc: outcome.auc,
            })
        })
        .collect::<Result<_>>()?;

    let mean_auc = trials.iter().map(|t| t.auc).sum::<f64>() / trials.len() as f64;
    Ok(EvaluationReport {
        mean_auc,
        trials,
        scorer: cfg.clone(),
        params: params.clone(),
        mode,
    })
}
