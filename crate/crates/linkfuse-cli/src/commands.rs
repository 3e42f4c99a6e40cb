//! Subcommand definitions and their orchestration over the library.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use linkfuse::aggregate::{ScorerConfig, WeightSource};
use linkfuse::attributes::ImputationPolicy;
use linkfuse::evaluation::{EvalParams, HoldoutMode, RoundsPolicy};
use linkfuse::graph::Graph;
use linkfuse::homophily::HomophilyMetricKind;
use linkfuse::structural::{structural_score, StructuralMetricKind};
use linkfuse::weights::{compute_weight_set, StructuralEstimator};
use linkfuse::{io as lfio, AttributeTable};

use crate::output::{fmt_f64, fmt_opt_f64, render_table};

#[derive(Parser)]
#[command(
    name = "linkfuse",
    version,
    about = "Link prediction on attributed social graphs",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Extract a BFS subgraph starting from a node (default: first label in
    /// sorted order) and write it as an edge list.
    Sample(SampleArgs),
    /// Compute per-attribute homophily weights and the structural weight.
    Weights(WeightsArgs),
    /// Fill missing attribute values by thresholded majority vote.
    Impute(ImputeArgs),
    /// Score a list of node pairs with the fusion scorer.
    Score(ScoreArgs),
    /// Dump every structural metric (and homophily per attribute) for a pair list.
    Metrics(MetricsArgs),
    /// Repeated edge-holdout evaluation with sampled AUC.
    Evaluate(EvaluateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StructuralArg {
    Jaccard,
    Cosine,
    L1,
    AdamicAdar,
    Pmi,
    Ns,
    /// Drop the structural term (homophily-only scoring).
    None,
}

impl StructuralArg {
    fn to_kind(self) -> Option<StructuralMetricKind> {
        match self {
            StructuralArg::Jaccard => Some(StructuralMetricKind::Jaccard),
            StructuralArg::Cosine => Some(StructuralMetricKind::Cosine),
            StructuralArg::L1 => Some(StructuralMetricKind::L1Norm),
            StructuralArg::AdamicAdar => Some(StructuralMetricKind::AdamicAdar),
            StructuralArg::Pmi => Some(StructuralMetricKind::Pmi),
            StructuralArg::Ns => Some(StructuralMetricKind::NetworkSimilarity),
            StructuralArg::None => None,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HomophilyArg {
    Overlap,
    Goodall,
    Eskin,
    Iof,
    Of,
}

impl HomophilyArg {
    fn to_kind(self) -> HomophilyMetricKind {
        match self {
            HomophilyArg::Overlap => HomophilyMetricKind::Overlap,
            HomophilyArg::Goodall => HomophilyMetricKind::Goodall,
            HomophilyArg::Eskin => HomophilyMetricKind::Eskin,
            HomophilyArg::Iof => HomophilyMetricKind::Iof,
            HomophilyArg::Of => HomophilyMetricKind::Of,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EstimatorArg {
    AvgCc,
    GlobalCc,
    MotifZ,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Auto,
    Random,
    Latest,
}

/// Shared knobs for the structural-weight estimator.
#[derive(Args)]
pub struct EstimatorOpts {
    /// Structural weight estimator.
    #[arg(long, value_enum, default_value = "avg-cc")]
    pub estimator: EstimatorArg,
    /// Randomized replicas for motif-z.
    #[arg(long, default_value_t = 20)]
    pub replicas: usize,
    /// Attempted double-edge swaps per edge for motif-z.
    #[arg(long, default_value_t = 10)]
    pub swaps_per_edge: usize,
}

impl EstimatorOpts {
    fn resolve(&self, seed: u64) -> StructuralEstimator {
        match self.estimator {
            EstimatorArg::AvgCc => StructuralEstimator::AvgLocalCc,
            EstimatorArg::GlobalCc => StructuralEstimator::GlobalCc,
            EstimatorArg::MotifZ => StructuralEstimator::MotifZ {
                replicas: self.replicas,
                swaps_per_edge: self.swaps_per_edge,
                seed,
            },
        }
    }
}

/// Picks the given seed or synthesizes one, echoing it on stderr so runs can
/// be reproduced.
fn resolve_seed(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let s: u64 = rand::random();
            eprintln!("seed: {s}");
            s
        }
    }
}

fn load_graph(path: &PathBuf) -> anyhow::Result<Graph> {
    let (graph, report) = lfio::load_graph(path)
        .with_context(|| format!("failed to read edge list {}", path.display()))?;
    if report.duplicate_edges > 0 || report.self_loops > 0 {
        log::warn!(
            "{}: dropped {} duplicate edges and {} self-loops",
            path.display(),
            report.duplicate_edges,
            report.self_loops
        );
    }
    Ok(graph)
}

/// Loads the attribute table, or returns an empty one when no file is given.
fn load_table(path: Option<&PathBuf>, g: &Graph) -> anyhow::Result<AttributeTable> {
    match path {
        Some(p) => {
            let (tab, _) = lfio::load_attribute_table(p, g)
                .with_context(|| format!("failed to read attribute file {}", p.display()))?;
            Ok(tab)
        }
        None => Ok(AttributeTable::from_columns(
            g.node_count(),
            vec![],
            vec![],
        )?),
    }
}

/// Attribute subset for a run: with an attribute file, `--attrs` narrows the
/// default of every column; without one, requesting attributes is an error.
fn resolve_attrs(
    attrs_file_given: bool,
    raw: Option<&str>,
    tab: &AttributeTable,
) -> anyhow::Result<Vec<String>> {
    match (attrs_file_given, raw) {
        (false, Some(_)) => bail!("--attrs requires --attrs-file"),
        (false, None) => Ok(Vec::new()),
        (true, Some(list)) => {
            let attrs: Vec<String> = list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(str::to_owned)
                .collect();
            for a in &attrs {
                tab.attribute_index(a)?;
            }
            Ok(attrs)
        }
        (true, None) => Ok(tab
            .attribute_names()
            .iter()
            .map(|s| (*s).to_owned())
            .collect()),
    }
}

fn parse_weight_source(raw: &str, estimator: StructuralEstimator) -> anyhow::Result<WeightSource> {
    match raw {
        "computed" => Ok(WeightSource::Computed { estimator }),
        "uniform" => Ok(WeightSource::Uniform),
        other => match other.strip_prefix("file:") {
            Some(path) => Ok(WeightSource::Supplied {
                weights: lfio::load_weight_set(path)?,
            }),
            None => bail!("--weights expects computed, uniform or file:<path>, got '{other}'"),
        },
    }
}

fn write_or_print(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let mut f = BufWriter::new(File::create(path)?);
            f.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                f.write_all(b"\n")?;
            }
            f.flush()?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

// ---------------------------------------------------------------- sample --

#[derive(Args)]
pub struct SampleArgs {
    /// Edge-list file to sample from.
    #[arg(long)]
    pub edges: PathBuf,
    /// Label of the start node; defaults to the first label in sorted order
    /// (the lowest id when labels are numeric).
    #[arg(long)]
    pub start: Option<String>,
    /// Number of nodes to collect.
    #[arg(long)]
    pub max_nodes: usize,
    /// Output edge-list file.
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run_sample(args: SampleArgs) -> anyhow::Result<()> {
    let g = load_graph(&args.edges)?;
    let start = match &args.start {
        Some(label) => g
            .id_of(label)
            .ok_or_else(|| linkfuse::Error::UnknownLabel(label.clone()))?,
        None => 0,
    };
    let sample = g.bfs_sample(start, args.max_nodes)?;
    lfio::write_edge_list(&sample, &args.out)?;
    println!(
        "sampled {} nodes, {} edges from start '{}' -> {}",
        sample.node_count(),
        sample.edge_count(),
        g.label(start),
        args.out.display()
    );
    Ok(())
}

// --------------------------------------------------------------- weights --

#[derive(Args)]
pub struct WeightsArgs {
    #[arg(long)]
    pub edges: PathBuf,
    /// Attribute CSV; omit to compute the structural weight only.
    #[arg(long)]
    pub attrs_file: Option<PathBuf>,
    /// Comma-separated attribute subset (default: every attribute in the file).
    #[arg(long)]
    pub attrs: Option<String>,
    #[command(flatten)]
    pub estimator: EstimatorOpts,
    /// Seed for randomized estimators (synthesized and printed when absent).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: FormatArg,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct WeightsReport {
    #[serde(flatten)]
    weights: linkfuse::WeightSet,
    seed: Option<u64>,
}

pub fn run_weights(args: WeightsArgs) -> anyhow::Result<()> {
    let g = load_graph(&args.edges)?;
    let tab = load_table(args.attrs_file.as_ref(), &g)?;
    let attrs = resolve_attrs(args.attrs_file.is_some(), args.attrs.as_deref(), &tab)?;
    let seed = match args.estimator.estimator {
        EstimatorArg::MotifZ => Some(resolve_seed(args.seed)),
        _ => args.seed,
    };
    let estimator = args.estimator.resolve(seed.unwrap_or(0));
    let weights = compute_weight_set(&g, &tab, &attrs, estimator)?;

    let text = match args.format {
        FormatArg::Json => serde_json::to_string_pretty(&WeightsReport { weights, seed })?,
        FormatArg::Table => {
            let mut rows: Vec<Vec<String>> = weights
                .attributes
                .iter()
                .map(|(name, w)| vec![name.clone(), fmt_f64(*w)])
                .collect();
            rows.push(vec!["structural".to_owned(), fmt_f64(weights.structural)]);
            render_table(&["feature", "weight"], &rows)
        }
    };
    write_or_print(&text, args.out.as_ref())
}

// ---------------------------------------------------------------- impute --

#[derive(Args)]
pub struct ImputeArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub attrs_file: PathBuf,
    /// Attribute to impute.
    #[arg(long)]
    pub attr: String,
    /// Minimum votes for the winning value (with --t-min selects a fixed policy).
    #[arg(long, conflicts_with = "tune")]
    pub f_min: Option<usize>,
    /// Minimum vote share for the winning value.
    #[arg(long, conflicts_with = "tune")]
    pub t_min: Option<f64>,
    /// Tune (f, t) on a hidden share of the labeled nodes before imputing.
    #[arg(long)]
    pub tune: bool,
    /// Comma-separated f grid for --tune.
    #[arg(long, default_value = "1,2,3")]
    pub f_grid: String,
    /// Comma-separated t grid for --tune.
    #[arg(long, default_value = "0.1,0.3,0.5,0.7")]
    pub t_grid: String,
    /// Share of labeled nodes hidden during tuning.
    #[arg(long, default_value_t = 0.2)]
    pub holdout_fraction: f64,
    /// Synchronous imputation passes.
    #[arg(long, default_value_t = 1)]
    pub passes: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Where to write the completed attribute CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
    /// Write the JSON report here as well.
    #[arg(long)]
    pub report_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ImputeCliReport {
    #[serde(flatten)]
    report: linkfuse::ImputationReport,
    tuned: bool,
    seed: Option<u64>,
}

pub fn run_impute(args: ImputeArgs) -> anyhow::Result<()> {
    let g = load_graph(&args.edges)?;
    let tab = load_table(Some(&args.attrs_file), &g)?;

    let (policy, tuned_precision, seed) = if args.tune {
        let f_grid: Vec<usize> = args
            .f_grid
            .split(',')
            .map(|s| s.trim().parse().context("invalid --f-grid entry"))
            .collect::<anyhow::Result<_>>()?;
        let t_grid: Vec<f64> = args
            .t_grid
            .split(',')
            .map(|s| s.trim().parse().context("invalid --t-grid entry"))
            .collect::<anyhow::Result<_>>()?;
        let seed = resolve_seed(args.seed);
        let (policy, scores) = tab.tune_thresholds(
            &g,
            &args.attr,
            &f_grid,
            &t_grid,
            args.holdout_fraction,
            seed,
        )?;
        let precision = scores
            .iter()
            .find(|s| s.f_min == policy.f_min && s.t_min == policy.t_min)
            .and_then(|s| s.precision);
        (policy, precision, Some(seed))
    } else {
        match (args.f_min, args.t_min) {
            (Some(f), Some(t)) => (ImputationPolicy { f_min: f, t_min: t }, None, args.seed),
            _ => bail!("either pass both --f-min and --t-min or use --tune"),
        }
    };

    let (completed, mut report) = tab.impute_repeated(&g, &args.attr, policy, args.passes)?;
    report.precision = tuned_precision;
    if let Some(out) = &args.out {
        lfio::write_attribute_table(&completed, &g, out)?;
    }

    let cli_report = ImputeCliReport {
        report,
        tuned: args.tune,
        seed,
    };
    let json = serde_json::to_string_pretty(&cli_report)?;
    if let Some(path) = &args.report_out {
        write_or_print(&json, Some(path))?;
    }
    match args.format {
        FormatArg::Json => println!("{json}"),
        FormatArg::Table => {
            let r = &cli_report.report;
            let missing_after = if r.missing_before == 0 {
                0.0
            } else {
                100.0 * r.remaining_missing as f64 / r.missing_before as f64
            };
            let rows = vec![vec![
                r.attribute.clone(),
                r.policy.f_min.to_string(),
                format!("{:.2}", r.policy.t_min),
                r.predicted.to_string(),
                fmt_opt_f64(r.precision),
                r.missing_before.to_string(),
                format!("{missing_after:.1}%"),
            ]];
            print!(
                "{}",
                render_table(
                    &[
                        "attribute",
                        "f",
                        "t",
                        "predicted",
                        "precision",
                        "missing-before",
                        "missing-after"
                    ],
                    &rows
                )
            );
        }
    }
    Ok(())
}

// ----------------------------------------------------------------- score --

#[derive(Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub attrs_file: Option<PathBuf>,
    /// Pair list: two node labels per line.
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long, value_enum, default_value = "ns")]
    pub structural: StructuralArg,
    #[arg(long, value_enum, default_value = "of")]
    pub homophily: HomophilyArg,
    /// Comma-separated attribute subset (default: every attribute in the file).
    #[arg(long)]
    pub attrs: Option<String>,
    /// computed | uniform | file:<path>
    #[arg(long, default_value = "computed")]
    pub weights: String,
    #[command(flatten)]
    pub estimator: EstimatorOpts,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output CSV (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn scorer_config(
    structural: StructuralArg,
    homophily: HomophilyArg,
    attrs: Vec<String>,
    weights: &str,
    estimator: &EstimatorOpts,
    seed: u64,
) -> anyhow::Result<ScorerConfig> {
    Ok(ScorerConfig {
        structural: structural.to_kind(),
        homophily: homophily.to_kind(),
        attributes: attrs,
        weights: parse_weight_source(weights, estimator.resolve(seed))?,
        ..Default::default()
    })
}

pub fn run_score(args: ScoreArgs) -> anyhow::Result<()> {
    let g = load_graph(&args.edges)?;
    let tab = load_table(args.attrs_file.as_ref(), &g)?;
    let attrs = resolve_attrs(args.attrs_file.is_some(), args.attrs.as_deref(), &tab)?;
    let pairs = lfio::load_pair_list(&args.pairs, &g)?;
    let seed = match args.estimator.estimator {
        EstimatorArg::MotifZ => resolve_seed(args.seed),
        _ => args.seed.unwrap_or(0),
    };
    let cfg = scorer_config(
        args.structural,
        args.homophily,
        attrs,
        &args.weights,
        &args.estimator,
        seed,
    )?;
    let scorer = cfg.resolve(&g, &tab)?;

    let mut lines = vec!["u,v,score".to_owned()];
    for (u, v) in pairs {
        let s = scorer.score(u, v)?;
        lines.push(format!("{},{},{}", g.label(u), g.label(v), s));
    }
    write_or_print(&lines.join("\n"), args.out.as_ref())
}

// --------------------------------------------------------------- metrics --

#[derive(Args)]
pub struct MetricsArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub attrs_file: Option<PathBuf>,
    #[arg(long)]
    pub pairs: PathBuf,
    #[arg(long, value_enum, default_value = "of")]
    pub homophily: HomophilyArg,
    /// Comma-separated attribute subset (default: every attribute in the file).
    #[arg(long)]
    pub attrs: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run_metrics(args: MetricsArgs) -> anyhow::Result<()> {
    let g = load_graph(&args.edges)?;
    let tab = load_table(args.attrs_file.as_ref(), &g)?;
    let attrs = resolve_attrs(args.attrs_file.is_some(), args.attrs.as_deref(), &tab)?;
    let pairs = lfio::load_pair_list(&args.pairs, &g)?;
    let kind = args.homophily.to_kind();

    let mut header = vec!["u".to_owned(), "v".to_owned()];
    header.extend(
        StructuralMetricKind::ALL
            .iter()
            .map(|k| k.name().to_owned()),
    );
    header.extend(attrs.iter().map(|a| format!("{a}_{}", kind.name())));
    let mut lines = vec![header.join(",")];
    for (u, v) in pairs {
        let mut cells = vec![g.label(u).to_owned(), g.label(v).to_owned()];
        for metric in StructuralMetricKind::ALL {
            cells.push(structural_score(&g, metric, u, v)?.to_string());
        }
        for attr in &attrs {
            let s = linkfuse::homophily_score(&tab, kind, attr, u, v)?;
            cells.push(s.map_or_else(|| "NA".to_owned(), |x| x.to_string()));
        }
        lines.push(cells.join(","));
    }
    write_or_print(&lines.join("\n"), args.out.as_ref())
}

// -------------------------------------------------------------- evaluate --

#[derive(Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub attrs_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "ns")]
    pub structural: StructuralArg,
    #[arg(long, value_enum, default_value = "of")]
    pub homophily: HomophilyArg,
    /// Comma-separated attribute subset (default: every attribute in the file).
    #[arg(long)]
    pub attrs: Option<String>,
    /// computed | uniform | file:<path>
    #[arg(long, default_value = "computed")]
    pub weights: String,
    #[command(flatten)]
    pub estimator: EstimatorOpts,
    /// Holdout repetitions to average.
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    /// Fraction of edges removed per repetition.
    #[arg(long, default_value_t = 0.10)]
    pub fraction: f64,
    /// Holdout mode; auto removes the latest edges when timestamps exist.
    #[arg(long, value_enum, default_value = "auto")]
    pub mode: ModeArg,
    /// Comparison rounds per trial (default: half the removed edges).
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
}

pub fn run_evaluate(args: EvaluateArgs) -> anyhow::Result<()> {
    let g = load_graph(&args.edges)?;
    let tab = load_table(args.attrs_file.as_ref(), &g)?;
    let attrs = resolve_attrs(args.attrs_file.is_some(), args.attrs.as_deref(), &tab)?;
    let seed = resolve_seed(args.seed);
    let cfg = scorer_config(
        args.structural,
        args.homophily,
        attrs,
        &args.weights,
        &args.estimator,
        seed,
    )?;
    let params = EvalParams {
        repetitions: args.reps,
        fraction: args.fraction,
        mode: match args.mode {
            ModeArg::Auto => None,
            ModeArg::Random => Some(HoldoutMode::Random),
            ModeArg::Latest => Some(HoldoutMode::Latest),
        },
        rounds: args
            .rounds
            .map_or(RoundsPolicy::HalfRemoved, RoundsPolicy::Fixed),
        master_seed: seed,
    };
    let report = linkfuse::evaluate(&g, &tab, &cfg, &params)?;

    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &args.out {
        write_or_print(&json, Some(path))?;
    }
    match args.format {
        FormatArg::Json => println!("{json}"),
        FormatArg::Table => {
            let rows: Vec<Vec<String>> = report
                .trials
                .iter()
                .enumerate()
                .map(|(i, t)| {
                    vec![
                        (i + 1).to_string(),
                        t.seed.to_string(),
                        t.rounds.to_string(),
                        t.wins.to_string(),
                        t.ties.to_string(),
                        fmt_f64(t.auc),
                    ]
                })
                .collect();
            print!(
                "{}",
                render_table(&["trial", "seed", "rounds", "wins", "ties", "auc"], &rows)
            );
            println!(
                "mean AUC over {} trials: {}",
                report.trials.len(),
                fmt_f64(report.mean_auc)
            );
        }
    }
    Ok(())
}
