//! `linkfuse` — link prediction on attributed social graphs.
//!
//! Subcommands: `sample` (BFS subgraph extraction), `weights` (data-driven
//! attribute and structural weights), `impute` (majority-vote completion of
//! missing attribute values), `score` (fusion scores for a pair list),
//! `metrics` (per-metric dump for a pair list) and `evaluate` (repeated
//! holdout with sampled AUC).
//!
//! Exit codes: 0 on success, 2 on input errors, 3 when a computation is
//! degenerate (zero weight denominators, zero-variance null models, empty
//! tuning grids). Failures also emit a one-line JSON error on stderr.

mod commands;
mod output;

use clap::Parser;

use commands::{Cli, Command};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    init_thread_pool();

    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(args) => commands::run_sample(args),
        Command::Weights(args) => commands::run_weights(args),
        Command::Impute(args) => commands::run_impute(args),
        Command::Score(args) => commands::run_score(args),
        Command::Metrics(args) => commands::run_metrics(args),
        Command::Evaluate(args) => commands::run_evaluate(args),
    };

    if let Err(err) = result {
        let code = exit_code(&err);
        eprintln!(
            "{}",
            serde_json::json!({ "error": err.to_string(), "exit_code": code })
        );
        std::process::exit(code);
    }
}

/// Honor `LINKFUSE_THREADS` for the default rayon pool size.
fn init_thread_pool() {
    if let Ok(raw) = std::env::var("LINKFUSE_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => log::warn!("ignoring invalid LINKFUSE_THREADS value '{raw}'"),
        }
    }
}

fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<linkfuse::Error>() {
        Some(e) if e.is_degenerate() => 3,
        _ => 2,
    }
}
