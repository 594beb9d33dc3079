//! Command-line pipeline: dataset loading, the four commands, and report
//! emission. The binary (`a11y`) is a thin wrapper over [`run`] so
//! integration tests can drive commands in-process.

pub mod commands;
pub mod config;
pub mod dataset;
pub mod provider;
pub mod report;

use clap::{Parser, Subcommand};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error("provider: {0}")]
    Provider(String),
    #[error("{failed} of {total} files failed; reports for the rest were written")]
    Partial { failed: usize, total: usize },
    #[error(transparent)]
    Other(#[from] anyhow::Error),
}

impl CliError {
    /// Distinct exit codes: 2 config, 3 dataset, 4 provider, 5 partial.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Dataset(_) => 3,
            CliError::Provider(_) => 4,
            CliError::Partial { .. } => 5,
            CliError::Other(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "a11y",
    version,
    about = "Static accessibility scanning and LLM repair"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan a dataset with the rule engine and, optionally, LLM detection.
    Detect(DetectArgs),
    /// Repair violating files with the configured strategy.
    Repair(RepairArgs),
    /// Summarise repair reports into remediation and delta tables.
    Evaluate(EvaluateArgs),
    /// Aggregate usage ledgers into cost tables.
    CostReport(CostReportArgs),
}

#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    /// TOML config file; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker pool size.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Provider kind: mock, http, or none.
    #[arg(long)]
    pub provider: Option<config::ProviderKind>,
    /// Token budget per chunk.
    #[arg(long)]
    pub chunk_budget: Option<usize>,
}

#[derive(Debug, clap::Args)]
pub struct DetectArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Dataset root containing scraped_sites/ (and scraped_sites_fixed/).
    #[arg(long)]
    pub dataset: PathBuf,
}

#[derive(Debug, clap::Args)]
pub struct RepairArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub dataset: PathBuf,
    /// zero-shot, agent, or both.
    #[arg(long)]
    pub strategy: Option<config::StrategyChoice>,
    #[arg(long)]
    pub max_iterations: Option<u32>,
    #[arg(long)]
    pub similarity_threshold: Option<f64>,
}

#[derive(Debug, clap::Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, clap::Args)]
pub struct CostReportArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Ledger files (NDJSON). May repeat; the first is the baseline.
    /// Defaults to the repair ledgers under the output directory.
    #[arg(long)]
    pub ledger: Vec<PathBuf>,
}

/// Entry point shared by the binary and tests.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Detect(args) => commands::detect::run(args),
        Command::Repair(args) => commands::repair::run(args),
        Command::Evaluate(args) => commands::evaluate::run(args),
        Command::CostReport(args) => commands::cost_report::run(args),
    }
}
