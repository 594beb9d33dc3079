//! Run configuration: one declarative TOML file, overridden by flags.
//! Secrets never live in the file — the HTTP provider reads its key from
//! the environment variable the config names.

use std::path::{Path, PathBuf};

use a11y_core::llm::HttpProviderConfig;
use serde::Deserialize;

use crate::{CliError, CommonArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProviderKind {
    Mock,
    Http,
    /// Rule engine only; LLM paths are skipped.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyChoice {
    ZeroShot,
    Agent,
    Both,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    provider: ProviderSection,
    #[serde(default)]
    run: RunSection,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ProviderSection {
    kind: Option<ProviderKind>,
    model: Option<String>,
    script: Option<PathBuf>,
    base_url: Option<String>,
    api_key_env: Option<String>,
    timeout_secs: Option<u64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RunSection {
    strategy: Option<StrategyChoice>,
    max_iterations: Option<u32>,
    chunk_budget: Option<usize>,
    similarity_threshold: Option<f64>,
    workers: Option<usize>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    price_table: Option<PathBuf>,
    deterministic: Option<bool>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub provider_kind: ProviderKind,
    pub mock_script: Option<PathBuf>,
    pub http: HttpProviderConfig,
    pub strategy: StrategyChoice,
    pub max_iterations: u32,
    pub chunk_budget: usize,
    pub similarity_threshold: f64,
    pub workers: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub price_table: Option<PathBuf>,
    /// Fixed timestamps for byte-reproducible reports. Defaults to true
    /// for the mock provider.
    pub deterministic: bool,
}

impl RunConfig {
    pub fn clock(&self) -> Box<dyn a11y_core::Clock> {
        if self.deterministic {
            Box::new(a11y_core::FixedClock(0))
        } else {
            Box::new(a11y_core::SystemClock)
        }
    }

    pub fn validate_opts(&self) -> a11y_core::ValidateOptions {
        a11y_core::ValidateOptions {
            similarity_threshold: self.similarity_threshold,
            ..Default::default()
        }
    }

    fn check(self) -> Result<Self, CliError> {
        if self.chunk_budget == 0
            || self.max_iterations == 0
            || self.workers == 0
            || !(0.0..=1.0).contains(&self.similarity_threshold)
        {
            return Err(CliError::Config(
                "numeric fields must be positive (similarity threshold in [0,1])".into(),
            ));
        }
        if self.provider_kind == ProviderKind::Mock && self.mock_script.is_none() {
            return Err(CliError::Config(
                "provider.kind = \"mock\" requires provider.script".into(),
            ));
        }
        Ok(self)
    }
}

/// Defaults ← config file ← command-line flags.
pub fn load(
    common: &CommonArgs,
    strategy: Option<StrategyChoice>,
    max_iterations: Option<u32>,
    similarity_threshold: Option<f64>,
) -> Result<RunConfig, CliError> {
    let file = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let parsed: ConfigFile = toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            Some((parsed, path.clone()))
        }
        None => None,
    };
    let (cfg, cfg_dir) = match file {
        Some((parsed, path)) => {
            let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
            (parsed, dir)
        }
        None => (ConfigFile::default(), PathBuf::from(".")),
    };

    // paths in the config file resolve relative to the file itself
    let resolve = |p: PathBuf| -> PathBuf {
        if p.is_absolute() {
            p
        } else {
            cfg_dir.join(p)
        }
    };

    let provider_kind = common
        .provider
        .or(cfg.provider.kind)
        .unwrap_or(ProviderKind::None);
    let deterministic = cfg
        .run
        .deterministic
        .unwrap_or(provider_kind == ProviderKind::Mock);
    RunConfig {
        provider_kind,
        mock_script: cfg.provider.script.map(&resolve),
        http: HttpProviderConfig {
            base_url: cfg.provider.base_url.unwrap_or_default(),
            model: cfg.provider.model.unwrap_or_else(|| "default-model".into()),
            api_key_env: cfg
                .provider
                .api_key_env
                .unwrap_or_else(|| "A11Y_API_KEY".into()),
            timeout_secs: cfg.provider.timeout_secs.unwrap_or(120),
        },
        strategy: strategy
            .or(cfg.run.strategy)
            .unwrap_or(StrategyChoice::Both),
        max_iterations: max_iterations.or(cfg.run.max_iterations).unwrap_or(3),
        chunk_budget: common.chunk_budget.or(cfg.run.chunk_budget).unwrap_or(4000),
        similarity_threshold: similarity_threshold
            .or(cfg.run.similarity_threshold)
            .unwrap_or(0.85),
        workers: common.workers.or(cfg.run.workers).unwrap_or(4),
        seed: cfg.run.seed.unwrap_or(0),
        out: common
            .out
            .clone()
            .or(cfg.run.out.map(&resolve))
            .unwrap_or_else(|| PathBuf::from("out")),
        price_table: cfg.run.price_table.map(&resolve),
        deterministic,
    }
    .check()
}

/// Load the configured price table, or an empty one.
pub fn price_table(config: &RunConfig) -> Result<a11y_core::cost::PriceTable, CliError> {
    match &config.price_table {
        Some(path) => a11y_core::cost::PriceTable::load(path)
            .map_err(|e| CliError::Config(format!("price table {}: {e}", path.display()))),
        None => Ok(a11y_core::cost::PriceTable::new()),
    }
}
