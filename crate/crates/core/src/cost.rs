//! Token, call, latency and monetary accounting.
//!
//! Prices are integer micro-dollars per million tokens; record costs are
//! accumulated in 1e-12 dollar units (`Money`), so totals are exact — no
//! binary-float error at any scale — and render to 4 decimal places with
//! half-up rounding. The ledger is append-only and safe for concurrent
//! writers; reports run on immutable snapshots.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which pipeline produced a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Detect,
    ZeroShot,
    Agent,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Strategy::Detect => "detect",
            Strategy::ZeroShot => "zero_shot",
            Strategy::Agent => "agent",
        };
        f.write_str(s)
    }
}

/// One provider interaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageRecord {
    pub file_id: String,
    pub strategy: Strategy,
    pub model_id: String,
    /// 1-based ordinal of this call within its file.
    pub call_index: u32,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub latency_ms: u64,
    pub retry: bool,
    pub timestamp: i64,
}

impl UsageRecord {
    pub fn total_tokens(&self) -> u64 {
        self.prompt_tokens + self.completion_tokens
    }
}

#[derive(Debug, Error)]
pub enum CostError {
    #[error("model id \"{0}\" missing from the price table")]
    UnknownModel(String),
    #[error("file id \"{0}\" has no ledger records")]
    UnknownFile(String),
    #[error("ledger is empty")]
    EmptyLedger,
    #[error("invalid price \"{value}\": {reason}")]
    InvalidPrice { value: String, reason: String },
    #[error("price table io: {0}")]
    Io(#[from] std::io::Error),
    #[error("price table parse: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("ledger parse at line {line}: {source}")]
    LedgerParse {
        line: usize,
        source: serde_json::Error,
    },
}

/// Exact currency amount in 1e-12 USD units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Money(pub u128);

impl Money {
    pub const ZERO: Money = Money(0);

    /// Render as dollars with 4 decimals, half-up.
    pub fn to_usd_string(self) -> String {
        let unit = 100_000_000u128; // 1e8 pico-units per 1e-4 dollar
        let rounded = (self.0 + unit / 2) / unit;
        format!("${}.{:04}", rounded / 10_000, rounded % 10_000)
    }

    /// Approximate float value for ratios and per-file division.
    pub fn approx_usd(self) -> f64 {
        self.0 as f64 / 1e12
    }
}

impl std::ops::Add for Money {
    type Output = Money;
    fn add(self, rhs: Money) -> Money {
        Money(self.0 + rhs.0)
    }
}

impl std::iter::Sum for Money {
    fn sum<I: Iterator<Item = Money>>(iter: I) -> Money {
        iter.fold(Money::ZERO, |a, b| a + b)
    }
}

/// Per-model prices in micro-dollars per million tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelPrice {
    pub prompt_micro_per_million: u64,
    pub completion_micro_per_million: u64,
}

impl ModelPrice {
    /// Exact cost of one record: tokens × micro-$/1M = 1e-12 dollars.
    pub fn cost(&self, prompt_tokens: u64, completion_tokens: u64) -> Money {
        Money(
            prompt_tokens as u128 * self.prompt_micro_per_million as u128
                + completion_tokens as u128 * self.completion_micro_per_million as u128,
        )
    }
}

/// Parse a decimal dollar string (max 6 fractional digits) into
/// micro-dollars without going through floats.
pub fn parse_price_micro(value: &str) -> Result<u64, CostError> {
    let value = value.trim();
    let bad = |reason: &str| CostError::InvalidPrice {
        value: value.to_string(),
        reason: reason.to_string(),
    };
    if value.is_empty() || value.starts_with('-') {
        return Err(bad("must be a non-negative decimal"));
    }
    let (int_part, frac_part) = value.split_once('.').unwrap_or((value, ""));
    if frac_part.len() > 6 {
        return Err(bad("more than 6 fractional digits"));
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || int_part.is_empty()
    {
        return Err(bad("must be a non-negative decimal"));
    }
    let int: u64 = int_part
        .parse()
        .map_err(|_| bad("integer part out of range"))?;
    let mut frac: u64 = 0;
    for (i, c) in frac_part.chars().enumerate() {
        frac += (c.to_digit(10).unwrap() as u64) * 10u64.pow(5 - i as u32);
    }
    int.checked_mul(1_000_000)
        .and_then(|v| v.checked_add(frac))
        .ok_or_else(|| bad("out of range"))
}

/// Model id → prices.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PriceTable {
    prices: BTreeMap<String, ModelPrice>,
}

#[derive(Deserialize)]
struct PriceTableFile {
    models: BTreeMap<String, PriceRow>,
}

#[derive(Deserialize)]
struct PriceRow {
    prompt_per_million: String,
    completion_per_million: String,
}

impl PriceTable {
    pub fn new() -> PriceTable {
        PriceTable::default()
    }

    pub fn insert(&mut self, model_id: &str, price: ModelPrice) {
        self.prices.insert(model_id.to_string(), price);
    }

    pub fn get(&self, model_id: &str) -> Option<ModelPrice> {
        self.prices.get(model_id).copied()
    }

    /// Load a TOML table: `[models."name"] prompt_per_million = "0.15" ...`
    /// Prices are decimal dollar strings per million tokens.
    pub fn from_toml_str(text: &str) -> Result<PriceTable, CostError> {
        let file: PriceTableFile = toml::from_str(text)?;
        let mut table = PriceTable::new();
        for (model, row) in file.models {
            table.insert(
                &model,
                ModelPrice {
                    prompt_micro_per_million: parse_price_micro(&row.prompt_per_million)?,
                    completion_micro_per_million: parse_price_micro(&row.completion_per_million)?,
                },
            );
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<PriceTable, CostError> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }
}

/// Scope for overhead counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope<'a> {
    Run,
    File(&'a str),
}

/// Append-only usage ledger with its price table.
pub struct CostLedger {
    records: Mutex<LedgerInner>,
    prices: PriceTable,
}

#[derive(Default)]
struct LedgerInner {
    records: Vec<UsageRecord>,
    per_file_counts: BTreeMap<String, u32>,
}

/// Aggregate totals over a set of records.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LedgerTotals {
    pub calls: usize,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub total_tokens: u64,
    pub retries: usize,
    pub mean_latency_ms: f64,
}

impl CostLedger {
    pub fn new(prices: PriceTable) -> CostLedger {
        CostLedger {
            records: Mutex::new(LedgerInner::default()),
            prices,
        }
    }

    pub fn prices(&self) -> &PriceTable {
        &self.prices
    }

    /// Append one interaction; the call index within the file is assigned
    /// atomically.
    #[allow(clippy::too_many_arguments)]
    pub fn record(
        &self,
        file_id: &str,
        strategy: Strategy,
        model_id: &str,
        prompt_tokens: u64,
        completion_tokens: u64,
        latency_ms: u64,
        retry: bool,
        timestamp: i64,
    ) -> UsageRecord {
        let mut inner = self.records.lock().expect("ledger lock");
        let idx = inner
            .per_file_counts
            .entry(file_id.to_string())
            .and_modify(|c| *c += 1)
            .or_insert(1);
        let record = UsageRecord {
            file_id: file_id.to_string(),
            strategy,
            model_id: model_id.to_string(),
            call_index: *idx,
            prompt_tokens,
            completion_tokens,
            latency_ms,
            retry,
            timestamp,
        };
        inner.records.push(record.clone());
        record
    }

    pub fn len(&self) -> usize {
        self.records.lock().expect("ledger lock").records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Immutable snapshot ordered by (file id, call index); deterministic
    /// regardless of worker interleaving.
    pub fn snapshot(&self) -> Vec<UsageRecord> {
        let mut records = self.records.lock().expect("ledger lock").records.clone();
        records.sort_by(|a, b| {
            a.file_id
                .cmp(&b.file_id)
                .then(a.call_index.cmp(&b.call_index))
        });
        records
    }

    /// Σ tokens × price over every record (Eq: total cost).
    pub fn total_cost(&self) -> Result<Money, CostError> {
        total_cost(&self.snapshot(), &self.prices)
    }

    /// Interaction count (overhead) for a run or a single file.
    pub fn overhead(&self, scope: Scope<'_>) -> Result<usize, CostError> {
        let records = self.snapshot();
        match scope {
            Scope::Run => Ok(records.len()),
            Scope::File(id) => {
                let n = records.iter().filter(|r| r.file_id == id).count();
                if n == 0 {
                    Err(CostError::UnknownFile(id.to_string()))
                } else {
                    Ok(n)
                }
            }
        }
    }

    pub fn totals(&self) -> LedgerTotals {
        totals(&self.snapshot())
    }

    /// Totals excluding retry-flagged records.
    pub fn totals_excluding_retries(&self) -> LedgerTotals {
        let records: Vec<UsageRecord> = self.snapshot().into_iter().filter(|r| !r.retry).collect();
        totals(&records)
    }

    /// Persist as newline-delimited JSON, sorted snapshot order.
    pub fn save(&self, path: &Path) -> Result<(), CostError> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let mut out = fs::File::create(path)?;
        for record in self.snapshot() {
            serde_json::to_writer(&mut out, &record).map_err(std::io::Error::other)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Load a newline-delimited JSON ledger.
    pub fn load(path: &Path, prices: PriceTable) -> Result<CostLedger, CostError> {
        let text = fs::read_to_string(path)?;
        let ledger = CostLedger::new(prices);
        {
            let mut inner = ledger.records.lock().expect("ledger lock");
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                let record: UsageRecord =
                    serde_json::from_str(line).map_err(|source| CostError::LedgerParse {
                        line: i + 1,
                        source,
                    })?;
                let count = inner
                    .per_file_counts
                    .entry(record.file_id.clone())
                    .or_insert(0);
                *count = (*count).max(record.call_index);
                inner.records.push(record);
            }
        }
        Ok(ledger)
    }
}

/// Exact total over explicit records.
pub fn total_cost(records: &[UsageRecord], prices: &PriceTable) -> Result<Money, CostError> {
    let mut total = Money::ZERO;
    for r in records {
        let price = prices
            .get(&r.model_id)
            .ok_or_else(|| CostError::UnknownModel(r.model_id.clone()))?;
        total = total + price.cost(r.prompt_tokens, r.completion_tokens);
    }
    Ok(total)
}

fn totals(records: &[UsageRecord]) -> LedgerTotals {
    let calls = records.len();
    let latency_sum: u64 = records.iter().map(|r| r.latency_ms).sum();
    LedgerTotals {
        calls,
        prompt_tokens: records.iter().map(|r| r.prompt_tokens).sum(),
        completion_tokens: records.iter().map(|r| r.completion_tokens).sum(),
        total_tokens: records.iter().map(|r| r.total_tokens()).sum(),
        retries: records.iter().filter(|r| r.retry).count(),
        mean_latency_ms: if calls == 0 {
            0.0
        } else {
            latency_sum as f64 / calls as f64
        },
    }
}

/// One row of the resource comparison table.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub metric: String,
    pub a: String,
    pub b: String,
    /// b / a; `None` (flagged) when a is zero.
    pub ratio: Option<f64>,
}

/// Per-metric B/A ratios for calls, tokens, cost and latency.
pub fn comparison_report(a: &CostLedger, b: &CostLedger) -> Result<Vec<ComparisonRow>, CostError> {
    if a.is_empty() || b.is_empty() {
        return Err(CostError::EmptyLedger);
    }
    let ta = a.totals();
    let tb = b.totals();
    let ca = a.total_cost()?;
    let cb = b.total_cost()?;
    let ratio = |x: f64, y: f64| if x == 0.0 { None } else { Some(y / x) };
    let mut rows = vec![
        ComparisonRow {
            metric: "api_calls".into(),
            a: ta.calls.to_string(),
            b: tb.calls.to_string(),
            ratio: ratio(ta.calls as f64, tb.calls as f64),
        },
        ComparisonRow {
            metric: "prompt_tokens".into(),
            a: ta.prompt_tokens.to_string(),
            b: tb.prompt_tokens.to_string(),
            ratio: ratio(ta.prompt_tokens as f64, tb.prompt_tokens as f64),
        },
        ComparisonRow {
            metric: "completion_tokens".into(),
            a: ta.completion_tokens.to_string(),
            b: tb.completion_tokens.to_string(),
            ratio: ratio(ta.completion_tokens as f64, tb.completion_tokens as f64),
        },
        ComparisonRow {
            metric: "total_tokens".into(),
            a: ta.total_tokens.to_string(),
            b: tb.total_tokens.to_string(),
            ratio: ratio(ta.total_tokens as f64, tb.total_tokens as f64),
        },
        ComparisonRow {
            metric: "total_cost_usd".into(),
            a: ca.to_usd_string(),
            b: cb.to_usd_string(),
            ratio: ratio(ca.approx_usd(), cb.approx_usd()),
        },
        ComparisonRow {
            metric: "mean_latency_ms".into(),
            a: format!("{:.1}", ta.mean_latency_ms),
            b: format!("{:.1}", tb.mean_latency_ms),
            ratio: ratio(ta.mean_latency_ms, tb.mean_latency_ms),
        },
    ];
    rows.push(ComparisonRow {
        metric: "retries".into(),
        a: ta.retries.to_string(),
        b: tb.retries.to_string(),
        ratio: None,
    });
    Ok(rows)
}

/// Totals divided by file count.
#[derive(Debug, Clone, Serialize)]
pub struct PerFileReport {
    pub files: usize,
    pub cost_per_file_usd: f64,
    pub tokens_per_file: f64,
    pub calls_per_file: f64,
}

pub fn per_file_report(ledger: &CostLedger, files: usize) -> Result<PerFileReport, CostError> {
    if files == 0 {
        return Err(CostError::EmptyLedger);
    }
    let totals = ledger.totals();
    let cost = ledger.total_cost()?;
    Ok(PerFileReport {
        files,
        cost_per_file_usd: cost.approx_usd() / files as f64,
        tokens_per_file: totals.total_tokens as f64 / files as f64,
        calls_per_file: totals.calls as f64 / files as f64,
    })
}
