//! Per-file JSON report schema and CSV table writers. Every writer is
//! deterministic: stable field order, stable row order, fixed float
//! formatting.

use std::fs;
use std::path::Path;

use a11y_core::cost::UsageRecord;
use a11y_core::llm::RepairResult;
use a11y_core::metrics::{
    CategoryAgreement, CategoryFlags, CategoryPrf, ConfusionMatrix, Prf, RemediationSummary,
};
use a11y_core::rules::ScanReport;
use a11y_core::validate::ValidationVerdict;
use anyhow::Context;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const REPORT_SCHEMA: &str = "a11y-report/v1";

/// One JSON document per file: scan-before, detection, repair trace,
/// verdict, usage.
#[derive(Debug, Serialize, Deserialize)]
pub struct FileReport {
    pub schema: String,
    pub file_id: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scan: Option<ScanReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub llm_detection: Option<LlmDetection>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub repair: Option<RepairResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub verdict: Option<ValidationVerdict>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scan_after: Option<ScanReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub usage: Option<Vec<UsageRecord>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

impl FileReport {
    pub fn new(file_id: &str) -> FileReport {
        FileReport {
            schema: REPORT_SCHEMA.to_string(),
            file_id: file_id.to_string(),
            label: None,
            scan: None,
            llm_detection: None,
            repair: None,
            verdict: None,
            scan_after: None,
            usage: None,
            error: None,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LlmDetection {
    pub page_verdict: u8,
    pub flags: CategoryFlags,
    pub chunks: Vec<ChunkDetection>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ChunkDetection {
    pub index: usize,
    pub violation: bool,
    pub retries: u32,
    pub rationale: String,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let mut bytes = serde_json::to_vec_pretty(value)
        .with_context(|| format!("serialising {}", path.display()))?;
    bytes.push(b'\n');
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_report(path: &Path) -> Result<FileReport, CliError> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let report: FileReport =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(report)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(csv::Writer::from_writer(file))
}

fn f4(x: f64) -> String {
    format!("{x:.4}")
}

/// Binary detection performance, one row per system.
pub fn write_detection_summary(
    path: &Path,
    rows: &[(&str, ConfusionMatrix, Prf)],
) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "system",
        "precision",
        "recall",
        "f1",
        "tp",
        "fp",
        "tn",
        "fn",
        "degenerate",
    ])
    .context("csv")?;
    for (system, m, prf) in rows {
        w.write_record([
            system.to_string(),
            f4(prf.precision),
            f4(prf.recall),
            f4(prf.f1),
            m.tp.to_string(),
            m.fp.to_string(),
            m.tn.to_string(),
            m.fn_.to_string(),
            prf.degenerate.to_string(),
        ])
        .context("csv")?;
    }
    w.flush().context("csv flush")?;
    Ok(())
}

/// Detection rate and agreement per category.
pub fn write_category_table(path: &Path, rows: &[CategoryAgreement]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(["category", "rule_based_rate", "llm_rate", "agreement"])
        .context("csv")?;
    for r in rows {
        w.write_record([
            r.category.to_string(),
            f4(r.rate_a),
            f4(r.rate_b),
            f4(r.agreement),
        ])
        .context("csv")?;
    }
    w.flush().context("csv flush")?;
    Ok(())
}

/// Candidate-vs-reference P/R/F1 per category.
pub fn write_relative_performance(path: &Path, rows: &[CategoryPrf]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "category",
        "precision",
        "recall",
        "f1",
        "tp",
        "fp",
        "tn",
        "fn",
    ])
    .context("csv")?;
    for r in rows {
        w.write_record([
            r.category.to_string(),
            f4(r.prf.precision),
            f4(r.prf.recall),
            f4(r.prf.f1),
            r.confusion.tp.to_string(),
            r.confusion.fp.to_string(),
            r.confusion.tn.to_string(),
            r.confusion.fn_.to_string(),
        ])
        .context("csv")?;
    }
    w.flush().context("csv flush")?;
    Ok(())
}

/// Remediation effectiveness summary, one row per strategy.
pub fn write_remediation_summary(path: &Path, rows: &[RemediationSummary]) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "strategy",
        "n_files",
        "syntactic_valid_rate",
        "structure_preserved_rate",
        "avg_structure_similarity",
        "compliance_improved_rate",
        "fully_fixed_rate",
        "avg_violations_before",
        "avg_violations_after",
        "avg_violations_reduced",
        "avg_violations_reduced_clamped",
        "avg_iterations",
    ])
    .context("csv")?;
    for r in rows {
        w.write_record([
            r.strategy.clone(),
            r.n_files.to_string(),
            f4(r.syntactic_valid_rate),
            f4(r.structure_preserved_rate),
            f4(r.avg_structure_similarity),
            f4(r.compliance_improved_rate),
            f4(r.fully_fixed_rate),
            f4(r.avg_violations_before),
            f4(r.avg_violations_after),
            f4(r.avg_violations_reduced),
            f4(r.avg_violations_reduced_clamped),
            f4(r.avg_iterations),
        ])
        .context("csv")?;
    }
    w.flush().context("csv flush")?;
    Ok(())
}

pub fn write_rule_deltas(
    path: &Path,
    rows: &[a11y_core::metrics::RuleDeltaRow],
) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "filename", "rule_id", "category", "impact", "before", "after", "delta",
    ])
    .context("csv")?;
    for r in rows {
        w.write_record([
            r.file_id.clone(),
            r.rule_id.clone(),
            r.category.to_string(),
            r.impact.to_string(),
            r.before.to_string(),
            r.after.to_string(),
            r.delta.to_string(),
        ])
        .context("csv")?;
    }
    w.flush().context("csv flush")?;
    Ok(())
}

pub fn write_category_deltas(
    path: &Path,
    rows: &[a11y_core::metrics::CategoryDeltaRow],
) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record(["filename", "category", "before", "after", "delta"])
        .context("csv")?;
    for r in rows {
        w.write_record([
            r.file_id.clone(),
            r.category.to_string(),
            r.before.to_string(),
            r.after.to_string(),
            r.delta.to_string(),
        ])
        .context("csv")?;
    }
    w.flush().context("csv flush")?;
    Ok(())
}

/// Violations introduced by repairs (Filename / # / Category /
/// Description / Element layout).
pub fn write_new_violations(
    path: &Path,
    rows: &[(String, String, Vec<a11y_core::Violation>)],
) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "filename",
        "strategy",
        "n",
        "category",
        "description",
        "element",
    ])
    .context("csv")?;
    for (file, strategy, violations) in rows {
        for (i, v) in violations.iter().enumerate() {
            w.write_record([
                file.clone(),
                strategy.clone(),
                (i + 1).to_string(),
                v.category.to_string(),
                format!("{}: {}", v.rule_id, v.message),
                v.node_path.clone(),
            ])
            .context("csv")?;
        }
    }
    w.flush().context("csv flush")?;
    Ok(())
}

/// Aggregate resource table: one column per ledger plus a B/A ratio when
/// exactly two were given.
pub fn write_cost_aggregate(
    path: &Path,
    names: &[String],
    rows: &[(String, Vec<String>, Option<f64>)],
) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["metric".to_string()];
    header.extend(names.iter().cloned());
    if names.len() == 2 {
        header.push("ratio".to_string());
    }
    w.write_record(&header).context("csv")?;
    for (metric, values, ratio) in rows {
        let mut record = vec![metric.clone()];
        record.extend(values.iter().cloned());
        if names.len() == 2 {
            record.push(ratio.map(f4).unwrap_or_default());
        }
        w.write_record(&record).context("csv")?;
    }
    w.flush().context("csv flush")?;
    Ok(())
}

pub fn write_per_file_costs(
    path: &Path,
    rows: &[(String, a11y_core::cost::PerFileReport)],
) -> Result<(), CliError> {
    let mut w = csv_writer(path)?;
    w.write_record([
        "ledger",
        "files",
        "cost_per_file_usd",
        "tokens_per_file",
        "calls_per_file",
    ])
    .context("csv")?;
    for (name, r) in rows {
        w.write_record([
            name.clone(),
            r.files.to_string(),
            format!("{:.4}", r.cost_per_file_usd),
            format!("{:.1}", r.tokens_per_file),
            format!("{:.2}", r.calls_per_file),
        ])
        .context("csv")?;
    }
    w.flush().context("csv flush")?;
    Ok(())
}
