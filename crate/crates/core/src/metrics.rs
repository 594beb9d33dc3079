//! Detection and remediation evaluation: confusion matrices, P/R/F1,
//! category-level agreement against a reference system, remediation
//! summary statistics and before/after delta tables.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::llm::RepairResult;
use crate::rules::{Category, Impact, ScanReport};
use crate::validate::ValidationVerdict;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("prediction and label lengths differ: {preds} vs {labels}")]
    LengthMismatch { preds: usize, labels: usize },
    #[error("file sets differ between runs (e.g. {example})")]
    FileSetMismatch { example: String },
    #[error("no results to summarise")]
    Empty,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: u64,
    pub fp: u64,
    pub tn: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.tp + self.fp + self.tn + self.fn_
    }
}

/// Count prediction outcomes against labels.
pub fn confusion(preds: &[bool], labels: &[bool]) -> Result<ConfusionMatrix, MetricsError> {
    if preds.len() != labels.len() {
        return Err(MetricsError::LengthMismatch {
            preds: preds.len(),
            labels: labels.len(),
        });
    }
    let mut m = ConfusionMatrix::default();
    for (&p, &l) in preds.iter().zip(labels) {
        match (p, l) {
            (true, true) => m.tp += 1,
            (true, false) => m.fp += 1,
            (false, false) => m.tn += 1,
            (false, true) => m.fn_ += 1,
        }
    }
    Ok(m)
}

/// Precision/recall/F1 with the zero-denominator convention: the metric
/// is 0 and the result is flagged degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub degenerate: bool,
}

/// Harmonic mean of precision and recall; 0 when their sum is 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

pub fn precision_recall_f1(m: &ConfusionMatrix) -> Prf {
    let mut degenerate = false;
    let precision = if m.tp + m.fp == 0 {
        degenerate = true;
        0.0
    } else {
        m.tp as f64 / (m.tp + m.fp) as f64
    };
    let recall = if m.tp + m.fn_ == 0 {
        degenerate = true;
        0.0
    } else {
        m.tp as f64 / (m.tp + m.fn_) as f64
    };
    Prf {
        precision,
        recall,
        f1: f1_score(precision, recall),
        degenerate,
    }
}

/// Per-category detection flags for one file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryFlags {
    pub syntax: bool,
    pub semantic: bool,
    pub layout: bool,
}

impl CategoryFlags {
    pub fn get(&self, category: Category) -> bool {
        match category {
            Category::Syntax => self.syntax,
            Category::Semantic => self.semantic,
            Category::Layout => self.layout,
        }
    }

    pub fn set(&mut self, category: Category, value: bool) {
        match category {
            Category::Syntax => self.syntax = value,
            Category::Semantic => self.semantic = value,
            Category::Layout => self.layout = value,
        }
    }

    pub fn or_with(&mut self, other: CategoryFlags) {
        self.syntax |= other.syntax;
        self.semantic |= other.semantic;
        self.layout |= other.layout;
    }

    pub fn any(&self) -> bool {
        self.syntax || self.semantic || self.layout
    }

    pub fn from_report(report: &ScanReport) -> CategoryFlags {
        CategoryFlags {
            syntax: report.category_counts.syntax > 0,
            semantic: report.category_counts.semantic > 0,
            layout: report.category_counts.layout > 0,
        }
    }
}

/// Per-file per-category flags for a whole run.
pub type FlagMatrix = BTreeMap<String, CategoryFlags>;

fn check_same_files(a: &FlagMatrix, b: &FlagMatrix) -> Result<(), MetricsError> {
    if a.len() != b.len() || a.keys().zip(b.keys()).any(|(x, y)| x != y) {
        let example = a
            .keys()
            .collect::<BTreeSet<_>>()
            .symmetric_difference(&b.keys().collect::<BTreeSet<_>>())
            .next()
            .map(|s| s.to_string())
            .unwrap_or_else(|| "unknown".into());
        return Err(MetricsError::FileSetMismatch { example });
    }
    Ok(())
}

/// Detection-rate and agreement comparison per category.
#[derive(Debug, Clone, Serialize)]
pub struct CategoryAgreement {
    pub category: Category,
    pub rate_a: f64,
    pub rate_b: f64,
    pub agreement: f64,
}

pub fn category_agreement(
    run_a: &FlagMatrix,
    run_b: &FlagMatrix,
) -> Result<Vec<CategoryAgreement>, MetricsError> {
    check_same_files(run_a, run_b)?;
    let n = run_a.len();
    let mut out = Vec::new();
    for category in Category::ALL {
        let mut hits_a = 0usize;
        let mut hits_b = 0usize;
        let mut agree = 0usize;
        for (file, fa) in run_a {
            let fb = run_b[file];
            let a = fa.get(category);
            let b = fb.get(category);
            hits_a += a as usize;
            hits_b += b as usize;
            agree += (a == b) as usize;
        }
        let denom = n.max(1) as f64;
        out.push(CategoryAgreement {
            category,
            rate_a: hits_a as f64 / denom,
            rate_b: hits_b as f64 / denom,
            agreement: agree as f64 / denom,
        });
    }
    Ok(out)
}

/// Candidate P/R/F1 per category, treating the reference run's flags as
/// labels.
#[derive(Debug, Clone, Serialize)]
pub struct CategoryPrf {
    pub category: Category,
    pub confusion: ConfusionMatrix,
    pub prf: Prf,
}

pub fn relative_performance(
    reference: &FlagMatrix,
    candidate: &FlagMatrix,
) -> Result<Vec<CategoryPrf>, MetricsError> {
    check_same_files(reference, candidate)?;
    let mut out = Vec::new();
    for category in Category::ALL {
        let labels: Vec<bool> = reference.values().map(|f| f.get(category)).collect();
        let preds: Vec<bool> = candidate.values().map(|f| f.get(category)).collect();
        let m = confusion(&preds, &labels)?;
        out.push(CategoryPrf {
            category,
            confusion: m,
            prf: precision_recall_f1(&m),
        });
    }
    Ok(out)
}

/// Remediation effectiveness per strategy (summary table row).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemediationSummary {
    pub strategy: String,
    pub n_files: usize,
    pub syntactic_valid_rate: f64,
    pub structure_preserved_rate: f64,
    pub avg_structure_similarity: f64,
    pub compliance_improved_rate: f64,
    pub fully_fixed_rate: f64,
    pub avg_violations_before: f64,
    pub avg_violations_after: f64,
    /// Mean of (before − after), unclamped: introduced violations subtract.
    pub avg_violations_reduced: f64,
    /// Mean of max(before − after, 0).
    pub avg_violations_reduced_clamped: f64,
    pub avg_iterations: f64,
}

/// Per-file remediation results: (scan before, repair result, verdict).
pub type RemediationInput<'a> = (&'a ScanReport, &'a RepairResult, &'a ValidationVerdict);

/// Group results by strategy and average the verdict fields.
pub fn remediation_summary(
    results: &[RemediationInput<'_>],
) -> Result<Vec<RemediationSummary>, MetricsError> {
    if results.is_empty() {
        return Err(MetricsError::Empty);
    }
    let mut groups: BTreeMap<String, Vec<&RemediationInput<'_>>> = BTreeMap::new();
    for r in results {
        groups.entry(r.1.strategy.to_string()).or_default().push(r);
    }
    let mut out = Vec::new();
    for (strategy, rows) in groups {
        let n = rows.len() as f64;
        let mut sums = RemediationSummary {
            strategy,
            n_files: rows.len(),
            syntactic_valid_rate: 0.0,
            structure_preserved_rate: 0.0,
            avg_structure_similarity: 0.0,
            compliance_improved_rate: 0.0,
            fully_fixed_rate: 0.0,
            avg_violations_before: 0.0,
            avg_violations_after: 0.0,
            avg_violations_reduced: 0.0,
            avg_violations_reduced_clamped: 0.0,
            avg_iterations: 0.0,
        };
        for (scan, repair, verdict) in rows.iter().map(|r| **r) {
            let before = scan.violation_count() as f64;
            let after = verdict.v_after as f64;
            sums.syntactic_valid_rate += verdict.parse_valid as u8 as f64;
            sums.structure_preserved_rate += verdict.structure_preserved as u8 as f64;
            sums.avg_structure_similarity += verdict.structural_similarity;
            sums.compliance_improved_rate += verdict.compliance_improved as u8 as f64;
            sums.fully_fixed_rate += verdict.fully_fixed as u8 as f64;
            sums.avg_violations_before += before;
            sums.avg_violations_after += after;
            sums.avg_violations_reduced += before - after;
            sums.avg_violations_reduced_clamped += (before - after).max(0.0);
            sums.avg_iterations += repair.iterations_used as f64;
        }
        sums.syntactic_valid_rate /= n;
        sums.structure_preserved_rate /= n;
        sums.avg_structure_similarity /= n;
        sums.compliance_improved_rate /= n;
        sums.fully_fixed_rate /= n;
        sums.avg_violations_before /= n;
        sums.avg_violations_after /= n;
        sums.avg_violations_reduced /= n;
        sums.avg_violations_reduced_clamped /= n;
        sums.avg_iterations /= n;
        out.push(sums);
    }
    Ok(out)
}

/// Per-(file, rule) before/after violation counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuleDeltaRow {
    pub file_id: String,
    pub rule_id: String,
    pub category: Category,
    pub impact: Impact,
    pub before: usize,
    pub after: usize,
    /// after − before; negative means reduction.
    pub delta: i64,
}

/// Per-(file, category) before/after violation counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryDeltaRow {
    pub file_id: String,
    pub category: Category,
    pub before: usize,
    pub after: usize,
    pub delta: i64,
}

#[derive(Debug, Clone, Default)]
pub struct DeltaTables {
    pub rules: Vec<RuleDeltaRow>,
    pub categories: Vec<CategoryDeltaRow>,
}

/// Rule- and category-level deltas for paired before/after reports.
/// Rows are retained for every rule or category present on either side,
/// including delta-zero rows.
pub fn before_after_deltas(pairs: &[(String, &ScanReport, &ScanReport)]) -> DeltaTables {
    let mut tables = DeltaTables::default();
    for (file_id, before, after) in pairs {
        let mut rules: BTreeMap<&str, (usize, usize, Category, Impact)> = BTreeMap::new();
        for v in &before.violations {
            let e = rules
                .entry(&v.rule_id)
                .or_insert((0, 0, v.category, v.impact));
            e.0 += 1;
        }
        for v in &after.violations {
            let e = rules
                .entry(&v.rule_id)
                .or_insert((0, 0, v.category, v.impact));
            e.1 += 1;
        }
        for (rule_id, (b, a, category, impact)) in rules {
            tables.rules.push(RuleDeltaRow {
                file_id: file_id.clone(),
                rule_id: rule_id.to_string(),
                category,
                impact,
                before: b,
                after: a,
                delta: a as i64 - b as i64,
            });
        }
        for category in Category::ALL {
            let b = before.category_counts.get(category);
            let a = after.category_counts.get(category);
            if b == 0 && a == 0 {
                continue;
            }
            tables.categories.push(CategoryDeltaRow {
                file_id: file_id.clone(),
                category,
                before: b,
                after: a,
                delta: a as i64 - b as i64,
            });
        }
    }
    tables
}
