//! Deterministic rule-based violation detection over static DOM trees.
//!
//! The registry binds the shipped rule catalog (`catalog.toml`) to static
//! check functions. Scanning is pure: identical input yields an identical
//! report (modulo the caller-supplied timestamp), with violations ordered
//! by document position then rule id.

mod catalog;
mod checks;
mod contrast;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::html::{DomTree, NodeId};

/// Violation taxonomy: structural HTML errors, meaning/ARIA errors, and
/// visual/interaction errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Syntax,
    Semantic,
    Layout,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::Syntax, Category::Semantic, Category::Layout];

    pub fn as_str(&self) -> &'static str {
        match self {
            Category::Syntax => "syntax",
            Category::Semantic => "semantic",
            Category::Layout => "layout",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Impact {
    Minor,
    Moderate,
    Serious,
    Critical,
}

impl fmt::Display for Impact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Impact::Minor => "minor",
            Impact::Moderate => "moderate",
            Impact::Serious => "serious",
            Impact::Critical => "critical",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum RuleError {
    #[error("unknown rule id: {0}")]
    UnknownRule(String),
}

/// One rule hit located at a DOM node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub rule_id: String,
    pub category: Category,
    pub impact: Impact,
    /// Root-to-node index path plus tag, e.g. `/0/1/0:img`.
    pub node_path: String,
    /// Tag sequence locator tolerant to index shifts, e.g. `html>body>img`.
    pub tag_path: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub span: Option<(usize, usize)>,
}

impl Violation {
    /// Fingerprint used for before/after diffing.
    pub fn fingerprint(&self) -> (String, String) {
        (self.rule_id.clone(), self.tag_path.clone())
    }
}

/// Per-category violation counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CategoryCounts {
    pub syntax: usize,
    pub semantic: usize,
    pub layout: usize,
}

impl CategoryCounts {
    pub fn get(&self, category: Category) -> usize {
        match category {
            Category::Syntax => self.syntax,
            Category::Semantic => self.semantic,
            Category::Layout => self.layout,
        }
    }

    fn bump(&mut self, category: Category) {
        match category {
            Category::Syntax => self.syntax += 1,
            Category::Semantic => self.semantic += 1,
            Category::Layout => self.layout += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.syntax + self.semantic + self.layout
    }
}

/// A rule that could not be evaluated statically on some nodes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRule {
    pub rule_id: String,
    pub reason: String,
    pub count: usize,
}

/// All violations found in one document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub document_id: String,
    pub violations: Vec<Violation>,
    pub category_counts: CategoryCounts,
    pub scanned_at: i64,
    pub skipped_rules: Vec<SkippedRule>,
}

impl ScanReport {
    /// V(x): the number of violations detected.
    pub fn violation_count(&self) -> usize {
        self.violations.len()
    }

    /// Count of violations for one rule.
    pub fn rule_count(&self, rule_id: &str) -> usize {
        self.violations
            .iter()
            .filter(|v| v.rule_id == rule_id)
            .count()
    }
}

/// Binary page label: 1 iff the report contains any violation.
pub fn page_label(report: &ScanReport) -> u8 {
    u8::from(report.violation_count() > 0)
}

pub(crate) struct Hit {
    pub node: NodeId,
    pub message: String,
}

pub(crate) struct Skip {
    pub reason: String,
}

#[derive(Default)]
pub(crate) struct RuleOutcome {
    pub hits: Vec<Hit>,
    pub skipped: Vec<Skip>,
}

type CheckFn = fn(&DomTree) -> RuleOutcome;

/// Rule metadata plus its check function.
pub struct Rule {
    pub id: String,
    pub category: Category,
    pub impact: Impact,
    pub wcag: String,
    pub description: String,
    pub note: Option<String>,
    check: CheckFn,
}

/// Immutable rule set; build once, share everywhere.
pub struct Registry {
    version: String,
    rules: Vec<Rule>,
}

impl Registry {
    /// The shipped catalog bound to its check functions.
    pub fn standard() -> Registry {
        catalog::load_standard()
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn get(&self, rule_id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == rule_id)
    }

    /// Catalog category for a rule id.
    pub fn categorize(&self, rule_id: &str) -> Result<Category, RuleError> {
        self.get(rule_id)
            .map(|r| r.category)
            .ok_or_else(|| RuleError::UnknownRule(rule_id.to_string()))
    }

    pub(crate) fn from_parts(version: String, rules: Vec<Rule>) -> Registry {
        Registry { version, rules }
    }
}

/// Run every rule over the document. Deterministic; `document_id` and
/// `scanned_at` are echoed into the report.
pub fn scan_with_meta(
    doc: &DomTree,
    registry: &Registry,
    document_id: &str,
    scanned_at: i64,
) -> ScanReport {
    let order: HashMap<NodeId, usize> = doc
        .elements()
        .into_iter()
        .enumerate()
        .map(|(i, id)| (id, i))
        .collect();

    let mut keyed: Vec<(usize, Violation)> = Vec::new();
    let mut skipped: Vec<SkippedRule> = Vec::new();
    for rule in registry.rules() {
        let outcome = (rule.check)(doc);
        for hit in outcome.hits {
            let violation = Violation {
                rule_id: rule.id.clone(),
                category: rule.category,
                impact: rule.impact,
                node_path: doc.node_path(hit.node),
                tag_path: doc.tag_sequence(hit.node),
                message: hit.message,
                span: doc.span(hit.node),
            };
            keyed.push((
                order.get(&hit.node).copied().unwrap_or(usize::MAX),
                violation,
            ));
        }
        if !outcome.skipped.is_empty() {
            let reason = outcome.skipped[0].reason.clone();
            skipped.push(SkippedRule {
                rule_id: rule.id.clone(),
                reason,
                count: outcome.skipped.len(),
            });
        }
    }
    keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.rule_id.cmp(&b.1.rule_id)));

    let mut counts = CategoryCounts::default();
    let violations: Vec<Violation> = keyed
        .into_iter()
        .map(|(_, v)| {
            counts.bump(v.category);
            v
        })
        .collect();

    ScanReport {
        document_id: document_id.to_string(),
        violations,
        category_counts: counts,
        scanned_at,
        skipped_rules: skipped,
    }
}

/// [`scan_with_meta`] with empty metadata.
pub fn scan(doc: &DomTree, registry: &Registry) -> ScanReport {
    scan_with_meta(doc, registry, "", 0)
}


#[cfg(test)]
mod skip_metadata_tests {
    use super::*;
    use crate::html::parse_html;

    #[test]
    fn unresolvable_contrast_lands_in_skipped_rules() {
        let reg = Registry::standard();
        let doc =
            parse_html("<main><p style=\"color: var(--ink)\">themed text</p></main>").unwrap();
        let report = scan(&doc, &reg);
        assert_eq!(report.violation_count(), 0);
        let skip = report
            .skipped_rules
            .iter()
            .find(|s| s.rule_id == "color-contrast")
            .expect("contrast skip recorded");
        assert_eq!(skip.count, 1);
        assert!(!skip.reason.is_empty());
    }
}
