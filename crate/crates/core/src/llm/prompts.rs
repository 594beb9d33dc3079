//! Prompt templates. Deterministic string assembly; the version tag is
//! embedded in every prompt so scripts and logs can pin against it.

use crate::rules::Violation;
use crate::validate::ValidationVerdict;

pub const PROMPT_TEMPLATE_VERSION: &str = "v1";

fn numbered_violations(violations: &[Violation]) -> String {
    let mut out = String::new();
    for (i, v) in violations.iter().enumerate() {
        out.push_str(&format!(
            "{}. [{}/{}] {} at {} — {}\n",
            i + 1,
            v.category,
            v.impact,
            v.rule_id,
            v.node_path,
            v.message
        ));
    }
    out
}

/// Ask for a binary verdict over one chunk, as constrained JSON.
pub fn build_detection_prompt(chunk_html: &str) -> String {
    format!(
        "### TASK: detect (template {PROMPT_TEMPLATE_VERSION})\n\
         You are an accessibility auditor. Inspect the HTML fragment below for WCAG \
         violations across three categories: syntax (structural HTML errors such as \
         missing alt attributes or invalid nesting), semantic (meaning and ARIA errors \
         such as wrong roles or missing labels), and layout (visual and interaction \
         errors such as insufficient color contrast).\n\
         Reply with exactly one JSON object and nothing else:\n\
         {{\"violation\": true|false, \"categories\": {{\"syntax\": bool, \"semantic\": bool, \
         \"layout\": bool}}, \"rationale\": \"short explanation\"}}\n\
         \n\
         ### HTML\n\
         {chunk_html}\n"
    )
}

/// Ask for a corrected document given the scanner's findings.
pub fn build_repair_prompt(doc_html: &str, violations: &[Violation]) -> String {
    format!(
        "### TASK: repair (template {PROMPT_TEMPLATE_VERSION})\n\
         You are an accessibility remediation agent. The document below contains the \
         following detected violations (syntax / semantic / layout taxonomy):\n\
         {}\n\
         Produce a corrected version of the ENTIRE document that fixes the violations \
         while preserving the document structure and content. Reply with one fenced \
         code block containing only the corrected HTML.\n\
         \n\
         ### HTML\n\
         {doc_html}\n",
        numbered_violations(violations)
    )
}

/// Ask for a refined repair after a failed validation pass.
pub fn build_feedback_prompt(
    current_html: &str,
    verdict: &ValidationVerdict,
    remaining: &[Violation],
) -> String {
    let mut failed_gates = Vec::new();
    if !verdict.compliance_improved {
        failed_gates.push("compliance-improvement");
    }
    if !verdict.parse_valid {
        failed_gates.push("parse-validity");
    }
    if !verdict.structure_preserved {
        failed_gates.push("structure-preservation");
    }
    format!(
        "### TASK: refine (template {PROMPT_TEMPLATE_VERSION})\n\
         Your previous repair failed validation.\n\
         Failed gates: {}.\n\
         Violations before: {}. Violations after your repair: {}.\n\
         Structural similarity to the original: {:.3} (threshold is the configured \
         structure-preservation minimum; stay close to the original tree).\n\
         Remaining violations:\n\
         {}\n\
         Produce a corrected version of the ENTIRE document below. Fix the remaining \
         violations without altering the document structure. Reply with one fenced \
         code block containing only the corrected HTML.\n\
         \n\
         ### HTML\n\
         {current_html}\n",
        if failed_gates.is_empty() {
            "none".to_string()
        } else {
            failed_gates.join(", ")
        },
        verdict.v_before,
        verdict.v_after,
        verdict.structural_similarity,
        numbered_violations(remaining)
    )
}
