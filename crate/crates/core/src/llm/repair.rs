//! Zero-shot and iterative agentic repair.
//!
//! Both strategies prompt with the document plus the scanner's findings
//! and extract HTML from the completion (first fenced code block, else
//! the widest substring that parses to a non-empty document). Documents
//! over the chunk budget are repaired chunk by chunk and reassembled
//! before validation; chunks without violations pass through untouched.
//!
//! The agent loop validates after every attempt, feeds the failure gates
//! and remaining violations back, and stops on acceptance or after the
//! iteration cap. On exhaustion the result carries the best attempt by
//! (lowest violations-after, then highest similarity, then earliest).

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::prompts::{build_feedback_prompt, build_repair_prompt};
use super::provider::{LlmProvider, ProviderError};
use super::{CallCtx, LlmError};
use crate::html::{chunk, estimate_tokens, parse_html, serialize, Chunk, DomTree};
use crate::rules::{Registry, ScanReport, Violation};
use crate::validate::{validate_detailed, ValidateOptions, ValidationVerdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepairStrategy {
    ZeroShot,
    Agent,
}

impl fmt::Display for RepairStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RepairStrategy::ZeroShot => "zero_shot",
            RepairStrategy::Agent => "agent",
        })
    }
}

impl From<RepairStrategy> for crate::cost::Strategy {
    fn from(s: RepairStrategy) -> Self {
        match s {
            RepairStrategy::ZeroShot => crate::cost::Strategy::ZeroShot,
            RepairStrategy::Agent => crate::cost::Strategy::Agent,
        }
    }
}

/// Aggregated provider usage behind one attempt (several calls when the
/// document was chunked).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptUsage {
    pub calls: u32,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepairAttempt {
    /// 1-based.
    pub iteration: u32,
    pub input_html: String,
    pub output_html: String,
    pub usage: AttemptUsage,
    pub verdict: Option<ValidationVerdict>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepairResult {
    pub strategy: RepairStrategy,
    pub attempts: Vec<RepairAttempt>,
    /// Output of the selected attempt.
    pub final_html: String,
    pub accepted: bool,
    pub iterations_used: u32,
    /// Index into `attempts`: the accepted attempt, or the best attempt by
    /// (violations-after ascending, similarity descending) on exhaustion.
    pub selected_attempt: usize,
    /// Provider failure that aborted the loop, when any.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RepairOptions {
    pub max_iterations: u32,
    pub chunk_budget: usize,
    pub decoding: super::provider::DecodingParams,
    pub max_parse_retries: u32,
    pub validate: ValidateOptions,
}

impl Default for RepairOptions {
    fn default() -> Self {
        Self {
            max_iterations: 3,
            chunk_budget: 4000,
            decoding: Default::default(),
            max_parse_retries: 2,
            validate: Default::default(),
        }
    }
}

/// First fenced code block, else the widest `<`…`>` slice that parses to
/// a non-empty document, else the whole completion if it does.
pub fn extract_html(completion: &str) -> Option<String> {
    if let Some(block) = fenced_block(completion) {
        let block = block.trim();
        if !block.is_empty() {
            return Some(block.to_string());
        }
    }
    let start = completion.find('<');
    let end = completion.rfind('>');
    if let (Some(s), Some(e)) = (start, end) {
        if s < e {
            let slice = &completion[s..=e];
            if parses_non_empty(slice) {
                return Some(slice.to_string());
            }
        }
    }
    let whole = completion.trim();
    if parses_non_empty(whole) {
        return Some(whole.to_string());
    }
    None
}

fn parses_non_empty(text: &str) -> bool {
    // at least one element beyond the implied html/head/body scaffolding
    match parse_html(text) {
        Ok(tree) => tree.element_count() > 3,
        Err(_) => false,
    }
}

fn fenced_block(text: &str) -> Option<&str> {
    let open = text.find("```")?;
    let after_fence = &text[open + 3..];
    let body_start = after_fence.find('\n')? + 1;
    let body = &after_fence[body_start..];
    let close = body.find("```")?;
    Some(&body[..close])
}

/// One candidate generation: usage is always populated (calls already
/// landed in the ledger), output only on successful extraction.
struct Generated {
    output: Option<String>,
    usage: AttemptUsage,
    provider_error: Option<ProviderError>,
}

struct GenInputs<'a> {
    current_html: &'a str,
    violations: &'a [Violation],
    feedback: Option<&'a ValidationVerdict>,
}

fn prompt_for(inputs: &GenInputs<'_>, html: &str, violations: &[Violation]) -> String {
    match inputs.feedback {
        None => build_repair_prompt(html, violations),
        Some(verdict) => build_feedback_prompt(html, verdict, violations),
    }
}

fn generate(
    inputs: &GenInputs<'_>,
    provider: &dyn LlmProvider,
    opts: &RepairOptions,
    ctx: &CallCtx<'_>,
    retry_flag: bool,
) -> Result<Generated, LlmError> {
    let mut usage = AttemptUsage::default();
    let mut call = |prompt: &str| -> Result<Option<String>, ProviderError> {
        let result = provider.complete(prompt, &opts.decoding)?;
        ctx.record(provider.model_id(), &result, retry_flag);
        usage.calls += 1;
        usage.prompt_tokens += result.usage.prompt_tokens;
        usage.completion_tokens += result.usage.completion_tokens;
        Ok(extract_html(&result.text))
    };

    if estimate_tokens(inputs.current_html) <= opts.chunk_budget {
        let prompt = prompt_for(inputs, inputs.current_html, inputs.violations);
        return Ok(match call(&prompt) {
            Ok(output) => Generated {
                output,
                usage,
                provider_error: None,
            },
            Err(e) => Generated {
                output: None,
                usage,
                provider_error: Some(e),
            },
        });
    }

    // chunked path: repair violating chunks, pass the rest through
    let tree = parse_html(inputs.current_html).map_err(LlmError::Html)?;
    let chunks = chunk(&tree, opts.chunk_budget).map_err(LlmError::Chunk)?;
    let by_chunk = assign_violations(&tree, &chunks, inputs.violations);
    let mut pieces: Vec<String> = Vec::with_capacity(chunks.len());
    for (i, c) in chunks.iter().enumerate() {
        let assigned = by_chunk.get(&i).map(Vec::as_slice).unwrap_or(&[]);
        if assigned.is_empty() {
            pieces.push(c.content.clone());
            continue;
        }
        let prompt = prompt_for(inputs, &c.content, assigned);
        match call(&prompt) {
            Ok(Some(fragment)) => pieces.push(fragment),
            Ok(None) => {
                return Ok(Generated {
                    output: None,
                    usage,
                    provider_error: None,
                })
            }
            Err(e) => {
                return Ok(Generated {
                    output: None,
                    usage,
                    provider_error: Some(e),
                })
            }
        }
    }
    Ok(Generated {
        output: Some(pieces.concat()),
        usage,
        provider_error: None,
    })
}

/// Map violations onto chunks via document-order element ranges.
fn assign_violations(
    tree: &DomTree,
    chunks: &[Chunk],
    violations: &[Violation],
) -> HashMap<usize, Vec<Violation>> {
    let index_by_path: HashMap<String, usize> = tree
        .elements()
        .into_iter()
        .enumerate()
        .map(|(i, id)| (tree.node_path(id), i))
        .collect();
    let mut out: HashMap<usize, Vec<Violation>> = HashMap::new();
    for v in violations {
        let Some(&idx) = index_by_path.get(&v.node_path) else {
            continue; // paths from another tree revision; chunk owners re-scan next round
        };
        for (ci, c) in chunks.iter().enumerate() {
            if let Some((s, e)) = c.element_range {
                if idx >= s && idx <= e {
                    out.entry(ci).or_default().push(v.clone());
                    break;
                }
            }
        }
    }
    out
}

/// Single-call repair. The result's verdict comes from the full
/// validation gate; extraction failure is an error (the call is already
/// in the ledger).
pub fn repair_zero_shot(
    original: &DomTree,
    scan_report: &ScanReport,
    provider: &dyn LlmProvider,
    registry: &Registry,
    opts: &RepairOptions,
    ctx: &CallCtx<'_>,
) -> Result<RepairResult, LlmError> {
    let input_html = serialize(original);
    let generated = generate(
        &GenInputs {
            current_html: &input_html,
            violations: &scan_report.violations,
            feedback: None,
        },
        provider,
        opts,
        ctx,
        false,
    )?;
    if let Some(e) = generated.provider_error {
        return Err(LlmError::Provider(e));
    }
    let output = generated.output.ok_or(LlmError::EmptyExtraction)?;
    let verdict = validate_detailed(original, &output, registry, &opts.validate).verdict;
    let accepted = verdict.accepted;
    Ok(RepairResult {
        strategy: RepairStrategy::ZeroShot,
        attempts: vec![RepairAttempt {
            iteration: 1,
            input_html,
            output_html: output.clone(),
            usage: generated.usage,
            verdict: Some(verdict),
        }],
        final_html: output,
        accepted,
        iterations_used: 1,
        selected_attempt: 0,
        error: None,
    })
}

/// Iterative analyze–repair–refine loop, bounded by `max_iterations`.
pub fn repair_agentic(
    original: &DomTree,
    scan_report: &ScanReport,
    provider: &dyn LlmProvider,
    registry: &Registry,
    opts: &RepairOptions,
    ctx: &CallCtx<'_>,
) -> Result<RepairResult, LlmError> {
    let mut current_html = serialize(original);
    let mut remaining: Vec<Violation> = scan_report.violations.clone();
    let mut last_verdict: Option<ValidationVerdict> = None;
    let mut attempts: Vec<RepairAttempt> = Vec::new();
    let mut error: Option<String> = None;

    for iteration in 1..=opts.max_iterations.max(1) {
        let generated = generate(
            &GenInputs {
                current_html: &current_html,
                violations: &remaining,
                feedback: last_verdict.as_ref(),
            },
            provider,
            opts,
            ctx,
            iteration > 1,
        )?;
        if let Some(e) = generated.provider_error {
            if attempts.is_empty() {
                return Err(LlmError::Provider(e));
            }
            error = Some(e.to_string());
            break;
        }
        match generated.output {
            None => {
                // unusable completion: force the parse gate shut and refine
                let verdict = validate_detailed(original, "", registry, &opts.validate).verdict;
                attempts.push(RepairAttempt {
                    iteration,
                    input_html: current_html.clone(),
                    output_html: String::new(),
                    usage: generated.usage,
                    verdict: Some(verdict.clone()),
                });
                last_verdict = Some(verdict);
            }
            Some(output) => {
                let outcome = validate_detailed(original, &output, registry, &opts.validate);
                attempts.push(RepairAttempt {
                    iteration,
                    input_html: current_html.clone(),
                    output_html: output.clone(),
                    usage: generated.usage,
                    verdict: Some(outcome.verdict.clone()),
                });
                if outcome.verdict.accepted {
                    break;
                }
                if let Some(after) = outcome.after {
                    remaining = after.violations;
                }
                last_verdict = Some(outcome.verdict);
                current_html = output;
            }
        }
    }

    let selected = select_attempt(&attempts);
    let accepted = attempts[selected]
        .verdict
        .as_ref()
        .map(|v| v.accepted)
        .unwrap_or(false);
    Ok(RepairResult {
        strategy: RepairStrategy::Agent,
        final_html: attempts[selected].output_html.clone(),
        accepted,
        iterations_used: attempts.len() as u32,
        selected_attempt: selected,
        attempts,
        error,
    })
}

/// Accepted attempt if any, else lexicographic best by
/// (violations-after ascending, similarity descending, index ascending).
fn select_attempt(attempts: &[RepairAttempt]) -> usize {
    debug_assert!(!attempts.is_empty());
    if let Some(i) = attempts
        .iter()
        .position(|a| a.verdict.as_ref().is_some_and(|v| v.accepted))
    {
        return i;
    }
    let mut best = 0usize;
    for (i, a) in attempts.iter().enumerate().skip(1) {
        let key = |at: &RepairAttempt| {
            at.verdict
                .as_ref()
                .map(|v| (v.v_after, -v.structural_similarity))
                .unwrap_or((usize::MAX, 0.0))
        };
        let (va, sa) = key(a);
        let (vb, sb) = key(&attempts[best]);
        if va < vb || (va == vb && sa < sb) {
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::super::mock::{MockEntry, MockProvider, MockResponse, MockScript};
    use super::*;
    use crate::clock::FixedClock;
    use crate::cost::{CostLedger, PriceTable, Scope, Strategy};
    use crate::rules::{scan, Registry};

    fn ctx<'a>(ledger: &'a CostLedger, clock: &'a FixedClock, strategy: Strategy) -> CallCtx<'a> {
        CallCtx {
            ledger,
            clock,
            file_id: "file-1",
            strategy,
        }
    }

    fn mock_seq(responses: Vec<String>) -> MockProvider {
        MockProvider::new(MockScript {
            model: "mock-model".into(),
            latency_ms: 1,
            entries: vec![MockEntry {
                contains: vec![],
                responses: responses.into_iter().map(MockResponse::Text).collect(),
            }],
        })
    }

    fn fenced(html: &str) -> String {
        format!("```html\n{html}\n```")
    }

    const BROKEN: &str = "<main><img src=a.png><img src=b.png></main>";
    const FIXED: &str = "<main><img alt=\"a\" src=\"a.png\"><img alt=\"b\" src=\"b.png\"></main>";

    #[test]
    fn zero_shot_fix_accepted() {
        let reg = Registry::standard();
        let doc = parse_html(BROKEN).unwrap();
        let report = scan(&doc, &reg);
        let ledger = CostLedger::new(PriceTable::new());
        let clock = FixedClock(0);
        let provider = mock_seq(vec![fenced(FIXED)]);
        let result = repair_zero_shot(
            &doc,
            &report,
            &provider,
            &reg,
            &RepairOptions::default(),
            &ctx(&ledger, &clock, Strategy::ZeroShot),
        )
        .unwrap();
        assert!(result.accepted);
        assert_eq!(result.iterations_used, 1);
        assert_eq!(result.attempts.len(), 1);
        let verdict = result.attempts[0].verdict.as_ref().unwrap();
        assert!(verdict.fully_fixed);
        assert_eq!(ledger.overhead(Scope::File("file-1")).unwrap(), 1);
    }

    #[test]
    fn identity_completion_is_rejected() {
        let reg = Registry::standard();
        let doc = parse_html(BROKEN).unwrap();
        let report = scan(&doc, &reg);
        let ledger = CostLedger::new(PriceTable::new());
        let clock = FixedClock(0);
        let provider = mock_seq(vec![fenced(BROKEN)]);
        let result = repair_zero_shot(
            &doc,
            &report,
            &provider,
            &reg,
            &RepairOptions::default(),
            &ctx(&ledger, &clock, Strategy::ZeroShot),
        )
        .unwrap();
        assert!(!result.accepted);
        let verdict = result.attempts[0].verdict.as_ref().unwrap();
        assert!(!verdict.compliance_improved);
        assert!(verdict.parse_valid);
    }

    #[test]
    fn partial_fix_improves_without_fully_fixing() {
        let reg = Registry::standard();
        let doc =
            parse_html("<main><img src=a.png><img src=b.png><img src=c.png><img src=d.png></main>")
                .unwrap();
        let report = scan(&doc, &reg);
        assert_eq!(report.violation_count(), 4);
        let half = "<main><img alt=\"a\" src=\"a.png\"><img alt=\"b\" src=\"b.png\">\
                    <img src=\"c.png\"><img src=\"d.png\"></main>";
        let ledger = CostLedger::new(PriceTable::new());
        let clock = FixedClock(0);
        let provider = mock_seq(vec![fenced(half)]);
        let result = repair_zero_shot(
            &doc,
            &report,
            &provider,
            &reg,
            &RepairOptions::default(),
            &ctx(&ledger, &clock, Strategy::ZeroShot),
        )
        .unwrap();
        let verdict = result.attempts[0].verdict.as_ref().unwrap();
        assert_eq!(verdict.v_before, 4);
        assert_eq!(verdict.v_after, 2);
        assert!(verdict.compliance_improved);
        assert!(!verdict.fully_fixed);
        assert!(result.accepted);
    }

    #[test]
    fn agent_first_try_success() {
        let reg = Registry::standard();
        let doc = parse_html(BROKEN).unwrap();
        let report = scan(&doc, &reg);
        let ledger = CostLedger::new(PriceTable::new());
        let clock = FixedClock(0);
        let provider = mock_seq(vec![fenced(FIXED)]);
        let result = repair_agentic(
            &doc,
            &report,
            &provider,
            &reg,
            &RepairOptions::default(),
            &ctx(&ledger, &clock, Strategy::Agent),
        )
        .unwrap();
        assert!(result.accepted);
        assert_eq!(result.iterations_used, 1);
    }

    #[test]
    fn agent_fail_then_fix_uses_two_iterations() {
        let reg = Registry::standard();
        let doc = parse_html(BROKEN).unwrap();
        let report = scan(&doc, &reg);
        let ledger = CostLedger::new(PriceTable::new());
        let clock = FixedClock(0);
        let provider = mock_seq(vec![fenced(BROKEN), fenced(FIXED)]);
        let result = repair_agentic(
            &doc,
            &report,
            &provider,
            &reg,
            &RepairOptions::default(),
            &ctx(&ledger, &clock, Strategy::Agent),
        )
        .unwrap();
        assert!(result.accepted);
        assert_eq!(result.iterations_used, 2);
        assert_eq!(result.selected_attempt, 1);
        assert_eq!(ledger.overhead(Scope::Run).unwrap(), 2);
        // retry flag marks iterations after the first
        let records = ledger.snapshot();
        assert!(!records[0].retry);
        assert!(records[1].retry);
    }

    #[test]
    fn agent_exhausts_at_max_iterations() {
        let reg = Registry::standard();
        let doc = parse_html(BROKEN).unwrap();
        let report = scan(&doc, &reg);
        let ledger = CostLedger::new(PriceTable::new());
        let clock = FixedClock(0);
        let provider = mock_seq(vec![fenced(BROKEN)]); // never improves
        let result = repair_agentic(
            &doc,
            &report,
            &provider,
            &reg,
            &RepairOptions::default(),
            &ctx(&ledger, &clock, Strategy::Agent),
        )
        .unwrap();
        assert!(!result.accepted);
        assert_eq!(result.iterations_used, 3);
        assert_eq!(ledger.overhead(Scope::Run).unwrap(), 3);
        assert_eq!(
            result.final_html,
            result.attempts[result.selected_attempt].output_html
        );
    }

    #[test]
    fn agent_picks_best_attempt_on_exhaustion() {
        let reg = Registry::standard();
        let doc =
            parse_html("<main><img src=a.png><img src=b.png><img src=c.png><img src=d.png></main>")
                .unwrap();
        let report = scan(&doc, &reg);
        let two_fixed = "<main><img alt=\"a\" src=\"a.png\"><img alt=\"b\" src=\"b.png\">\
                         <img src=\"c.png\"><img src=\"d.png\"></main>";
        // attempt 1 fixes nothing, attempt 2 fixes two but wrecks the
        // structure (rejected), attempt 3 fixes nothing again
        let wrecked = "<div><p><span><img alt=\"a\" src=\"a.png\"></span></p><p><span>\
                       <img alt=\"b\" src=\"b.png\"></span></p><section><article>\
                       <img src=\"c.png\"><img src=\"d.png\"></article></section>\
                       <footer>f</footer><nav>n</nav><aside>x</aside></div>";
        let opts = RepairOptions::default();
        let ledger = CostLedger::new(PriceTable::new());
        let clock = FixedClock(0);
        let provider = mock_seq(vec![
            fenced("<main><img src=a.png><img src=b.png><img src=c.png><img src=d.png></main>"),
            fenced(wrecked),
            fenced(two_fixed),
        ]);
        let result = repair_agentic(
            &doc,
            &report,
            &provider,
            &reg,
            &opts,
            &ctx(&ledger, &clock, Strategy::Agent),
        )
        .unwrap();
        // attempt 3 (two fixed, structure preserved) is accepted
        assert!(result.accepted);
        assert_eq!(result.selected_attempt, 2);
    }

    #[test]
    fn extraction_prefers_fenced_block() {
        let completion = format!("Here is the fix:\n{}\nDone.", fenced("<p>x</p>"));
        assert_eq!(extract_html(&completion).unwrap(), "<p>x</p>");
        // fallback: widest tag slice
        assert_eq!(
            extract_html("noise <div>y</div> trailing").unwrap(),
            "<div>y</div>"
        );
        assert!(extract_html("no markup at all").is_none());
        assert!(extract_html("").is_none());
    }

    #[test]
    fn oversized_document_repairs_per_chunk() {
        let reg = Registry::standard();
        let mut sections = String::new();
        for i in 0..4 {
            sections.push_str(&format!(
                "<section><p>{} {i}</p><img src=\"s{i}.png\"></section>",
                "pad ".repeat(40)
            ));
        }
        let doc = parse_html(&format!("<main>{sections}</main>")).unwrap();
        let report = scan(&doc, &reg);
        assert_eq!(report.violation_count(), 4);
        // one entry per section marker; the split <main> wrapper tags ride
        // along in the first and last chunks and must be preserved
        let fixed_section = |i: usize| {
            format!(
                "<section><p>{} {i}</p><img alt=\"s{i}\" src=\"s{i}.png\"></section>",
                "pad ".repeat(40)
            )
        };
        let entries: Vec<MockEntry> = (0..4)
            .map(|i| {
                let body = match i {
                    0 => format!("<main>{}", fixed_section(0)),
                    3 => format!("{}</main>", fixed_section(3)),
                    _ => fixed_section(i),
                };
                MockEntry {
                    contains: vec![format!("s{i}.png")],
                    responses: vec![MockResponse::Text(fenced(&body))],
                }
            })
            .collect();
        let provider = MockProvider::new(MockScript {
            model: "mock-model".into(),
            latency_ms: 1,
            entries,
        });
        let opts = RepairOptions {
            chunk_budget: 80,
            ..Default::default()
        };
        let ledger = CostLedger::new(PriceTable::new());
        let clock = FixedClock(0);
        let result = repair_zero_shot(
            &doc,
            &report,
            &provider,
            &reg,
            &opts,
            &ctx(&ledger, &clock, Strategy::ZeroShot),
        )
        .unwrap();
        let verdict = result.attempts[0].verdict.as_ref().unwrap();
        assert!(verdict.fully_fixed, "verdict: {verdict:?}");
        assert!(verdict.parse_valid);
        assert!(result.attempts[0].usage.calls >= 2);
    }

    #[test]
    fn provider_error_mid_loop_returns_partial_result() {
        struct FailSecond {
            inner: MockProvider,
            calls: std::sync::atomic::AtomicU32,
        }
        impl LlmProvider for FailSecond {
            fn complete(
                &self,
                prompt: &str,
                params: &super::super::provider::DecodingParams,
            ) -> Result<super::super::provider::CompletionResult, ProviderError> {
                let n = self.calls.fetch_add(1, std::sync::atomic::Ordering::SeqCst);
                if n >= 1 {
                    return Err(ProviderError::Transport("connection reset".into()));
                }
                self.inner.complete(prompt, params)
            }
            fn model_id(&self) -> &str {
                "mock-model"
            }
        }
        let reg = Registry::standard();
        let doc = parse_html(BROKEN).unwrap();
        let report = scan(&doc, &reg);
        let provider = FailSecond {
            inner: mock_seq(vec![fenced(BROKEN)]),
            calls: 0.into(),
        };
        let ledger = CostLedger::new(PriceTable::new());
        let clock = FixedClock(0);
        let result = repair_agentic(
            &doc,
            &report,
            &provider,
            &reg,
            &RepairOptions::default(),
            &ctx(&ledger, &clock, Strategy::Agent),
        )
        .unwrap();
        assert!(!result.accepted);
        assert_eq!(result.attempts.len(), 1);
        assert!(result.error.as_ref().unwrap().contains("connection reset"));
    }
}
