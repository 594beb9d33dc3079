//! `a11y detect`: rule-engine scan of every sample, optional LLM
//! detection over cleaned chunks, and the detection comparison tables.

use std::collections::BTreeMap;

use a11y_core::cost::{CostLedger, Strategy};
use a11y_core::llm::{aggregate_flags, aggregate_page, detect_chunk, CallCtx, DecodingParams};
use a11y_core::metrics::{
    category_agreement, confusion, precision_recall_f1, relative_performance, CategoryFlags,
    FlagMatrix,
};
use a11y_core::rules::{page_label, scan_with_meta, Registry};
use a11y_core::{clean, parse_html};
use rayon::prelude::*;

use crate::config::{self, ProviderKind};
use crate::dataset::{load_dataset, Sample};
use crate::report::{
    write_category_table, write_detection_summary, write_json, write_relative_performance,
    ChunkDetection, FileReport, LlmDetection,
};
use crate::{commands, provider, CliError, DetectArgs};

struct Outcome {
    report: FileReport,
    label: bool,
    rule_pred: Option<bool>,
    rule_flags: CategoryFlags,
    llm_pred: Option<bool>,
    llm_flags: Option<CategoryFlags>,
    failed: bool,
}

pub fn run(args: DetectArgs) -> Result<(), CliError> {
    let config = config::load(&args.common, None, None, None)?;
    let dataset = load_dataset(&args.dataset)?;
    let samples = dataset.samples();
    if samples.is_empty() {
        return Err(CliError::Dataset("dataset contains no html files".into()));
    }
    let registry = Registry::standard();
    let clock = config.clock();
    let provider = provider::build(&config)?;
    let ledger = CostLedger::new(config::price_table(&config)?);
    let pool = commands::thread_pool(config.workers)?;

    let outcomes: Vec<Outcome> = pool.install(|| {
        samples
            .par_iter()
            .map(|sample| {
                process(
                    sample,
                    &registry,
                    provider.as_deref(),
                    &ledger,
                    clock.as_ref(),
                    config.chunk_budget,
                )
            })
            .collect()
    });

    let out = config.out.join("detect");
    for o in &outcomes {
        write_json(
            &out.join("files").join(format!("{}.json", o.report.file_id)),
            &o.report,
        )?;
    }

    // binary detection table
    let mut rows = Vec::new();
    let rule_pairs: Vec<(bool, bool)> = outcomes
        .iter()
        .filter_map(|o| o.rule_pred.map(|p| (p, o.label)))
        .collect();
    if !rule_pairs.is_empty() {
        let preds: Vec<bool> = rule_pairs.iter().map(|p| p.0).collect();
        let labels: Vec<bool> = rule_pairs.iter().map(|p| p.1).collect();
        let m = confusion(&preds, &labels).map_err(|e| CliError::Other(e.into()))?;
        rows.push(("rule-engine", m, precision_recall_f1(&m)));
    }
    let llm_pairs: Vec<(bool, bool)> = outcomes
        .iter()
        .filter_map(|o| o.llm_pred.map(|p| (p, o.label)))
        .collect();
    if !llm_pairs.is_empty() {
        let preds: Vec<bool> = llm_pairs.iter().map(|p| p.0).collect();
        let labels: Vec<bool> = llm_pairs.iter().map(|p| p.1).collect();
        let m = confusion(&preds, &labels).map_err(|e| CliError::Other(e.into()))?;
        rows.push(("llm", m, precision_recall_f1(&m)));
    }
    write_detection_summary(&out.join("summary.csv"), &rows)?;

    // category-level comparison over files where both systems ran
    let mut rule_matrix: FlagMatrix = BTreeMap::new();
    let mut llm_matrix: FlagMatrix = BTreeMap::new();
    for o in &outcomes {
        if let (Some(_), Some(flags)) = (o.rule_pred, o.llm_flags) {
            rule_matrix.insert(o.report.file_id.clone(), o.rule_flags);
            llm_matrix.insert(o.report.file_id.clone(), flags);
        }
    }
    if !rule_matrix.is_empty() {
        let agreement =
            category_agreement(&rule_matrix, &llm_matrix).map_err(|e| CliError::Other(e.into()))?;
        write_category_table(&out.join("category_table.csv"), &agreement)?;
        let relative = relative_performance(&rule_matrix, &llm_matrix)
            .map_err(|e| CliError::Other(e.into()))?;
        write_relative_performance(&out.join("relative_performance.csv"), &relative)?;
    }

    if provider.is_some() && config.provider_kind != ProviderKind::None {
        ledger
            .save(&out.join("ledger.ndjson"))
            .map_err(|e| CliError::Other(e.into()))?;
    }

    let failed = outcomes.iter().filter(|o| o.failed).count();
    if failed > 0 {
        return Err(CliError::Partial {
            failed,
            total: outcomes.len(),
        });
    }
    Ok(())
}

fn process(
    sample: &Sample,
    registry: &Registry,
    provider: Option<&dyn a11y_core::llm::LlmProvider>,
    ledger: &CostLedger,
    clock: &dyn a11y_core::Clock,
    chunk_budget: usize,
) -> Outcome {
    let mut report = FileReport::new(&sample.file_id);
    report.label = Some(sample.label);
    let mut outcome = Outcome {
        label: sample.label == 1,
        rule_pred: None,
        rule_flags: CategoryFlags::default(),
        llm_pred: None,
        llm_flags: None,
        failed: false,
        report: FileReport::new(&sample.file_id),
    };

    let html = match commands::read_file(&sample.path) {
        Ok(h) => h,
        Err(e) => {
            report.error = Some(e);
            outcome.failed = true;
            outcome.report = report;
            return outcome;
        }
    };
    let doc = match parse_html(&html) {
        Ok(d) => d,
        Err(e) => {
            report.error = Some(e.to_string());
            outcome.failed = true;
            outcome.report = report;
            return outcome;
        }
    };
    let scan_report = scan_with_meta(&doc, registry, &sample.file_id, clock.now());
    outcome.rule_pred = Some(page_label(&scan_report) == 1);
    outcome.rule_flags = CategoryFlags::from_report(&scan_report);
    report.scan = Some(scan_report);

    if let Some(provider) = provider {
        match llm_detect(&doc, provider, ledger, clock, &sample.file_id, chunk_budget) {
            Ok(detection) => {
                outcome.llm_pred = Some(detection.page_verdict == 1);
                outcome.llm_flags = Some(detection.flags);
                report.llm_detection = Some(detection);
            }
            Err(e) => {
                report.error = Some(e.to_string());
                outcome.failed = true;
            }
        }
    }
    outcome.report = report;
    outcome
}

fn llm_detect(
    doc: &a11y_core::DomTree,
    provider: &dyn a11y_core::llm::LlmProvider,
    ledger: &CostLedger,
    clock: &dyn a11y_core::Clock,
    file_id: &str,
    chunk_budget: usize,
) -> Result<LlmDetection, a11y_core::llm::LlmError> {
    let cleaned = clean(doc);
    let chunks = a11y_core::html::chunk(&cleaned, chunk_budget)?;
    let ctx = CallCtx {
        ledger,
        clock,
        file_id,
        strategy: Strategy::Detect,
    };
    let params = DecodingParams::default();
    let mut verdicts = Vec::new();
    let mut flags = Vec::new();
    let mut chunk_rows = Vec::new();
    for chunk in &chunks {
        let v = detect_chunk(chunk, provider, &params, &ctx, 2)?;
        verdicts.push(v.violation);
        flags.push(v.categories);
        chunk_rows.push(ChunkDetection {
            index: chunk.index,
            violation: v.violation,
            retries: v.retries,
            rationale: v.rationale,
        });
    }
    Ok(LlmDetection {
        page_verdict: u8::from(aggregate_page(&verdicts)?),
        flags: aggregate_flags(&flags)?,
        chunks: chunk_rows,
    })
}
