//! `a11y repair`: run the selected strategy (or both) over every
//! violating file, writing repaired HTML, per-file verdict reports and a
//! usage ledger per strategy.
//!
//! Each strategy gets a fresh provider instance so scripted mock
//! scenarios stay isolated, and runs zero-shot before agent when both are
//! selected.

use a11y_core::cost::CostLedger;
use a11y_core::llm::{
    repair_agentic, repair_zero_shot, CallCtx, LlmProvider, RepairOptions, RepairStrategy,
};
use a11y_core::rules::{scan_with_meta, Registry};
use a11y_core::{parse_html, Clock};
use anyhow::Context;
use rayon::prelude::*;

use crate::config::StrategyChoice;
use crate::dataset::{load_dataset, DatasetPair, VIOLATED_DIR};
use crate::report::{write_json, FileReport};
use crate::{commands, config, provider, CliError, RepairArgs};

pub fn run(args: RepairArgs) -> Result<(), CliError> {
    let config = config::load(
        &args.common,
        args.strategy,
        args.max_iterations,
        args.similarity_threshold,
    )?;
    let dataset = load_dataset(&args.dataset)?;
    if dataset.pairs.is_empty() {
        return Err(CliError::Dataset("dataset contains no html files".into()));
    }
    let strategies: &[RepairStrategy] = match config.strategy {
        StrategyChoice::ZeroShot => &[RepairStrategy::ZeroShot],
        StrategyChoice::Agent => &[RepairStrategy::Agent],
        StrategyChoice::Both => &[RepairStrategy::ZeroShot, RepairStrategy::Agent],
    };
    let registry = Registry::standard();
    let clock = config.clock();
    let pool = commands::thread_pool(config.workers)?;

    let mut failed = 0usize;
    let mut total = 0usize;
    for &strategy in strategies {
        let provider = provider::build(&config)?
            .ok_or_else(|| CliError::Config("repair requires a provider (mock or http)".into()))?;
        let ledger = CostLedger::new(config::price_table(&config)?);
        let opts = RepairOptions {
            max_iterations: config.max_iterations,
            chunk_budget: config.chunk_budget,
            decoding: Default::default(),
            max_parse_retries: 2,
            validate: config.validate_opts(),
        };

        let reports: Vec<FileReport> = pool.install(|| {
            dataset
                .pairs
                .par_iter()
                .map(|pair| {
                    process(
                        pair,
                        strategy,
                        provider.as_ref(),
                        &registry,
                        &ledger,
                        clock.as_ref(),
                        &opts,
                    )
                })
                .collect()
        });

        let strategy_dir = config.out.join("repair").join(strategy.to_string());
        for mut report in reports {
            total += 1;
            if report.error.is_some() {
                failed += 1;
            }
            // usage slice for this file, in call order
            let usage: Vec<_> = ledger
                .snapshot()
                .into_iter()
                .filter(|r| r.file_id == report.file_id)
                .collect();
            if !usage.is_empty() {
                report.usage = Some(usage);
            }
            if let Some(repair) = &report.repair {
                let out_path = strategy_dir.join("html").join(&report.file_id);
                if let Some(parent) = out_path.parent() {
                    std::fs::create_dir_all(parent)
                        .with_context(|| format!("creating {}", parent.display()))?;
                }
                std::fs::write(&out_path, &repair.final_html)
                    .with_context(|| format!("writing {}", out_path.display()))?;
            }
            write_json(
                &strategy_dir
                    .join("reports")
                    .join(format!("{}.json", report.file_id)),
                &report,
            )?;
        }
        ledger
            .save(&strategy_dir.join("ledger.ndjson"))
            .map_err(|e| CliError::Other(e.into()))?;
    }

    if failed > 0 {
        return Err(CliError::Partial { failed, total });
    }
    Ok(())
}

fn process(
    pair: &DatasetPair,
    strategy: RepairStrategy,
    provider: &dyn LlmProvider,
    registry: &Registry,
    ledger: &CostLedger,
    clock: &dyn Clock,
    opts: &RepairOptions,
) -> FileReport {
    let file_id = format!("{VIOLATED_DIR}/{}", pair.name);
    let mut report = FileReport::new(&file_id);
    let html = match commands::read_file(&pair.violated) {
        Ok(h) => h,
        Err(e) => {
            report.error = Some(e);
            return report;
        }
    };
    let doc = match parse_html(&html) {
        Ok(d) => d,
        Err(e) => {
            report.error = Some(e.to_string());
            return report;
        }
    };
    let scan_report = scan_with_meta(&doc, registry, &file_id, clock.now());
    if scan_report.violation_count() == 0 {
        report.scan = Some(scan_report);
        return report; // nothing to repair
    }

    let ctx = CallCtx {
        ledger,
        clock,
        file_id: &file_id,
        strategy: strategy.into(),
    };
    let result = match strategy {
        RepairStrategy::ZeroShot => {
            repair_zero_shot(&doc, &scan_report, provider, registry, opts, &ctx)
        }
        RepairStrategy::Agent => repair_agentic(&doc, &scan_report, provider, registry, opts, &ctx),
    };
    report.scan = Some(scan_report);
    match result {
        Ok(result) => {
            let verdict = result.attempts[result.selected_attempt]
                .verdict
                .clone()
                .expect("selected attempt always carries a verdict");
            if verdict.parse_valid {
                if let Ok(tree) = parse_html(&result.final_html) {
                    report.scan_after =
                        Some(scan_with_meta(&tree, registry, &file_id, clock.now()));
                }
            }
            report.verdict = Some(verdict);
            report.repair = Some(result);
        }
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}
