//! `a11y cost-report`: aggregate, ratio and per-file cost tables from
//! usage ledgers. With two ledgers the first is the baseline and ratios
//! are second/first.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use a11y_core::cost::{comparison_report, per_file_report, CostLedger, Money};

use crate::report::{write_cost_aggregate, write_per_file_costs};
use crate::{config, CliError, CostReportArgs};

pub fn run(args: CostReportArgs) -> Result<(), CliError> {
    let config = config::load(&args.common, None, None, None)?;
    let prices = config::price_table(&config)?;

    let paths: Vec<PathBuf> = if args.ledger.is_empty() {
        discover_ledgers(&config.out.join("repair"))
    } else {
        args.ledger.clone()
    };
    if paths.is_empty() {
        return Err(CliError::Dataset(
            "no ledgers given and none found under the output directory".into(),
        ));
    }

    let mut ledgers: Vec<(String, CostLedger)> = Vec::new();
    for path in &paths {
        let ledger = CostLedger::load(path, prices.clone())
            .map_err(|e| CliError::Dataset(format!("ledger {}: {e}", path.display())))?;
        if ledger.is_empty() {
            eprintln!("warning: ledger {} is empty", path.display());
        }
        ledgers.push((ledger_label(path), ledger));
    }

    let out = config.out.join("cost");
    let names: Vec<String> = ledgers.iter().map(|(n, _)| n.clone()).collect();

    // aggregate table, with ratio column for exactly two ledgers
    let mut rows: Vec<(String, Vec<String>, Option<f64>)> = Vec::new();
    let totals: Vec<_> = ledgers.iter().map(|(_, l)| l.totals()).collect();
    let costs: Vec<Money> = ledgers
        .iter()
        .map(|(_, l)| l.total_cost())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let ratio = |vals: &[f64]| -> Option<f64> {
        match vals {
            [a, b] if *a != 0.0 => Some(b / a),
            _ => None,
        }
    };
    let push = |rows: &mut Vec<(String, Vec<String>, Option<f64>)>,
                metric: &str,
                strings: Vec<String>,
                numeric: Vec<f64>| {
        let r = ratio(&numeric);
        rows.push((metric.to_string(), strings, r));
    };
    push(
        &mut rows,
        "api_calls",
        totals.iter().map(|t| t.calls.to_string()).collect(),
        totals.iter().map(|t| t.calls as f64).collect(),
    );
    push(
        &mut rows,
        "prompt_tokens",
        totals.iter().map(|t| t.prompt_tokens.to_string()).collect(),
        totals.iter().map(|t| t.prompt_tokens as f64).collect(),
    );
    push(
        &mut rows,
        "completion_tokens",
        totals
            .iter()
            .map(|t| t.completion_tokens.to_string())
            .collect(),
        totals.iter().map(|t| t.completion_tokens as f64).collect(),
    );
    push(
        &mut rows,
        "total_tokens",
        totals.iter().map(|t| t.total_tokens.to_string()).collect(),
        totals.iter().map(|t| t.total_tokens as f64).collect(),
    );
    push(
        &mut rows,
        "total_cost_usd",
        costs.iter().map(|c| c.to_usd_string()).collect(),
        costs.iter().map(|c| c.approx_usd()).collect(),
    );
    push(
        &mut rows,
        "mean_latency_ms",
        totals
            .iter()
            .map(|t| format!("{:.1}", t.mean_latency_ms))
            .collect(),
        totals.iter().map(|t| t.mean_latency_ms).collect(),
    );
    rows.push((
        "retries".to_string(),
        totals.iter().map(|t| t.retries.to_string()).collect(),
        None,
    ));
    write_cost_aggregate(&out.join("aggregate.csv"), &names, &rows)?;

    // ratio table cross-check when exactly two non-empty ledgers
    if let [(_, a), (_, b)] = ledgers.as_slice() {
        if !a.is_empty() && !b.is_empty() {
            let comparison = comparison_report(a, b).map_err(|e| CliError::Other(e.into()))?;
            crate::report::write_json(&out.join("comparison.json"), &comparison)?;
        }
    }

    // per-file table; file count = distinct file ids in each ledger
    let mut per_file_rows = Vec::new();
    for (name, ledger) in &ledgers {
        let files: BTreeSet<String> = ledger.snapshot().into_iter().map(|r| r.file_id).collect();
        if files.is_empty() {
            continue;
        }
        let report = per_file_report(ledger, files.len()).map_err(|e| CliError::Other(e.into()))?;
        per_file_rows.push((name.clone(), report));
    }
    write_per_file_costs(&out.join("per_file.csv"), &per_file_rows)?;
    Ok(())
}

/// Repair ledgers under `<out>/repair/<strategy>/ledger.ndjson`, baseline
/// (zero_shot) first.
fn discover_ledgers(repair_root: &Path) -> Vec<PathBuf> {
    let Ok(entries) = std::fs::read_dir(repair_root) else {
        return Vec::new();
    };
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path().join("ledger.ndjson"))
        .filter(|p| p.is_file())
        .collect();
    paths.sort_by_key(|p| {
        let label = ledger_label(p);
        (label != "zero_shot", label)
    });
    paths
}

/// Human label for a ledger path: the strategy directory when the file is
/// a standard repair ledger, else the file stem.
fn ledger_label(path: &Path) -> String {
    if path.file_name().is_some_and(|f| f == "ledger.ndjson") {
        if let Some(parent) = path.parent().and_then(|p| p.file_name()) {
            return parent.to_string_lossy().to_string();
        }
    }
    path.file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "ledger".into())
}
