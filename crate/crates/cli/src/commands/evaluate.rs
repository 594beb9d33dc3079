//! `a11y evaluate`: fold per-file repair reports into the remediation
//! summary, rule/category delta tables, and the new-violations table.

use a11y_core::metrics::{before_after_deltas, remediation_summary};
use a11y_core::Violation;

use crate::report::{read_report, FileReport};
use crate::{config, CliError, EvaluateArgs};

pub fn run(args: EvaluateArgs) -> Result<(), CliError> {
    let config = config::load(&args.common, None, None, None)?;
    let repair_root = config.out.join("repair");
    let mut reports: Vec<FileReport> = Vec::new();
    let mut strategy_dirs: Vec<std::path::PathBuf> = match std::fs::read_dir(&repair_root) {
        Ok(entries) => entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| p.is_dir())
            .collect(),
        Err(_) => Vec::new(),
    };
    strategy_dirs.sort();
    for dir in &strategy_dirs {
        let reports_dir = dir.join("reports");
        for path in walk_json(&reports_dir) {
            reports.push(read_report(&path)?);
        }
    }
    if reports.is_empty() {
        return Err(CliError::Dataset(format!(
            "no repair reports under {}; run `a11y repair` first",
            repair_root.display()
        )));
    }
    reports.sort_by(|a, b| {
        let key = |r: &FileReport| (r.repair.as_ref().map(|x| x.strategy), r.file_id.clone());
        key(a).cmp(&key(b))
    });

    let out = config.out.join("evaluate");

    // remediation summary over files that completed a repair
    let triples: Vec<_> = reports
        .iter()
        .filter_map(|r| match (&r.scan, &r.repair, &r.verdict) {
            (Some(s), Some(rr), Some(v)) => Some((s, rr, v)),
            _ => None,
        })
        .collect();
    if triples.is_empty() {
        return Err(CliError::Dataset(
            "repair reports contain no completed repairs".into(),
        ));
    }
    let summary = remediation_summary(&triples).map_err(|e| CliError::Other(e.into()))?;
    crate::report::write_remediation_summary(&out.join("remediation_summary.csv"), &summary)?;

    // before/after deltas where the repaired output was rescannable
    let pairs: Vec<(String, &a11y_core::ScanReport, &a11y_core::ScanReport)> = reports
        .iter()
        .filter_map(|r| match (&r.scan, &r.scan_after, &r.repair) {
            (Some(before), Some(after), Some(repair)) => {
                Some((format!("{}:{}", repair.strategy, r.file_id), before, after))
            }
            _ => None,
        })
        .collect();
    let deltas = before_after_deltas(&pairs);
    crate::report::write_rule_deltas(&out.join("rule_deltas.csv"), &deltas.rules)?;
    crate::report::write_category_deltas(&out.join("category_deltas.csv"), &deltas.categories)?;

    // violations introduced by the selected repairs
    let new_rows: Vec<(String, String, Vec<Violation>)> = reports
        .iter()
        .filter_map(|r| {
            let verdict = r.verdict.as_ref()?;
            let repair = r.repair.as_ref()?;
            if verdict.new_violations.is_empty() {
                None
            } else {
                Some((
                    r.file_id.clone(),
                    repair.strategy.to_string(),
                    verdict.new_violations.clone(),
                ))
            }
        })
        .collect();
    crate::report::write_new_violations(&out.join("new_violations.csv"), &new_rows)?;
    Ok(())
}

fn walk_json(dir: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    fn walk(dir: &std::path::Path, out: &mut Vec<std::path::PathBuf>) {
        let Ok(entries) = std::fs::read_dir(dir) else {
            return;
        };
        let mut paths: Vec<_> = entries.filter_map(|e| e.ok()).map(|e| e.path()).collect();
        paths.sort();
        for path in paths {
            if path.is_dir() {
                walk(&path, out);
            } else if path.extension().is_some_and(|e| e == "json") {
                out.push(path);
            }
        }
    }
    walk(dir, &mut out);
    out
}
