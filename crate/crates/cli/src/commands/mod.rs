pub mod cost_report;
pub mod detect;
pub mod evaluate;
pub mod repair;

use crate::CliError;
use anyhow::Context;

pub(crate) fn thread_pool(workers: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")
        .map_err(CliError::Other)
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}
