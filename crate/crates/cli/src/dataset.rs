//! Dataset layout: `scraped_sites/` holds violated pages (label 1) and
//! the optional `scraped_sites_fixed/` their corrected counterparts
//! (label 0), paired by filename.

use std::path::{Path, PathBuf};

use crate::CliError;

pub const VIOLATED_DIR: &str = "scraped_sites";
pub const FIXED_DIR: &str = "scraped_sites_fixed";

/// One violated page with its optional corrected counterpart.
#[derive(Debug, Clone)]
pub struct DatasetPair {
    /// Filename shared by both sides.
    pub name: String,
    pub violated: PathBuf,
    pub fixed: Option<PathBuf>,
}

/// One labelled sample for detection.
#[derive(Debug, Clone)]
pub struct Sample {
    /// Dataset-relative id, e.g. `scraped_sites/home.html`.
    pub file_id: String,
    pub path: PathBuf,
    /// 1 = violating set, 0 = fixed set.
    pub label: u8,
}

#[derive(Debug)]
pub struct Dataset {
    pub pairs: Vec<DatasetPair>,
}

impl Dataset {
    /// All labelled samples in deterministic order: the violated set, then
    /// the fixed set, each sorted by filename.
    pub fn samples(&self) -> Vec<Sample> {
        let mut out = Vec::new();
        for pair in &self.pairs {
            out.push(Sample {
                file_id: format!("{VIOLATED_DIR}/{}", pair.name),
                path: pair.violated.clone(),
                label: 1,
            });
        }
        for pair in &self.pairs {
            if let Some(fixed) = &pair.fixed {
                out.push(Sample {
                    file_id: format!("{FIXED_DIR}/{}", pair.name),
                    path: fixed.clone(),
                    label: 0,
                });
            }
        }
        out
    }
}

fn html_files(dir: &Path) -> Result<Vec<String>, CliError> {
    let mut names = Vec::new();
    let entries =
        std::fs::read_dir(dir).map_err(|e| CliError::Dataset(format!("{}: {e}", dir.display())))?;
    for entry in entries {
        let entry = entry.map_err(|e| CliError::Dataset(e.to_string()))?;
        let name = entry.file_name().to_string_lossy().to_string();
        if name.ends_with(".html") || name.ends_with(".htm") {
            names.push(name);
        }
    }
    names.sort();
    Ok(names)
}

/// Load and pair the dataset. Errors on a missing violated directory and
/// on orphan fixed files.
pub fn load_dataset(root: &Path) -> Result<Dataset, CliError> {
    let violated_dir = root.join(VIOLATED_DIR);
    if !violated_dir.is_dir() {
        return Err(CliError::Dataset(format!(
            "missing {} under {}",
            VIOLATED_DIR,
            root.display()
        )));
    }
    let violated = html_files(&violated_dir)?;
    let fixed_dir = root.join(FIXED_DIR);
    let fixed = if fixed_dir.is_dir() {
        html_files(&fixed_dir)?
    } else {
        Vec::new()
    };

    for name in &fixed {
        if !violated.contains(name) {
            return Err(CliError::Dataset(format!(
                "orphan fixed file {FIXED_DIR}/{name} has no violated counterpart"
            )));
        }
    }

    let pairs = violated
        .into_iter()
        .map(|name| {
            let has_fixed = fixed.contains(&name);
            DatasetPair {
                violated: violated_dir.join(&name),
                fixed: has_fixed.then(|| fixed_dir.join(&name)),
                name,
            }
        })
        .collect();
    Ok(Dataset { pairs })
}
