//! Output side of the tool: the JSON verification report and small CSV
//! writers, all going through an atomic temp-file-then-rename write so a
//! crash never leaves a half-written artifact behind.

use std::path::Path;

use anyhow::{Context, Result};
use mixed_landau::SuiteResult;
use serde::Serialize;

use crate::config::RunConfig;

/// Versioned verification report; `schema` bumps on breaking layout change.
#[derive(Debug, Serialize)]
pub struct Report<'a> {
    pub schema: u32,
    pub seed: u64,
    pub config: &'a RunConfig,
    pub suites: &'a [SuiteResult],
    pub passed: bool,
}

impl<'a> Report<'a> {
    pub fn new(seed: u64, config: &'a RunConfig, suites: &'a [SuiteResult]) -> Self {
        Report {
            schema: 1,
            seed,
            config,
            suites,
            passed: suites.iter().all(|s| s.passed),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }
}

/// Write via a sibling temp file and rename, so readers observe either the
/// old content or the complete new content, never a prefix.
pub fn atomic_write(path: &Path, content: &str) -> Result<()> {
    let name = format!(
        ".{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
    );
    let tmp = match path.parent().filter(|p| !p.as_os_str().is_empty()) {
        Some(d) => d.join(&name),
        None => std::path::PathBuf::from(&name),
    };
    std::fs::write(&tmp, content)
        .with_context(|| format!("cannot write temporary file {}", tmp.display()))?;
    std::fs::rename(&tmp, path)
        .with_context(|| format!("cannot move {} into place at {}", tmp.display(), path.display()))?;
    Ok(())
}

/// Assemble a CSV document from a header and rows of already-formatted
/// fields.
pub fn csv_document(header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::with_capacity(rows.len() * 40 + header.len() + 1);
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}
