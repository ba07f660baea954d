use crate::config::ParsedConfig;
use crate::error::{Result, WorkbenchError};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const BUILD_ID: &str = env!("SMFLOW_BUILD_ID");

/// One evaluated acceptance check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    /// Acceptance-criterion id, e.g. "A5".
    pub id: String,
    pub check: String,
    pub passed: bool,
    pub measured: String,
    pub threshold: String,
}

impl CriterionResult {
    pub fn new(id: &str, check: impl Into<String>, passed: bool, measured: impl Into<String>, threshold: impl Into<String>) -> Self {
        CriterionResult { id: id.into(), check: check.into(), passed, measured: measured.into(), threshold: threshold.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub build_id: String,
    pub experiment: String,
    pub config: BTreeMap<String, String>,
    /// Keys filled from defaults rather than given explicitly.
    pub defaults_filled: Vec<String>,
    pub summary: Value,
    pub criteria: Vec<CriterionResult>,
    pub artifacts: Vec<PathBuf>,
}

impl RunReport {
    pub fn new(parsed: &ParsedConfig) -> Self {
        RunReport {
            build_id: BUILD_ID.into(),
            experiment: parsed.config.experiment.to_string(),
            config: parsed.config.echo(),
            defaults_filled: parsed.defaulted.clone(),
            summary: Value::Null,
            criteria: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Writes `report.json` into `dir` and records it as an artifact.
    pub fn write(&mut self, dir: &Path) -> Result<PathBuf> {
        let path = dir.join("report.json");
        self.artifacts.push(path.clone());
        write_atomic(&path, self.to_json().as_bytes())?;
        Ok(path)
    }

    /// Writes an artifact next to the report.
    pub fn emit(&mut self, dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
        let path = dir.join(name);
        write_atomic(&path, contents.as_bytes())?;
        self.artifacts.push(path.clone());
        Ok(path)
    }
}

/// Writes through a temporary file in the same directory, then renames it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(|e| WorkbenchError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| WorkbenchError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| WorkbenchError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| WorkbenchError::io(path, e))?;
    tmp.persist(path).map_err(|e| WorkbenchError::io(path, e.error))?;
    Ok(())
}

/// Fixed-width pass/fail table, one row per check.
pub fn summary_table(criteria: &[CriterionResult]) -> String {
    let mut s = String::from("| id | check | result | measured | threshold |\n|----|-------|--------|----------|-----------|\n");
    for c in criteria {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("| {} | {} | {verdict} | {} | {} |\n", c.id, c.check, c.measured, c.threshold));
    }
    s
}
