//! Running a configuration end to end: compute, then write every file
//! through one manifest writer, then the run record.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use beltrami_core::sha256_hex;

use crate::config::ExperimentConfig;
use crate::error::{LabError, Result};
use crate::experiments::{execute, Assertion, Outcome};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const OUTPUT_ROOT_ENV: &str = "BELTRAMI_LAB_OUT";
pub const REPORT_FILE: &str = "report.json";
pub const RECORD_FILE: &str = "run_record.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Everything about a run except the numbers themselves, which live in
/// `report.json` and the CSV files listed in `files`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub config_hash: String,
    pub tool_version: String,
    pub kind: String,
    pub seed: u64,
    pub output_dir: PathBuf,
    /// Seconds; the only field that differs between identical reruns.
    pub wall_time: f64,
    pub files: Vec<ManifestEntry>,
    pub assertions: Vec<Assertion>,
    pub passed: bool,
}

impl RunRecord {
    /// 0 when every assertion passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// `--out`, else the configured directory, else `<root>/<kind>-<hash12>`
/// with the root taken from the environment or `lab-output`.
pub fn resolve_output_dir(cfg: &ExperimentConfig, out: Option<&Path>) -> PathBuf {
    if let Some(o) = out {
        return o.to_path_buf();
    }
    if let Some(o) = &cfg.output_dir {
        return o.clone();
    }
    let root = std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("lab-output"));
    root.join(format!("{}-{}", cfg.kind().name(), &cfg.hash()[..12]))
}

/// Serializes all writes into one directory and records each file.
struct ManifestWriter {
    dir: PathBuf,
    entries: Vec<ManifestEntry>,
}

impl ManifestWriter {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| LabError::ComputeFailure(format!("{}: {e}", dir.display())))?;
        Ok(ManifestWriter { dir: dir.to_path_buf(), entries: Vec::new() })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| LabError::ComputeFailure(format!("{}: {e}", path.display())))?;
        self.entries.push(ManifestEntry { file: name.to_string(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 });
        Ok(())
    }

    fn finish(mut self) -> Vec<ManifestEntry> {
        self.entries.sort_by(|a, b| a.file.cmp(&b.file));
        self.entries
    }
}

/// The plot-ready CSV files and matrix dumps of an outcome, with their
/// deterministic names.
pub fn emit_plot_data(outcome: &Outcome) -> Vec<(String, String)> {
    let mut files: Vec<(String, String)> = outcome.tables.iter().map(|t| (t.file_name.clone(), t.to_csv())).collect();
    files.extend(outcome.extra_files.iter().cloned());
    files.sort_by(|a, b| a.0.cmp(&b.0));
    files
}

fn report_json(cfg: &ExperimentConfig, outcome: &Outcome) -> Result<String> {
    let doc = json!({
        "kind": cfg.kind().name(),
        "config_hash": cfg.hash(),
        "tool_version": TOOL_VERSION,
        "seed": cfg.seed,
        "config": serde_json::from_str::<serde_json::Value>(&cfg.canonical_json()).map_err(LabError::compute)?,
        "passed": outcome.passed(),
        "assertions": outcome.assertions,
        "results": outcome.report,
    });
    let mut s = serde_json::to_string_pretty(&doc).map_err(LabError::compute)?;
    s.push('\n');
    Ok(s)
}

/// Runs a validated configuration. Nothing is written if the computation
/// fails.
pub fn run(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<RunRecord> {
    cfg.validate()?;
    let start = Instant::now();
    let outcome = execute(cfg)?;
    let dir = resolve_output_dir(cfg, out);
    let report = report_json(cfg, &outcome)?;
    let files = emit_plot_data(&outcome);

    let mut w = ManifestWriter::new(&dir)?;
    w.write(REPORT_FILE, report.as_bytes())?;
    for (name, text) in &files {
        w.write(name, text.as_bytes())?;
    }
    let record = RunRecord {
        config_hash: cfg.hash(),
        tool_version: TOOL_VERSION.to_string(),
        kind: cfg.kind().name().to_string(),
        seed: cfg.seed,
        output_dir: dir.clone(),
        wall_time: start.elapsed().as_secs_f64(),
        files: w.finish(),
        passed: outcome.passed(),
        assertions: outcome.assertions,
    };
    let text = serde_json::to_string_pretty(&record).map_err(LabError::compute)?;
    std::fs::write(dir.join(RECORD_FILE), text + "\n").map_err(LabError::compute)?;
    Ok(record)
}
