use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use anyon1d::VerificationReport;

use crate::cli::RunConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    /// `null` when the measured value is not finite.
    pub value: Option<f64>,
    pub tolerance: f64,
    pub details: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDocument {
    pub tool_version: String,
    pub command: String,
    pub config: RunConfig,
    pub checks: Vec<CheckEntry>,
    pub pass: bool,
    pub elapsed_seconds: f64,
}

impl ReportDocument {
    pub fn new(command: String, config: RunConfig) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            config,
            checks: Vec::new(),
            pass: true,
            elapsed_seconds: 0.0,
        }
    }

    /// Append a report's checks, prefixing each name with `scope/`.
    pub fn absorb(&mut self, scope: &str, report: &VerificationReport) {
        for c in &report.checks {
            self.checks.push(CheckEntry {
                name: format!("{scope}/{}", c.name),
                pass: c.pass,
                value: c.value.is_finite().then_some(c.value),
                tolerance: c.tolerance,
                details: c.details.clone(),
            });
        }
        self.pass = self.checks.iter().all(|c| c.pass);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn checks_csv(&self) -> csv::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["name", "pass", "value", "tolerance", "details"])?;
        for c in &self.checks {
            w.write_record([
                c.name.clone(),
                c.pass.to_string(),
                c.value.map_or_else(String::new, |v| v.to_string()),
                c.tolerance.to_string(),
                c.details.clone(),
            ])?;
        }
        w.into_inner().map_err(|e| e.into_error().into())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub sector_q: usize,
    pub sector_mup: usize,
    pub index: usize,
    pub energy: f64,
    pub momentum_k: Option<f64>,
}

pub fn spectrum_csv(rows: &[SpectrumRow]) -> csv::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["sector_Q", "sector_Mup", "index", "energy", "momentum_K"])?;
    for r in rows {
        w.write_record([
            r.sector_q.to_string(),
            r.sector_mup.to_string(),
            r.index.to_string(),
            r.energy.to_string(),
            r.momentum_k.map_or_else(String::new, |k| k.to_string()),
        ])?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

/// Write via a temporary file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
