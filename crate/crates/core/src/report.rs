//! Structured pass/fail records produced by every check in the crate.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::chain::SectorKey;
use crate::theory::Species;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub pass: bool,
    /// Residual, defect or fitted value, depending on the check.
    pub value: f64,
    pub tolerance: f64,
    pub details: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelDescriptor {
    pub n_sites: usize,
    pub sector: Option<SectorKey>,
    pub species: Option<Species>,
}

impl ModelDescriptor {
    pub fn new(n_sites: usize) -> Self {
        Self {
            n_sites,
            sector: None,
            species: None,
        }
    }

    pub fn with_sector(mut self, sector: SectorKey) -> Self {
        self.sector = Some(sector);
        self
    }

    pub fn with_species(mut self, species: Species) -> Self {
        self.species = Some(species);
        self
    }
}

/// Outcome of one verification run. `pass` is the conjunction of all check
/// passes; check names are unique within a report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub model: ModelDescriptor,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
    pub elapsed_seconds: f64,
}

impl VerificationReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub struct ReportBuilder {
    model: ModelDescriptor,
    checks: Vec<CheckRecord>,
    started: Instant,
}

impl ReportBuilder {
    pub fn new(model: ModelDescriptor) -> Self {
        Self {
            model,
            checks: Vec::new(),
            started: Instant::now(),
        }
    }

    /// Record a check whose pass state is decided by the caller. A
    /// non-finite value always fails.
    pub fn record(
        &mut self,
        name: impl Into<String>,
        pass: bool,
        value: f64,
        tolerance: f64,
        details: impl Into<String>,
    ) -> bool {
        let name = name.into();
        assert!(
            self.checks.iter().all(|c| c.name != name),
            "duplicate check name {name:?}"
        );
        let pass = pass && value.is_finite();
        self.checks.push(CheckRecord {
            name,
            pass,
            value,
            tolerance,
            details: details.into(),
        });
        pass
    }

    /// Passes iff `value <= tolerance`.
    pub fn upper(&mut self, name: impl Into<String>, value: f64, tolerance: f64, details: impl Into<String>) -> bool {
        self.record(name, value <= tolerance, value, tolerance, details)
    }

    /// Absorb the checks of another report under a name prefix.
    pub fn merge(&mut self, prefix: &str, report: VerificationReport) {
        for mut c in report.checks {
            c.name = format!("{prefix}{}", c.name);
            self.record(c.name, c.pass, c.value, c.tolerance, c.details);
        }
    }

    pub fn finish(self) -> VerificationReport {
        let pass = self.checks.iter().all(|c| c.pass);
        VerificationReport {
            model: self.model,
            checks: self.checks,
            pass,
            elapsed_seconds: self.started.elapsed().as_secs_f64(),
        }
    }
}
