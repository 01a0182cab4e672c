//! Batch verification harness: named suites of identity and property checks,
//! run from a config and collected into a deterministic report.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::scalar::{qi, Q};

pub mod sample;
mod suites;

pub const SUITES: [&str; 8] = [
    "g2-identities",
    "spin7-identities",
    "decompositions",
    "yukawa",
    "moduli-flat",
    "fourier",
    "sections",
    "chern-simons",
];

/// Deliberate perturbations, used to confirm that checks can fail.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fault {
    /// Flip the sign of this monomial of Ω (in term order) in the G2 identity suite.
    pub flip_omega_term: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub suites: Vec<String>,
    /// Covolumes of the seven circles of T⁷, in G2 frame order.
    #[serde(with = "crate::scalar::q_list")]
    pub lattice: Vec<Q>,
    /// Grid resolutions along x1 for the sampled checks, each at least 8.
    pub grid: Vec<usize>,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub seed: u64,
    /// Random cases per property check.
    pub samples: usize,
    pub report: Option<PathBuf>,
    pub fault: Fault,
    /// Record wall-clock time per check. Off by default so that reports are
    /// byte-identical across runs.
    pub timings: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            lattice: vec![qi(1); 7],
            grid: vec![32, 64],
            tol_abs: 1e-9,
            tol_rel: 1e-6,
            seed: 1,
            samples: 20,
            report: None,
            fault: Fault::default(),
            timings: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(GeomError::Config(m));
        for s in &self.suites {
            if !SUITES.contains(&s.as_str()) {
                return bad(format!("unknown suite '{s}'"));
            }
        }
        for (name, t) in [("tol_abs", self.tol_abs), ("tol_rel", self.tol_rel)] {
            if !(t.is_finite() && t > 0.0) {
                return bad(format!("{name} must be positive, got {t}"));
            }
        }
        if self.grid.is_empty() {
            return bad("at least one grid resolution is required".into());
        }
        if let Some(n) = self.grid.iter().find(|&&n| n < 8) {
            return bad(format!("grid resolution {n} is below 8"));
        }
        if self.lattice.len() != 7 || self.lattice.iter().any(|c| *c <= qi(0)) {
            return bad("lattice needs seven positive covolumes".into());
        }
        if self.samples == 0 {
            return bad("samples must be at least 1".into());
        }
        if let Some(k) = self.fault.flip_omega_term {
            if k >= 7 {
                return bad(format!("Ω has 7 terms, cannot flip term {k}"));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let c: Self = serde_json::from_str(s).map_err(|e| GeomError::Config(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    /// `suite/name`
    pub id: String,
    pub suite: String,
    /// The identity or property being checked.
    pub anchor: String,
    pub status: Status,
    /// Named residual norms; exact checks report 0 or the offending magnitude.
    pub residuals: BTreeMap<String, f64>,
    /// 0 for exact checks.
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub conventions: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub runtime_ms: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    /// Per suite: (passed, failed).
    pub suites: BTreeMap<String, (usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub summary: Summary,
    /// Conventions every suite relies on.
    pub conventions: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub config: SuiteConfig,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            // a lone named quantity (a convergence order, say) is shown under its own name
            let (label, value) = match c.residuals.iter().next() {
                Some((k, v)) if c.residuals.len() == 1 && k != "max" => (k.as_str(), *v),
                _ => ("residual", c.residuals.values().copied().fold(0.0, f64::max)),
            };
            let _ = write!(out, "{status}  {:<50} {label} {value:.3e}", c.id);
            if let Some(ms) = c.runtime_ms {
                let _ = write!(out, "  {ms:.1} ms");
            }
            out.push('\n');
            if c.status == Status::Fail {
                if let Some(d) = &c.detail {
                    let _ = writeln!(out, "      {d}");
                }
            }
        }
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            self.summary.total, self.summary.passed, self.summary.failed
        );
        out
    }
}

/// Runs the selected suites in parallel. Check order in the report follows the
/// suite order of `SUITES`, then the order within each suite.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let selected: Vec<(usize, &str)> = SUITES
        .iter()
        .enumerate()
        .filter(|(_, s)| config.suites.iter().any(|x| x == *s))
        .map(|(i, s)| (i, *s))
        .collect();
    let mut per_suite: Vec<(usize, Vec<CheckRecord>)> = selected
        .par_iter()
        .map(|&(i, name)| (i, suites::run(name, i as u64, config)))
        .collect();
    per_suite.sort_by_key(|(i, _)| *i);
    let checks: Vec<CheckRecord> = per_suite.into_iter().flat_map(|(_, c)| c).collect();

    let mut summary = Summary {
        total: checks.len(),
        ..Summary::default()
    };
    for c in &checks {
        let e = summary.suites.entry(c.suite.clone()).or_default();
        if c.status == Status::Pass {
            summary.passed += 1;
            e.0 += 1;
        } else {
            summary.failed += 1;
            e.1 += 1;
        }
    }
    Ok(VerificationReport {
        passed: summary.failed == 0,
        summary,
        conventions: suites::global_conventions(),
        checks,
        config: config.clone(),
    })
}

pub(crate) struct Timer(Option<Instant>);

impl Timer {
    pub(crate) fn start(enabled: bool) -> Self {
        Self(enabled.then(Instant::now))
    }

    pub(crate) fn stop(self) -> Option<f64> {
        self.0.map(|t| t.elapsed().as_secs_f64() * 1e3)
    }
}
