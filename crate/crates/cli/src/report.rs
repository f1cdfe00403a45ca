//! Report schema, summaries and manifest checks.

use ifs_lab::detectors::Witness;
use ifs_lab::gallery::GalleryEntry;
use ifs_lab::{run_property, AnalysisSettings, IfsSystem, Property, Verdict};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA: &str = "ifs-lab/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Gallery { name: String },
    System { path: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: Property,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub tool_version: String,
    pub source: Source,
    /// Generators in display form.
    pub system: Vec<String>,
    pub settings: AnalysisSettings,
    pub properties: Vec<PropertyReport>,
}

impl Report {
    pub fn new(source: Source, system: &IfsSystem, settings: &AnalysisSettings, properties: Vec<PropertyReport>) -> Self {
        Report {
            schema: SCHEMA.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            source,
            system: system.generators().iter().map(ToString::to_string).collect(),
            settings: *settings,
            properties,
        }
    }
}

/// The headline number of a witness, if it has one.
pub fn headline(v: &Verdict) -> Option<String> {
    match &v.witness {
        Witness::Sensitivity(r) => Some(format!("delta_hat = {:.6}", r.delta_hat)),
        Witness::Cofinite(c) => c.worst_time.map(|n| format!("N = {n}")),
        Witness::Nonminimal(w) => Some(format!("delta_candidate = {:.6}", w.delta_candidate)),
        Witness::Expanding { eta, .. } => Some(format!("eta = {eta}")),
        Witness::Cover(c) => Some(format!("{} pieces, sigma = {:.6}, lebesgue = {:.6}", c.pieces.len(), c.sigma, c.lebesgue)),
        Witness::OrbitDensity { worst, .. } => Some(format!("worst gap {:.6} at x = {}", worst.gap.length, worst.x)),
        _ => None,
    }
}

pub fn summary_line(p: &PropertyReport, seconds: f64) -> String {
    let status = if p.verdict.holds { "holds" } else { "fails" };
    let extra = headline(&p.verdict).map(|h| format!(" ({h})")).unwrap_or_default();
    format!("{:<22} {status}{extra} [{seconds:.2}s]", p.name.name())
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub property: Property,
    pub expected: bool,
    pub verdict: Verdict,
    pub matches: bool,
    pub detail: String,
}

impl Outcome {
    pub fn line(&self) -> String {
        let mark = if self.matches { "ok  " } else { "FAIL" };
        let got = if self.verdict.holds { "holds" } else { "fails" };
        let want = if self.expected { "holds" } else { "fails" };
        let head = headline(&self.verdict).map(|h| format!(", {h}")).unwrap_or_default();
        format!("{mark} {:<22} expected {want}, got {got}{head}{}", self.property.name(), self.detail)
    }
}

fn constant_of(v: &Verdict) -> Option<f64> {
    match &v.witness {
        Witness::Nonminimal(w) => Some(w.delta_candidate),
        Witness::Expanding { eta, .. } => Some(*eta),
        _ => None,
    }
}

/// Runs every expectation of a gallery entry.
pub fn check_manifest(entry: &GalleryEntry, settings: &AnalysisSettings) -> Result<Vec<Outcome>, CliError> {
    let mut out = Vec::new();
    for exp in &entry.expected {
        let mut s = *settings;
        let mut detail = String::new();
        if let Some(p) = exp.point {
            s.point = p;
            detail.push_str(&format!(" at x = {p}"));
        }
        let verdict = run_property(&entry.system, exp.property, &s)?;
        let mut matches = verdict.holds == exp.holds;
        if let Some(c) = exp.constant {
            match constant_of(&verdict) {
                Some(got) if (got - c).abs() <= 1e-6 => {}
                got => {
                    matches = false;
                    detail.push_str(&format!("; expected constant {c}, got {got:?}"));
                }
            }
        }
        out.push(Outcome { property: exp.property, expected: exp.holds, verdict, matches, detail });
    }
    Ok(out)
}
