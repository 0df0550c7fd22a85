//! Report assembly and file persistence.
//!
//! Reports are a single JSON document with a versioned schema and
//! stable field order, so saved results diff cleanly and can be
//! reloaded for later composition. The wall-time field is present only
//! when timing was requested; everything else is deterministic for a
//! given input file.

use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::AnalysisResult;
use crate::delta_graph::ChoiceSet;
use crate::monomial::ALTERNATIVES;
use crate::relation::Relation;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("cannot write report to {path}: {source}")]
    Write { path: String, source: io::Error },
    #[error("cannot read report from {path}: {source}")]
    Read { path: String, source: io::Error },
    #[error("malformed report in {path}: {source}")]
    Parse {
        path: String,
        source: serde_json::Error,
    },
    #[error("cannot encode report: {0}")]
    Encode(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: String,
    pub tool_version: String,
    pub file: String,
    /// Wall time of the analysis; only recorded when timing was
    /// requested and always excluded from golden comparisons.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub analysis_millis: Option<u64>,
    pub functions: Vec<FunctionReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FunctionReport {
    pub name: String,
    pub variables: Vec<String>,
    pub relation: Relation,
    pub num_indices: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub infinite_vars: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub choices: Option<ChoiceSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Polynomial,
    Infinite,
    /// Evaluation was skipped (`--no-eval`).
    Unevaluated,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Polynomial => "polynomial",
            Verdict::Infinite => "infinite",
            Verdict::Unevaluated => "unevaluated",
        })
    }
}

/// Compact description of the passing-choice set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChoiceSummary {
    /// Decimal count; kept as a string because 3^n outgrows u64 fast.
    pub passing_count: String,
    /// Disjoint product-form fragments: sorted `[index, alternative]`
    /// bindings, unbound indices range over all alternatives.
    pub fragments: Vec<FragmentReport>,
    /// Full expansion, present only when requested and within the cap.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub expanded: Option<Vec<Vec<u8>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FragmentReport {
    pub fixed: Vec<(usize, u8)>,
}

impl ChoiceSummary {
    pub fn from_choice_set(passing: &ChoiceSet, expanded: Option<Vec<Vec<u8>>>) -> ChoiceSummary {
        ChoiceSummary {
            passing_count: passing.count().to_string(),
            fragments: passing
                .fragments()
                .iter()
                .map(|f| FragmentReport {
                    fixed: f.fixed().iter().map(|(&i, &a)| (i, a)).collect(),
                })
                .collect(),
            expanded,
        }
    }
}

impl FunctionReport {
    pub fn from_result(
        name: &str,
        result: &AnalysisResult,
        expanded: Option<Vec<Vec<u8>>>,
    ) -> FunctionReport {
        let verdict = if result.passing.is_empty() {
            Verdict::Infinite
        } else {
            Verdict::Polynomial
        };
        FunctionReport {
            name: name.to_string(),
            variables: result.relation.variables().to_vec(),
            relation: result.relation.clone(),
            num_indices: result.num_indices,
            verdict,
            infinite_vars: Some(result.infinite_vars.clone()),
            choices: Some(ChoiceSummary::from_choice_set(&result.passing, expanded)),
        }
    }

    pub fn unevaluated(name: &str, relation: &Relation, num_indices: usize) -> FunctionReport {
        FunctionReport {
            name: name.to_string(),
            variables: relation.variables().to_vec(),
            relation: relation.clone(),
            num_indices,
            verdict: Verdict::Unevaluated,
            infinite_vars: None,
            choices: None,
        }
    }
}

impl Report {
    pub fn new(file: &Path, functions: Vec<FunctionReport>) -> Report {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            file: file.display().to_string(),
            analysis_millis: None,
            functions,
        }
    }

    pub fn to_json(&self) -> Result<String, ReportError> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        Ok(text)
    }
}

/// Writes the report as pretty-printed JSON.
pub fn save_report(report: &Report, path: &Path) -> Result<(), ReportError> {
    let text = report.to_json()?;
    fs::write(path, text).map_err(|source| ReportError::Write {
        path: path.display().to_string(),
        source,
    })
}

/// Loads a report saved by [`save_report`]; `load(save(r))` is
/// structurally identical to `r`.
pub fn load_report(path: &Path) -> Result<Report, ReportError> {
    let text = fs::read_to_string(path).map_err(|source| ReportError::Read {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| ReportError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Total number of assignments over `num_indices` derivation points.
pub fn total_assignments(num_indices: usize) -> u128 {
    (ALTERNATIVES as u128).saturating_pow(num_indices as u32)
}
