//! Text formats: `.cpnet` nets, outcome and query strings, `.csv` catalogs.
//!
//! Net grammar (whitespace-insensitive, `#` comments):
//!
//! ```text
//! net   := {stmt}
//! stmt  := "var" NAME ":" NAME {"," NAME}
//!        | "parents" NAME ":" [NAME {"," NAME}]
//!        | "cpt" NAME ["|" cond] ":" NAME {">" NAME}
//! cond  := NAME "=" NAME {"," NAME "=" NAME}
//! ```
//!
//! `NAME` is a run of ASCII letters, digits and underscores. `var`,
//! `parents` and `cpt` are reserved.

mod catalog;
mod lexer;
mod net;
mod outcome;

pub use catalog::{parse_catalog, serialize_catalog, CatalogRow};
pub use net::{parse_cpnet, serialize_cpnet};
pub use outcome::{parse_outcome, parse_query};

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::model::{CpNet, NetCandidate, Rule, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A message tied to a 1-based line and column of the input text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl SourceDiagnostic {
    pub fn error(line: usize, column: usize, message: impl Into<String>) -> Self {
        SourceDiagnostic {
            line,
            column,
            message: message.into(),
            severity: Severity::Error,
        }
    }
}

impl fmt::Display for SourceDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {}: {}", self.line, self.column, sev, self.message)
    }
}

/// Failure to turn `.cpnet` text into a validated net.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("{}", render(.0))]
    Syntax(Vec<SourceDiagnostic>),
    /// Well-formed text describing an invalid net. `diagnostics` carries
    /// the report's messages placed at the statement they concern.
    #[error("{}", render(.diagnostics))]
    Invalid {
        report: ValidationReport,
        diagnostics: Vec<SourceDiagnostic>,
    },
}

impl LoadError {
    pub fn diagnostics(&self) -> &[SourceDiagnostic] {
        match self {
            LoadError::Syntax(d) => d,
            LoadError::Invalid { diagnostics, .. } => diagnostics,
        }
    }
}

fn render(diags: &[SourceDiagnostic]) -> String {
    diags.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n")
}

/// Parses and validates in one step.
pub fn load_cpnet(text: &str) -> Result<CpNet, LoadError> {
    let (candidate, locations) = net::parse_located(text).map_err(LoadError::Syntax)?;
    CpNet::new(&candidate).map_err(|report| {
        let diagnostics = position(&candidate, &locations, &report);
        LoadError::Invalid { report, diagnostics }
    })
}

fn position(candidate: &NetCandidate, at: &net::Locations, report: &ValidationReport) -> Vec<SourceDiagnostic> {
    let mut out: Vec<SourceDiagnostic> = report
        .diagnostics
        .iter()
        .map(|d| {
            let var = d
                .variable
                .as_ref()
                .and_then(|name| candidate.variables.iter().position(|v| &v.name == name));
            let structural = matches!(
                d.rule,
                Rule::Cycle | Rule::SelfParent | Rule::DuplicateParent | Rule::UnknownParent
            );
            let (line, column) = match (d.row, var) {
                (Some(row), _) => at.rows[row],
                (None, Some(v)) if structural => at.parents[v].unwrap_or(at.vars[v]),
                (None, Some(v)) => at.vars[v],
                (None, None) => (1, 1),
            };
            SourceDiagnostic::error(line, column, d.message.clone())
        })
        .collect();
    out.sort_by_key(|d| (d.line, d.column));
    out
}
