//! In-memory CP-net model: variables, conditional preference tables,
//! outcomes and the legal-flip relation that every search runs over.
//!
//! Variables and values are addressed by dense indices ([`VarId`],
//! [`ValueId`]) once a net has been validated. Names are kept alongside for
//! parsing and display. Value indices follow declaration order, which is
//! only ever used for deterministic iteration, never as a preference.

mod flip;
mod net;
mod outcome;
mod validate;

pub use flip::{Flip, FlipSequence};
pub use net::{CpNet, CpTable, ParentAssignment, PreferenceRow};
pub use outcome::Outcome;
pub use validate::{validate, Diagnostic, Rule, ValidationReport};

use serde::Serialize;
use thiserror::Error;

/// Index of a variable in declaration order.
pub type VarId = usize;
/// Index of a value within its variable's declared domain.
pub type ValueId = usize;

/// Direction of a single flip or of a search tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Improving,
    Worsening,
}

impl Direction {
    pub fn reverse(self) -> Self {
        match self {
            Direction::Improving => Direction::Worsening,
            Direction::Worsening => Direction::Improving,
        }
    }
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Improving => "improving",
            Direction::Worsening => "worsening",
        })
    }
}

/// A feature as declared: a name, its ordered domain and the names of its
/// parents in the preference graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub domain: Vec<String>,
    pub parents: Vec<String>,
}

impl Variable {
    pub fn new<S: Into<String>>(name: S, domain: &[&str], parents: &[&str]) -> Self {
        Variable {
            name: name.into(),
            domain: domain.iter().map(|s| s.to_string()).collect(),
            parents: parents.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// One conditional preference statement `condition : v1 > v2 > ... > vd`,
/// still by name and unchecked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSpec {
    pub owner: String,
    pub condition: Vec<(String, String)>,
    pub ranking: Vec<String>,
}

impl RowSpec {
    pub fn new(owner: &str, condition: &[(&str, &str)], ranking: &[&str]) -> Self {
        RowSpec {
            owner: owner.to_string(),
            condition: condition
                .iter()
                .map(|(v, x)| (v.to_string(), x.to_string()))
                .collect(),
            ranking: ranking.iter().map(|s| s.to_string()).collect(),
        }
    }
}

/// A syntactically well-formed but unvalidated net. This is what the parser
/// produces and what [`CpNet::new`] checks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NetCandidate {
    pub variables: Vec<Variable>,
    pub rows: Vec<RowSpec>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("unknown value {value} for variable {variable}")]
    UnknownValue { variable: String, value: String },
    #[error("missing binding for {0}")]
    MissingBinding(String),
    #[error("duplicate binding for {0}")]
    DuplicateBinding(String),
    #[error("outcome has {found} values but the net has {expected} variables")]
    OutcomeArity { expected: usize, found: usize },
    #[error("value index {value} out of range for variable {variable}")]
    ValueOutOfRange { variable: String, value: ValueId },
    #[error("illegal flip {variable}: {from} -> {to}")]
    IllegalFlip {
        variable: String,
        from: String,
        to: String,
    },
}
