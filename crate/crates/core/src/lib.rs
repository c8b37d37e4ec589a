//! Reasoning with conditional ceteris paribus preference networks.
//!
//! A net is read from a small text format ([`dsl`]), validated into a
//! [`CpNet`], and queried with [`dominates`], which searches for a flipping
//! sequence between two outcomes. [`forward_prune`] narrows domains before
//! search, [`strips`] turns a query into a planning problem, and [`pareto`]
//! applies dominance to whole catalogs.

pub mod dsl;
pub mod model;
pub mod pareto;
pub mod prune;
pub mod search;
pub mod strips;

pub use dsl::{load_cpnet, parse_catalog, parse_cpnet, parse_outcome, parse_query, serialize_catalog, serialize_cpnet, CatalogRow, LoadError, SourceDiagnostic};
pub use model::{CpNet, Direction, Flip, FlipSequence, ModelError, NetCandidate, Outcome};
pub use pareto::{pareto_front, sort_catalog, CatalogOptions, ParetoReport, SortReport};
pub use prune::{forward_prune, value_graph, PruneResult, PruneStatus, ValueGraph};
pub use search::{dominates, oracle_dominates, verify_witness, Heuristics, SearchConfig, SearchDirection, SearchError, SearchStats, Verdict, VerdictKind};
