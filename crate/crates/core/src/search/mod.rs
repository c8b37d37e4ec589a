//! Dominance queries: depth-first search for a flipping sequence in the
//! improving tree rooted at the worse outcome, the worsening tree rooted at
//! the better one, or both interleaved.
//!
//! Every rule here preserves completeness. Suffix fixing never flips a
//! descendant-closed set of variables that already match the target;
//! suffix extension commits, without a choice point, to a flip that grows
//! that set. Rightmost and least-improving only order the remaining
//! choices. Visited-set deduplication is sound because the flip relation
//! is acyclic and whether a node reaches the target does not depend on the
//! path that led to it.
//!
//! Forward pruning runs first by default: an infeasible query is answered
//! without any search, and surviving value sets restrict the flips tried.

mod dfs;
mod oracle;
mod suffix;
mod witness;

pub use oracle::{oracle_dominates, oracle_dominates_capped, FlipGraph, OracleError, DEFAULT_ORACLE_CAP};
pub use suffix::{extend_suffix, fixed_suffix, order_flips, SuffixSet};
pub use witness::verify_witness;

use serde::Serialize;
use thiserror::Error;

use crate::model::{CpNet, Direction, FlipSequence, ModelError, Outcome};
use crate::prune::forward_prune;
use dfs::{Side, SideSetup, Step};

/// Which tree(s) to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchDirection {
    Improving,
    Worsening,
    /// Both trees, one expansion each in strict alternation. Concludes as
    /// soon as either side reaches its target, either side is exhausted, or
    /// the two sides discover a common outcome.
    Bidirectional,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Heuristics {
    pub suffix_fixing: bool,
    pub suffix_extension: bool,
    pub rightmost: bool,
    pub least_improving: bool,
    pub visited_dedup: bool,
}

impl Heuristics {
    pub fn all() -> Self {
        Heuristics {
            suffix_fixing: true,
            suffix_extension: true,
            rightmost: true,
            least_improving: true,
            visited_dedup: true,
        }
    }

    pub fn none() -> Self {
        Heuristics {
            suffix_fixing: false,
            suffix_extension: false,
            rightmost: false,
            least_improving: false,
            visited_dedup: false,
        }
    }

    /// Bit 0 suffix fixing, 1 suffix extension, 2 rightmost,
    /// 3 least improving, 4 visited dedup.
    pub fn from_bits(bits: u8) -> Self {
        Heuristics {
            suffix_fixing: bits & 1 != 0,
            suffix_extension: bits & 2 != 0,
            rightmost: bits & 4 != 0,
            least_improving: bits & 8 != 0,
            visited_dedup: bits & 16 != 0,
        }
    }
}

impl Default for Heuristics {
    fn default() -> Self {
        Heuristics::all()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub direction: SearchDirection,
    pub heuristics: Heuristics,
    /// Maximum node expansions; `None` for unbounded.
    pub budget: Option<u64>,
    pub want_witness: bool,
    pub forward_pruning: bool,
    /// On binary nets where every variable has at most one parent, rightmost
    /// ordering together with both suffix rules never needs to revise a
    /// choice, so only the first ordered child of each node is explored.
    /// Takes effect only when those three heuristics are all enabled.
    pub backtrack_free_shortcut: bool,
    /// In bidirectional mode, also conclude when the two searches discover
    /// a common outcome. Off, the first side to finish decides.
    pub meet_in_the_middle: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            direction: SearchDirection::Bidirectional,
            heuristics: Heuristics::all(),
            budget: None,
            want_witness: true,
            forward_pruning: true,
            backtrack_free_shortcut: true,
            meet_in_the_middle: true,
        }
    }
}

impl SearchConfig {
    pub fn with_direction(mut self, direction: SearchDirection) -> Self {
        self.direction = direction;
        self
    }

    pub fn with_heuristics(mut self, heuristics: Heuristics) -> Self {
        self.heuristics = heuristics;
        self
    }

    pub fn with_budget(mut self, budget: Option<u64>) -> Self {
        self.budget = budget;
        self
    }

    /// Plain tree search: no heuristics, no pruning, no shortcut.
    pub fn plain(direction: SearchDirection) -> Self {
        SearchConfig {
            direction,
            heuristics: Heuristics::none(),
            budget: None,
            want_witness: true,
            forward_pruning: false,
            backtrack_free_shortcut: false,
            meet_in_the_middle: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Dominates,
    NotDominated,
    BudgetExhausted,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub expansions: u64,
    pub backtracks: u64,
    /// The tree whose search settled the query; `None` when no search ran.
    pub direction_decided: Option<Direction>,
    /// Set when forward pruning alone proved the query false.
    pub pruned: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Present iff `kind` is `Dominates` and a witness was requested.
    pub witness: Option<FlipSequence>,
    pub stats: SearchStats,
}

impl Verdict {
    pub fn dominates(&self) -> bool {
        self.kind == VerdictKind::Dominates
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("outcome does not belong to this net: {0}")]
    Outcome(#[from] ModelError),
    #[error("budget must be at least 1")]
    ZeroBudget,
}

/// Answers whether the net entails `x > y`.
///
/// `NotDominated` is only ever returned after a complete search (or a
/// pruning proof); running out of budget yields `BudgetExhausted`.
pub fn dominates(net: &CpNet, x: &Outcome, y: &Outcome, cfg: &SearchConfig) -> Result<Verdict, SearchError> {
    net.check_outcome(x)?;
    net.check_outcome(y)?;
    if cfg.budget == Some(0) {
        return Err(SearchError::ZeroBudget);
    }
    let mut stats = SearchStats::default();
    if x == y {
        return Ok(finish(VerdictKind::NotDominated, None, stats));
    }

    let pruning = cfg.forward_pruning.then(|| forward_prune(net, x, y));
    if let Some(p) = &pruning {
        if !p.is_feasible() {
            stats.pruned = true;
            return Ok(finish(VerdictKind::NotDominated, None, stats));
        }
    }
    let allowed = pruning.as_ref().map(|p| p.surviving.as_slice());

    let h = cfg.heuristics;
    let first_child_only = cfg.backtrack_free_shortcut
        && h.rightmost
        && h.suffix_fixing
        && h.suffix_extension
        && net.is_binary_tree();
    let setup = |direction: Direction, track: bool| {
        let (root, target) = match direction {
            Direction::Improving => (y.clone(), x.clone()),
            Direction::Worsening => (x.clone(), y.clone()),
        };
        SideSetup {
            net,
            direction,
            root,
            target,
            heuristics: h,
            allowed,
            first_child_only,
            track_discovery: track,
        }
    };

    let mut budget = cfg.budget;
    let exhausted = |stats: SearchStats| Ok(finish(VerdictKind::BudgetExhausted, None, stats));
    let sides: Vec<Side> = match cfg.direction {
        SearchDirection::Improving => Side::start(setup(Direction::Improving, false), &mut budget)
            .into_iter()
            .collect(),
        SearchDirection::Worsening => Side::start(setup(Direction::Worsening, false), &mut budget)
            .into_iter()
            .collect(),
        SearchDirection::Bidirectional => {
            let mut v: Vec<Side> = Side::start(setup(Direction::Improving, cfg.meet_in_the_middle), &mut budget)
                .into_iter()
                .collect();
            v.extend(Side::start(setup(Direction::Worsening, cfg.meet_in_the_middle), &mut budget));
            v
        }
    };
    let expected = if cfg.direction == SearchDirection::Bidirectional { 2 } else { 1 };
    if sides.len() < expected {
        stats.expansions = sides.iter().map(|s| s.expansions).sum();
        return exhausted(stats);
    }
    let mut sides = sides;

    let mut turn = 0;
    loop {
        let step = sides[turn].step(&mut budget);
        stats.expansions = sides.iter().map(|s| s.expansions).sum();
        stats.backtracks = sides.iter().map(|s| s.backtracks).sum();
        let side = &sides[turn];
        match step {
            Step::OutOfBudget => return exhausted(stats),
            Step::Exhausted => {
                stats.direction_decided = Some(side.direction());
                return Ok(finish(VerdictKind::NotDominated, None, stats));
            }
            Step::Found => {
                stats.direction_decided = Some(side.direction());
                let witness = cfg.want_witness.then(|| side.stack_path());
                return Ok(finish(VerdictKind::Dominates, witness, stats));
            }
            Step::Generated(z) => {
                if sides.len() == 2 {
                    let other = &sides[1 - turn];
                    if cfg.meet_in_the_middle && other.has_discovered(&z) {
                        stats.direction_decided = Some(side.direction());
                        let witness = cfg.want_witness.then(|| splice(&sides, &z));
                        return Ok(finish(VerdictKind::Dominates, witness, stats));
                    }
                    turn = 1 - turn;
                }
            }
        }
    }
}

// Improving path y ~> z, then the worsening path x ~> z walked backwards.
fn splice(sides: &[Side], z: &Outcome) -> FlipSequence {
    let up = sides[0].discovery_path(z).expect("meeting point discovered");
    let down = sides[1].discovery_path(z).expect("meeting point discovered");
    up.concat(&down.reversed()).expect("paths meet at z")
}

fn finish(kind: VerdictKind, witness: Option<FlipSequence>, stats: SearchStats) -> Verdict {
    Verdict { kind, witness, stats }
}
