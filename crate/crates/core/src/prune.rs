//! Forward pruning of variable domains before search.
//!
//! Variables are visited in topological order. For each one a value graph
//! is built from the rows whose condition is still possible given the
//! parents' surviving values; only values lying on a path from the better
//! outcome's value to the worse outcome's value survive. An empty result
//! at any variable proves the query false.

use std::collections::VecDeque;

use serde::Serialize;

use crate::model::{CpNet, Outcome, ValueId, VarId};

/// Arc `from -> to` between successive values of one row, pointing from
/// more to less preferred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ValueArc {
    pub from: ValueId,
    pub to: ValueId,
    /// Index of the contributing row in the variable's table.
    pub row: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueGraph {
    pub var: VarId,
    pub arcs: Vec<ValueArc>,
}

impl ValueGraph {
    /// Distinct `(from, to)` pairs, sorted.
    pub fn edges(&self) -> Vec<(ValueId, ValueId)> {
        let mut edges: Vec<_> = self.arcs.iter().map(|a| (a.from, a.to)).collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    fn reach(&self, start: ValueId, size: usize, forward: bool) -> Vec<bool> {
        let mut seen = vec![false; size];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for arc in &self.arcs {
                let (a, b) = if forward { (arc.from, arc.to) } else { (arc.to, arc.from) };
                if a == v && !seen[b] {
                    seen[b] = true;
                    queue.push_back(b);
                }
            }
        }
        seen
    }
}

/// Builds the value graph of `var`. A row contributes only when every
/// parent binding in its condition is still in that parent's surviving set;
/// `surviving` must therefore already be final for all parents of `var`.
pub fn value_graph(net: &CpNet, var: VarId, surviving: &[Vec<bool>]) -> ValueGraph {
    let table = net.table(var);
    let mut arcs = Vec::new();
    for index in 0..table.len() {
        let condition = table.assignment(index);
        let consistent = condition.bindings.iter().all(|&(p, v)| surviving[p][v]);
        if !consistent {
            continue;
        }
        for pair in table.row(index).ranking().windows(2) {
            arcs.push(ValueArc {
                from: pair[0],
                to: pair[1],
                row: index,
            });
        }
    }
    ValueGraph { var, arcs }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PruneStatus {
    Feasible,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneResult {
    pub status: PruneStatus,
    /// `surviving[var][value]`. After a failure, variables from the failed
    /// one onwards in topological order are left unpruned.
    pub surviving: Vec<Vec<bool>>,
    pub failed_variable: Option<VarId>,
}

impl PruneResult {
    pub fn is_feasible(&self) -> bool {
        self.status == PruneStatus::Feasible
    }

    pub fn surviving_values(&self, var: VarId) -> Vec<ValueId> {
        self.surviving[var]
            .iter()
            .enumerate()
            .filter(|(_, &keep)| keep)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn removed_values(&self, var: VarId) -> Vec<ValueId> {
        self.surviving[var]
            .iter()
            .enumerate()
            .filter(|(_, &keep)| !keep)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Prunes every domain for the query `x > y`.
pub fn forward_prune(net: &CpNet, x: &Outcome, y: &Outcome) -> PruneResult {
    let mut surviving: Vec<Vec<bool>> = (0..net.len()).map(|v| vec![true; net.domain_size(v)]).collect();
    for &var in net.topological_order() {
        let graph = value_graph(net, var, &surviving);
        let size = net.domain_size(var);
        let from_x = graph.reach(x.get(var), size, true);
        let to_y = graph.reach(y.get(var), size, false);
        let keep: Vec<bool> = from_x.iter().zip(&to_y).map(|(a, b)| *a && *b).collect();
        if !keep.iter().any(|&k| k) {
            return PruneResult {
                status: PruneStatus::Infeasible,
                surviving,
                failed_variable: Some(var),
            };
        }
        surviving[var] = keep;
    }
    PruneResult {
        status: PruneStatus::Feasible,
        surviving,
        failed_variable: None,
    }
}
