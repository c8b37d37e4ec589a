//! Exhaustive reference answer: the complete improving-flip graph over all
//! outcomes and plain breadth-first reachability on it.
//!
//! Edges are read straight off the preference rows rather than through
//! [`CpNet::legal_flips`], so the oracle shares no search code with the
//! engine it is used to check.

use std::collections::VecDeque;

use thiserror::Error;

use crate::model::{CpNet, Outcome};

/// Default limit on the number of outcomes the oracle will enumerate.
pub const DEFAULT_ORACLE_CAP: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("net has more than {cap} outcomes")]
    CapExceeded { cap: usize },
}

/// Every outcome of a net as a node; an edge `z -> z'` whenever `z'` is one
/// improving flip away from `z`.
#[derive(Debug, Clone)]
pub struct FlipGraph {
    improving: Vec<Vec<u32>>,
}

impl FlipGraph {
    pub fn build(net: &CpNet, cap: usize) -> Result<FlipGraph, OracleError> {
        let count = net
            .outcome_count()
            .filter(|&c| c <= cap && c <= u32::MAX as usize)
            .ok_or(OracleError::CapExceeded { cap })?;
        let n = net.len();
        // stride[v]: index distance between outcomes differing by one in v
        let mut stride = vec![1usize; n];
        for v in (0..n.saturating_sub(1)).rev() {
            stride[v] = stride[v + 1] * net.domain_size(v + 1);
        }
        let mut improving = vec![Vec::new(); count];
        for (index, edges) in improving.iter_mut().enumerate() {
            let z = net.outcome_at(index);
            for (v, &step) in stride.iter().enumerate() {
                let table = net.table(v);
                let row = table.row(table.row_index_for(&z));
                let current = z.get(v);
                for &better in row.ranking().iter().take_while(|&&x| x != current) {
                    let target = index - current * step + better * step;
                    edges.push(target as u32);
                }
            }
        }
        Ok(FlipGraph { improving })
    }

    pub fn len(&self) -> usize {
        self.improving.len()
    }

    pub fn is_empty(&self) -> bool {
        self.improving.is_empty()
    }

    pub fn successors(&self, index: usize) -> &[u32] {
        &self.improving[index]
    }

    /// Outcomes reachable from `from` by one or more improving flips.
    pub fn strictly_above(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue: VecDeque<usize> = self.improving[from].iter().map(|&t| t as usize).collect();
        for &t in &queue {
            seen[t] = true;
        }
        while let Some(z) = queue.pop_front() {
            for &t in &self.improving[z] {
                let t = t as usize;
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// True iff a nonempty improving path leads from `worse` to `better`.
    pub fn dominates(&self, better: usize, worse: usize) -> bool {
        self.shortest_path(worse, better).is_some()
    }

    /// Shortest nonempty improving path `from ~> to` as outcome indices,
    /// endpoints included.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent: Vec<Option<usize>> = vec![None; self.len()];
        let mut queue = VecDeque::from([from]);
        while let Some(z) = queue.pop_front() {
            for &t in &self.improving[z] {
                let t = t as usize;
                if parent[t].is_some() || t == from {
                    continue;
                }
                parent[t] = Some(z);
                if t == to {
                    let mut path = vec![to];
                    let mut cur = to;
                    while let Some(p) = parent[cur] {
                        path.push(p);
                        if p == from {
                            break;
                        }
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(t);
            }
        }
        None
    }
}

/// Whether the net entails `x > y`, decided by exhaustive enumeration.
pub fn oracle_dominates(net: &CpNet, x: &Outcome, y: &Outcome) -> Result<bool, OracleError> {
    oracle_dominates_capped(net, x, y, DEFAULT_ORACLE_CAP)
}

pub fn oracle_dominates_capped(net: &CpNet, x: &Outcome, y: &Outcome, cap: usize) -> Result<bool, OracleError> {
    let graph = FlipGraph::build(net, cap)?;
    Ok(graph.dominates(net.outcome_index(x), net.outcome_index(y)))
}
