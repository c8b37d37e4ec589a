use std::collections::{HashMap, HashSet};

use super::suffix::{extend_suffix_within, fixed_suffix, order_flips, SuffixSet};
use super::Heuristics;
use crate::model::{CpNet, Direction, Flip, FlipSequence, Outcome};

struct Frame {
    outcome: Outcome,
    children: Vec<Flip>,
    next: usize,
}

pub(super) enum Step {
    /// A new node was pushed and expanded.
    Generated(Outcome),
    /// The target was generated; the stack path reaches it.
    Found,
    /// The whole tree under the root is exhausted.
    Exhausted,
    /// Expanding the next node would exceed the budget.
    OutOfBudget,
}

/// Depth-first search over one flip tree (improving from `y`, or worsening
/// from `x`), driven one expansion at a time so two sides can interleave.
pub(super) struct Side<'n> {
    net: &'n CpNet,
    direction: Direction,
    target: Outcome,
    heuristics: Heuristics,
    allowed: Option<&'n [Vec<bool>]>,
    first_child_only: bool,
    stack: Vec<Frame>,
    path: Vec<Flip>,
    visited: HashSet<Outcome>,
    // first-discovery flip per outcome, kept only when a meeting is possible
    discovered: Option<HashMap<Outcome, Option<Flip>>>,
    pub expansions: u64,
    pub backtracks: u64,
}

pub(super) struct SideSetup<'n> {
    pub net: &'n CpNet,
    pub direction: Direction,
    pub root: Outcome,
    pub target: Outcome,
    pub heuristics: Heuristics,
    pub allowed: Option<&'n [Vec<bool>]>,
    pub first_child_only: bool,
    pub track_discovery: bool,
}

impl<'n> Side<'n> {
    /// Creates the side and expands its root; `None` if the budget does not
    /// allow even that.
    pub fn start(setup: SideSetup<'n>, budget: &mut Option<u64>) -> Option<Side<'n>> {
        if !consume(budget) {
            return None;
        }
        let mut side = Side {
            net: setup.net,
            direction: setup.direction,
            target: setup.target,
            heuristics: setup.heuristics,
            allowed: setup.allowed,
            first_child_only: setup.first_child_only,
            stack: Vec::new(),
            path: Vec::new(),
            visited: HashSet::new(),
            discovered: setup.track_discovery.then(HashMap::new),
            expansions: 0,
            backtracks: 0,
        };
        if side.heuristics.visited_dedup {
            side.visited.insert(setup.root.clone());
        }
        if let Some(d) = side.discovered.as_mut() {
            d.insert(setup.root.clone(), None);
        }
        let children = side.expand(&setup.root);
        side.stack.push(Frame {
            outcome: setup.root,
            children,
            next: 0,
        });
        Some(side)
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn has_discovered(&self, outcome: &Outcome) -> bool {
        self.discovered
            .as_ref()
            .is_some_and(|d| d.contains_key(outcome))
    }

    fn expand(&mut self, z: &Outcome) -> Vec<Flip> {
        self.expansions += 1;
        let h = &self.heuristics;
        let suffix = if h.suffix_fixing || h.suffix_extension {
            fixed_suffix(self.net, z, &self.target)
        } else {
            SuffixSet::empty(self.net.len())
        };
        if h.suffix_extension {
            if let Some(flip) =
                extend_suffix_within(self.net, z, &self.target, &suffix, self.direction, self.allowed)
            {
                return vec![flip];
            }
        }
        let mut flips = Vec::new();
        for var in 0..self.net.len() {
            if h.suffix_fixing && suffix.contains(var) {
                continue;
            }
            self.net.push_flips(z, var, self.direction, &mut flips);
        }
        if let Some(allowed) = self.allowed {
            flips.retain(|f| allowed[f.var][f.to]);
        }
        let mut flips = order_flips(self.net, z, flips, h);
        if self.first_child_only {
            flips.truncate(1);
        }
        flips
    }

    pub fn step(&mut self, budget: &mut Option<u64>) -> Step {
        loop {
            let Some(top) = self.stack.last_mut() else {
                return Step::Exhausted;
            };
            if top.next == top.children.len() {
                self.stack.pop();
                self.path.pop();
                if let Some(parent) = self.stack.last() {
                    if parent.next < parent.children.len() {
                        self.backtracks += 1;
                    }
                }
                continue;
            }
            let flip = top.children[top.next];
            let child = top.outcome.with(flip.var, flip.to);
            if child == self.target {
                top.next += 1;
                self.path.push(flip);
                return Step::Found;
            }
            if self.heuristics.visited_dedup && self.visited.contains(&child) {
                top.next += 1;
                continue;
            }
            if !consume(budget) {
                return Step::OutOfBudget;
            }
            top.next += 1;
            if self.heuristics.visited_dedup {
                self.visited.insert(child.clone());
            }
            if let Some(d) = self.discovered.as_mut() {
                d.entry(child.clone()).or_insert(Some(flip));
            }
            let children = self.expand(&child);
            self.stack.push(Frame {
                outcome: child.clone(),
                children,
                next: 0,
            });
            self.path.push(flip);
            return Step::Generated(child);
        }
    }

    /// The flips from the root to the top of the stack (or to the target,
    /// right after [`Step::Found`]).
    pub fn stack_path(&self) -> FlipSequence {
        FlipSequence {
            start: self.stack[0].outcome.clone(),
            flips: self.path.clone(),
        }
    }

    /// Root-to-`outcome` path through first-discovery links.
    pub fn discovery_path(&self, outcome: &Outcome) -> Option<FlipSequence> {
        let discovered = self.discovered.as_ref()?;
        let mut flips = Vec::new();
        let mut current = outcome.clone();
        loop {
            match discovered.get(&current)? {
                None => break,
                Some(flip) => {
                    flips.push(*flip);
                    current = current.with(flip.var, flip.from);
                }
            }
        }
        flips.reverse();
        Some(FlipSequence {
            start: current,
            flips,
        })
    }
}

fn consume(budget: &mut Option<u64>) -> bool {
    match budget {
        None => true,
        Some(0) => false,
        Some(left) => {
            *left -= 1;
            true
        }
    }
}
