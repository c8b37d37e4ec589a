//! Dominance queries as STRIPS planning problems.
//!
//! Each proposition says that one variable holds one value. Every row
//! `c : v1 > v2 > ... > vd` yields d-1 operators moving between successive
//! values under `c`; a jump over several values in a flipping sequence
//! corresponds to several consecutive operator applications.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{CpNet, Direction, Flip, FlipSequence, ModelError, Outcome, ParentAssignment, ValueId, VarId};

/// `(var, value)`: the variable currently holds the value.
pub type Proposition = (VarId, ValueId);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripsOperator {
    pub name: String,
    /// Parent bindings of the row, then the owner's current value.
    pub preconditions: Vec<Proposition>,
    pub add: Proposition,
    pub delete: Proposition,
    pub direction: Direction,
    /// Index of the generating row in the owner's table.
    pub row: usize,
}

impl StripsOperator {
    pub fn var(&self) -> VarId {
        self.add.0
    }
}

/// `<var>_<from>_to_<to>__<condition>`, condition `P_p_Q_q` or `top`.
fn operator_name(net: &CpNet, var: VarId, from: ValueId, to: ValueId, cond: &ParentAssignment) -> String {
    let mut name = format!("{}_{}_to_{}__", net.name(var), net.value_name(var, from), net.value_name(var, to));
    if cond.is_empty() {
        name.push_str("top");
    } else {
        let parts: Vec<String> = cond
            .bindings
            .iter()
            .map(|&(p, v)| format!("{}_{}", net.name(p), net.value_name(p, v)))
            .collect();
        name.push_str(&parts.join("_"));
    }
    name
}

/// All operators for `direction`, in table order. Names that would collide
/// (possible only when names contain underscores) get a numeric suffix.
pub fn to_strips(net: &CpNet, direction: Direction) -> Vec<StripsOperator> {
    let mut ops = Vec::new();
    let mut seen: HashMap<String, usize> = HashMap::new();
    for var in 0..net.len() {
        let table = net.table(var);
        for index in 0..table.len() {
            let cond = table.assignment(index);
            for pair in table.row(index).ranking().windows(2) {
                let (from, to) = match direction {
                    Direction::Improving => (pair[1], pair[0]),
                    Direction::Worsening => (pair[0], pair[1]),
                };
                let mut name = operator_name(net, var, from, to, &cond);
                let count = seen.entry(name.clone()).or_insert(0);
                *count += 1;
                if *count > 1 {
                    let _ = write!(name, "_{count}");
                }
                let mut preconditions = cond.bindings.clone();
                preconditions.push((var, from));
                ops.push(StripsOperator {
                    name,
                    preconditions,
                    add: (var, to),
                    delete: (var, from),
                    direction,
                    row: index,
                });
            }
        }
    }
    ops
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanningProblem {
    pub direction: Direction,
    pub operators: Vec<StripsOperator>,
    /// The worse outcome when improving, the better one when worsening.
    pub init: Outcome,
    pub goal: Outcome,
}

impl PlanningProblem {
    pub fn init_propositions(&self) -> Vec<Proposition> {
        self.init.values().iter().copied().enumerate().collect()
    }

    pub fn goal_propositions(&self) -> Vec<Proposition> {
        self.goal.values().iter().copied().enumerate().collect()
    }

    pub fn operator(&self, name: &str) -> Option<&StripsOperator> {
        self.operators.iter().find(|op| op.name == name)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExportError {
    #[error(transparent)]
    Outcome(#[from] ModelError),
    #[error("better and worse outcomes are equal; the empty plan would solve the problem although dominance is strict")]
    EqualOutcomes,
}

/// Builds the planning problem for `x > y`. Equal outcomes are refused
/// unless `allow_equal` is set.
pub fn export_planning_problem(
    net: &CpNet,
    x: &Outcome,
    y: &Outcome,
    direction: Direction,
    allow_equal: bool,
) -> Result<PlanningProblem, ExportError> {
    net.check_outcome(x)?;
    net.check_outcome(y)?;
    if x == y && !allow_equal {
        return Err(ExportError::EqualOutcomes);
    }
    let (init, goal) = match direction {
        Direction::Improving => (y.clone(), x.clone()),
        Direction::Worsening => (x.clone(), y.clone()),
    };
    Ok(PlanningProblem {
        direction,
        operators: to_strips(net, direction),
        init,
        goal,
    })
}

fn holds(net: &CpNet, (var, value): Proposition) -> String {
    format!("(holds var-{} val-{})", net.name(var), net.value_name(var, value))
}

/// The domain document. Operators are sorted by name.
pub fn render_domain(net: &CpNet, problem: &PlanningProblem) -> String {
    let mut vars: Vec<String> = (0..net.len()).map(|v| format!("var-{}", net.name(v))).collect();
    vars.sort();
    let mut values: Vec<String> = (0..net.len())
        .flat_map(|v| net.variable(v).domain.iter().map(|x| format!("val-{x}")))
        .collect();
    values.sort();
    values.dedup();
    let mut ops: Vec<&StripsOperator> = problem.operators.iter().collect();
    ops.sort_by(|a, b| a.name.cmp(&b.name));

    let mut out = String::new();
    let _ = writeln!(out, "(define (domain cpnet-{})", problem.direction);
    out.push_str("  (:requirements :strips)\n");
    let _ = writeln!(out, "  (:constants {})", vars.into_iter().chain(values).collect::<Vec<_>>().join(" "));
    out.push_str("  (:predicates (holds ?var ?val))\n");
    for op in ops {
        let pre: Vec<String> = op.preconditions.iter().map(|&p| holds(net, p)).collect();
        let _ = writeln!(out, "  (:action {}", op.name);
        out.push_str("    :parameters ()\n");
        let _ = writeln!(out, "    :precondition (and {})", pre.join(" "));
        let _ = writeln!(
            out,
            "    :effect (and {} (not {})))",
            holds(net, op.add),
            holds(net, op.delete)
        );
    }
    out.push_str(")\n");
    out
}

/// The problem document.
pub fn render_problem(net: &CpNet, problem: &PlanningProblem) -> String {
    let list = |props: Vec<Proposition>| props.into_iter().map(|p| holds(net, p)).collect::<Vec<_>>();
    let mut out = String::new();
    out.push_str("(define (problem dominance-query)\n");
    let _ = writeln!(out, "  (:domain cpnet-{})", problem.direction);
    let _ = writeln!(out, "  (:init {})", list(problem.init_propositions()).join(" "));
    let _ = writeln!(out, "  (:goal (and {})))", list(problem.goal_propositions()).join(" "));
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlanRejection {
    #[error("step {step}: unknown operator {name}")]
    UnknownOperator { step: usize, name: String },
    #[error("step {step}: operator {operator} needs {missing}")]
    MissingPrecondition {
        step: usize,
        operator: String,
        missing: String,
    },
    #[error("goal not reached")]
    GoalNotReached,
}

/// Replays `plan` from the initial state and returns the flips it performs.
/// Every operator moves one variable by one value, so each becomes a flip.
pub fn plan_to_flip_sequence<S: AsRef<str>>(
    net: &CpNet,
    problem: &PlanningProblem,
    plan: &[S],
) -> Result<FlipSequence, PlanRejection> {
    let by_name: HashMap<&str, &StripsOperator> =
        problem.operators.iter().map(|op| (op.name.as_str(), op)).collect();
    let mut seq = FlipSequence::new(problem.init.clone());
    let mut state = problem.init.clone();
    for (step, name) in plan.iter().enumerate() {
        let name = name.as_ref();
        let op = by_name.get(name).ok_or_else(|| PlanRejection::UnknownOperator {
            step,
            name: name.to_string(),
        })?;
        if let Some(&(var, value)) = op.preconditions.iter().find(|&&(var, value)| state.get(var) != value) {
            return Err(PlanRejection::MissingPrecondition {
                step,
                operator: op.name.clone(),
                missing: format!("{}={}", net.name(var), net.value_name(var, value)),
            });
        }
        seq.flips.push(Flip {
            var: op.var(),
            from: op.delete.1,
            to: op.add.1,
            direction: op.direction,
        });
        state = state.with(op.var(), op.add.1);
    }
    if state != problem.goal {
        return Err(PlanRejection::GoalNotReached);
    }
    Ok(seq)
}

/// Turns a flipping sequence into a plan for `problem`, splitting each jump
/// into adjacent steps. A sequence in the other direction is reversed
/// first. `None` if the sequence does not run from init to goal through
/// legal flips.
pub fn witness_to_plan(net: &CpNet, problem: &PlanningProblem, witness: &FlipSequence) -> Option<Vec<String>> {
    let seq = match witness.flips.first() {
        Some(f) if f.direction != problem.direction => witness.reversed(),
        _ => witness.clone(),
    };
    if seq.start != problem.init || seq.end() != problem.goal {
        return None;
    }
    let index: HashMap<(VarId, usize, ValueId, ValueId), &str> = problem
        .operators
        .iter()
        .map(|op| ((op.var(), op.row, op.delete.1, op.add.1), op.name.as_str()))
        .collect();
    let mut plan = Vec::new();
    let mut state = seq.start.clone();
    for flip in &seq.flips {
        if !net.is_legal(&state, flip) {
            return None;
        }
        let table = net.table(flip.var);
        let row_index = table.row_index_for(&state);
        let ranking = table.row(row_index).ranking();
        let (lo, hi) = {
            let a = ranking.iter().position(|&v| v == flip.from)?;
            let b = ranking.iter().position(|&v| v == flip.to)?;
            (a, b)
        };
        let path: Vec<ValueId> = if lo < hi {
            ranking[lo..=hi].to_vec()
        } else {
            ranking[hi..=lo].iter().rev().copied().collect()
        };
        for pair in path.windows(2) {
            plan.push(index.get(&(flip.var, row_index, pair[0], pair[1]))?.to_string());
        }
        state = state.with(flip.var, flip.to);
    }
    Some(plan)
}

/// Breadth-first forward planner over proposition sets; returns a shortest
/// plan. Knows nothing about nets: states are plain sets of propositions.
pub fn solve(problem: &PlanningProblem) -> Option<Vec<String>> {
    let mut ids: HashMap<Proposition, usize> = HashMap::new();
    let mut intern = |p: Proposition| {
        let next = ids.len();
        *ids.entry(p).or_insert(next)
    };
    let init: Vec<usize> = problem.init_propositions().into_iter().map(&mut intern).collect();
    let goal: Vec<usize> = problem.goal_propositions().into_iter().map(&mut intern).collect();
    let ops: Vec<(Vec<usize>, usize, usize)> = problem
        .operators
        .iter()
        .map(|op| {
            let pre = op.preconditions.iter().map(|&p| intern(p)).collect();
            (pre, intern(op.add), intern(op.delete))
        })
        .collect();
    let size = ids.len();

    let mut start = vec![false; size];
    for p in init {
        start[p] = true;
    }
    let satisfied = |s: &[bool]| goal.iter().all(|&p| s[p]);
    let mut parent: HashMap<Vec<bool>, Option<(Vec<bool>, usize)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(state) = queue.pop_front() {
        if satisfied(&state) {
            let mut plan = Vec::new();
            let mut cur = state;
            while let Some(Some((prev, op))) = parent.get(&cur) {
                plan.push(problem.operators[*op].name.clone());
                cur = prev.clone();
            }
            plan.reverse();
            return Some(plan);
        }
        for (i, (pre, add, del)) in ops.iter().enumerate() {
            if !pre.iter().all(|&p| state[p]) {
                continue;
            }
            let mut next = state.clone();
            next[*del] = false;
            next[*add] = true;
            if !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((state.clone(), i)));
                queue.push_back(next);
            }
        }
    }
    None
}
