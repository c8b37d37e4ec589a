use std::collections::HashMap;
use std::fmt::Write as _;

use super::validate::build;
use super::{
    Direction, Flip, ModelError, NetCandidate, Outcome, RowSpec, ValidationReport, ValueId, VarId,
    Variable,
};

/// A strict total order over one variable's domain, most preferred first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceRow {
    ranking: Vec<ValueId>,
    // rank[value] = position of value in `ranking`
    rank: Vec<usize>,
}

impl PreferenceRow {
    pub(crate) fn new(ranking: Vec<ValueId>) -> Self {
        let mut rank = vec![0; ranking.len()];
        for (pos, &v) in ranking.iter().enumerate() {
            rank[v] = pos;
        }
        PreferenceRow { ranking, rank }
    }

    pub fn ranking(&self) -> &[ValueId] {
        &self.ranking
    }

    /// 0 for the most preferred value.
    pub fn rank_of(&self, value: ValueId) -> usize {
        self.rank[value]
    }

    pub fn prefers(&self, better: ValueId, worse: ValueId) -> bool {
        self.rank[better] < self.rank[worse]
    }

    pub fn best(&self) -> ValueId {
        self.ranking[0]
    }

    pub fn worst(&self) -> ValueId {
        self.ranking[self.ranking.len() - 1]
    }
}

/// A full instantiation of one variable's parents, in the parents' declared
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParentAssignment {
    pub bindings: Vec<(VarId, ValueId)>,
}

impl ParentAssignment {
    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn value_of(&self, var: VarId) -> Option<ValueId> {
        self.bindings
            .iter()
            .find(|(v, _)| *v == var)
            .map(|&(_, x)| x)
    }

    /// `A=a,B=bbar`; empty string for an unconditional row.
    pub fn display(&self, net: &CpNet) -> String {
        let mut out = String::new();
        for (i, &(var, value)) in self.bindings.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}={}", net.name(var), net.value_name(var, value));
        }
        out
    }
}

/// Conditional preference table of one variable: exactly one row per
/// element of the product of its parents' domains.
///
/// Rows are stored in mixed-radix order over the parent values, first parent
/// most significant, each parent's values in declaration order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpTable {
    pub(crate) owner: VarId,
    pub(crate) parents: Vec<VarId>,
    pub(crate) radix: Vec<usize>,
    pub(crate) rows: Vec<PreferenceRow>,
}

impl CpTable {
    pub fn owner(&self) -> VarId {
        self.owner
    }

    pub fn parents(&self) -> &[VarId] {
        &self.parents
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub(crate) fn index_of(&self, parent_values: impl Iterator<Item = ValueId>) -> usize {
        parent_values
            .zip(&self.radix)
            .fold(0, |acc, (value, &size)| acc * size + value)
    }

    pub fn row_for(&self, outcome: &Outcome) -> &PreferenceRow {
        let idx = self.index_of(self.parents.iter().map(|&p| outcome.get(p)));
        &self.rows[idx]
    }

    pub fn row_index_for(&self, outcome: &Outcome) -> usize {
        self.index_of(self.parents.iter().map(|&p| outcome.get(p)))
    }

    pub fn row(&self, index: usize) -> &PreferenceRow {
        &self.rows[index]
    }

    pub fn assignment(&self, index: usize) -> ParentAssignment {
        let mut values = vec![0; self.parents.len()];
        let mut rest = index;
        for (slot, &size) in values.iter_mut().zip(&self.radix).rev() {
            *slot = rest % size;
            rest /= size;
        }
        ParentAssignment {
            bindings: self.parents.iter().copied().zip(values).collect(),
        }
    }

    /// Rows in canonical order together with their conditions.
    pub fn rows(&self) -> impl Iterator<Item = (ParentAssignment, &PreferenceRow)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .map(move |(i, row)| (self.assignment(i), row))
    }
}

/// A validated, acyclic CP-net with complete strict tables.
///
/// Immutable once built; share it freely between concurrent queries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpNet {
    pub(crate) variables: Vec<Variable>,
    pub(crate) by_name: HashMap<String, VarId>,
    pub(crate) values_by_name: Vec<HashMap<String, ValueId>>,
    pub(crate) parents: Vec<Vec<VarId>>,
    pub(crate) children: Vec<Vec<VarId>>,
    pub(crate) tables: Vec<CpTable>,
    pub(crate) topo: Vec<VarId>,
    pub(crate) topo_pos: Vec<usize>,
}

impl CpNet {
    /// Validates a candidate and builds the net, or returns every diagnostic.
    pub fn new(candidate: &NetCandidate) -> Result<CpNet, ValidationReport> {
        let (net, diagnostics) = build(candidate);
        match net {
            Some(net) if diagnostics.is_empty() => Ok(net),
            _ => Err(ValidationReport { diagnostics }),
        }
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn variable(&self, var: VarId) -> &Variable {
        &self.variables[var]
    }

    pub fn name(&self, var: VarId) -> &str {
        &self.variables[var].name
    }

    pub fn value_name(&self, var: VarId, value: ValueId) -> &str {
        &self.variables[var].domain[value]
    }

    pub fn domain_size(&self, var: VarId) -> usize {
        self.variables[var].domain.len()
    }

    pub fn var_id(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn value_id(&self, var: VarId, name: &str) -> Option<ValueId> {
        self.values_by_name[var].get(name).copied()
    }

    pub fn parents(&self, var: VarId) -> &[VarId] {
        &self.parents[var]
    }

    pub fn children(&self, var: VarId) -> &[VarId] {
        &self.children[var]
    }

    pub fn table(&self, var: VarId) -> &CpTable {
        &self.tables[var]
    }

    /// The row of `var`'s table selected by the parent values in `outcome`.
    pub fn row(&self, var: VarId, outcome: &Outcome) -> &PreferenceRow {
        self.tables[var].row_for(outcome)
    }

    /// Parents before children; ties broken by declaration order.
    pub fn topological_order(&self) -> &[VarId] {
        &self.topo
    }

    /// Position of `var` in [`Self::topological_order`].
    pub fn topo_position(&self, var: VarId) -> usize {
        self.topo_pos[var]
    }

    pub fn topological_names(&self) -> Vec<&str> {
        self.topo.iter().map(|&v| self.name(v)).collect()
    }

    /// Every variable reachable from `var` along parent-to-child edges,
    /// excluding `var` itself.
    pub fn descendants(&self, var: VarId) -> Vec<VarId> {
        let mut seen = vec![false; self.len()];
        let mut stack = self.children[var].clone();
        let mut out = Vec::new();
        while let Some(v) = stack.pop() {
            if !seen[v] {
                seen[v] = true;
                out.push(v);
                stack.extend_from_slice(&self.children[v]);
            }
        }
        out.sort_unstable();
        out
    }

    /// True when every variable is binary and has at most one parent
    /// (chains, trees and forests).
    pub fn is_binary_tree(&self) -> bool {
        (0..self.len()).all(|v| self.domain_size(v) == 2 && self.parents[v].len() <= 1)
    }

    /// Number of outcomes, or `None` on overflow.
    pub fn outcome_count(&self) -> Option<usize> {
        self.variables
            .iter()
            .try_fold(1usize, |acc, v| acc.checked_mul(v.domain.len()))
    }

    /// Outcome with mixed-radix index `index` (first variable most significant).
    pub fn outcome_at(&self, index: usize) -> Outcome {
        let mut values = vec![0; self.len()];
        let mut rest = index;
        for (var, slot) in values.iter_mut().enumerate().rev() {
            let size = self.domain_size(var);
            *slot = rest % size;
            rest /= size;
        }
        Outcome::from_values(values)
    }

    pub fn outcome_index(&self, outcome: &Outcome) -> usize {
        outcome
            .values()
            .iter()
            .enumerate()
            .fold(0, |acc, (var, &value)| acc * self.domain_size(var) + value)
    }

    pub fn check_outcome(&self, outcome: &Outcome) -> Result<(), ModelError> {
        if outcome.len() != self.len() {
            return Err(ModelError::OutcomeArity {
                expected: self.len(),
                found: outcome.len(),
            });
        }
        for (var, &value) in outcome.values().iter().enumerate() {
            if value >= self.domain_size(var) {
                return Err(ModelError::ValueOutOfRange {
                    variable: self.name(var).to_string(),
                    value,
                });
            }
        }
        Ok(())
    }

    /// Builds an outcome from `(variable, value)` name pairs covering every
    /// variable exactly once.
    pub fn outcome(&self, bindings: &[(&str, &str)]) -> Result<Outcome, ModelError> {
        let mut values: Vec<Option<ValueId>> = vec![None; self.len()];
        for &(var_name, value_name) in bindings {
            let var = self
                .var_id(var_name)
                .ok_or_else(|| ModelError::UnknownVariable(var_name.to_string()))?;
            let value = self
                .value_id(var, value_name)
                .ok_or_else(|| ModelError::UnknownValue {
                    variable: var_name.to_string(),
                    value: value_name.to_string(),
                })?;
            if values[var].replace(value).is_some() {
                return Err(ModelError::DuplicateBinding(var_name.to_string()));
            }
        }
        values
            .into_iter()
            .enumerate()
            .map(|(var, v)| v.ok_or_else(|| ModelError::MissingBinding(self.name(var).to_string())))
            .collect::<Result<Vec<_>, _>>()
            .map(Outcome::from_values)
    }

    /// `A=a,B=bbar`, variables in declaration order.
    pub fn format_outcome(&self, outcome: &Outcome) -> String {
        let mut out = String::new();
        for (var, &value) in outcome.values().iter().enumerate() {
            if var > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}={}", self.name(var), self.value_name(var, value));
        }
        out
    }

    /// All flips sanctioned at `z` in `direction`: for each variable, every
    /// value strictly better (or worse) than the current one in the row
    /// selected by `z`'s parent values, not only the adjacent one.
    ///
    /// Variables come in topological order, targets in row order.
    pub fn legal_flips(&self, z: &Outcome, direction: Direction) -> Vec<Flip> {
        let mut out = Vec::new();
        for &var in &self.topo {
            self.push_flips(z, var, direction, &mut out);
        }
        out
    }

    pub(crate) fn push_flips(&self, z: &Outcome, var: VarId, direction: Direction, out: &mut Vec<Flip>) {
        let row = self.row(var, z);
        let from = z.get(var);
        let pos = row.rank_of(from);
        let targets = match direction {
            Direction::Improving => &row.ranking()[..pos],
            Direction::Worsening => &row.ranking()[pos + 1..],
        };
        out.extend(targets.iter().map(|&to| Flip {
            var,
            from,
            to,
            direction,
        }));
    }

    pub fn is_legal(&self, z: &Outcome, flip: &Flip) -> bool {
        if flip.var >= self.len()
            || z.len() != self.len()
            || z.get(flip.var) != flip.from
            || flip.from == flip.to
            || flip.to >= self.domain_size(flip.var)
        {
            return false;
        }
        let row = self.row(flip.var, z);
        match flip.direction {
            Direction::Improving => row.prefers(flip.to, flip.from),
            Direction::Worsening => row.prefers(flip.from, flip.to),
        }
    }

    pub fn apply_flip(&self, z: &Outcome, flip: &Flip) -> Result<Outcome, ModelError> {
        if !self.is_legal(z, flip) {
            let name = |v: VarId, x: ValueId| {
                self.variables
                    .get(v)
                    .and_then(|var| var.domain.get(x))
                    .cloned()
                    .unwrap_or_else(|| format!("#{x}"))
            };
            return Err(ModelError::IllegalFlip {
                variable: self
                    .variables
                    .get(flip.var)
                    .map(|v| v.name.clone())
                    .unwrap_or_else(|| format!("#{}", flip.var)),
                from: name(flip.var, flip.from),
                to: name(flip.var, flip.to),
            });
        }
        Ok(z.with(flip.var, flip.to))
    }

    /// The unique most preferred outcome: each variable takes its top value
    /// given its already assigned parents.
    pub fn best_outcome(&self) -> Outcome {
        self.sweep(PreferenceRow::best)
    }

    pub fn worst_outcome(&self) -> Outcome {
        self.sweep(PreferenceRow::worst)
    }

    fn sweep(&self, pick: fn(&PreferenceRow) -> ValueId) -> Outcome {
        let mut outcome = Outcome::from_values(vec![0; self.len()]);
        for &var in &self.topo {
            let value = pick(self.row(var, &outcome));
            outcome.set(var, value);
        }
        outcome
    }

    /// `VAR: from -> to  [rule: <condition>]`, where the condition is the
    /// parent context of the row that sanctions the flip at `z`.
    pub fn format_flip(&self, z: &Outcome, flip: &Flip) -> String {
        let table = self.table(flip.var);
        let condition = table.assignment(table.row_index_for(z)).display(self);
        format!(
            "{}: {} -> {}  [rule: {}]",
            self.name(flip.var),
            self.value_name(flip.var, flip.from),
            self.value_name(flip.var, flip.to),
            if condition.is_empty() { "true" } else { &condition },
        )
    }

    /// The name-level description of this net, with rows in canonical order.
    pub fn to_candidate(&self) -> NetCandidate {
        let mut rows = Vec::new();
        for table in &self.tables {
            let owner = self.name(table.owner);
            for (cond, row) in table.rows() {
                rows.push(RowSpec {
                    owner: owner.to_string(),
                    condition: cond
                        .bindings
                        .iter()
                        .map(|&(p, x)| (self.name(p).to_string(), self.value_name(p, x).to_string()))
                        .collect(),
                    ranking: row
                        .ranking()
                        .iter()
                        .map(|&x| self.value_name(table.owner, x).to_string())
                        .collect(),
                });
            }
        }
        NetCandidate {
            variables: self.variables.clone(),
            rows,
        }
    }
}
