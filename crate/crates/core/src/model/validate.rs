use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use super::net::{CpNet, CpTable, PreferenceRow};
use super::{NetCandidate, ValueId, VarId};

/// The rule a diagnostic reports against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    NoVariables,
    DuplicateVariable,
    SmallDomain,
    DuplicateValue,
    UnknownParent,
    SelfParent,
    DuplicateParent,
    Cycle,
    UnknownOwner,
    MalformedCondition,
    UnknownValue,
    PartialRanking,
    DuplicateRow,
    MissingRow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Rule,
    /// The offending variable, when there is one.
    pub variable: Option<String>,
    /// Index into the candidate's rows, for problems with a single row.
    pub row: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

/// Outcome of [`validate`]: empty means the candidate is a valid net.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.diagnostics.is_empty()
    }

    pub fn has(&self, rule: Rule) -> bool {
        self.diagnostics.iter().any(|d| d.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.diagnostics.is_empty() {
            return f.write_str("ok");
        }
        for (i, d) in self.diagnostics.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationReport {}

/// Checks every net invariant and reports all violations found.
pub fn validate(candidate: &NetCandidate) -> ValidationReport {
    ValidationReport {
        diagnostics: build(candidate).1,
    }
}

struct Sink {
    diagnostics: Vec<Diagnostic>,
    // row being checked, attached to every diagnostic pushed meanwhile
    row: Option<usize>,
}

impl Sink {
    fn push(&mut self, rule: Rule, variable: Option<&str>, message: String) {
        self.diagnostics.push(Diagnostic {
            rule,
            variable: variable.map(str::to_string),
            row: self.row,
            message,
        });
    }
}

pub(crate) fn build(candidate: &NetCandidate) -> (Option<CpNet>, Vec<Diagnostic>) {
    let mut sink = Sink {
        diagnostics: Vec::new(),
        row: None,
    };
    let vars = &candidate.variables;
    if vars.is_empty() {
        sink.push(Rule::NoVariables, None, "no variables".to_string());
        return (None, sink.diagnostics);
    }

    let mut by_name: HashMap<String, VarId> = HashMap::new();
    for (id, var) in vars.iter().enumerate() {
        if by_name.insert(var.name.clone(), id).is_some() {
            sink.push(
                Rule::DuplicateVariable,
                Some(&var.name),
                format!("duplicate declaration of variable {}", var.name),
            );
        }
    }
    // first declaration wins
    let by_name: HashMap<String, VarId> = vars
        .iter()
        .enumerate()
        .rev()
        .map(|(id, v)| (v.name.clone(), id))
        .collect();

    let mut values_by_name = Vec::with_capacity(vars.len());
    for var in vars {
        if var.domain.len() < 2 {
            sink.push(
                Rule::SmallDomain,
                Some(&var.name),
                format!("variable {} needs at least two values", var.name),
            );
        }
        let mut index = HashMap::new();
        for (id, value) in var.domain.iter().enumerate() {
            if index.contains_key(value) {
                sink.push(
                    Rule::DuplicateValue,
                    Some(&var.name),
                    format!("duplicate value {} in domain of {}", value, var.name),
                );
            } else {
                index.insert(value.clone(), id);
            }
        }
        values_by_name.push(index);
    }

    let mut parents: Vec<Vec<VarId>> = vec![Vec::new(); vars.len()];
    for (id, var) in vars.iter().enumerate() {
        let mut seen = HashSet::new();
        for p in &var.parents {
            if !seen.insert(p) {
                sink.push(
                    Rule::DuplicateParent,
                    Some(&var.name),
                    format!("parent {} listed twice for {}", p, var.name),
                );
                continue;
            }
            if *p == var.name {
                sink.push(
                    Rule::SelfParent,
                    Some(&var.name),
                    format!("variable {} is its own parent", var.name),
                );
                continue;
            }
            match by_name.get(p) {
                Some(&pid) => parents[id].push(pid),
                None => sink.push(
                    Rule::UnknownParent,
                    Some(&var.name),
                    format!("unknown parent {} of {}", p, var.name),
                ),
            }
        }
    }
    let mut children: Vec<Vec<VarId>> = vec![Vec::new(); vars.len()];
    for (id, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(id);
        }
    }

    let topo = match topological_sort(&parents, &children) {
        Ok(order) => Some(order),
        Err(cycle) => {
            let names: Vec<&str> = cycle.iter().map(|&v| vars[v].name.as_str()).collect();
            sink.push(
                Rule::Cycle,
                Some(names[0]),
                format!("cycle {}", names.join(" -> ")),
            );
            None
        }
    };

    let structural_ok = sink.diagnostics.is_empty();
    let tables = build_tables(candidate, &by_name, &values_by_name, &parents, &mut sink);

    let net = match (topo, tables) {
        (Some(topo), Some(tables)) if structural_ok && sink.diagnostics.is_empty() => {
            let mut topo_pos = vec![0; vars.len()];
            for (pos, &v) in topo.iter().enumerate() {
                topo_pos[v] = pos;
            }
            Some(CpNet {
                variables: vars.clone(),
                by_name,
                values_by_name,
                parents,
                children,
                tables,
                topo,
                topo_pos,
            })
        }
        _ => None,
    };
    (net, sink.diagnostics)
}

/// Kahn's algorithm, always releasing the earliest-declared ready variable.
/// On failure returns one cycle as a closed walk (first element repeated).
fn topological_sort(parents: &[Vec<VarId>], children: &[Vec<VarId>]) -> Result<Vec<VarId>, Vec<VarId>> {
    let n = parents.len();
    let mut indegree: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut ready: BTreeSet<VarId> = (0..n).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = ready.pop_first() {
        order.push(v);
        for &c in &children[v] {
            indegree[c] -= 1;
            if indegree[c] == 0 {
                ready.insert(c);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }
    // Every remaining variable has a remaining parent, so walking parent
    // links from any of them must close a loop.
    let remaining: Vec<bool> = indegree.iter().map(|&d| d > 0).collect();
    let start = (0..n).find(|&v| remaining[v]).expect("unsorted variable");
    let mut walk = vec![start];
    let mut pos_in_walk: HashMap<VarId, usize> = HashMap::from([(start, 0)]);
    let mut current = start;
    loop {
        let next = *parents[current]
            .iter()
            .find(|&&p| remaining[p])
            .expect("remaining parent");
        if let Some(&pos) = pos_in_walk.get(&next) {
            let mut cycle: Vec<VarId> = walk[pos..].to_vec();
            // walk follows child -> parent; report parent -> child
            cycle.reverse();
            let first = cycle[0];
            cycle.push(first);
            // rotate so the earliest-declared variable leads
            let min_pos = (0..cycle.len() - 1).min_by_key(|&i| cycle[i]).unwrap();
            let mut rotated: Vec<VarId> = cycle[min_pos..cycle.len() - 1].to_vec();
            rotated.extend_from_slice(&cycle[..min_pos]);
            rotated.push(rotated[0]);
            return Err(rotated);
        }
        pos_in_walk.insert(next, walk.len());
        walk.push(next);
        current = next;
    }
}

fn build_tables(
    candidate: &NetCandidate,
    by_name: &HashMap<String, VarId>,
    values_by_name: &[HashMap<String, ValueId>],
    parents: &[Vec<VarId>],
    sink: &mut Sink,
) -> Option<Vec<CpTable>> {
    let vars = &candidate.variables;
    let mut tables: Vec<CpTable> = (0..vars.len())
        .map(|v| CpTable {
            owner: v,
            parents: parents[v].clone(),
            radix: parents[v].iter().map(|&p| vars[p].domain.len()).collect(),
            rows: Vec::new(),
        })
        .collect();
    let row_counts: Vec<Option<usize>> = tables
        .iter()
        .map(|t| t.radix.iter().try_fold(1usize, |acc, &r| acc.checked_mul(r)))
        .collect();
    let mut slots: Vec<Vec<Option<PreferenceRow>>> = row_counts
        .iter()
        .map(|c| vec![None; c.unwrap_or(0).min(1 << 20)])
        .collect();
    let mut ok = true;

    for (row_index, row_spec) in candidate.rows.iter().enumerate() {
        sink.row = Some(row_index);
        let Some(&owner) = by_name.get(&row_spec.owner) else {
            sink.push(
                Rule::UnknownOwner,
                Some(&row_spec.owner),
                format!("preference row for unknown variable {}", row_spec.owner),
            );
            ok = false;
            continue;
        };
        let owner_name = &vars[owner].name;
        let cond_text = row_spec
            .condition
            .iter()
            .map(|(v, x)| format!("{v}={x}"))
            .collect::<Vec<_>>()
            .join(",");

        // condition must bind each declared parent exactly once
        let mut bound: Vec<Option<ValueId>> = vec![None; parents[owner].len()];
        let mut cond_ok = true;
        for (var_name, value_name) in &row_spec.condition {
            let slot = by_name
                .get(var_name)
                .and_then(|id| parents[owner].iter().position(|p| p == id));
            let Some(slot) = slot else {
                sink.push(
                    Rule::MalformedCondition,
                    Some(owner_name),
                    format!("condition of row for {owner_name} binds {var_name}, which is not a parent"),
                );
                cond_ok = false;
                continue;
            };
            let pid = parents[owner][slot];
            let Some(&value) = values_by_name[pid].get(value_name) else {
                sink.push(
                    Rule::UnknownValue,
                    Some(owner_name),
                    format!("unknown value {value_name} for variable {var_name}"),
                );
                cond_ok = false;
                continue;
            };
            if bound[slot].replace(value).is_some() {
                sink.push(
                    Rule::MalformedCondition,
                    Some(owner_name),
                    format!("condition of row for {owner_name} binds {var_name} twice"),
                );
                cond_ok = false;
            }
        }
        for (slot, b) in bound.iter().enumerate() {
            if b.is_none() && cond_ok {
                sink.push(
                    Rule::MalformedCondition,
                    Some(owner_name),
                    format!(
                        "condition of row for {owner_name} does not bind parent {}",
                        vars[parents[owner][slot]].name
                    ),
                );
                cond_ok = false;
            }
        }

        let mut ranking = Vec::with_capacity(row_spec.ranking.len());
        let mut rank_ok = true;
        for value_name in &row_spec.ranking {
            match values_by_name[owner].get(value_name) {
                Some(&v) => ranking.push(v),
                None => {
                    sink.push(
                        Rule::UnknownValue,
                        Some(owner_name),
                        format!("unknown value {value_name} for variable {owner_name}"),
                    );
                    rank_ok = false;
                }
            }
        }
        if rank_ok {
            let distinct: HashSet<ValueId> = ranking.iter().copied().collect();
            if distinct.len() != ranking.len() || ranking.len() != vars[owner].domain.len() {
                let under = if cond_text.is_empty() {
                    String::new()
                } else {
                    format!(" under {cond_text}")
                };
                sink.push(
                    Rule::PartialRanking,
                    Some(owner_name),
                    format!(
                        "row for {owner_name}{under} is not a strict total order over its domain \
                         (indifference and partial rankings are not supported)"
                    ),
                );
                rank_ok = false;
            }
        }
        if !(cond_ok && rank_ok) {
            ok = false;
            continue;
        }
        let index = tables[owner].index_of(bound.into_iter().map(Option::unwrap));
        let Some(slot) = slots[owner].get_mut(index) else {
            ok = false;
            continue;
        };
        if slot.is_some() {
            sink.push(
                Rule::DuplicateRow,
                Some(owner_name),
                format!("duplicate row for {owner_name} under {cond_text}"),
            );
            ok = false;
            continue;
        }
        *slot = Some(PreferenceRow::new(ranking));
    }

    sink.row = None;
    for (owner, owner_slots) in slots.into_iter().enumerate() {
        if row_counts[owner].is_none_or(|c| c != owner_slots.len()) {
            sink.push(
                Rule::MissingRow,
                Some(&vars[owner].name),
                format!("table of {} is too large", vars[owner].name),
            );
            ok = false;
            continue;
        }
        let mut rows = Vec::with_capacity(owner_slots.len());
        for (index, row) in owner_slots.into_iter().enumerate() {
            match row {
                Some(row) => rows.push(row),
                None => {
                    let cond = tables[owner].assignment(index);
                    let text = cond
                        .bindings
                        .iter()
                        .map(|&(p, x)| format!("{}={}", vars[p].name, vars[p].domain[x]))
                        .collect::<Vec<_>>()
                        .join(",");
                    let message = if text.is_empty() {
                        format!("missing CPT row for {}", vars[owner].name)
                    } else {
                        format!("missing CPT row for {} under {}", vars[owner].name, text)
                    };
                    sink.push(Rule::MissingRow, Some(&vars[owner].name), message);
                    ok = false;
                }
            }
        }
        tables[owner].rows = rows;
    }
    ok.then_some(tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{RowSpec, Variable};

    fn pair() -> NetCandidate {
        NetCandidate {
            variables: vec![
                Variable::new("A", &["a", "abar"], &[]),
                Variable::new("B", &["b", "bbar"], &["A"]),
            ],
            rows: vec![
                RowSpec::new("A", &[], &["a", "abar"]),
                RowSpec::new("B", &[("A", "a")], &["b", "bbar"]),
                RowSpec::new("B", &[("A", "abar")], &["bbar", "b"]),
            ],
        }
    }

    #[test]
    fn two_variable_net_is_valid() {
        assert!(validate(&pair()).is_ok());
    }

    #[test]
    fn missing_row_is_named() {
        let mut c = pair();
        c.rows.pop();
        let report = validate(&c);
        assert_eq!(report.diagnostics.len(), 1);
        assert_eq!(report.diagnostics[0].rule, Rule::MissingRow);
        assert_eq!(report.diagnostics[0].message, "missing CPT row for B under A=abar");
    }

    #[test]
    fn two_cycle_is_reported() {
        let c = NetCandidate {
            variables: vec![
                Variable::new("A", &["a", "abar"], &["B"]),
                Variable::new("B", &["b", "bbar"], &["A"]),
            ],
            rows: vec![],
        };
        let report = validate(&c);
        let cycle = report.diagnostics.iter().find(|d| d.rule == Rule::Cycle).unwrap();
        assert_eq!(cycle.message, "cycle A -> B -> A");
    }

    #[test]
    fn longer_cycle_starts_at_first_declared() {
        let c = NetCandidate {
            variables: vec![
                Variable::new("X", &["x", "y"], &[]),
                Variable::new("A", &["a", "b"], &["C"]),
                Variable::new("B", &["a", "b"], &["A", "X"]),
                Variable::new("C", &["a", "b"], &["B"]),
            ],
            rows: vec![],
        };
        let report = validate(&c);
        let cycle = report.diagnostics.iter().find(|d| d.rule == Rule::Cycle).unwrap();
        assert_eq!(cycle.message, "cycle A -> B -> C -> A");
    }

    #[test]
    fn empty_candidate_has_no_variables() {
        let report = validate(&NetCandidate::default());
        assert_eq!(report.diagnostics[0].message, "no variables");
    }

    #[test]
    fn structural_errors() {
        let c = NetCandidate {
            variables: vec![
                Variable::new("A", &["a", "a"], &["A"]),
                Variable::new("B", &["b"], &["Z", "A", "A"]),
                Variable::new("A", &["q", "r"], &[]),
            ],
            rows: vec![],
        };
        let report = validate(&c);
        for rule in [
            Rule::DuplicateValue,
            Rule::SelfParent,
            Rule::SmallDomain,
            Rule::UnknownParent,
            Rule::DuplicateParent,
            Rule::DuplicateVariable,
        ] {
            assert!(report.has(rule), "{rule:?} missing from {report}");
        }
    }

    #[test]
    fn indifference_is_rejected() {
        let mut c = pair();
        c.rows[0] = RowSpec::new("A", &[], &["a"]);
        let report = validate(&c);
        assert!(report.has(Rule::PartialRanking));
        c.rows[0] = RowSpec::new("A", &[], &["a", "a"]);
        assert!(validate(&c).has(Rule::PartialRanking));
    }

    #[test]
    fn row_problems() {
        let mut c = pair();
        c.rows.push(RowSpec::new("B", &[("A", "a")], &["bbar", "b"]));
        c.rows.push(RowSpec::new("Q", &[], &["x"]));
        c.rows.push(RowSpec::new("A", &[("B", "b")], &["a", "abar"]));
        c.rows.push(RowSpec::new("B", &[("A", "zz")], &["b", "bbar"]));
        c.rows.push(RowSpec::new("B", &[], &["b", "bbar"]));
        let report = validate(&c);
        for rule in [
            Rule::DuplicateRow,
            Rule::UnknownOwner,
            Rule::MalformedCondition,
            Rule::UnknownValue,
        ] {
            assert!(report.has(rule), "{rule:?} missing from {report}");
        }
    }
}
