use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use super::lexer::{tokenize, Tok, Token};
use super::SourceDiagnostic;
use crate::model::{CpNet, NetCandidate, RowSpec, Variable};

const KEYWORDS: [&str; 3] = ["var", "parents", "cpt"];

#[derive(Debug, Clone)]
struct Ident {
    text: String,
    line: usize,
    column: usize,
}

#[derive(Debug)]
enum Stmt {
    Var {
        name: Ident,
        values: Vec<Ident>,
    },
    Parents {
        name: Ident,
        parents: Vec<Ident>,
    },
    Cpt {
        name: Ident,
        condition: Vec<(Ident, Ident)>,
        ranking: Vec<Ident>,
    },
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<SourceDiagnostic>,
}

type Step<T> = Result<T, ()>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn at_keyword(&self) -> bool {
        matches!(&self.peek().tok, Tok::Name(n) if KEYWORDS.contains(&n.as_str()))
    }

    fn at_plain_name(&self) -> bool {
        matches!(&self.peek().tok, Tok::Name(_)) && !self.at_keyword()
    }

    fn fail<T>(&mut self, what: &str) -> Step<T> {
        let t = self.peek().clone();
        self.diags.push(SourceDiagnostic::error(
            t.line,
            t.column,
            format!("expected {what}, found {}", t.tok.describe()),
        ));
        Err(())
    }

    fn expect(&mut self, tok: Tok) -> Step<()> {
        if self.peek().tok == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.describe())
        }
    }

    fn name(&mut self, what: &str) -> Step<Ident> {
        if self.at_plain_name() {
            let t = self.bump();
            let Tok::Name(text) = t.tok else { unreachable!() };
            Ok(Ident {
                text,
                line: t.line,
                column: t.column,
            })
        } else {
            self.fail(what)
        }
    }

    /// NAME {sep NAME}
    fn list(&mut self, sep: Tok, what: &str) -> Step<Vec<Ident>> {
        let mut out = vec![self.name(what)?];
        while self.peek().tok == sep {
            self.bump();
            out.push(self.name(what)?);
        }
        Ok(out)
    }

    fn statement(&mut self) -> Step<Stmt> {
        let kw = self.bump();
        let Tok::Name(kw) = kw.tok else { unreachable!() };
        match kw.as_str() {
            "var" => {
                let name = self.name("a variable name")?;
                self.expect(Tok::Colon)?;
                let values = self.list(Tok::Comma, "a value name")?;
                Ok(Stmt::Var { name, values })
            }
            "parents" => {
                let name = self.name("a variable name")?;
                self.expect(Tok::Colon)?;
                let parents = if self.at_plain_name() {
                    self.list(Tok::Comma, "a parent name")?
                } else {
                    Vec::new()
                };
                Ok(Stmt::Parents { name, parents })
            }
            "cpt" => {
                let name = self.name("a variable name")?;
                let mut condition = Vec::new();
                if self.peek().tok == Tok::Pipe {
                    self.bump();
                    loop {
                        let var = self.name("a parent name in the condition")?;
                        self.expect(Tok::Eq)?;
                        let value = self.name("a parent value in the condition")?;
                        condition.push((var, value));
                        if self.peek().tok != Tok::Comma {
                            break;
                        }
                        self.bump();
                    }
                }
                self.expect(Tok::Colon)?;
                let ranking = self.list(Tok::Gt, "a value name")?;
                Ok(Stmt::Cpt {
                    name,
                    condition,
                    ranking,
                })
            }
            _ => unreachable!(),
        }
    }

    fn statements(&mut self) -> Vec<Stmt> {
        let mut out = Vec::new();
        while self.peek().tok != Tok::Eof {
            if !self.at_keyword() {
                let _ = self.fail::<()>("`var`, `parents` or `cpt`");
                self.bump();
                self.recover();
                continue;
            }
            match self.statement() {
                Ok(stmt) => out.push(stmt),
                Err(()) => self.recover(),
            }
        }
        out
    }

    fn recover(&mut self) {
        while self.peek().tok != Tok::Eof && !self.at_keyword() {
            self.bump();
        }
    }
}

fn err(diags: &mut Vec<SourceDiagnostic>, at: &Ident, message: String) {
    diags.push(SourceDiagnostic::error(at.line, at.column, message));
}

/// Parses the `.cpnet` text format into an unvalidated candidate.
///
/// Name resolution happens after the whole text is read, so statements may
/// appear in any order. Structural problems that need the full net (cycles,
/// missing rows, non-total rankings) are left to [`crate::model::validate`].
pub fn parse_cpnet(text: &str) -> Result<NetCandidate, Vec<SourceDiagnostic>> {
    parse_located(text).map(|(candidate, _)| candidate)
}

/// Where each part of a parsed candidate came from, as (line, column).
#[derive(Debug, Clone, Default)]
pub(crate) struct Locations {
    pub vars: Vec<(usize, usize)>,
    pub parents: Vec<Option<(usize, usize)>>,
    pub rows: Vec<(usize, usize)>,
}

pub(crate) fn parse_located(text: &str) -> Result<(NetCandidate, Locations), Vec<SourceDiagnostic>> {
    let (tokens, mut diags) = tokenize(text);
    let mut parser = Parser {
        tokens,
        pos: 0,
        diags: Vec::new(),
    };
    let stmts = parser.statements();
    diags.append(&mut parser.diags);

    let mut locations = Locations::default();
    let mut variables: Vec<Variable> = Vec::new();
    let mut var_index: HashMap<String, usize> = HashMap::new();
    for stmt in &stmts {
        if let Stmt::Var { name, values } = stmt {
            if var_index.contains_key(&name.text) {
                err(&mut diags, name, format!("duplicate declaration of variable {}", name.text));
                continue;
            }
            let mut seen = HashSet::new();
            for v in values {
                if !seen.insert(&v.text) {
                    err(
                        &mut diags,
                        v,
                        format!("duplicate value {} in domain of {}", v.text, name.text),
                    );
                }
            }
            var_index.insert(name.text.clone(), variables.len());
            locations.vars.push((name.line, name.column));
            variables.push(Variable {
                name: name.text.clone(),
                domain: values.iter().map(|v| v.text.clone()).collect(),
                parents: Vec::new(),
            });
        }
    }

    let mut has_parents_stmt = vec![false; variables.len()];
    locations.parents = vec![None; variables.len()];
    for stmt in &stmts {
        if let Stmt::Parents { name, parents } = stmt {
            let Some(&id) = var_index.get(&name.text) else {
                err(&mut diags, name, format!("unknown variable {}", name.text));
                continue;
            };
            if std::mem::replace(&mut has_parents_stmt[id], true) {
                err(&mut diags, name, format!("duplicate parents declaration for {}", name.text));
                continue;
            }
            for p in parents {
                if !var_index.contains_key(&p.text) {
                    err(&mut diags, p, format!("unknown variable {}", p.text));
                }
            }
            locations.parents[id] = Some((name.line, name.column));
            variables[id].parents = parents.iter().map(|p| p.text.clone()).collect();
        }
    }

    let mut rows = Vec::new();
    let mut seen_rows: HashSet<(usize, Vec<(String, String)>)> = HashSet::new();
    for stmt in &stmts {
        let Stmt::Cpt {
            name,
            condition,
            ranking,
        } = stmt
        else {
            continue;
        };
        let Some(&owner) = var_index.get(&name.text) else {
            err(&mut diags, name, format!("unknown variable {}", name.text));
            continue;
        };
        let before = diags.len();
        let declared = &variables[owner].parents;
        let mut bound: HashSet<&str> = HashSet::new();
        for (var, value) in condition {
            let Some(&pid) = var_index.get(&var.text) else {
                err(&mut diags, var, format!("unknown variable {}", var.text));
                continue;
            };
            if !declared.contains(&var.text) {
                err(
                    &mut diags,
                    var,
                    format!("malformed condition: {} is not a parent of {}", var.text, name.text),
                );
                continue;
            }
            if !bound.insert(&var.text) {
                err(
                    &mut diags,
                    var,
                    format!("malformed condition: {} bound twice", var.text),
                );
                continue;
            }
            if !variables[pid].domain.contains(&value.text) {
                err(
                    &mut diags,
                    value,
                    format!("unknown value {} for variable {}", value.text, var.text),
                );
            }
        }
        let missing: Vec<&str> = declared
            .iter()
            .filter(|p| !bound.contains(p.as_str()) && var_index.contains_key(p.as_str()))
            .map(String::as_str)
            .collect();
        if !missing.is_empty() {
            err(
                &mut diags,
                name,
                format!(
                    "malformed condition: row for {} must bind {}",
                    name.text,
                    missing.join(", ")
                ),
            );
        }
        for v in ranking {
            if !variables[owner].domain.contains(&v.text) {
                err(
                    &mut diags,
                    v,
                    format!("unknown value {} for variable {}", v.text, name.text),
                );
            }
        }
        if diags.len() != before {
            continue;
        }
        let mut key: Vec<(String, String)> = condition
            .iter()
            .map(|(v, x)| (v.text.clone(), x.text.clone()))
            .collect();
        key.sort();
        if !seen_rows.insert((owner, key)) {
            err(
                &mut diags,
                name,
                format!("duplicate row for {} under the same condition", name.text),
            );
            continue;
        }
        // store the condition in declared-parent order
        let mut cond: Vec<(String, String)> = condition
            .iter()
            .map(|(v, x)| (v.text.clone(), x.text.clone()))
            .collect();
        cond.sort_by_key(|(v, _)| declared.iter().position(|p| p == v));
        locations.rows.push((name.line, name.column));
        rows.push(RowSpec {
            owner: name.text.clone(),
            condition: cond,
            ranking: ranking.iter().map(|v| v.text.clone()).collect(),
        });
    }

    if diags.is_empty() {
        Ok((NetCandidate { variables, rows }, locations))
    } else {
        diags.sort_by_key(|d| (d.line, d.column));
        Err(diags)
    }
}

/// Canonical text for a validated net: variables in declaration order,
/// then parent lists, then every row in mixed-radix parent order.
/// [`parse_cpnet`] reads it back to a structurally equal net.
pub fn serialize_cpnet(net: &CpNet) -> String {
    let mut out = String::new();
    for var in net.variables() {
        let _ = writeln!(out, "var {}: {}", var.name, var.domain.join(", "));
    }
    for var in net.variables() {
        if !var.parents.is_empty() {
            let _ = writeln!(out, "parents {}: {}", var.name, var.parents.join(", "));
        }
    }
    for row in net.to_candidate().rows {
        out.push_str("cpt ");
        out.push_str(&row.owner);
        if !row.condition.is_empty() {
            let cond: Vec<String> = row.condition.iter().map(|(v, x)| format!("{v}={x}")).collect();
            let _ = write!(out, " | {}", cond.join(", "));
        }
        let _ = writeln!(out, ": {}", row.ranking.join(" > "));
    }
    out
}
