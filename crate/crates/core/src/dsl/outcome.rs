use super::lexer::{tokenize, Tok, Token};
use super::SourceDiagnostic;
use crate::model::{CpNet, Outcome, ValueId};

fn at(t: &Token, message: String) -> SourceDiagnostic {
    SourceDiagnostic::error(t.line, t.column, message)
}

/// `A=a, B=bbar` from `tokens`, which must end with a terminator token
/// (`Eof` or `>`); every variable of the net bound exactly once.
fn bindings(net: &CpNet, tokens: &[Token]) -> Result<Outcome, SourceDiagnostic> {
    let mut values: Vec<Option<ValueId>> = vec![None; net.len()];
    let mut i = 0;
    let end = tokens.len() - 1;
    while i < end {
        let var_tok = &tokens[i];
        let Tok::Name(var_name) = &var_tok.tok else {
            return Err(at(var_tok, format!("expected a variable name, found {}", var_tok.tok.describe())));
        };
        let var = net
            .var_id(var_name)
            .ok_or_else(|| at(var_tok, format!("unknown variable {var_name}")))?;
        let eq = &tokens[i + 1];
        if eq.tok != Tok::Eq {
            return Err(at(eq, format!("expected `=`, found {}", eq.tok.describe())));
        }
        let val_tok = &tokens[(i + 2).min(end)];
        let Tok::Name(value_name) = &val_tok.tok else {
            return Err(at(val_tok, format!("expected a value, found {}", val_tok.tok.describe())));
        };
        let value = net
            .value_id(var, value_name)
            .ok_or_else(|| at(val_tok, format!("unknown value {value_name} for variable {var_name}")))?;
        if values[var].replace(value).is_some() {
            return Err(at(var_tok, format!("duplicate binding for {var_name}")));
        }
        i += 3;
        if i < end {
            if tokens[i].tok != Tok::Comma {
                return Err(at(&tokens[i], format!("expected `,`, found {}", tokens[i].tok.describe())));
            }
            i += 1;
            if i == end {
                return Err(at(&tokens[i], "expected a variable name after `,`".to_string()));
            }
        }
    }
    let term = &tokens[end];
    values
        .into_iter()
        .enumerate()
        .map(|(var, v)| v.ok_or_else(|| at(term, format!("missing binding for {}", net.name(var)))))
        .collect::<Result<Vec<_>, _>>()
        .map(Outcome::from_values)
}

fn lex(text: &str) -> Result<Vec<Token>, SourceDiagnostic> {
    let (tokens, mut diags) = tokenize(text);
    if !diags.is_empty() {
        return Err(diags.remove(0));
    }
    Ok(tokens)
}

/// Parses `A=a,B=bbar` against `net`. All variables are required.
pub fn parse_outcome(net: &CpNet, text: &str) -> Result<Outcome, SourceDiagnostic> {
    let tokens = lex(text)?;
    if let Some(gt) = tokens.iter().find(|t| t.tok == Tok::Gt) {
        return Err(at(gt, "unexpected `>` in an outcome".to_string()));
    }
    bindings(net, &tokens)
}

/// Parses `<better> > <worse>` into the pair `(better, worse)`.
pub fn parse_query(net: &CpNet, text: &str) -> Result<(Outcome, Outcome), SourceDiagnostic> {
    let tokens = lex(text)?;
    let Some(split) = tokens.iter().position(|t| t.tok == Tok::Gt) else {
        let last = tokens.last().unwrap();
        return Err(at(last, "expected `>` between two outcomes".to_string()));
    };
    if let Some(extra) = tokens[split + 1..].iter().find(|t| t.tok == Tok::Gt) {
        return Err(at(extra, "a query compares exactly two outcomes".to_string()));
    }
    let better = bindings(net, &tokens[..=split])?;
    let worse = bindings(net, &tokens[split + 1..])?;
    Ok((better, worse))
}
