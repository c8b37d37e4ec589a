use std::collections::HashSet;

use super::SourceDiagnostic;
use crate::model::{CpNet, Outcome, VarId};

/// One product: an identifier and its feature vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogRow {
    pub id: String,
    pub outcome: Outcome,
}

// Column of cell `index` assuming unquoted cells; quoted cells shift it.
fn cell_column(record: &csv::StringRecord, index: usize) -> usize {
    1 + record.iter().take(index).map(|c| c.chars().count() + 1).sum::<usize>()
}

/// Reads a comma-separated catalog whose header is `id` followed by every
/// variable name of `net` in any order. Quoted cells are allowed.
pub fn parse_catalog(net: &CpNet, text: &str) -> Result<Vec<CatalogRow>, Vec<SourceDiagnostic>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut records = reader.records();
    let mut diags = Vec::new();

    let header = match records.next() {
        None => return Err(vec![SourceDiagnostic::error(1, 1, "missing header record")]),
        Some(Err(e)) => return Err(vec![csv_error(&e)]),
        Some(Ok(h)) => h,
    };
    let hline = header.position().map_or(1, |p| p.line() as usize);
    if header.get(0) != Some("id") {
        diags.push(SourceDiagnostic::error(hline, 1, "header must start with `id`"));
    }
    // columns[i] = variable of header cell i + 1
    let mut columns: Vec<Option<VarId>> = Vec::new();
    let mut seen = vec![false; net.len()];
    for (i, cell) in header.iter().enumerate().skip(1) {
        match net.var_id(cell) {
            Some(var) if !seen[var] => {
                seen[var] = true;
                columns.push(Some(var));
            }
            Some(_) => {
                diags.push(SourceDiagnostic::error(
                    hline,
                    cell_column(&header, i),
                    format!("duplicate column {cell}"),
                ));
                columns.push(None);
            }
            None => {
                diags.push(SourceDiagnostic::error(
                    hline,
                    cell_column(&header, i),
                    format!("unknown variable {cell} in header"),
                ));
                columns.push(None);
            }
        }
    }
    for (var, found) in seen.iter().enumerate() {
        if !found {
            diags.push(SourceDiagnostic::error(
                hline,
                1,
                format!("header missing variable {}", net.name(var)),
            ));
        }
    }
    if !diags.is_empty() {
        return Err(diags);
    }

    let mut rows = Vec::new();
    let mut ids = HashSet::new();
    for record in records {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                diags.push(csv_error(&e));
                continue;
            }
        };
        let line = record.position().map_or(1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != columns.len() + 1 {
            diags.push(SourceDiagnostic::error(
                line,
                1,
                format!("expected {} cells, found {}", columns.len() + 1, record.len()),
            ));
            continue;
        }
        let id = &record[0];
        if id.is_empty() {
            diags.push(SourceDiagnostic::error(line, 1, "empty id"));
            continue;
        }
        if !ids.insert(id.to_string()) {
            diags.push(SourceDiagnostic::error(line, 1, format!("duplicate id {id}")));
            continue;
        }
        let mut values = vec![0; net.len()];
        let mut ok = true;
        for (i, var) in columns.iter().enumerate() {
            let var = var.expect("header checked");
            let cell = &record[i + 1];
            match net.value_id(var, cell) {
                Some(v) => values[var] = v,
                None => {
                    diags.push(SourceDiagnostic::error(
                        line,
                        cell_column(&record, i + 1),
                        format!("unknown value {} for variable {}", cell, net.name(var)),
                    ));
                    ok = false;
                }
            }
        }
        if ok {
            rows.push(CatalogRow {
                id: id.to_string(),
                outcome: Outcome::from_values(values),
            });
        }
    }
    if diags.is_empty() {
        Ok(rows)
    } else {
        Err(diags)
    }
}

fn csv_error(e: &csv::Error) -> SourceDiagnostic {
    let line = e.position().map_or(1, |p| p.line() as usize);
    SourceDiagnostic::error(line, 1, e.to_string())
}

/// Writes `id` plus variables in declaration order, quoting only where needed.
pub fn serialize_catalog(net: &CpNet, rows: &[CatalogRow]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id"];
    header.extend(net.variables().iter().map(|v| v.name.as_str()));
    writer.write_record(&header).expect("write to memory");
    for row in rows {
        let mut record = vec![row.id.as_str()];
        record.extend(
            row.outcome
                .values()
                .iter()
                .enumerate()
                .map(|(var, &x)| net.value_name(var, x)),
        );
        writer.write_record(&record).expect("write to memory");
    }
    String::from_utf8(writer.into_inner().expect("flush to memory")).expect("utf-8 input")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::load_cpnet;

    fn pair() -> CpNet {
        load_cpnet("var A: a, abar\nvar B: b, bbar\nparents B: A\ncpt A: a > abar\ncpt B | A=a: b > bbar\ncpt B | A=abar: bbar > b").unwrap()
    }

    #[test]
    fn two_rows() {
        let net = pair();
        let rows = parse_catalog(&net, "id,A,B\np1,a,b\np2,abar,b\n").unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[1].id, "p2");
        assert_eq!(net.format_outcome(&rows[1].outcome), "A=abar,B=b");
    }

    #[test]
    fn header_in_any_order_and_quotes() {
        let net = pair();
        let rows = parse_catalog(&net, "id,B,A\n\"p 1\",\"bbar\",a\n").unwrap();
        assert_eq!(rows[0].id, "p 1");
        assert_eq!(net.format_outcome(&rows[0].outcome), "A=a,B=bbar");
    }

    #[test]
    fn errors_are_positioned() {
        let net = pair();
        let d = parse_catalog(&net, "id,A\np1,a\n").unwrap_err();
        assert_eq!(d[0].message, "header missing variable B");
        let d = parse_catalog(&net, "id,A,B\np1,a,b\np2,q,b\n").unwrap_err();
        assert_eq!((d[0].line, d[0].column), (3, 4));
        assert_eq!(d[0].message, "unknown value q for variable A");
        let d = parse_catalog(&net, "id,A,B\np1,a,b\np1,a,bbar\n").unwrap_err();
        assert_eq!(d[0].message, "duplicate id p1");
        assert!(parse_catalog(&net, "").is_err());
        assert!(parse_catalog(&net, "id,A,B\np1,a\n").is_err());
    }

    #[test]
    fn round_trip() {
        let net = pair();
        let rows = parse_catalog(&net, "id,B,A\n\"x,1\",bbar,a\ny,b,abar\n").unwrap();
        let text = serialize_catalog(&net, &rows);
        assert_eq!(parse_catalog(&net, &text).unwrap(), rows);
    }
}
