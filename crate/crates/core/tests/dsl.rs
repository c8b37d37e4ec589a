mod common;

use common::*;
use cpnet::model::validate;
use cpnet::{load_cpnet, parse_catalog, parse_cpnet, parse_outcome, parse_query, serialize_catalog, serialize_cpnet, CatalogRow, CpNet, LoadError};
use proptest::prelude::*;

const PAIR: &str = "var A: a, abar\nvar B: b, bbar\nparents B: A\ncpt A: a > abar\ncpt B | A=a: b > bbar\ncpt B | A=abar: bbar > b";

#[test]
fn canonical_text_is_a_fixpoint() {
    let net = load_cpnet(PAIR).unwrap();
    assert_eq!(serialize_cpnet(&net), format!("{PAIR}\n"));
}

#[test]
fn fixtures_round_trip() {
    for name in FIXTURES {
        let net = fixture(name);
        let text = serialize_cpnet(&net);
        let back = load_cpnet(&text).unwrap();
        assert_eq!(back, net, "{name}");
        assert_eq!(serialize_cpnet(&back), text, "{name}");
    }
}

#[test]
fn missing_row_is_positioned_and_named() {
    let text = "var A: a, abar\nvar B: b, bbar\nparents B: A\ncpt A: a > abar\ncpt B | A=a: b > bbar";
    let err = load_cpnet(text).unwrap_err();
    let LoadError::Invalid { report, diagnostics } = &err else {
        panic!("expected a validation failure, got {err:?}");
    };
    assert_eq!(report.diagnostics[0].message, "missing CPT row for B under A=abar");
    assert_eq!((diagnostics[0].line, diagnostics[0].column), (2, 5));
}

#[test]
fn cycle_points_at_a_parents_statement() {
    let text = "var A: a, abar\nvar B: b, bbar\nparents A: B\nparents B: A\n\
        cpt A | B=b: a > abar\ncpt A | B=bbar: a > abar\ncpt B | A=a: b > bbar\ncpt B | A=abar: b > bbar";
    let err = load_cpnet(text).unwrap_err();
    let d = &err.diagnostics()[0];
    assert!(d.message.starts_with("cycle A -> B -> A"), "{}", d.message);
    assert_eq!(d.line, 3);
}

#[test]
fn partial_ranking_points_at_its_row() {
    let err = load_cpnet("var A: a, b, c\ncpt A: a > b").unwrap_err();
    let d = err
        .diagnostics()
        .iter()
        .find(|d| d.message.contains("not a strict total order"))
        .unwrap();
    assert_eq!((d.line, d.column), (2, 5));
}

#[test]
fn empty_text_has_no_variables() {
    let err = load_cpnet("# nothing here\n").unwrap_err();
    assert_eq!(err.diagnostics()[0].message, "no variables");
}

#[test]
fn outcome_strings() {
    let net = load_cpnet(PAIR).unwrap();
    assert_eq!(net.format_outcome(&parse_outcome(&net, "A=a,B=bbar").unwrap()), "A=a,B=bbar");
    assert_eq!(parse_outcome(&net, "A=a").unwrap_err().message, "missing binding for B");
    let chain = fixture("binary_chain");
    let (x, y) = parse_query(&chain, "A=a,B=bbar,C=c > A=abar,B=bbar,C=cbar").unwrap();
    assert_eq!(chain.format_outcome(&x), "A=a,B=bbar,C=c");
    assert_eq!(chain.format_outcome(&y), "A=abar,B=bbar,C=cbar");
}

#[test]
fn catalog_header_must_cover_every_variable() {
    let net = load_cpnet(PAIR).unwrap();
    let diags = parse_catalog(&net, "id,A\nx,a\n").unwrap_err();
    assert_eq!(diags[0].message, "header missing variable B");
    assert_eq!(diags[0].line, 1);
}

fn any_net() -> impl Strategy<Value = CpNet> {
    (any::<u64>(), 1usize..=6, 2usize..=4).prop_map(|(seed, vars, dom)| {
        random_net(&mut rng(seed), vars, 2..=dom, Shape::Dag { max_parents: 3 })
    })
}

proptest! {
    #[test]
    fn serialized_nets_parse_back(net in any_net()) {
        let text = serialize_cpnet(&net);
        let candidate = parse_cpnet(&text).unwrap();
        prop_assert!(validate(&candidate).is_ok());
        prop_assert_eq!(CpNet::new(&candidate).unwrap(), net.clone());
        prop_assert_eq!(serialize_cpnet(&load_cpnet(&text).unwrap()), text);
    }

    #[test]
    fn catalogs_round_trip(net in any_net(), picks in proptest::collection::vec(any::<usize>(), 0..12)) {
        let count = net.outcome_count().unwrap();
        let rows: Vec<CatalogRow> = picks
            .iter()
            .enumerate()
            .map(|(i, p)| CatalogRow { id: format!("row {i}"), outcome: net.outcome_at(p % count) })
            .collect();
        let text = serialize_catalog(&net, &rows);
        prop_assert_eq!(parse_catalog(&net, &text).unwrap(), rows);
    }

    #[test]
    fn outcome_text_round_trips(net in any_net(), pick in any::<usize>()) {
        let z = net.outcome_at(pick % net.outcome_count().unwrap());
        prop_assert_eq!(parse_outcome(&net, &net.format_outcome(&z)).unwrap(), z);
    }

    #[test]
    fn arbitrary_text_never_panics(text in "[a-zA-Z0-9_:,>|=# \n]{0,80}") {
        if let Err(e) = load_cpnet(&text) {
            prop_assert!(!e.diagnostics().is_empty());
        }
    }
}
