mod common;

use common::*;
use cpnet::search::FlipGraph;
use cpnet::*;
use proptest::prelude::*;

fn all_rows(net: &CpNet) -> Vec<CatalogRow> {
    all_outcomes(net)
        .into_iter()
        .enumerate()
        .map(|(i, outcome)| CatalogRow { id: format!("r{i}"), outcome })
        .collect()
}

fn opts(memoize: bool, parallel: bool) -> CatalogOptions {
    CatalogOptions { memoize, parallel }
}

#[test]
fn best_outcome_alone_is_nondominated() {
    let net = fixture("binary_pair");
    let rows = parse_catalog(&net, "id,A,B\nab,a,b\nabbar,a,bbar\nabarbbar,abar,bbar\nabarb,abar,b\n").unwrap();
    let report = pareto_front(&net, &rows, &SearchConfig::default(), &CatalogOptions::default()).unwrap();
    assert_eq!(report.nondominated, vec!["ab"]);
    assert_eq!(report.dominated.len(), 3);
    assert!(report.is_complete());
    let sorted = sort_catalog(&net, &rows, &SearchConfig::default(), &CatalogOptions::default()).unwrap();
    assert_eq!(sorted.layers, vec![vec!["ab"], vec!["abbar"], vec!["abarbbar"], vec!["abarb"]]);
}

#[test]
fn duplicate_outcomes_share_a_verdict() {
    let net = fixture("binary_pair");
    let rows = parse_catalog(&net, "id,A,B\nfirst,a,b\nsecond,a,b\nlow,abar,b\n").unwrap();
    let report = pareto_front(&net, &rows, &SearchConfig::default(), &CatalogOptions::default()).unwrap();
    assert_eq!(report.nondominated, vec!["first", "second"]);
    let sorted = sort_catalog(&net, &rows, &SearchConfig::default(), &CatalogOptions::default()).unwrap();
    assert_eq!(sorted.layers[0], vec!["first", "second"]);
}

#[test]
fn incomparable_rows_share_a_layer() {
    let net = fixture("binary_chain");
    let rows = parse_catalog(&net, "id,A,B,C\np,a,bbar,c\nq,abar,bbar,cbar\n").unwrap();
    let report = pareto_front(&net, &rows, &SearchConfig::default(), &CatalogOptions::default()).unwrap();
    assert_eq!(report.nondominated, vec!["p", "q"]);
    let sorted = sort_catalog(&net, &rows, &SearchConfig::default(), &CatalogOptions::default()).unwrap();
    assert_eq!(sorted.layers, vec![vec!["p", "q"]]);
}

#[test]
fn tiny_budget_leaves_pairs_undecided() {
    let net = fixture("eight_feature_polytree");
    let rows = all_rows(&net).into_iter().step_by(17).collect::<Vec<_>>();
    let cfg = SearchConfig::plain(SearchDirection::Improving).with_budget(Some(1));
    let report = pareto_front(&net, &rows, &cfg, &CatalogOptions::default()).unwrap();
    assert!(!report.is_complete());
}

#[test]
fn zero_budget_is_an_error() {
    let net = fixture("binary_pair");
    let rows = all_rows(&net);
    let cfg = SearchConfig::default().with_budget(Some(0));
    assert_eq!(
        pareto_front(&net, &rows, &cfg, &CatalogOptions::default()),
        Err(SearchError::ZeroBudget)
    );
}

fn small_net() -> impl Strategy<Value = CpNet> {
    any::<u64>().prop_map(|seed| {
        let mut r = rng(seed);
        let vars = 1 + (seed % 4) as usize;
        random_net(&mut r, vars, 2..=3, Shape::Dag { max_parents: 2 })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn front_matches_the_oracle(net in small_net()) {
        let graph = FlipGraph::build(&net, 1 << 16).unwrap();
        let rows = all_rows(&net);
        let expected: Vec<String> = (0..rows.len())
            .filter(|&j| !(0..rows.len()).any(|i| i != j && graph.dominates(i, j)))
            .map(|j| rows[j].id.clone())
            .collect();
        for (m, p) in [(true, true), (true, false), (false, true), (false, false)] {
            let report = pareto_front(&net, &rows, &SearchConfig::default(), &opts(m, p)).unwrap();
            prop_assert!(report.is_complete());
            prop_assert_eq!(&report.nondominated, &expected);
            prop_assert_eq!(report.nondominated.len() + report.dominated.len(), rows.len());
            for (loser, winner) in &report.dominated {
                let l = rows.iter().position(|r| &r.id == loser).unwrap();
                let w = rows.iter().position(|r| &r.id == winner).unwrap();
                prop_assert!(graph.dominates(w, l));
            }
        }
    }

    #[test]
    fn sort_respects_dominance(net in small_net()) {
        let graph = FlipGraph::build(&net, 1 << 16).unwrap();
        let rows = all_rows(&net);
        let plain = sort_catalog(&net, &rows, &SearchConfig::default(), &opts(false, false)).unwrap();
        let fast = sort_catalog(&net, &rows, &SearchConfig::default(), &opts(true, true)).unwrap();
        prop_assert_eq!(&plain.layers, &fast.layers);
        prop_assert!(fast.comparisons_run <= plain.comparisons_run);
        let layer_of = |id: &str| plain.layers.iter().position(|l| l.iter().any(|x| x == id)).unwrap();
        prop_assert_eq!(plain.layers.iter().map(Vec::len).sum::<usize>(), rows.len());
        for i in 0..rows.len() {
            for j in 0..rows.len() {
                if i != j && graph.dominates(i, j) {
                    prop_assert!(layer_of(&rows[i].id) < layer_of(&rows[j].id));
                }
            }
        }
    }
}
