mod common;

use common::*;
use cpnet::model::Flip;
use cpnet::{Direction, Outcome};
use proptest::prelude::*;

fn flips_as_text(net: &cpnet::CpNet, z: &Outcome, direction: Direction) -> Vec<String> {
    net.legal_flips(z, direction)
        .iter()
        .map(|f| format!("{}:{}->{}", net.name(f.var), net.value_name(f.var, f.from), net.value_name(f.var, f.to)))
        .collect()
}

#[test]
fn chain_bottom_has_a_single_improving_flip() {
    let net = fixture("binary_chain");
    let z = outcome(&net, "A=abar,B=bbar,C=cbar");
    assert_eq!(flips_as_text(&net, &z, Direction::Improving), ["A:abar->a"]);
}

#[test]
fn chain_branches_three_ways() {
    let net = fixture("binary_chain");
    let z = outcome(&net, "A=abar,B=b,C=cbar");
    assert_eq!(
        flips_as_text(&net, &z, Direction::Improving),
        ["A:abar->a", "B:b->bbar", "C:cbar->c"]
    );
}

#[test]
fn ternary_value_may_jump() {
    let net = fixture("ternary_parent");
    let z = outcome(&net, "A=a3,B=b");
    assert_eq!(flips_as_text(&net, &z, Direction::Improving), ["A:a3->a1", "A:a3->a2"]);
}

#[test]
fn topological_orders() {
    assert_eq!(fixture("binary_chain").topological_names(), ["A", "B", "C"]);
    assert_eq!(fixture("independent_three").topological_names(), ["A", "B", "C"]);
    assert_eq!(
        fixture("eight_feature_polytree").topological_names(),
        ["A", "B", "C", "D", "E", "F", "G", "H"]
    );
}

#[test]
fn best_and_worst() {
    let pair = fixture("binary_pair");
    assert_eq!(pair.format_outcome(&pair.best_outcome()), "A=a,B=b");
    assert_eq!(pair.format_outcome(&pair.worst_outcome()), "A=abar,B=b");
    let independent = fixture("independent_three");
    assert_eq!(independent.format_outcome(&independent.best_outcome()), "A=a,B=b,C=c");
    assert_eq!(independent.format_outcome(&independent.worst_outcome()), "A=abar,B=bbar,C=cbar");
}

#[test]
fn tree_detection() {
    assert!(fixture("binary_chain").is_binary_tree());
    assert!(fixture("binary_tree").is_binary_tree());
    assert!(!fixture("eight_feature_polytree").is_binary_tree());
    assert!(!fixture("ternary_parent").is_binary_tree());
}

#[test]
fn illegal_flip_is_an_error() {
    let net = fixture("binary_pair");
    let z = outcome(&net, "A=a,B=b");
    let flip = Flip {
        var: 0,
        from: 0,
        to: 1,
        direction: Direction::Improving,
    };
    assert!(net.apply_flip(&z, &flip).is_err());
    let worse = Flip {
        direction: Direction::Worsening,
        ..flip
    };
    assert_eq!(net.apply_flip(&z, &worse).unwrap(), outcome(&net, "A=abar,B=b"));
}

#[test]
fn outcome_index_round_trips() {
    let net = fixture("ternary_middle_chain");
    for (i, z) in all_outcomes(&net).iter().enumerate() {
        assert_eq!(net.outcome_index(z), i);
    }
}

fn any_net() -> impl Strategy<Value = cpnet::CpNet> {
    (any::<u64>(), 1usize..=5, 2usize..=3).prop_map(|(seed, vars, dom)| {
        random_net(&mut rng(seed), vars, 2..=dom, Shape::Dag { max_parents: 3 })
    })
}

proptest! {
    #[test]
    fn improving_and_worsening_flips_mirror(net in any_net()) {
        for z in all_outcomes(&net) {
            for f in net.legal_flips(&z, Direction::Improving) {
                let after = net.apply_flip(&z, &f).unwrap();
                // the row is unchanged by flipping its own variable
                prop_assert!(net.row(f.var, &z).prefers(f.to, f.from));
                prop_assert!(net.is_legal(&after, &f.reversed()));
                prop_assert!(net.legal_flips(&after, Direction::Worsening).contains(&f.reversed()));
            }
        }
    }

    #[test]
    fn best_has_no_improving_flip(net in any_net()) {
        prop_assert!(net.legal_flips(&net.best_outcome(), Direction::Improving).is_empty());
        prop_assert!(net.legal_flips(&net.worst_outcome(), Direction::Worsening).is_empty());
        let others = all_outcomes(&net).into_iter().filter(|z| *z != net.best_outcome());
        for z in others {
            prop_assert!(!net.legal_flips(&z, Direction::Improving).is_empty());
        }
    }

    #[test]
    fn topological_order_respects_parents(net in any_net()) {
        for v in 0..net.len() {
            for &p in net.parents(v) {
                prop_assert!(net.topo_position(p) < net.topo_position(v));
            }
        }
    }
}
