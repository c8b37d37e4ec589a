//! Fixtures and random net generators shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use cpnet::model::{RowSpec, Variable};
use cpnet::{load_cpnet, parse_outcome, CpNet, NetCandidate, Outcome};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIXTURES: [&str; 8] = [
    "binary_pair",
    "independent_three",
    "binary_chain",
    "eight_feature_polytree",
    "eight_feature_polytree_ternary_root",
    "ternary_parent",
    "ternary_middle_chain",
    "binary_tree",
];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.cpnet"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture(name: &str) -> CpNet {
    load_cpnet(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e:?}"))
}

pub fn outcome(net: &CpNet, text: &str) -> Outcome {
    parse_outcome(net, text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn all_outcomes(net: &CpNet) -> Vec<Outcome> {
    let count = net.outcome_count().expect("small net");
    (0..count).map(|i| net.outcome_at(i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Any DAG, at most `max_parents` parents per variable.
    Dag { max_parents: usize },
    /// Each variable but the first has the previous one as its only parent.
    Chain,
    /// Each variable but the first has exactly one earlier parent.
    Tree,
}

/// A random valid net. Variables are generated in a topological order and
/// then declared in a shuffled order, so declaration order and topological
/// order usually differ. Every row is a uniformly random ranking.
pub fn random_net(rng: &mut impl Rng, vars: usize, domain: std::ops::RangeInclusive<usize>, shape: Shape) -> CpNet {
    let sizes: Vec<usize> = (0..vars).map(|_| rng.gen_range(domain.clone())).collect();
    let parents: Vec<Vec<usize>> = (0..vars)
        .map(|i| match shape {
            _ if i == 0 => Vec::new(),
            Shape::Chain => vec![i - 1],
            Shape::Tree => vec![rng.gen_range(0..i)],
            Shape::Dag { max_parents } => {
                let mut ps: Vec<usize> = (0..i).filter(|_| rng.gen_bool(0.5)).collect();
                ps.shuffle(rng);
                ps.truncate(max_parents);
                ps.sort_unstable();
                ps
            }
        })
        .collect();

    let mut declared: Vec<usize> = (0..vars).collect();
    declared.shuffle(rng);
    // name of generated variable g is the letter of its declaration slot
    let mut slot = vec![0; vars];
    for (k, &g) in declared.iter().enumerate() {
        slot[g] = k;
    }
    let var_name = |g: usize| ((b'A' + slot[g] as u8) as char).to_string();
    let value_name = |g: usize, v: usize| format!("{}{}", var_name(g).to_lowercase(), v);

    let mut candidate = NetCandidate::default();
    for &g in &declared {
        candidate.variables.push(Variable {
            name: var_name(g),
            domain: (0..sizes[g]).map(|v| value_name(g, v)).collect(),
            parents: parents[g].iter().map(|&p| var_name(p)).collect(),
        });
    }
    for g in 0..vars {
        let rows: usize = parents[g].iter().map(|&p| sizes[p]).product();
        for r in 0..rows {
            let mut rest = r;
            let mut condition = Vec::new();
            for &p in parents[g].iter().rev() {
                condition.push((var_name(p), value_name(p, rest % sizes[p])));
                rest /= sizes[p];
            }
            condition.reverse();
            let mut ranking: Vec<String> = (0..sizes[g]).map(|v| value_name(g, v)).collect();
            ranking.shuffle(rng);
            candidate.rows.push(RowSpec {
                owner: var_name(g),
                condition,
                ranking,
            });
        }
    }
    CpNet::new(&candidate).expect("generated net is valid")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small nets for exhaustive comparison against the oracle: half with up to
/// five binary variables, half with up to three variables of domain two or
/// three.
pub fn small_instances(count: usize, seed: u64) -> Vec<CpNet> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            if i % 2 == 0 {
                let vars = 1 + (i / 2) % 5;
                random_net(&mut r, vars, 2..=2, Shape::Dag { max_parents: 4 })
            } else {
                let vars = 1 + (i / 2) % 3;
                random_net(&mut r, vars, 2..=3, Shape::Dag { max_parents: 2 })
            }
        })
        .collect()
}
