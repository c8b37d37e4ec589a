//! Catalog-level reasoning: the nondominated rows of a catalog and a
//! layered sort of the whole catalog by dominance.
//!
//! Rows with identical outcomes form one group and always share a verdict;
//! only group representatives (first id in catalog order) are compared.

use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use crate::dsl::CatalogRow;
use crate::model::{CpNet, Outcome};
use crate::search::{dominates, SearchConfig, SearchError, VerdictKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogOptions {
    /// Cache verdicts and answer pairs implied by transitivity or
    /// asymmetry of already established dominance without searching.
    pub memoize: bool,
    /// Run independent comparisons on the rayon pool. Verdicts do not
    /// depend on this; comparison counts may.
    pub parallel: bool,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions {
            memoize: true,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ParetoReport {
    pub nondominated: Vec<String>,
    /// `(loser, winner)`: the winner's outcome dominates the loser's.
    pub dominated: Vec<(String, String)>,
    /// Pairs whose comparison ran out of budget in at least one direction.
    pub undecided: Vec<(String, String)>,
    /// Dominance searches actually run.
    pub comparisons_run: u64,
}

impl ParetoReport {
    pub fn is_complete(&self) -> bool {
        self.undecided.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SortReport {
    /// Layer 0 holds rows nothing dominates; a row in layer k is dominated
    /// only by rows of earlier layers, at least one of them in layer k-1.
    pub layers: Vec<Vec<String>>,
    pub undecided: Vec<(String, String)>,
    pub comparisons_run: u64,
}

struct Groups {
    outcomes: Vec<Outcome>,
    members: Vec<Vec<usize>>,
}

fn group(rows: &[CatalogRow]) -> Groups {
    let mut index: HashMap<&Outcome, usize> = HashMap::new();
    let mut groups = Groups {
        outcomes: Vec::new(),
        members: Vec::new(),
    };
    for (i, row) in rows.iter().enumerate() {
        let next = groups.outcomes.len();
        let g = *index.entry(&row.outcome).or_insert(next);
        if g == next {
            groups.outcomes.push(row.outcome.clone());
            groups.members.push(Vec::new());
        }
        groups.members[g].push(i);
    }
    groups
}

/// Answers "does group a dominate group b", counting real searches.
struct Comparator<'a> {
    net: &'a CpNet,
    cfg: &'a SearchConfig,
    outcomes: &'a [Outcome],
    memoize: bool,
    memo: HashMap<(usize, usize), VerdictKind>,
    // established dominance edges, winner -> losers
    above: Vec<Vec<usize>>,
    searches: AtomicU64,
}

impl<'a> Comparator<'a> {
    fn new(net: &'a CpNet, cfg: &'a SearchConfig, outcomes: &'a [Outcome], memoize: bool) -> Self {
        Comparator {
            net,
            cfg,
            outcomes,
            memoize,
            memo: HashMap::new(),
            above: vec![Vec::new(); outcomes.len()],
            searches: AtomicU64::new(0),
        }
    }

    fn search(&self, a: usize, b: usize) -> Result<VerdictKind, SearchError> {
        self.searches.fetch_add(1, Ordering::Relaxed);
        let cfg = SearchConfig {
            want_witness: false,
            ..*self.cfg
        };
        Ok(dominates(self.net, &self.outcomes[a], &self.outcomes[b], &cfg)?.kind)
    }

    fn implied(&self, a: usize, b: usize) -> bool {
        let mut seen = vec![false; self.above.len()];
        let mut queue = VecDeque::from([a]);
        seen[a] = true;
        while let Some(z) = queue.pop_front() {
            for &w in &self.above[z] {
                if w == b {
                    return true;
                }
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        false
    }

    fn compare(&mut self, a: usize, b: usize) -> Result<VerdictKind, SearchError> {
        if !self.memoize {
            return self.search(a, b);
        }
        if let Some(&v) = self.memo.get(&(a, b)) {
            return Ok(v);
        }
        let v = if self.implied(a, b) {
            VerdictKind::Dominates
        } else if self.implied(b, a) {
            VerdictKind::NotDominated
        } else {
            self.search(a, b)?
        };
        self.record(a, b, v);
        Ok(v)
    }

    fn record(&mut self, a: usize, b: usize, v: VerdictKind) {
        if self.memoize {
            self.memo.insert((a, b), v);
        }
        if v == VerdictKind::Dominates {
            self.above[a].push(b);
        }
    }

    fn searches(&self) -> u64 {
        self.searches.load(Ordering::Relaxed)
    }
}

#[derive(Clone, Copy)]
struct PairVerdict {
    forward: VerdictKind,
    backward: Option<VerdictKind>,
}

/// Finds the nondominated rows, comparing each new group against the
/// current nondominated candidates only.
pub fn pareto_front(
    net: &CpNet,
    rows: &[CatalogRow],
    cfg: &SearchConfig,
    opts: &CatalogOptions,
) -> Result<ParetoReport, SearchError> {
    let groups = group(rows);
    let mut cmp = Comparator::new(net, cfg, &groups.outcomes, opts.memoize);
    // winner per dominated group
    let mut beaten: Vec<Option<usize>> = vec![None; groups.outcomes.len()];
    let mut undecided: Vec<(usize, usize)> = Vec::new();
    let mut candidates: Vec<usize> = Vec::new();

    for g in 0..groups.outcomes.len() {
        let verdicts: Vec<(usize, PairVerdict)> = if opts.parallel && candidates.len() > 1 {
            let c = &cmp;
            let results: Result<Vec<_>, SearchError> = candidates
                .par_iter()
                .map(|&k| {
                    let forward = c.search(k, g)?;
                    let backward = if forward == VerdictKind::Dominates {
                        None
                    } else {
                        Some(c.search(g, k)?)
                    };
                    Ok((k, PairVerdict { forward, backward }))
                })
                .collect();
            let results = results?;
            for &(k, v) in &results {
                cmp.record(k, g, v.forward);
                if let Some(b) = v.backward {
                    cmp.record(g, k, b);
                }
            }
            results
        } else {
            let mut out = Vec::new();
            for &k in &candidates {
                let forward = cmp.compare(k, g)?;
                if forward == VerdictKind::Dominates {
                    out.push((k, PairVerdict { forward, backward: None }));
                    break;
                }
                let backward = Some(cmp.compare(g, k)?);
                out.push((k, PairVerdict { forward, backward }));
            }
            out
        };

        for (k, v) in verdicts {
            if v.forward == VerdictKind::Dominates {
                if beaten[g].is_none() {
                    beaten[g] = Some(k);
                }
                continue;
            }
            match v.backward {
                Some(VerdictKind::Dominates) => beaten[k] = Some(g),
                Some(VerdictKind::BudgetExhausted) => undecided.push((k, g)),
                _ if v.forward == VerdictKind::BudgetExhausted => undecided.push((k, g)),
                _ => {}
            }
        }
        candidates.retain(|&k| beaten[k].is_none());
        if beaten[g].is_none() {
            candidates.push(g);
        }
    }

    let rep = |g: usize| rows[groups.members[g][0]].id.clone();
    let mut report = ParetoReport {
        comparisons_run: cmp.searches(),
        ..ParetoReport::default()
    };
    let mut order: Vec<(usize, usize)> = groups
        .members
        .iter()
        .enumerate()
        .flat_map(|(g, m)| m.iter().map(move |&i| (i, g)))
        .collect();
    order.sort_unstable();
    for (i, g) in order {
        match beaten[g] {
            None => report.nondominated.push(rows[i].id.clone()),
            Some(w) => report.dominated.push((rows[i].id.clone(), rep(w))),
        }
    }
    report.undecided = undecided.into_iter().map(|(a, b)| (rep(a), rep(b))).collect();
    Ok(report)
}

/// Layers the catalog by longest dominance chain from the top. Every
/// pair of groups is compared.
pub fn sort_catalog(
    net: &CpNet,
    rows: &[CatalogRow],
    cfg: &SearchConfig,
    opts: &CatalogOptions,
) -> Result<SortReport, SearchError> {
    let groups = group(rows);
    let n = groups.outcomes.len();
    let mut cmp = Comparator::new(net, cfg, &groups.outcomes, opts.memoize);
    // neighbours first, so chains are established before long-range pairs
    // can be answered by transitivity
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    pairs.sort_by_key(|&(a, b)| (b - a, a));

    let verdicts: Vec<((usize, usize), PairVerdict)> = if opts.parallel {
        let c = &cmp;
        let results: Result<Vec<_>, SearchError> = pairs
            .par_iter()
            .map(|&(a, b)| {
                let forward = c.search(a, b)?;
                let backward = if forward == VerdictKind::Dominates {
                    None
                } else {
                    Some(c.search(b, a)?)
                };
                Ok(((a, b), PairVerdict { forward, backward }))
            })
            .collect();
        results?
    } else {
        let mut out = Vec::with_capacity(pairs.len());
        for &(a, b) in &pairs {
            let forward = cmp.compare(a, b)?;
            let backward = if forward == VerdictKind::Dominates {
                None
            } else {
                Some(cmp.compare(b, a)?)
            };
            out.push(((a, b), PairVerdict { forward, backward }));
        }
        out
    };

    // dominators[g]: groups dominating g
    let mut dominators: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut undecided = Vec::new();
    for ((a, b), v) in verdicts {
        if v.forward == VerdictKind::Dominates {
            dominators[b].push(a);
        } else if v.backward == Some(VerdictKind::Dominates) {
            dominators[a].push(b);
        } else if v.forward == VerdictKind::BudgetExhausted || v.backward == Some(VerdictKind::BudgetExhausted) {
            undecided.push((a, b));
        }
    }

    // dominance is acyclic, so repeated relaxation in topological order of
    // the relation terminates; process groups by number of dominators
    let mut layer: Vec<Option<usize>> = vec![None; n];
    let mut remaining: Vec<usize> = (0..n).collect();
    while !remaining.is_empty() {
        let before = remaining.len();
        remaining.retain(|&g| {
            let mut deepest = 0;
            for &d in &dominators[g] {
                match layer[d] {
                    Some(l) => deepest = deepest.max(l + 1),
                    None => return true,
                }
            }
            layer[g] = Some(deepest);
            false
        });
        assert!(remaining.len() < before, "dominance relation contains a cycle");
    }

    let depth = layer.iter().flatten().map(|l| l + 1).max().unwrap_or(0);
    let mut layers: Vec<Vec<String>> = vec![Vec::new(); depth];
    for (g, l) in layer.iter().enumerate() {
        let l = l.expect("every group layered");
        layers[l].extend(groups.members[g].iter().map(|&i| rows[i].id.clone()));
    }
    for l in &mut layers {
        l.sort();
    }
    let rep = |g: usize| rows[groups.members[g][0]].id.clone();
    Ok(SortReport {
        layers,
        undecided: undecided.into_iter().map(|(a, b)| (rep(a), rep(b))).collect(),
        comparisons_run: cmp.searches(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{load_cpnet, parse_catalog};

    const PAIR: &str = "var A: a, abar\nvar B: b, bbar\nparents B: A\n\
        cpt A: a > abar\ncpt B | A=a: b > bbar\ncpt B | A=abar: bbar > b";

    fn catalog(net: &CpNet, text: &str) -> Vec<CatalogRow> {
        parse_catalog(net, text).unwrap()
    }

    #[test]
    fn single_row_needs_no_comparison() {
        let net = load_cpnet(PAIR).unwrap();
        let rows = catalog(&net, "id,A,B\nonly,a,b\n");
        let r = pareto_front(&net, &rows, &SearchConfig::default(), &CatalogOptions::default()).unwrap();
        assert_eq!(r.nondominated, vec!["only"]);
        assert_eq!(r.comparisons_run, 0);
    }

    #[test]
    fn duplicates_share_a_verdict() {
        let net = load_cpnet(PAIR).unwrap();
        let rows = catalog(&net, "id,A,B\np,a,b\nq,a,b\nr,abar,b\n");
        let r = pareto_front(&net, &rows, &SearchConfig::default(), &CatalogOptions::default()).unwrap();
        assert_eq!(r.nondominated, vec!["p", "q"]);
        assert_eq!(r.dominated, vec![("r".to_string(), "p".to_string())]);
        let s = sort_catalog(&net, &rows, &SearchConfig::default(), &CatalogOptions::default()).unwrap();
        assert_eq!(s.layers, vec![vec!["p", "q"], vec!["r"]]);
    }

    #[test]
    fn empty_catalog_sorts_to_nothing() {
        let net = load_cpnet(PAIR).unwrap();
        let s = sort_catalog(&net, &[], &SearchConfig::default(), &CatalogOptions::default()).unwrap();
        assert!(s.layers.is_empty());
    }

    #[test]
    fn transitivity_saves_searches() {
        let net = load_cpnet(PAIR).unwrap();
        let rows = catalog(&net, "id,A,B\nw,abar,b\nx,abar,bbar\ny,a,bbar\nz,a,b\n");
        let seq = CatalogOptions { memoize: true, parallel: false };
        let plain = CatalogOptions { memoize: false, parallel: false };
        let cfg = SearchConfig::default();
        let with = sort_catalog(&net, &rows, &cfg, &seq).unwrap();
        let without = sort_catalog(&net, &rows, &cfg, &plain).unwrap();
        assert_eq!(with.layers, without.layers);
        assert!(with.comparisons_run < without.comparisons_run);
    }
}
