use super::Heuristics;
use crate::model::{CpNet, Direction, Flip, Outcome, VarId};

/// A descendant-closed set of variables.
///
/// Every descendant-closed set is the suffix of some topological ordering
/// of the net, so this is the "matching suffix under a reordering" the
/// suffix rules talk about, without enumerating orderings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuffixSet {
    members: Vec<bool>,
}

impl SuffixSet {
    pub fn empty(len: usize) -> Self {
        SuffixSet {
            members: vec![false; len],
        }
    }

    pub fn contains(&self, var: VarId) -> bool {
        self.members[var]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn iter(&self) -> impl Iterator<Item = VarId> + '_ {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(v, _)| v)
    }

    pub fn names<'n>(&self, net: &'n CpNet) -> Vec<&'n str> {
        self.iter().map(|v| net.name(v)).collect()
    }

    pub fn is_descendant_closed(&self, net: &CpNet) -> bool {
        self.iter()
            .all(|v| net.children(v).iter().all(|&c| self.members[c]))
    }

    /// Variables outside the set whose children all lie inside it.
    fn frontier<'a>(&'a self, net: &'a CpNet) -> impl Iterator<Item = VarId> + 'a {
        (0..net.len()).filter(move |&v| {
            !self.members[v] && net.children(v).iter().all(|&c| self.members[c])
        })
    }
}

/// The largest descendant-closed set of variables on which `z` and `target`
/// agree.
///
/// Walks the topological order backwards so every child is decided before
/// its parents; a variable joins when it matches and all its children
/// already joined.
pub fn fixed_suffix(net: &CpNet, z: &Outcome, target: &Outcome) -> SuffixSet {
    let mut set = SuffixSet::empty(net.len());
    for &v in net.topological_order().iter().rev() {
        if z.get(v) == target.get(v) && net.children(v).iter().all(|&c| set.members[c]) {
            set.members[v] = true;
        }
    }
    set
}

/// A flip that grows `suffix` by one variable: the variable lies outside
/// the suffix, all its children inside, and it can move straight to its
/// target value in `direction`. Such a flip never needs to be undone.
///
/// When several qualify the one latest in topological order is returned.
pub fn extend_suffix(
    net: &CpNet,
    z: &Outcome,
    target: &Outcome,
    suffix: &SuffixSet,
    direction: Direction,
) -> Option<Flip> {
    extend_suffix_within(net, z, target, suffix, direction, None)
}

pub(crate) fn extend_suffix_within(
    net: &CpNet,
    z: &Outcome,
    target: &Outcome,
    suffix: &SuffixSet,
    direction: Direction,
    allowed: Option<&[Vec<bool>]>,
) -> Option<Flip> {
    suffix
        .frontier(net)
        .filter(|&v| allowed.is_none_or(|a| a[v][target.get(v)]))
        .map(|v| Flip {
            var: v,
            from: z.get(v),
            to: target.get(v),
            direction,
        })
        .filter(|f| f.from != f.to && net.is_legal(z, f))
        .max_by_key(|f| net.topo_position(f.var))
}

/// Orders candidate flips at `z`.
///
/// Primary key is the variable: latest in topological order first under
/// `rightmost`, declaration order otherwise. Within one variable the least
/// improving (or least worsening) target comes first under
/// `least_improving`, declaration order of values otherwise. The sort is
/// stable.
pub fn order_flips(net: &CpNet, z: &Outcome, mut candidates: Vec<Flip>, heuristics: &Heuristics) -> Vec<Flip> {
    candidates.sort_by_key(|f| {
        let var_key = if heuristics.rightmost {
            usize::MAX - net.topo_position(f.var)
        } else {
            f.var
        };
        let value_key = if heuristics.least_improving {
            let rank = net.row(f.var, z).rank_of(f.to);
            match f.direction {
                Direction::Improving => usize::MAX - rank,
                Direction::Worsening => rank,
            }
        } else {
            f.to
        };
        (var_key, value_key)
    });
    candidates
}
