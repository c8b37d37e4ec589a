use super::{ValueId, VarId};

/// A complete assignment: one value index per variable, in declaration order.
///
/// An outcome carries no reference to its net; [`super::CpNet::check_outcome`]
/// validates one against a particular net.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcome(Vec<ValueId>);

impl Outcome {
    pub fn from_values(values: Vec<ValueId>) -> Self {
        Outcome(values)
    }

    pub fn values(&self) -> &[ValueId] {
        &self.0
    }

    pub fn get(&self, var: VarId) -> ValueId {
        self.0[var]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy of `self` with `var` set to `value`.
    pub fn with(&self, var: VarId, value: ValueId) -> Outcome {
        let mut values = self.0.clone();
        values[var] = value;
        Outcome(values)
    }

    pub(crate) fn set(&mut self, var: VarId, value: ValueId) {
        self.0[var] = value;
    }
}
