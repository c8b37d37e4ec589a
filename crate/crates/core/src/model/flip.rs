use super::{CpNet, Direction, Outcome, ValueId, VarId};

/// A single sanctioned change of one variable's value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Flip {
    pub var: VarId,
    pub from: ValueId,
    pub to: ValueId,
    pub direction: Direction,
}

impl Flip {
    /// The same change undone: `to -> from` in the opposite direction.
    pub fn reversed(&self) -> Flip {
        Flip {
            var: self.var,
            from: self.to,
            to: self.from,
            direction: self.direction.reverse(),
        }
    }
}

/// A start outcome and the flips applied to it in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipSequence {
    pub start: Outcome,
    pub flips: Vec<Flip>,
}

impl FlipSequence {
    pub fn new(start: Outcome) -> Self {
        FlipSequence {
            start,
            flips: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    /// Every outcome along the sequence, start included.
    pub fn outcomes(&self) -> Vec<Outcome> {
        let mut current = self.start.clone();
        let mut out = Vec::with_capacity(self.flips.len() + 1);
        out.push(current.clone());
        for flip in &self.flips {
            current.set(flip.var, flip.to);
            out.push(current.clone());
        }
        out
    }

    pub fn end(&self) -> Outcome {
        let mut current = self.start.clone();
        for flip in &self.flips {
            current.set(flip.var, flip.to);
        }
        current
    }

    /// The same path walked backwards: a worsening sequence from `x` to `y`
    /// becomes an improving sequence from `y` to `x`, and vice versa.
    pub fn reversed(&self) -> FlipSequence {
        FlipSequence {
            start: self.end(),
            flips: self.flips.iter().rev().map(Flip::reversed).collect(),
        }
    }

    /// This sequence expressed as improving flips.
    pub fn into_improving(self) -> FlipSequence {
        match self.flips.first() {
            Some(f) if f.direction == Direction::Worsening => self.reversed(),
            _ => self,
        }
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(mut self, other: &FlipSequence) -> Option<FlipSequence> {
        if self.end() != other.start {
            return None;
        }
        self.flips.extend_from_slice(&other.flips);
        Some(self)
    }

    /// One line per flip: `VAR: from -> to  [rule: <condition>]`.
    pub fn render(&self, net: &CpNet) -> String {
        let mut current = self.start.clone();
        let mut out = String::new();
        for flip in &self.flips {
            out.push_str(&net.format_flip(&current, flip));
            out.push('\n');
            current.set(flip.var, flip.to);
        }
        out
    }
}
