use crate::model::{CpNet, Direction, FlipSequence, Outcome};

/// Checks that `seq` proves `x > y`.
///
/// An improving proof starts at `y` and ends at `x`; a worsening proof
/// starts at `x` and ends at `y`. Every flip must be legal, in one
/// direction, at the outcome it is applied to. The empty sequence proves
/// nothing, strict dominance needs at least one flip.
pub fn verify_witness(net: &CpNet, x: &Outcome, y: &Outcome, seq: &FlipSequence) -> bool {
    let Some(first) = seq.flips.first() else {
        return false;
    };
    let direction = first.direction;
    let (start, end) = match direction {
        Direction::Improving => (y, x),
        Direction::Worsening => (x, y),
    };
    if &seq.start != start || net.check_outcome(start).is_err() {
        return false;
    }
    let mut current = seq.start.clone();
    for flip in &seq.flips {
        if flip.direction != direction || !net.is_legal(&current, flip) {
            return false;
        }
        current = current.with(flip.var, flip.to);
    }
    &current == end
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::load_cpnet;
    use crate::model::Flip;

    const CHAIN: &str = "var A: a, abar\nvar B: b, bbar\nvar C: c, cbar\nparents B: A\nparents C: B\n\
        cpt A: a > abar\ncpt B | A=a: b > bbar\ncpt B | A=abar: bbar > b\n\
        cpt C | B=b: c > cbar\ncpt C | B=bbar: cbar > c";

    fn setup() -> (CpNet, Outcome, Outcome, FlipSequence) {
        let net = load_cpnet(CHAIN).unwrap();
        let x = net.outcome(&[("A", "abar"), ("B", "bbar"), ("C", "c")]).unwrap();
        let y = net.outcome(&[("A", "abar"), ("B", "b"), ("C", "cbar")]).unwrap();
        let (b, bbar, c, cbar) = (0, 1, 0, 1);
        let seq = FlipSequence {
            start: x.clone(),
            flips: vec![
                Flip { var: 1, from: bbar, to: b, direction: Direction::Worsening },
                Flip { var: 2, from: c, to: cbar, direction: Direction::Worsening },
            ],
        };
        (net, x, y, seq)
    }

    #[test]
    fn two_flip_worsening_witness() {
        let (net, x, y, seq) = setup();
        assert!(verify_witness(&net, &x, &y, &seq));
        assert!(verify_witness(&net, &x, &y, &seq.reversed()));
        assert!(!verify_witness(&net, &y, &x, &seq));
    }

    #[test]
    fn transposed_flips_fail() {
        let (net, x, y, mut seq) = setup();
        seq.flips.swap(0, 1);
        // C cannot worsen from c under bbar
        assert!(!verify_witness(&net, &x, &y, &seq));
    }

    #[test]
    fn empty_sequence_proves_nothing() {
        let (net, x, _, _) = setup();
        assert!(!verify_witness(&net, &x, &x, &FlipSequence::new(x.clone())));
    }

    #[test]
    fn mixed_directions_rejected() {
        let (net, x, y, mut seq) = setup();
        seq.flips[1].direction = Direction::Improving;
        assert!(!verify_witness(&net, &x, &y, &seq));
    }
}
