use std::fmt;

use serde::{Deserialize, Serialize};

use super::subtype::subtype;
use crate::session::{fold_widths, Label, SessionLts};

/// Which side survived when only one subtyping direction holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// `software <: hardware`
    SoftwareSubHardware,
    /// `hardware <: software`
    HardwareSubSoftware,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::SoftwareSubHardware => Direction::HardwareSubSoftware,
            Direction::HardwareSubSoftware => Direction::SoftwareSubHardware,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    Equivalent,
    SubtypeOnly(Direction),
    NotEquivalent,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Equivalent => "Equivalent",
            Outcome::SubtypeOnly(_) => "SubtypeOnly",
            Outcome::NotEquivalent => "NotEquivalent",
        }
    }

    pub fn is_equivalent(self) -> bool {
        self == Outcome::Equivalent
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceVerdict {
    pub outcome: Outcome,
    /// Empty iff the outcome is `Equivalent`.
    pub witness: Vec<Label>,
    /// Index of the matched hardware candidate, set by binding checks.
    pub candidate: Option<usize>,
    /// Transitions absorbed by width folding, both sides together.
    pub folds: usize,
}

impl EquivalenceVerdict {
    pub fn witness_strings(&self) -> Vec<String> {
        self.witness.iter().map(Label::to_string).collect()
    }
}

impl fmt::Display for EquivalenceVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.outcome {
            Outcome::Equivalent => write!(f, "Equivalent")?,
            Outcome::SubtypeOnly(d) => write!(f, "SubtypeOnly({d:?})")?,
            Outcome::NotEquivalent => write!(f, "NotEquivalent")?,
        }
        if !self.witness.is_empty() {
            write!(f, " witness [{}]", self.witness_strings().join(", "))?;
        }
        Ok(())
    }
}

/// Mutual subtyping after folding both sides.
pub fn equivalent(software: &SessionLts, hardware: &SessionLts) -> EquivalenceVerdict {
    let sw = fold_widths(software);
    let hw = fold_widths(hardware);
    let folds = sw.folds + hw.folds;
    let forward = subtype(&sw.session, &hw.session);
    let backward = subtype(&hw.session, &sw.session);
    let (outcome, witness) = match (forward.holds, backward.holds) {
        (true, true) => (Outcome::Equivalent, Vec::new()),
        (true, false) => (Outcome::SubtypeOnly(Direction::SoftwareSubHardware), backward.witness),
        (false, true) => (Outcome::SubtypeOnly(Direction::HardwareSubSoftware), forward.witness),
        (false, false) => (Outcome::NotEquivalent, forward.witness.min(backward.witness)),
    };
    EquivalenceVerdict { outcome, witness, candidate: None, folds }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::Proto;

    #[test]
    fn folded_beats_are_equivalent() {
        let sw = SessionLts::linear([Label::recv("A", 16), Label::send("ack", 1)]).unwrap();
        let hw = SessionLts::linear([Label::recv("A", 8), Label::recv("A", 8), Label::send("ack", 1)]).unwrap();
        let v = equivalent(&sw, &hw);
        assert_eq!(v.outcome, Outcome::Equivalent);
        assert_eq!(v.folds, 1);
        assert!(v.witness.is_empty());
    }

    #[test]
    fn extra_input_branch_is_subtype_only() {
        let t1 = SessionLts::linear([Label::recv("A", 8), Label::send("B", 8), Label::send("C", 8)]).unwrap();
        let u1 = SessionLts::from_proto(&Proto::Branch(vec![
            (Label::recv("A", 8), Proto::seq([Label::send("B", 8), Label::send("C", 8)])),
            (Label::recv("E", 8), Proto::End),
        ]))
        .unwrap();
        let v = equivalent(&t1, &u1);
        assert_eq!(v.outcome, Outcome::SubtypeOnly(Direction::HardwareSubSoftware));
        assert_eq!(v.witness, vec![Label::recv("E", 8)]);
        let flipped = equivalent(&u1, &t1);
        assert_eq!(flipped.outcome, Outcome::SubtypeOnly(Direction::SoftwareSubHardware));
    }

    #[test]
    fn ordering_mutation() {
        let a = SessionLts::linear([Label::send("X", 8), Label::send("Y", 8)]).unwrap();
        let b = SessionLts::linear([Label::send("Y", 8), Label::send("X", 8)]).unwrap();
        let v = equivalent(&a, &b);
        assert_eq!(v.outcome, Outcome::NotEquivalent);
        assert_eq!(v.witness, vec![Label::send("X", 8)]);
    }
}
