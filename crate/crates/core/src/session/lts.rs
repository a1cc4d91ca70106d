use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use super::{Label, LtsError, Polarity};

pub type StateId = usize;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: StateId,
    pub label: Label,
    pub to: StateId,
}

/// Finite, acyclic session LTS in canonical form.
///
/// State `0` is always the initial state. States are numbered in
/// breadth-first order from the initial state with outgoing transitions
/// visited in label order, which makes the numbering unique for
/// deterministic machines.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SessionLts {
    num_states: usize,
    transitions: Vec<Transition>,
    /// `offsets[s]..offsets[s + 1]` indexes the outgoing transitions of `s`.
    offsets: Vec<usize>,
}

/// Tree-shaped session description, handy for writing protocols by hand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Proto {
    End,
    Branch(Vec<(Label, Proto)>),
}

impl Proto {
    /// Linear protocol performing `labels` in order.
    pub fn seq(labels: impl IntoIterator<Item = Label>) -> Proto {
        let labels: Vec<Label> = labels.into_iter().collect();
        labels.into_iter().rev().fold(Proto::End, |next, l| Proto::Branch(vec![(l, next)]))
    }

    /// Single transition followed by `next`.
    pub fn then(label: Label, next: Proto) -> Proto {
        Proto::Branch(vec![(label, next)])
    }
}

impl SessionLts {
    /// Build from raw parts; terminals are exactly the states without
    /// outgoing transitions.
    pub fn new(num_states: usize, initial: StateId, transitions: Vec<Transition>) -> Result<Self, LtsError> {
        Self::build(num_states, initial, None, transitions)
    }

    /// Build from raw parts with an explicit terminal set, which must agree
    /// with the set of reachable sink states.
    pub fn from_parts(
        num_states: usize,
        initial: StateId,
        terminals: &[StateId],
        transitions: Vec<Transition>,
    ) -> Result<Self, LtsError> {
        Self::build(num_states, initial, Some(terminals), transitions)
    }

    pub fn linear(labels: impl IntoIterator<Item = Label>) -> Result<Self, LtsError> {
        Self::from_proto(&Proto::seq(labels))
    }

    /// The session that does nothing.
    pub fn end() -> Self {
        SessionLts { num_states: 1, transitions: Vec::new(), offsets: vec![0, 0] }
    }

    pub fn from_proto(proto: &Proto) -> Result<Self, LtsError> {
        fn walk(p: &Proto, me: StateId, next: &mut usize, out: &mut Vec<Transition>) {
            if let Proto::Branch(arms) = p {
                for (label, cont) in arms {
                    let to = *next;
                    *next += 1;
                    out.push(Transition { from: me, label: label.clone(), to });
                    walk(cont, to, next, out);
                }
            }
        }
        let mut transitions = Vec::new();
        let mut next = 1;
        walk(proto, 0, &mut next, &mut transitions);
        Self::new(next, 0, transitions)
    }

    fn build(
        num_states: usize,
        initial: StateId,
        terminals: Option<&[StateId]>,
        transitions: Vec<Transition>,
    ) -> Result<Self, LtsError> {
        if initial >= num_states {
            return Err(LtsError::UnknownState(initial));
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); num_states];
        for (i, t) in transitions.iter().enumerate() {
            for s in [t.from, t.to] {
                if s >= num_states {
                    return Err(LtsError::UnknownState(s));
                }
            }
            if t.label.message.is_empty() {
                return Err(LtsError::EmptyMessage);
            }
            out[t.from].push(i);
        }

        for (state, idxs) in out.iter().enumerate() {
            let mut polarity: Option<Polarity> = None;
            let mut seen = BTreeSet::new();
            for &i in idxs {
                let label = &transitions[i].label;
                match polarity {
                    None => polarity = Some(label.polarity()),
                    Some(p) if p != label.polarity() => return Err(LtsError::MixedPolarity(state)),
                    _ => {}
                }
                if !seen.insert((label.message.clone(), label.width())) {
                    return Err(LtsError::DuplicateLabel { state, label: label.to_string() });
                }
            }
        }

        // Kahn's algorithm; whatever is left over lies on or behind a cycle.
        let mut indeg = vec![0usize; num_states];
        for t in &transitions {
            indeg[t.to] += 1;
        }
        let mut queue: VecDeque<StateId> = (0..num_states).filter(|&s| indeg[s] == 0).collect();
        let mut removed = 0;
        while let Some(s) = queue.pop_front() {
            removed += 1;
            for &i in &out[s] {
                let to = transitions[i].to;
                indeg[to] -= 1;
                if indeg[to] == 0 {
                    queue.push_back(to);
                }
            }
        }
        if removed != num_states {
            let on_cycle = (0..num_states).find(|&s| indeg[s] > 0).unwrap_or(0);
            return Err(LtsError::Cycle(on_cycle));
        }

        if let Some(terms) = terminals {
            for &t in terms {
                if t >= num_states {
                    return Err(LtsError::UnknownState(t));
                }
                if !out[t].is_empty() {
                    return Err(LtsError::TerminalWithOutgoing(t));
                }
            }
            let declared: BTreeSet<StateId> = terms.iter().copied().collect();
            let reachable = reachable_from(initial, &out, &transitions);
            if let Some(stuck) = reachable.iter().find(|&&s| out[s].is_empty() && !declared.contains(&s)) {
                return Err(LtsError::StuckState(*stuck));
            }
        }

        Ok(canonicalize(initial, &out, &transitions))
    }

    pub fn num_states(&self) -> usize {
        self.num_states
    }

    pub fn initial(&self) -> StateId {
        0
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn outgoing(&self, state: StateId) -> &[Transition] {
        &self.transitions[self.offsets[state]..self.offsets[state + 1]]
    }

    pub fn is_terminal(&self, state: StateId) -> bool {
        self.outgoing(state).is_empty()
    }

    pub fn terminals(&self) -> Vec<StateId> {
        (0..self.num_states).filter(|&s| self.is_terminal(s)).collect()
    }

    /// Polarity shared by all outgoing transitions; `None` for terminals.
    pub fn polarity(&self, state: StateId) -> Option<Polarity> {
        self.outgoing(state).first().map(|t| t.label.polarity())
    }

    /// Distinct labels, sorted.
    pub fn actions(&self) -> BTreeSet<Label> {
        self.transitions.iter().map(|t| t.label.clone()).collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut indeg = vec![0; self.num_states];
        for t in &self.transitions {
            indeg[t.to] += 1;
        }
        indeg
    }

    /// Labels of the unique path when the session has no branching.
    pub fn as_linear(&self) -> Option<Vec<Label>> {
        let mut labels = Vec::new();
        let mut state = 0;
        loop {
            match self.outgoing(state) {
                [] => return Some(labels),
                [t] => {
                    labels.push(t.label.clone());
                    state = t.to;
                }
                _ => return None,
            }
        }
    }

    /// Tree view of the session (shared suffixes are duplicated).
    pub fn to_proto(&self) -> Proto {
        self.proto_at(0)
    }

    fn proto_at(&self, state: StateId) -> Proto {
        let out = self.outgoing(state);
        if out.is_empty() {
            Proto::End
        } else {
            Proto::Branch(out.iter().map(|t| (t.label.clone(), self.proto_at(t.to))).collect())
        }
    }
}

fn reachable_from(initial: StateId, out: &[Vec<usize>], transitions: &[Transition]) -> BTreeSet<StateId> {
    let mut seen = BTreeSet::from([initial]);
    let mut stack = vec![initial];
    while let Some(s) = stack.pop() {
        for &i in &out[s] {
            if seen.insert(transitions[i].to) {
                stack.push(transitions[i].to);
            }
        }
    }
    seen
}

fn canonicalize(initial: StateId, out: &[Vec<usize>], transitions: &[Transition]) -> SessionLts {
    let mut number = vec![usize::MAX; out.len()];
    let mut order = Vec::new();
    let mut queue = VecDeque::from([initial]);
    number[initial] = 0;
    order.push(initial);
    while let Some(s) = queue.pop_front() {
        let mut idxs = out[s].clone();
        idxs.sort_by(|&a, &b| transitions[a].label.cmp(&transitions[b].label));
        for i in idxs {
            let to = transitions[i].to;
            if number[to] == usize::MAX {
                number[to] = order.len();
                order.push(to);
                queue.push_back(to);
            }
        }
    }
    let mut canon: Vec<Transition> = order
        .iter()
        .flat_map(|&s| out[s].iter())
        .map(|&i| {
            let t = &transitions[i];
            Transition { from: number[t.from], label: t.label.clone(), to: number[t.to] }
        })
        .collect();
    canon.sort();
    let mut offsets = vec![0; order.len() + 1];
    for t in &canon {
        offsets[t.from + 1] += 1;
    }
    for s in 0..order.len() {
        offsets[s + 1] += offsets[s];
    }
    SessionLts { num_states: order.len(), transitions: canon, offsets }
}

impl fmt::Display for SessionLts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_proto(&self.to_proto(), f)
    }
}

impl fmt::Display for Proto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_proto(self, f)
    }
}

fn fmt_proto(p: &Proto, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match p {
        Proto::End => f.write_str("end"),
        Proto::Branch(arms) if arms.len() == 1 => {
            write!(f, "{}.", arms[0].0)?;
            fmt_proto(&arms[0].1, f)
        }
        Proto::Branch(arms) => {
            f.write_str("{")?;
            for (i, (l, cont)) in arms.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{l}.")?;
                fmt_proto(cont, f)?;
            }
            f.write_str("}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::Label;

    #[test]
    fn linear_has_single_terminal() {
        let l = SessionLts::linear([Label::recv("A", 8), Label::send("B", 8), Label::send("C", 8)]).unwrap();
        assert_eq!(l.num_states(), 4);
        assert_eq!(l.terminals(), vec![3]);
        assert_eq!(l.to_string(), "?A(8).!B(8).!C(8).end");
    }

    #[test]
    fn renaming_does_not_change_equality() {
        let a = SessionLts::new(
            3,
            2,
            vec![
                Transition { from: 2, label: Label::recv("A", 8), to: 0 },
                Transition { from: 0, label: Label::send("B", 8), to: 1 },
            ],
        )
        .unwrap();
        let b = SessionLts::linear([Label::recv("A", 8), Label::send("B", 8)]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_cycles() {
        let err = SessionLts::new(
            2,
            0,
            vec![
                Transition { from: 0, label: Label::recv("A", 8), to: 1 },
                Transition { from: 1, label: Label::send("B", 8), to: 0 },
            ],
        )
        .unwrap_err();
        assert!(matches!(err, LtsError::Cycle(_)));
    }

    #[test]
    fn rejects_mixed_choice() {
        let err = SessionLts::new(
            3,
            0,
            vec![
                Transition { from: 0, label: Label::recv("A", 8), to: 1 },
                Transition { from: 0, label: Label::send("B", 8), to: 2 },
            ],
        )
        .unwrap_err();
        assert_eq!(err, LtsError::MixedPolarity(0));
    }

    #[test]
    fn rejects_duplicate_labels() {
        let err = SessionLts::new(
            3,
            0,
            vec![
                Transition { from: 0, label: Label::recv("A", 8), to: 1 },
                Transition { from: 0, label: Label::offer("A", 8), to: 2 },
            ],
        )
        .unwrap_err();
        assert!(matches!(err, LtsError::DuplicateLabel { state: 0, .. }));
    }

    #[test]
    fn terminal_set_must_match_sinks() {
        let ts = vec![Transition { from: 0, label: Label::recv("A", 8), to: 1 }];
        assert!(SessionLts::from_parts(2, 0, &[1], ts.clone()).is_ok());
        assert_eq!(SessionLts::from_parts(2, 0, &[], ts.clone()), Err(LtsError::StuckState(1)));
        assert_eq!(SessionLts::from_parts(2, 0, &[0, 1], ts), Err(LtsError::TerminalWithOutgoing(0)));
    }

    #[test]
    fn unreachable_states_are_dropped() {
        let l = SessionLts::new(3, 0, vec![Transition { from: 0, label: Label::send("A", 1), to: 1 }]).unwrap();
        assert_eq!(l.num_states(), 2);
    }
}
