use std::collections::{BTreeMap, BTreeSet};

use super::{Label, LtsError, PayloadType, SessionLts, StateId, Transition};

/// Mirror image of a session: sends become receives, choices become offers.
pub fn dual(session: &SessionLts) -> SessionLts {
    let transitions = session
        .transitions()
        .iter()
        .map(|t| Transition { from: t.from, label: t.label.dual(), to: t.to })
        .collect();
    SessionLts::new(session.num_states(), session.initial(), transitions)
        .expect("dual preserves every structural invariant")
}

/// Contract every transition whose message is in `internal`, merging its
/// endpoints. Fails when the contraction breaks an LTS invariant.
pub fn prune_communication(session: &SessionLts, internal: &BTreeSet<String>) -> Result<SessionLts, LtsError> {
    if internal.is_empty() {
        return Ok(session.clone());
    }
    let mut parent: Vec<StateId> = (0..session.num_states()).collect();
    fn find(parent: &mut [StateId], s: StateId) -> StateId {
        let mut root = s;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = s;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for t in session.transitions().iter().filter(|t| internal.contains(&t.label.message)) {
        let (a, b) = (find(&mut parent, t.from), find(&mut parent, t.to));
        if a != b {
            // Keep the smaller id as representative so the initial state stays 0.
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            parent[hi] = lo;
        }
    }
    let mut kept = BTreeSet::new();
    for t in session.transitions().iter().filter(|t| !internal.contains(&t.label.message)) {
        let from = find(&mut parent, t.from);
        let to = find(&mut parent, t.to);
        kept.insert(Transition { from, label: t.label.clone(), to });
    }
    let initial = find(&mut parent, session.initial());
    SessionLts::new(session.num_states(), initial, kept.into_iter().collect())
}

/// Result of [`fold_widths`]: the folded session and how many transitions
/// were absorbed into their predecessor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Folded {
    pub session: SessionLts,
    pub folds: usize,
}

/// Innermost non-array payload and how many of them `payload` holds.
fn element_of(payload: &PayloadType) -> (&PayloadType, u32) {
    match payload {
        PayloadType::Array { elem, len } => {
            let (leaf, n) = element_of(elem);
            (leaf, n * len)
        }
        other => (other, 1),
    }
}

/// Merge each maximal linear run of transitions that repeat the same
/// action, message and element kind into one transition whose payload is
/// an array of the run's elements. A state continues a run only when it has
/// exactly one incoming and one outgoing transition.
pub fn fold_widths(session: &SessionLts) -> Folded {
    let indeg = session.in_degrees();
    let interior = |s: StateId| s != session.initial() && indeg[s] == 1 && session.outgoing(s).len() == 1;
    let key = |l: &Label| (l.action, l.message.clone(), element_of(&l.payload).0.clone());

    let mut incoming: BTreeMap<StateId, &Transition> = BTreeMap::new();
    for t in session.transitions() {
        if indeg[t.to] == 1 {
            incoming.insert(t.to, t);
        }
    }

    let mut folds = 0;
    let mut out = Vec::new();
    for t in session.transitions() {
        let continues_run = interior(t.from) && incoming.get(&t.from).is_some_and(|prev| key(&prev.label) == key(&t.label));
        if continues_run {
            continue;
        }
        let run_key = key(&t.label);
        let mut count = element_of(&t.label.payload).1;
        let mut run_len = 1;
        let mut end = t.to;
        while interior(end) {
            let next = &session.outgoing(end)[0];
            if key(&next.label) != run_key {
                break;
            }
            count += element_of(&next.label.payload).1;
            run_len += 1;
            end = next.to;
        }
        let label = if run_len == 1 {
            t.label.clone()
        } else {
            folds += run_len - 1;
            Label {
                action: t.label.action,
                message: t.label.message.clone(),
                payload: PayloadType::array(run_key.2.clone(), count),
            }
        };
        out.push(Transition { from: t.from, label, to: end });
    }
    let session = SessionLts::new(session.num_states(), session.initial(), out)
        .expect("folding linear runs preserves every structural invariant");
    Folded { session, folds }
}

/// Every label sequence from the initial state to a terminal state.
pub fn enumerate_traces(session: &SessionLts) -> BTreeSet<Vec<Label>> {
    fn walk(s: &SessionLts, state: StateId, prefix: &mut Vec<Label>, acc: &mut BTreeSet<Vec<Label>>) {
        let out = s.outgoing(state);
        if out.is_empty() {
            acc.insert(prefix.clone());
            return;
        }
        for t in out {
            prefix.push(t.label.clone());
            walk(s, t.to, prefix, acc);
            prefix.pop();
        }
    }
    let mut acc = BTreeSet::new();
    walk(session, session.initial(), &mut Vec::new(), &mut acc);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::session::{Action, Proto};

    fn lin(labels: Vec<Label>) -> SessionLts {
        SessionLts::linear(labels).unwrap()
    }

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn dual_swaps_actions() {
        let l = lin(vec![Label::send("A", 8), Label::recv("B", 8)]);
        assert_eq!(dual(&l), lin(vec![Label::recv("A", 8), Label::send("B", 8)]));
        let b = SessionLts::from_proto(&Proto::Branch(vec![
            (Label::choose("X", 1), Proto::End),
            (Label::choose("Y", 1), Proto::End),
        ]))
        .unwrap();
        assert!(dual(&b).transitions().iter().all(|t| t.label.action == Action::Offer));
        assert_eq!(dual(&dual(&b)), b);
    }

    #[test]
    fn prune_contracts_internal_messages() {
        let l = lin(vec![Label::recv("A", 8), Label::send("dbg", 1), Label::send("B", 8)]);
        let pruned = prune_communication(&l, &set(&["dbg"])).unwrap();
        assert_eq!(pruned, lin(vec![Label::recv("A", 8), Label::send("B", 8)]));
        assert_eq!(prune_communication(&l, &BTreeSet::new()).unwrap(), l);
    }

    #[test]
    fn prune_strips_control_handshakes() {
        let hw = lin(vec![Label::recv("start", 1), Label::recv("A", 8), Label::send("B", 8), Label::send("done", 1)]);
        let pruned = prune_communication(&hw, &set(&["start", "done"])).unwrap();
        assert_eq!(pruned, lin(vec![Label::recv("A", 8), Label::send("B", 8)]));
    }

    #[test]
    fn prune_reports_mixed_state() {
        // Contracting the input arm merges an input state into an output state.
        let l = SessionLts::from_proto(&Proto::Branch(vec![
            (Label::offer("A", 1), Proto::then(Label::send("X", 1), Proto::End)),
            (Label::offer("dbg", 1), Proto::then(Label::send("Y", 1), Proto::End)),
        ]))
        .unwrap();
        let err = prune_communication(&l, &set(&["dbg"])).unwrap_err();
        assert!(matches!(err, LtsError::MixedPolarity(0)));
    }

    #[test]
    fn fold_merges_beats() {
        let hw = lin(vec![Label::recv("A", 8), Label::recv("A", 8), Label::send("ack", 1)]);
        let folded = fold_widths(&hw);
        assert_eq!(folded.folds, 1);
        let labels = folded.session.as_linear().unwrap();
        assert_eq!(labels[0].width(), Some(16));
        assert_eq!(labels[0].payload, PayloadType::array(PayloadType::int(8), 2));
        assert_eq!(labels[1], Label::send("ack", 1));
    }

    #[test]
    fn fold_four_beats() {
        let l = lin(vec![Label::send("X", 8); 4]);
        let folded = fold_widths(&l);
        assert_eq!(folded.folds, 3);
        assert_eq!(folded.session.as_linear().unwrap()[0].width(), Some(32));
    }

    #[test]
    fn fold_stops_at_branches_and_kind_changes() {
        let l = lin(vec![Label::send("X", 8), Label::new(Action::Send, "X", PayloadType::boolean())]);
        assert_eq!(fold_widths(&l).folds, 0);
        let b = SessionLts::from_proto(&Proto::then(
            Label::recv("A", 8),
            Proto::Branch(vec![
                (Label::offer("A", 8), Proto::End),
                (Label::offer("E", 8), Proto::End),
            ]),
        ))
        .unwrap();
        assert_eq!(fold_widths(&b).folds, 0);
    }

    #[test]
    fn fold_single_transition_unchanged() {
        let l = lin(vec![Label::send("X", 8)]);
        assert_eq!(fold_widths(&l).session, l);
    }

    #[test]
    fn branching_receiver_traces() {
        let u1 = SessionLts::from_proto(&Proto::Branch(vec![
            (Label::recv("A", 8), Proto::seq([Label::send("B", 8), Label::send("C", 8)])),
            (Label::recv("E", 8), Proto::End),
        ]))
        .unwrap();
        let traces = enumerate_traces(&u1);
        assert_eq!(traces.len(), 2);
        assert!(traces.contains(&vec![Label::recv("A", 8), Label::send("B", 8), Label::send("C", 8)]));
        assert!(traces.contains(&vec![Label::recv("E", 8)]));
    }

    #[test]
    fn linear_has_one_trace() {
        let l = lin(vec![Label::send("A", 1), Label::recv("B", 1), Label::send("C", 1)]);
        let traces = enumerate_traces(&l);
        assert_eq!(traces.len(), 1);
        assert_eq!(traces.iter().next().unwrap().len(), 3);
    }
}
