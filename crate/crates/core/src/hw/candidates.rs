use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::classify::offer_label;
use super::{HwError, LabeledFsm, StateTag};
use crate::session::{Action, Polarity, Proto, SessionLts};

/// Upper bound on alternative unrollings before extraction gives up.
pub const MAX_ALTERNATIVES: usize = 4096;

/// A session the hardware may follow, with the FSM paths it came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateProtocol {
    pub ip: String,
    /// Position in canonical order.
    pub id: usize,
    pub session: SessionLts,
    /// State sequences from reset, joined with `>`.
    pub paths: Vec<String>,
}

#[derive(Clone, Debug)]
struct Unrolled {
    proto: Proto,
    paths: Vec<Vec<String>>,
}

struct Walker<'a> {
    fsm: &'a LabeledFsm,
    stack: Vec<String>,
}

impl Walker<'_> {
    fn unroll(&mut self, id: &str) -> Result<Vec<Unrolled>, HwError> {
        if id == self.fsm.fsm.reset && !self.stack.is_empty() {
            return Ok(vec![Unrolled { proto: Proto::End, paths: vec![vec![id.to_string()]] }]);
        }
        if self.stack.iter().any(|s| s == id) {
            return Err(HwError::UnsupportedRecursion(id.to_string()));
        }
        let state = self.fsm.fsm.state(id).ok_or_else(|| HwError::UnknownState(id.to_string()))?;
        self.stack.push(id.to_string());
        let result = match self.fsm.tag(id) {
            Some(StateTag::Send(label)) | Some(StateTag::Recv(label)) => {
                let rest = self.follow(state.next.as_deref(), id)?;
                rest.into_iter()
                    .map(|u| Unrolled { proto: Proto::then(label.clone(), u.proto), paths: u.paths })
                    .collect()
            }
            Some(StateTag::Offer { width }) => {
                let mut arms = Vec::new();
                for arm in &state.arms {
                    let alts = self.unroll(&arm.next)?;
                    arms.push(
                        alts.into_iter()
                            .map(|u| Unrolled {
                                proto: Proto::then(offer_label(&arm.cond_label, *width), u.proto),
                                paths: u.paths,
                            })
                            .collect(),
                    );
                }
                combine(arms)?
            }
            Some(StateTag::Choose) => {
                let mut arms = Vec::new();
                for arm in &state.arms {
                    arms.push(self.unroll(&arm.next)?);
                }
                combine_choice(arms)?
            }
            None => self.follow(state.next.as_deref(), id)?,
        };
        self.stack.pop();
        if result.len() > MAX_ALTERNATIVES {
            return Err(HwError::TooManyPaths(MAX_ALTERNATIVES));
        }
        Ok(result
            .into_iter()
            .map(|mut u| {
                for p in &mut u.paths {
                    p.insert(0, id.to_string());
                }
                u
            })
            .collect())
    }

    /// Continue to `next`; a missing successor or an untagged self-loop is a sink.
    fn follow(&mut self, next: Option<&str>, me: &str) -> Result<Vec<Unrolled>, HwError> {
        match next {
            None => Ok(vec![Unrolled { proto: Proto::End, paths: vec![Vec::new()] }]),
            Some(n) if n == me && self.fsm.tag(me).is_none() => {
                Ok(vec![Unrolled { proto: Proto::End, paths: vec![Vec::new()] }])
            }
            Some(n) => self.unroll(n),
        }
    }
}

fn first_arms(p: &Proto) -> &[(crate::session::Label, Proto)] {
    match p {
        Proto::End => &[],
        Proto::Branch(arms) => arms,
    }
}

/// Cartesian product of per-arm alternatives into branching nodes. When the
/// arms' first labels collide the branch cannot be one deterministic node,
/// so each arm alternative becomes its own candidate instead.
fn combine(arms: Vec<Vec<Unrolled>>) -> Result<Vec<Unrolled>, HwError> {
    Ok(match product(&arms)? {
        Some(merged) => merged,
        None => arms.into_iter().flatten().collect(),
    })
}

/// `None` when some combination would not be a deterministic branch.
fn product(arms: &[Vec<Unrolled>]) -> Result<Option<Vec<Unrolled>>, HwError> {
    let mut acc: Vec<Unrolled> = vec![Unrolled { proto: Proto::Branch(Vec::new()), paths: Vec::new() }];
    for alts in arms {
        let mut next = Vec::new();
        for partial in &acc {
            for alt in alts {
                let mut branch = first_arms(&partial.proto).to_vec();
                branch.extend(first_arms(&alt.proto).iter().cloned());
                let mut paths = partial.paths.clone();
                paths.extend(alt.paths.iter().cloned());
                next.push(Unrolled { proto: Proto::Branch(branch), paths });
            }
        }
        if next.len() > MAX_ALTERNATIVES {
            return Err(HwError::TooManyPaths(MAX_ALTERNATIVES));
        }
        acc = next;
    }
    let deterministic = |u: &Unrolled| {
        let arms = first_arms(&u.proto);
        let mut keys: Vec<_> = arms.iter().map(|(l, _)| l.match_key()).collect();
        keys.sort();
        keys.dedup();
        keys.len() == arms.len() && arms.iter().all(|(l, _)| l.polarity() == arms[0].0.polarity())
    };
    if !acc.iter().all(deterministic) {
        return Ok(None);
    }
    Ok(Some(
        acc.into_iter()
            .map(|u| if first_arms(&u.proto).is_empty() { Unrolled { proto: Proto::End, ..u } } else { u })
            .collect(),
    ))
}

/// Internal choice: each arm's first tagged output becomes a choice label.
/// Arms that start with an input or end immediately keep their own
/// candidates.
fn combine_choice(arms: Vec<Vec<Unrolled>>) -> Result<Vec<Unrolled>, HwError> {
    let all_output = arms.iter().flatten().all(|u| {
        let first = first_arms(&u.proto);
        !first.is_empty() && first.iter().all(|(l, _)| l.polarity() == Polarity::Output)
    });
    if !all_output {
        return Ok(arms.into_iter().flatten().collect());
    }
    let relabeled: Vec<Vec<Unrolled>> = arms
        .iter()
        .map(|alts| {
            alts.iter()
                .map(|u| {
                    let branch = first_arms(&u.proto)
                        .iter()
                        .map(|(l, cont)| {
                            let mut l = l.clone();
                            l.action = Action::Choose;
                            (l, cont.clone())
                        })
                        .collect();
                    Unrolled { proto: Proto::Branch(branch), paths: u.paths.clone() }
                })
                .collect()
        })
        .collect();
    Ok(match product(&relabeled)? {
        Some(merged) => merged,
        None => arms.into_iter().flatten().collect(),
    })
}

/// Enumerate the sessions the FSM can follow from reset back to reset (or
/// into a sink), deduplicated and sorted into canonical order.
pub fn extract_candidates(fsm: &LabeledFsm) -> Result<Vec<CandidateProtocol>, HwError> {
    let mut walker = Walker { fsm, stack: Vec::new() };
    let alternatives = walker.unroll(&fsm.fsm.reset)?;
    let mut unique: BTreeMap<String, (SessionLts, Vec<String>)> = BTreeMap::new();
    for alt in alternatives {
        let session = SessionLts::from_proto(&alt.proto)?;
        let entry = unique.entry(session.to_json()).or_insert_with(|| (session, Vec::new()));
        entry.1.extend(alt.paths.into_iter().map(|p| p.join(">")));
    }
    Ok(unique
        .into_values()
        .enumerate()
        .map(|(id, (session, mut paths))| {
            paths.sort();
            paths.dedup();
            CandidateProtocol { ip: fsm.fsm.ip.clone(), id, session, paths }
        })
        .collect())
}
