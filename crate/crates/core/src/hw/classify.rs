use serde::Serialize;

use super::{BranchKind, HwError, HwFsm};
use crate::session::{Label, PayloadType};

/// Session action a single FSM state contributes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum StateTag {
    /// Output handshake asserted.
    Send(Label),
    /// Input handshake guards the exit.
    Recv(Label),
    /// Branch on input data; each arm is labeled by its condition.
    Offer { width: u32 },
    /// Branch on internal state.
    Choose,
}

/// An FSM with each state optionally tagged by the action it performs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledFsm {
    pub fsm: HwFsm,
    /// Parallel to `fsm.states`.
    pub tags: Vec<Option<StateTag>>,
}

impl LabeledFsm {
    pub fn tag(&self, id: &str) -> Option<&StateTag> {
        self.fsm.index_of(id).and_then(|i| self.tags[i].as_ref())
    }
}

/// Map each state onto a session action following the handshake patterns:
/// asserted output valid is a send, an input-valid guard is a receive, an
/// input-data branch is an offer and an internal branch is a choice.
pub fn classify_actions(fsm: &HwFsm) -> Result<LabeledFsm, HwError> {
    let width_of = |port: &str| fsm.port(port).map(|p| p.width).ok_or_else(|| HwError::Schema(format!("undeclared port `{port}`")));
    let mut tags = Vec::with_capacity(fsm.states.len());
    for s in &fsm.states {
        if !s.assert.is_empty() && !s.guard_valid.is_empty() {
            return Err(HwError::Ambiguous(s.id.clone()));
        }
        let tag = if let Some(port) = s.assert.first() {
            let message = s.message.clone().unwrap_or_else(|| port.clone());
            Some(StateTag::Send(Label::send(message, width_of(port)?)))
        } else if let Some(port) = s.guard_valid.first() {
            let message = s.message.clone().unwrap_or_else(|| port.clone());
            Some(StateTag::Recv(Label::recv(message, width_of(port)?)))
        } else {
            match s.branch {
                BranchKind::InputData => {
                    let port = s.port.as_deref().ok_or_else(|| HwError::Schema(format!("branch `{}` has no port", s.id)))?;
                    Some(StateTag::Offer { width: width_of(port)? })
                }
                BranchKind::Internal => Some(StateTag::Choose),
                BranchKind::None => None,
            }
        };
        tags.push(tag);
    }
    Ok(LabeledFsm { fsm: fsm.clone(), tags })
}

pub(crate) fn offer_label(cond: &str, width: u32) -> Label {
    Label::new(crate::session::Action::Offer, cond, PayloadType::int(width))
}
