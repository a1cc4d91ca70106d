//! Labeled transition systems for binary session types.
//!
//! A [`SessionLts`] is the common representation for protocols derived from
//! software call graphs and from hardware FSMs. Every constructor validates
//! the structural invariants (acyclic, no mixed choice, deterministic labels)
//! and stores the machine in canonical form, so derived equality is equality
//! up to state renaming.

mod json;
mod label;
mod lts;
mod ops;
mod payload;

pub use json::{LtsDocument, TransitionDoc};
pub use label::{Action, Label, MatchKey, Polarity};
pub use lts::{Proto, SessionLts, StateId, Transition};
pub use ops::{dual, enumerate_traces, fold_widths, prune_communication, Folded};
pub use payload::{PayloadType, WidthPolicy};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LtsError {
    #[error("state s{0} is out of range")]
    UnknownState(usize),
    #[error("unknown state name `{0}`")]
    UnknownStateName(String),
    #[error("cycle through state s{0}; recursive sessions are not supported")]
    Cycle(usize),
    #[error("state s{0} mixes input and output actions")]
    MixedPolarity(usize),
    #[error("state s{state} has two outgoing transitions labeled {label}")]
    DuplicateLabel { state: usize, label: String },
    #[error("state s{0} is listed as terminal but has outgoing transitions")]
    TerminalWithOutgoing(usize),
    #[error("state s{0} has no outgoing transitions but is not terminal")]
    StuckState(usize),
    #[error("message identifiers must be nonempty")]
    EmptyMessage,
    #[error("payload error: {0}")]
    Payload(String),
    #[error("malformed LTS document: {0}")]
    Document(String),
}
