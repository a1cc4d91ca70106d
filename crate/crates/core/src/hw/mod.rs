//! Hardware IP state machines: parsing, action classification and
//! candidate protocol extraction.

mod candidates;
mod classify;
mod fsm;
mod toy;

pub use candidates::{extract_candidates, CandidateProtocol, MAX_ALTERNATIVES};
pub use classify::{classify_actions, LabeledFsm, StateTag};
pub use fsm::{parse_fsm, Arm, BranchKind, FsmState, HwFsm, Port, PortDir};
pub use toy::parse_toy_hdl;

use thiserror::Error;

use crate::session::LtsError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HwError {
    #[error("FSM schema violation: {0}")]
    Schema(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("transition from `{from}` to undeclared state `{to}`")]
    DanglingTransition { from: String, to: String },
    #[error("state `{0}` is unreachable from reset")]
    Unreferenced(String),
    #[error("state `{0}` has multiple session patterns")]
    MultiplePatterns(String),
    #[error("state `{0}` both asserts an output and waits on an input")]
    Ambiguous(String),
    #[error("unsupported recursion: cycle through `{0}` does not pass the reset state")]
    UnsupportedRecursion(String),
    #[error("more than {0} alternative paths")]
    TooManyPaths(usize),
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("non-FSM construct `{0}`")]
    NonFsmConstruct(String),
    #[error(transparent)]
    Lts(#[from] LtsError),
}

/// Parse, classify and extract in one step; picks the parser from the
/// document's first non-blank character.
pub fn candidates_from_text(text: &str) -> Result<Vec<CandidateProtocol>, HwError> {
    let fsm = if text.trim_start().starts_with('{') { parse_fsm(text)? } else { parse_toy_hdl(text)? };
    extract_candidates(&classify_actions(&fsm)?)
}
