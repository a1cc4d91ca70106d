use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::PayloadType;

/// Session-type action of one transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Send,
    Recv,
    Choose,
    Offer,
}

/// Direction of an action as seen by the party that owns the session.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Output,
    Input,
}

impl Action {
    pub fn symbol(self) -> &'static str {
        match self {
            Action::Send => "!",
            Action::Recv => "?",
            Action::Choose => "+",
            Action::Offer => "&",
        }
    }

    pub fn from_symbol(sym: &str) -> Option<Action> {
        match sym {
            "!" => Some(Action::Send),
            "?" => Some(Action::Recv),
            "+" | "⊕" => Some(Action::Choose),
            "&" => Some(Action::Offer),
            _ => None,
        }
    }

    pub fn polarity(self) -> Polarity {
        match self {
            Action::Send | Action::Choose => Polarity::Output,
            Action::Recv | Action::Offer => Polarity::Input,
        }
    }

    pub fn dual(self) -> Action {
        match self {
            Action::Send => Action::Recv,
            Action::Recv => Action::Send,
            Action::Choose => Action::Offer,
            Action::Offer => Action::Choose,
        }
    }
}

/// Transition label `(action, message, payload)`; the width is derived from
/// the payload so the two can never disagree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Label {
    pub action: Action,
    pub message: String,
    pub payload: PayloadType,
}

/// What the subtyping rules compare: a branch label `A` and a receive of `A`
/// are the same observable event.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchKey {
    pub polarity: Polarity,
    pub message: String,
    pub width: Option<u32>,
}

impl Label {
    pub fn new(action: Action, message: impl Into<String>, payload: PayloadType) -> Self {
        Label { action, message: message.into(), payload }
    }

    pub fn send(message: impl Into<String>, bits: u32) -> Self {
        Label::new(Action::Send, message, PayloadType::int(bits))
    }

    pub fn recv(message: impl Into<String>, bits: u32) -> Self {
        Label::new(Action::Recv, message, PayloadType::int(bits))
    }

    pub fn choose(message: impl Into<String>, bits: u32) -> Self {
        Label::new(Action::Choose, message, PayloadType::int(bits))
    }

    pub fn offer(message: impl Into<String>, bits: u32) -> Self {
        Label::new(Action::Offer, message, PayloadType::int(bits))
    }

    pub fn width(&self) -> Option<u32> {
        self.payload.width()
    }

    pub fn polarity(&self) -> Polarity {
        self.action.polarity()
    }

    pub fn match_key(&self) -> MatchKey {
        MatchKey { polarity: self.polarity(), message: self.message.clone(), width: self.width() }
    }

    pub fn dual(&self) -> Label {
        Label { action: self.action.dual(), ..self.clone() }
    }
}

impl Ord for Label {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.action, &self.message, self.width(), &self.payload).cmp(&(
            other.action,
            &other.message,
            other.width(),
            &other.payload,
        ))
    }
}

impl PartialOrd for Label {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.width() {
            Some(w) => write!(f, "{}{}({})", self.action.symbol(), self.message, w),
            None => write!(f, "{}{}({})", self.action.symbol(), self.message, self.payload),
        }
    }
}
