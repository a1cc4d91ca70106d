//! Seeded mutation scenarios for measuring checker coverage.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::session::{enumerate_traces, fold_widths, Action, Label, MatchKey, PayloadType, Proto, SessionLts};

pub const MIN_LENGTH: usize = 3;
pub const MAX_LENGTH: usize = 20;

/// Messages used for the hardware control handshake mutation.
pub const CONTROL_SIGNALS: [&str; 2] = ["start", "done"];

const ALPHABET: [&str; 8] = ["A", "B", "C", "D", "E", "F", "G", "H"];
const WIDTHS: [u32; 3] = [8, 16, 32];
const FRESH: &str = "Z";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    None,
    Ordering,
    MessageIdentity,
    Branching,
    BitWidth,
    ControlSignal,
}

impl Mutation {
    pub const ALL: [Mutation; 6] = [
        Mutation::None,
        Mutation::Ordering,
        Mutation::MessageIdentity,
        Mutation::Branching,
        Mutation::BitWidth,
        Mutation::ControlSignal,
    ];

    pub fn expected(self) -> Expected {
        match self {
            Mutation::None => Expected::Eq,
            Mutation::ControlSignal => Expected::EqWithFilter,
            _ => Expected::NonEq,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mutation::None => "none",
            Mutation::Ordering => "ordering",
            Mutation::MessageIdentity => "message-identity",
            Mutation::Branching => "branching",
            Mutation::BitWidth => "bit-width",
            Mutation::ControlSignal => "control-signal",
        }
    }
}

impl fmt::Display for Mutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mutation {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mutation::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ScenarioError::UnknownMutation(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expected {
    Eq,
    NonEq,
    EqWithFilter,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("sequence length {0} outside {MIN_LENGTH}..={MAX_LENGTH}")]
    LengthOutOfRange(usize),
    #[error("unknown mutation `{0}`")]
    UnknownMutation(String),
}

/// A software/hardware session pair with a known intended relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub seed: u64,
    pub length: usize,
    pub mutation: Mutation,
    pub expected: Expected,
    /// Software side.
    pub left: SessionLts,
    /// Hardware side.
    pub right: SessionLts,
}

impl Scenario {
    pub fn transition_count(&self) -> usize {
        self.left.transition_count().max(self.right.transition_count())
    }
}

/// One spine transition, optionally branching into a short side arm.
#[derive(Clone, Debug)]
struct Step {
    label: Label,
    side: Option<Vec<Label>>,
}

fn steps_to_proto(steps: &[Step], suffix: &[Label]) -> Proto {
    let tail = || Proto::seq(suffix.iter().cloned());
    steps.iter().rev().fold(tail(), |next, step| match &step.side {
        None => Proto::then(step.label.clone(), next),
        Some(arm) => {
            let side = arm[1..].iter().rev().fold(tail(), |n, l| Proto::then(l.clone(), n));
            Proto::Branch(vec![(step.label.clone(), next), (arm[0].clone(), side)])
        }
    })
}

fn label_keys(session: &SessionLts) -> BTreeSet<Vec<MatchKey>> {
    enumerate_traces(&fold_widths(session).session)
        .into_iter()
        .map(|t| t.iter().map(Label::match_key).collect())
        .collect()
}

/// Folded trace sets compared on the same keys the checker uses. Mutual
/// subtyping implies equal trace sets, so a difference proves the pair is
/// not equivalent without consulting the checker.
pub fn traces_agree(a: &SessionLts, b: &SessionLts) -> bool {
    label_keys(a) == label_keys(b)
}

fn mix_seed(seed: u64, length: usize, mutation: Mutation) -> u64 {
    let tag = Mutation::ALL.iter().position(|m| *m == mutation).unwrap_or(0) as u64;
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ ((length as u64) << 40) ^ (tag << 56)
}

fn random_base(rng: &mut ChaCha8Rng, length: usize) -> Vec<Step> {
    let mut steps: Vec<Step> = Vec::with_capacity(length);
    let mut prev: Option<(Action, &str)> = None;
    for i in 0..length {
        let output = rng.gen_bool(0.5);
        let mut message;
        loop {
            message = *ALPHABET.choose(rng).unwrap();
            let action = if output { Action::Send } else { Action::Recv };
            // No two consecutive spine transitions share action and message,
            // so the base itself never folds.
            if prev != Some((action, message)) {
                break;
            }
        }
        let width = *WIDTHS.choose(rng).unwrap();
        let branching = i + 1 < length && rng.gen_bool(0.15);
        let (action, side) = if branching {
            let branch_action = if output { Action::Choose } else { Action::Offer };
            let alt = loop {
                let m = *ALPHABET.choose(rng).unwrap();
                if m != message {
                    break m;
                }
            };
            let mut arm = vec![Label::new(branch_action, alt, PayloadType::int(width))];
            for _ in 0..rng.gen_range(0..=2) {
                let a = if rng.gen_bool(0.5) { Action::Send } else { Action::Recv };
                let last = arm.last().unwrap();
                let m = loop {
                    let m = *ALPHABET.choose(rng).unwrap();
                    if !(last.message == m && last.action == a) {
                        break m;
                    }
                };
                arm.push(Label::new(a, m, PayloadType::int(*WIDTHS.choose(rng).unwrap())));
            }
            (branch_action, Some(arm))
        } else {
            (if output { Action::Send } else { Action::Recv }, None)
        };
        prev = Some((if output { Action::Send } else { Action::Recv }, message));
        steps.push(Step { label: Label::new(action, message, PayloadType::int(width)), side });
    }
    steps
}

fn build(steps: &[Step], suffix: &[Label]) -> SessionLts {
    SessionLts::from_proto(&steps_to_proto(steps, suffix)).expect("generated sessions are well formed")
}

/// Split every eligible linear spine message of at least 16 bits into two
/// equal beats with probability one half.
fn beat_split(rng: &mut ChaCha8Rng, steps: &[Step]) -> Vec<Step> {
    let mut out = Vec::with_capacity(steps.len() * 2);
    for step in steps {
        let w = step.label.width().unwrap_or(0);
        if step.side.is_none() && w >= 16 && rng.gen_bool(0.5) {
            let beat = Label::new(step.label.action, step.label.message.clone(), PayloadType::int(w / 2));
            out.push(Step { label: beat.clone(), side: None });
            out.push(Step { label: beat, side: None });
        } else {
            out.push(step.clone());
        }
    }
    out
}

fn mutate(rng: &mut ChaCha8Rng, steps: &[Step], mutation: Mutation) -> Option<Vec<Step>> {
    let mut out = steps.to_vec();
    match mutation {
        Mutation::None | Mutation::ControlSignal => Some(out),
        Mutation::Ordering => {
            let swappable: Vec<usize> = (0..out.len() - 1)
                .filter(|&i| {
                    out[i].side.is_none()
                        && out[i + 1].side.is_none()
                        && out[i].label.match_key() != out[i + 1].label.match_key()
                })
                .collect();
            let &i = swappable.choose(rng)?;
            out.swap(i, i + 1);
            Some(out)
        }
        Mutation::MessageIdentity => {
            let i = rng.gen_range(0..out.len());
            out[i].label.message = FRESH.to_string();
            Some(out)
        }
        Mutation::BitWidth => {
            let i = rng.gen_range(0..out.len());
            let w = out[i].label.width().unwrap_or(8);
            out[i].label.payload = PayloadType::int(w * 2);
            Some(out)
        }
        Mutation::Branching => {
            let i = rng.gen_range(0..out.len());
            match out[i].side.take() {
                // Drop an existing arm and turn the branch back into a plain step.
                Some(_) => {
                    out[i].label.action = match out[i].label.action {
                        Action::Choose => Action::Send,
                        Action::Offer => Action::Recv,
                        a => a,
                    };
                }
                None => {
                    let action = match out[i].label.action {
                        Action::Send | Action::Choose => Action::Choose,
                        Action::Recv | Action::Offer => Action::Offer,
                    };
                    out[i].label.action = action;
                    let w = out[i].label.width().unwrap_or(8);
                    out[i].side = Some(vec![Label::new(action, FRESH, PayloadType::int(w))]);
                }
            }
            Some(out)
        }
    }
}

/// Deterministically generate one scenario.
pub fn generate_scenario(seed: u64, length: usize, mutation: Mutation) -> Result<Scenario, ScenarioError> {
    if !(MIN_LENGTH..=MAX_LENGTH).contains(&length) {
        return Err(ScenarioError::LengthOutOfRange(length));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, length, mutation));
    let expected = mutation.expected();
    loop {
        let base = random_base(&mut rng, length);
        let left = build(&base, &[]);
        let Some(mutated) = mutate(&mut rng, &base, mutation) else {
            continue;
        };
        let right = match mutation {
            Mutation::None => build(&beat_split(&mut rng, &mutated), &[]),
            Mutation::ControlSignal => {
                let start = Label::new(Action::Recv, CONTROL_SIGNALS[0], PayloadType::int(1));
                let done = Label::new(Action::Send, CONTROL_SIGNALS[1], PayloadType::int(1));
                let body = build(&mutated, &[done]);
                prefix(start, &body)
            }
            _ => build(&mutated, &[]),
        };
        // Keep only draws whose intended relation is confirmed on traces.
        let agree = traces_agree(&left, &right);
        let ok = match expected {
            Expected::Eq => agree,
            Expected::NonEq => !agree,
            Expected::EqWithFilter => !agree,
        };
        if ok {
            return Ok(Scenario { seed, length, mutation, expected, left, right });
        }
    }
}

fn prefix(label: Label, body: &SessionLts) -> SessionLts {
    SessionLts::from_proto(&Proto::then(label, body.to_proto())).expect("prefixing keeps the session well formed")
}

/// `count` scenarios cycling through every length in `lengths` and every
/// mutation kind, seeded from `seed`.
pub fn generate_suite(seed: u64, count: usize, lengths: std::ops::RangeInclusive<usize>) -> Result<Vec<Scenario>, ScenarioError> {
    let lengths: Vec<usize> = lengths.collect();
    if let Some(bad) = lengths.iter().find(|l| !(MIN_LENGTH..=MAX_LENGTH).contains(l)) {
        return Err(ScenarioError::LengthOutOfRange(*bad));
    }
    let cells = lengths.len() * Mutation::ALL.len();
    (0..count)
        .map(|i| {
            let cell = i % cells;
            let length = lengths[cell / Mutation::ALL.len()];
            let mutation = Mutation::ALL[cell % Mutation::ALL.len()];
            generate_scenario(seed.wrapping_add((i / cells) as u64), length, mutation)
        })
        .collect()
}
