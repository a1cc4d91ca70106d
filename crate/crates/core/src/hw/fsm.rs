use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::HwError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PortDir {
    In,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Port {
    pub name: String,
    pub dir: PortDir,
    pub width: u32,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BranchKind {
    #[default]
    None,
    Internal,
    InputData,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arm {
    pub cond_label: String,
    pub next: String,
}

/// One FSM state with its handshake annotations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsmState {
    pub id: String,
    /// Output ports whose valid handshake this state asserts.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assert: Vec<String>,
    /// Input ports whose valid handshake guards leaving this state.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub guard_valid: Vec<String>,
    /// Message carried by the handshake; defaults to the port name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Data port inspected by an input-data branch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub port: Option<String>,
    #[serde(default)]
    pub branch: BranchKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arms: Vec<Arm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub next: Option<String>,
}

impl FsmState {
    pub fn successors(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self.arms.iter().map(|a| a.next.as_str()).collect();
        out.extend(self.next.as_deref());
        out
    }
}

/// Hardware IP state machine in the interchange schema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HwFsm {
    pub ip: String,
    pub reset: String,
    #[serde(default)]
    pub ports: Vec<Port>,
    pub states: Vec<FsmState>,
}

impl HwFsm {
    pub fn state(&self, id: &str) -> Option<&FsmState> {
        self.states.iter().find(|s| s.id == id)
    }

    pub fn port(&self, name: &str) -> Option<&Port> {
        self.ports.iter().find(|p| p.name == name)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.states.iter().position(|s| s.id == id)
    }

    pub fn transition_count(&self) -> usize {
        self.states.iter().map(|s| s.successors().len()).sum()
    }

    /// Check the structural invariants of the machine.
    pub fn validate(&self) -> Result<(), HwError> {
        let mut ids = BTreeSet::new();
        for s in &self.states {
            if !ids.insert(s.id.as_str()) {
                return Err(HwError::Schema(format!("duplicate state `{}`", s.id)));
            }
        }
        if !ids.contains(self.reset.as_str()) {
            return Err(HwError::UnknownState(self.reset.clone()));
        }
        let mut ports = BTreeMap::new();
        for p in &self.ports {
            if p.width == 0 {
                return Err(HwError::Schema(format!("port `{}` has zero width", p.name)));
            }
            if ports.insert(p.name.as_str(), p.dir).is_some() {
                return Err(HwError::Schema(format!("duplicate port `{}`", p.name)));
            }
        }
        let expect_port = |name: &str, dir: PortDir, state: &str| match ports.get(name) {
            Some(d) if *d == dir => Ok(()),
            Some(_) => Err(HwError::Schema(format!("state `{state}` uses port `{name}` in the wrong direction"))),
            None => Err(HwError::Schema(format!("state `{state}` references undeclared port `{name}`"))),
        };

        for s in &self.states {
            for p in &s.assert {
                expect_port(p, PortDir::Out, &s.id)?;
            }
            for p in &s.guard_valid {
                expect_port(p, PortDir::In, &s.id)?;
            }
            let patterns = s.assert.len() + s.guard_valid.len().min(1) + usize::from(s.branch != BranchKind::None);
            let multiple = s.assert.len() > 1 || s.guard_valid.len() > 1 || (s.branch != BranchKind::None && patterns > 1);
            if multiple {
                return Err(HwError::MultiplePatterns(s.id.clone()));
            }
            match s.branch {
                BranchKind::None if !s.arms.is_empty() => {
                    return Err(HwError::Schema(format!("state `{}` has arms but no branch kind", s.id)));
                }
                BranchKind::Internal | BranchKind::InputData if s.arms.is_empty() || s.next.is_some() => {
                    return Err(HwError::Schema(format!("branch state `{}` needs arms and no `next`", s.id)));
                }
                BranchKind::InputData => match &s.port {
                    Some(p) => expect_port(p, PortDir::In, &s.id)?,
                    None => return Err(HwError::Schema(format!("input-data branch `{}` needs a `port`", s.id))),
                },
                _ => {}
            }
            if !s.guard_valid.is_empty() && s.next.is_none() {
                return Err(HwError::Schema(format!("guard state `{}` needs a `next`", s.id)));
            }
            for succ in s.successors() {
                if !ids.contains(succ) {
                    return Err(HwError::DanglingTransition { from: s.id.clone(), to: succ.to_string() });
                }
            }
        }

        let mut seen = BTreeSet::from([self.reset.as_str()]);
        let mut stack = vec![self.reset.as_str()];
        while let Some(id) = stack.pop() {
            for succ in self.state(id).map(|s| s.successors()).unwrap_or_default() {
                if seen.insert(succ) {
                    stack.push(succ);
                }
            }
        }
        if let Some(orphan) = self.states.iter().find(|s| !seen.contains(s.id.as_str())) {
            return Err(HwError::Unreferenced(orphan.id.clone()));
        }
        Ok(())
    }
}

/// Parse and validate an FSM interchange document.
pub fn parse_fsm(document: &str) -> Result<HwFsm, HwError> {
    let fsm: HwFsm = serde_json::from_str(document).map_err(|e| HwError::Schema(e.to_string()))?;
    fsm.validate()?;
    Ok(fsm)
}
