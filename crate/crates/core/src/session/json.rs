use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Action, Label, LtsError, PayloadType, SessionLts, Transition};

/// JSON interchange form of a [`SessionLts`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LtsDocument {
    pub states: Vec<String>,
    pub initial: String,
    pub terminals: Vec<String>,
    pub transitions: Vec<TransitionDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionDoc {
    pub from: String,
    pub to: String,
    pub action: String,
    pub message: String,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<u32>,
}

impl LtsDocument {
    pub fn from_lts(lts: &SessionLts) -> Self {
        let name = |s: usize| format!("s{s}");
        LtsDocument {
            states: (0..lts.num_states()).map(name).collect(),
            initial: name(lts.initial()),
            terminals: lts.terminals().into_iter().map(name).collect(),
            transitions: lts
                .transitions()
                .iter()
                .map(|t| TransitionDoc {
                    from: name(t.from),
                    to: name(t.to),
                    action: t.label.action.symbol().to_string(),
                    message: t.label.message.clone(),
                    kind: t.label.payload.kind_name(),
                    width: t.label.width(),
                })
                .collect(),
        }
    }

    pub fn to_lts(&self) -> Result<SessionLts, LtsError> {
        let mut index = BTreeMap::new();
        for (i, s) in self.states.iter().enumerate() {
            if index.insert(s.as_str(), i).is_some() {
                return Err(LtsError::Document(format!("duplicate state `{s}`")));
            }
        }
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| LtsError::UnknownStateName(s.to_string()));
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            let action = Action::from_symbol(&t.action)
                .ok_or_else(|| LtsError::Document(format!("unknown action `{}`", t.action)))?;
            let payload = PayloadType::from_kind_opt(&t.kind, t.width)?;
            transitions.push(Transition {
                from: lookup(&t.from)?,
                label: Label::new(action, t.message.clone(), payload),
                to: lookup(&t.to)?,
            });
        }
        let terminals = self.terminals.iter().map(|s| lookup(s)).collect::<Result<Vec<_>, _>>()?;
        SessionLts::from_parts(self.states.len(), lookup(&self.initial)?, &terminals, transitions)
    }
}

impl SessionLts {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&LtsDocument::from_lts(self)).expect("LTS documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<SessionLts, LtsError> {
        let doc: LtsDocument = serde_json::from_str(text).map_err(|e| LtsError::Document(e.to_string()))?;
        doc.to_lts()
    }
}

impl Serialize for SessionLts {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        LtsDocument::from_lts(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SessionLts {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = LtsDocument::deserialize(deserializer)?;
        doc.to_lts().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_interchange_document() {
        let text = r#"{
            "states": ["a", "b", "c"],
            "initial": "a",
            "terminals": ["c"],
            "transitions": [
                {"from": "a", "to": "b", "action": "?", "message": "A", "kind": "int", "width": 16},
                {"from": "b", "to": "c", "action": "!", "message": "ack", "kind": "bool", "width": 1}
            ]
        }"#;
        let lts = SessionLts::from_json(text).unwrap();
        assert_eq!(lts.to_string(), "?A(16).!ack(1).end");
        assert_eq!(SessionLts::from_json(&lts.to_json()).unwrap(), lts);
    }

    #[test]
    fn rejects_unknown_action_and_states() {
        let bad_action = r#"{"states":["a","b"],"initial":"a","terminals":["b"],
            "transitions":[{"from":"a","to":"b","action":"~","message":"A","kind":"int","width":8}]}"#;
        assert!(matches!(SessionLts::from_json(bad_action), Err(LtsError::Document(_))));
        let bad_state = r#"{"states":["a"],"initial":"a","terminals":[],
            "transitions":[{"from":"a","to":"z","action":"!","message":"A","kind":"int","width":8}]}"#;
        assert!(matches!(SessionLts::from_json(bad_state), Err(LtsError::UnknownStateName(_))));
    }
}
