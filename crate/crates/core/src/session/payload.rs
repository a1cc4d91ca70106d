use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::LtsError;

/// Fixed-size payload carried by one message.
///
/// Scalar leaves carry an optional bit width: `None` marks an abstract
/// software type that has not been concretized by a [`WidthPolicy`] yet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PayloadType {
    Int { bits: Option<u32> },
    Bool { bits: Option<u32> },
    Str { chars: u32, char_bits: Option<u32> },
    Array { elem: Box<PayloadType>, len: u32 },
}

/// Bit widths assigned to abstract scalar kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidthPolicy {
    pub int_bits: u32,
    pub bool_bits: u32,
    pub char_bits: u32,
}

impl Default for WidthPolicy {
    fn default() -> Self {
        WidthPolicy { int_bits: 32, bool_bits: 1, char_bits: 8 }
    }
}

impl PayloadType {
    pub fn int(bits: u32) -> Self {
        PayloadType::Int { bits: Some(bits) }
    }

    pub fn boolean() -> Self {
        PayloadType::Bool { bits: Some(1) }
    }

    pub fn string(chars: u32) -> Self {
        PayloadType::Str { chars, char_bits: Some(8) }
    }

    pub fn array(elem: PayloadType, len: u32) -> Self {
        PayloadType::Array { elem: Box::new(elem), len }
    }

    /// Total width in bits, or `None` while any leaf is abstract.
    pub fn width(&self) -> Option<u32> {
        match self {
            PayloadType::Int { bits } | PayloadType::Bool { bits } => *bits,
            PayloadType::Str { chars, char_bits } => char_bits.map(|b| b * chars),
            PayloadType::Array { elem, len } => elem.width().map(|w| w * len),
        }
    }

    pub fn is_concrete(&self) -> bool {
        self.width().is_some()
    }

    /// Fill every abstract leaf from `policy`; concrete leaves are kept.
    pub fn concretize(&self, policy: &WidthPolicy) -> PayloadType {
        match self {
            PayloadType::Int { bits } => PayloadType::Int { bits: Some(bits.unwrap_or(policy.int_bits)) },
            PayloadType::Bool { bits } => PayloadType::Bool { bits: Some(bits.unwrap_or(policy.bool_bits)) },
            PayloadType::Str { chars, char_bits } => PayloadType::Str {
                chars: *chars,
                char_bits: Some(char_bits.unwrap_or(policy.char_bits)),
            },
            PayloadType::Array { elem, len } => PayloadType::Array {
                elem: Box::new(elem.concretize(policy)),
                len: *len,
            },
        }
    }

    /// Kind string used by the interchange format, e.g. `int`, `str[11]`, `int[4]`.
    pub fn kind_name(&self) -> String {
        match self {
            PayloadType::Int { .. } => "int".to_string(),
            PayloadType::Bool { .. } => "bool".to_string(),
            PayloadType::Str { chars, .. } => format!("str[{chars}]"),
            PayloadType::Array { elem, len } => format!("{}[{len}]", elem.kind_name()),
        }
    }

    /// Rebuild a concrete payload from a kind string and its total width.
    pub fn from_kind(kind: &str, width: u32) -> Result<PayloadType, LtsError> {
        Self::from_kind_opt(kind, Some(width))
    }

    /// Like [`PayloadType::from_kind`]; a missing width yields abstract leaves.
    pub fn from_kind_opt(kind: &str, width: Option<u32>) -> Result<PayloadType, LtsError> {
        let shape: KindShape = kind.parse()?;
        let Some(width) = width else {
            let mut payload = match shape.base {
                BaseKind::Int => PayloadType::Int { bits: None },
                BaseKind::Bool => PayloadType::Bool { bits: None },
                BaseKind::Str(chars) => PayloadType::Str { chars, char_bits: None },
            };
            for len in shape.dims {
                payload = PayloadType::array(payload, len);
            }
            return Ok(payload);
        };
        let cells = shape.dims.iter().try_fold(1u32, |acc, d| acc.checked_mul(*d));
        let cells = match cells {
            Some(c) if c > 0 => c,
            _ => return Err(LtsError::Payload(format!("bad dimensions in kind `{kind}`"))),
        };
        let per_char = match shape.base {
            BaseKind::Str(chars) => cells * chars,
            _ => cells,
        };
        if width == 0 || width % per_char != 0 {
            return Err(LtsError::Payload(format!("width {width} is not a multiple of kind `{kind}`")));
        }
        let leaf = width / per_char;
        let mut payload = match shape.base {
            BaseKind::Int => PayloadType::Int { bits: Some(leaf) },
            BaseKind::Bool => PayloadType::Bool { bits: Some(leaf) },
            BaseKind::Str(chars) => PayloadType::Str { chars, char_bits: Some(leaf) },
        };
        for len in shape.dims {
            payload = PayloadType::array(payload, len);
        }
        Ok(payload)
    }
}

impl fmt::Display for PayloadType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind_name())
    }
}

enum BaseKind {
    Int,
    Bool,
    Str(u32),
}

struct KindShape {
    base: BaseKind,
    dims: Vec<u32>,
}

impl FromStr for KindShape {
    type Err = LtsError;

    fn from_str(kind: &str) -> Result<Self, Self::Err> {
        let bad = || LtsError::Payload(format!("unknown payload kind `{kind}`"));
        let mut rest = kind.trim();
        let base = if let Some(r) = rest.strip_prefix("int") {
            rest = r;
            BaseKind::Int
        } else if let Some(r) = rest.strip_prefix("bool") {
            rest = r;
            BaseKind::Bool
        } else if let Some(r) = rest.strip_prefix("str[") {
            let close = r.find(']').ok_or_else(bad)?;
            let chars: u32 = r[..close].parse().map_err(|_| bad())?;
            if chars == 0 {
                return Err(bad());
            }
            rest = &r[close + 1..];
            BaseKind::Str(chars)
        } else {
            return Err(bad());
        };
        let mut dims = Vec::new();
        while !rest.is_empty() {
            let r = rest.strip_prefix('[').ok_or_else(bad)?;
            let close = r.find(']').ok_or_else(bad)?;
            dims.push(r[..close].parse().map_err(|_| bad())?);
            rest = &r[close + 1..];
        }
        Ok(KindShape { base, dims })
    }
}
