//! Naming conventions for interfaces outside the signal tree.
//!
//! Errors, safety reactions, modes, and the scheduling entry points carry
//! fixed suffixes, e.g. `WheelSpeedCalculation_RangeError_ErrorSts` or
//! `WhlSpdRLLInvalid_SftyCondSts`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::path::is_identifier;

/// The interface categories with dedicated naming patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NameKind {
    Error,
    SafetyReaction,
    ModeIn,
    ModeOut,
    Init,
    Step,
    Terminate,
}

impl NameKind {
    pub const ALL: [NameKind; 7] = [
        NameKind::Error,
        NameKind::SafetyReaction,
        NameKind::ModeIn,
        NameKind::ModeOut,
        NameKind::Init,
        NameKind::Step,
        NameKind::Terminate,
    ];

    /// Number of name components the pattern consumes.
    pub fn arity(self) -> usize {
        match self {
            NameKind::Error => 2,
            _ => 1,
        }
    }

    fn suffix(self) -> &'static str {
        match self {
            NameKind::Error => "_ErrorSts",
            NameKind::SafetyReaction => "_SftyCondSts",
            NameKind::ModeIn => "_Mode_In",
            NameKind::ModeOut => "_Mode_Out",
            NameKind::Init => "_Init",
            NameKind::Step => "_Step",
            NameKind::Terminate => "_Terminate",
        }
    }

    /// Whether a rendered name matches this kind's pattern.
    pub fn matches(self, rendered: &str) -> bool {
        let Some(stem) = rendered.strip_suffix(self.suffix()) else {
            return false;
        };
        let parts: Vec<&str> = stem.split('_').collect();
        parts.len() == self.arity() && parts.iter().all(|p| is_identifier(p))
    }
}

impl fmt::Display for NameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NamingError {
    #[error("{kind} names take {expected} component(s), got {actual}")]
    WrongArity {
        kind: NameKind,
        expected: usize,
        actual: usize,
    },
    #[error("illegal identifier {0:?} in name components")]
    IllegalIdentifier(String),
}

/// A rendered non-signal interface name together with its derivation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedInterfaceName {
    pub kind: NameKind,
    pub parts: Vec<String>,
    pub rendered: String,
}

/// Render an interface name from its components per the kind's convention.
pub fn derive_interface_name(
    kind: NameKind,
    parts: &[&str],
) -> Result<DerivedInterfaceName, NamingError> {
    if parts.len() != kind.arity() {
        return Err(NamingError::WrongArity {
            kind,
            expected: kind.arity(),
            actual: parts.len(),
        });
    }
    for part in parts {
        if !is_identifier(part) {
            return Err(NamingError::IllegalIdentifier((*part).to_string()));
        }
    }
    let rendered = format!("{}{}", parts.join("_"), kind.suffix());
    Ok(DerivedInterfaceName {
        kind,
        parts: parts.iter().map(|p| (*p).to_string()).collect(),
        rendered,
    })
}
