//! Error maturation and reset state machines.
//!
//! Each declared error runs a four-state machine over a sampled boolean
//! condition: `Clear -> Maturing` when the condition turns true, `Maturing ->
//! Set` once it has held for the maturation time (inclusive), `Set ->
//! Resetting` when it drops, `Resetting -> Clear` once it has stayed false
//! for the reset time (inclusive). A dependency that is Set forces the error
//! Set in the same evaluation pass, one hop per pass.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::function_model::ErrorSpec;

use super::SimError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorStatus {
    Clear,
    Maturing,
    Set,
    Resetting,
}

impl fmt::Display for ErrorStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorState {
    pub status: ErrorStatus,
    /// Start of the current continuous true phase (Maturing).
    pub condition_since: Option<u64>,
    /// Start of the current continuous false phase (Resetting).
    pub reset_since: Option<u64>,
}

impl ErrorState {
    fn clear() -> Self {
        ErrorState {
            status: ErrorStatus::Clear,
            condition_since: None,
            reset_since: None,
        }
    }
}

#[derive(Debug, Clone)]
struct ErrorRule {
    maturation_us: u64,
    reset_us: u64,
    dependencies: Vec<String>,
}

/// The error machines of one node.
#[derive(Debug, Clone, Default)]
pub struct ErrorBank {
    rules: BTreeMap<String, ErrorRule>,
    states: BTreeMap<String, ErrorState>,
}

pub(crate) fn ms_to_us(ms: f64) -> u64 {
    (ms * 1000.0).round().max(0.0) as u64
}

impl ErrorBank {
    pub fn new(specs: &[ErrorSpec]) -> Self {
        let mut bank = ErrorBank::default();
        for spec in specs {
            bank.rules.insert(
                spec.name.clone(),
                ErrorRule {
                    maturation_us: ms_to_us(spec.maturation_time),
                    reset_us: ms_to_us(spec.reset_time),
                    dependencies: spec.dependencies.clone().unwrap_or_default(),
                },
            );
            bank.states.insert(spec.name.clone(), ErrorState::clear());
        }
        bank
    }

    pub fn status(&self, name: &str) -> Option<ErrorStatus> {
        self.states.get(name).map(|s| s.status)
    }

    pub fn statuses(&self) -> BTreeMap<String, ErrorStatus> {
        self.states
            .iter()
            .map(|(name, state)| (name.clone(), state.status))
            .collect()
    }

    pub fn reset_all(&mut self) {
        for state in self.states.values_mut() {
            *state = ErrorState::clear();
        }
    }

    /// One evaluation pass at time `t_us` against sampled conditions.
    /// Conditions are assumed constant since the previous pass; an error not
    /// named in the map has a false condition. Returns the names whose status
    /// changed, in sorted order.
    pub fn evaluate(
        &mut self,
        conditions: &BTreeMap<String, bool>,
        t_us: u64,
    ) -> Result<Vec<String>, SimError> {
        for name in conditions.keys() {
            if !self.rules.contains_key(name) {
                return Err(SimError::UnknownError(name.clone()));
            }
        }

        let before: BTreeMap<String, ErrorStatus> = self.statuses();

        // Dependencies that were Set before this pass hold their dependents.
        let names: Vec<String> = self.rules.keys().cloned().collect();
        for name in &names {
            let rule = self.rules.get(name).expect("rule exists").clone();
            let own = conditions.get(name).copied().unwrap_or(false);
            let dep_hold = rule
                .dependencies
                .iter()
                .any(|dep| before.get(dep).copied() == Some(ErrorStatus::Set));
            let effective = own || dep_hold;
            let state = self.states.get_mut(name).expect("state exists");
            step_machine(state, effective, &rule, t_us);
        }

        // One-hop propagation: an error whose dependency became Set in this
        // pass is forced Set at the same instant, skipping maturation.
        let after_own: BTreeMap<String, ErrorStatus> = self.statuses();
        for name in &names {
            let rule = &self.rules[name];
            if after_own[name] != ErrorStatus::Set
                && rule
                    .dependencies
                    .iter()
                    .any(|dep| after_own.get(dep).copied() == Some(ErrorStatus::Set))
            {
                let state = self.states.get_mut(name).expect("state exists");
                state.status = ErrorStatus::Set;
                state.condition_since = Some(t_us);
                state.reset_since = None;
            }
        }

        Ok(self
            .states
            .iter()
            .filter(|(name, state)| before[*name] != state.status)
            .map(|(name, _)| name.clone())
            .collect())
    }
}

fn step_machine(state: &mut ErrorState, condition: bool, rule: &ErrorRule, t_us: u64) {
    // Edge handling first, then inclusive threshold checks.
    match state.status {
        ErrorStatus::Clear => {
            if condition {
                state.status = ErrorStatus::Maturing;
                state.condition_since = Some(t_us);
                state.reset_since = None;
            }
        }
        ErrorStatus::Maturing => {
            if !condition {
                *state = ErrorState::clear();
            }
        }
        ErrorStatus::Set => {
            if !condition {
                state.status = ErrorStatus::Resetting;
                state.reset_since = Some(t_us);
            }
        }
        ErrorStatus::Resetting => {
            if condition {
                state.status = ErrorStatus::Set;
                state.reset_since = None;
            }
        }
    }
    if state.status == ErrorStatus::Maturing {
        let since = state.condition_since.expect("maturing has a start");
        if t_us - since >= rule.maturation_us {
            state.status = ErrorStatus::Set;
        }
    }
    if state.status == ErrorStatus::Resetting {
        let since = state.reset_since.expect("resetting has a start");
        if t_us - since >= rule.reset_us {
            *state = ErrorState::clear();
        }
    }
}
