//! Lifecycle nodes: managed execution units binding an adapter manifest to a
//! platform function.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::Value;

use crate::adapter::AdapterManifest;

use super::errors::{ms_to_us, ErrorBank};

/// Platform function contract: `init`/`step`/`terminate` entry points plus
/// the buffer accessors that move values between adapter buffers and the
/// function's global variables. `step` must have no effect before `init`;
/// `terminate` after `init` is always legal.
pub trait PlatformFunction: Send {
    fn init(&mut self);
    fn step(&mut self) -> Result<(), String>;
    fn terminate(&mut self);
    /// Copy adapter buffer values (keyed by buffer name) into the function's
    /// input globals.
    fn set_external_inputs(&mut self, inputs: &BTreeMap<String, Value>);
    /// Read the function's output globals, keyed by buffer name.
    fn get_external_outputs(&self) -> BTreeMap<String, Value>;
}

/// Lifecycle states: four primary states plus the transition states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum LifecycleState {
    Unconfigured,
    Inactive,
    Active,
    Finalized,
    Configuring,
    CleaningUp,
    Activating,
    Deactivating,
    ShuttingDown,
    ErrorProcessing,
}

impl fmt::Display for LifecycleState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Externally triggerable transitions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    Configure,
    CleanUp,
    Activate,
    Deactivate,
    Shutdown,
}

impl Transition {
    pub const ALL: [Transition; 5] = [
        Transition::Configure,
        Transition::CleanUp,
        Transition::Activate,
        Transition::Deactivate,
        Transition::Shutdown,
    ];

    /// The transition state traversed while this transition executes.
    pub fn via(self) -> LifecycleState {
        match self {
            Transition::Configure => LifecycleState::Configuring,
            Transition::CleanUp => LifecycleState::CleaningUp,
            Transition::Activate => LifecycleState::Activating,
            Transition::Deactivate => LifecycleState::Deactivating,
            Transition::Shutdown => LifecycleState::ShuttingDown,
        }
    }

    /// Target state when the transition is legal from `from`.
    pub fn target(self, from: LifecycleState) -> Option<LifecycleState> {
        use LifecycleState::*;
        match (from, self) {
            (Unconfigured, Transition::Configure) => Some(Inactive),
            (Inactive, Transition::Activate) => Some(Active),
            (Active, Transition::Deactivate) => Some(Inactive),
            (Inactive, Transition::CleanUp) => Some(Unconfigured),
            (Unconfigured | Inactive | Active, Transition::Shutdown) => Some(Finalized),
            _ => None,
        }
    }
}

/// A node executing one adapter manifest with its platform function.
pub struct LifecycleNode {
    pub(super) manifest: AdapterManifest,
    pub(super) function: Box<dyn PlatformFunction>,
    pub(super) state: LifecycleState,
    pub(super) error_bank: ErrorBank,
    pub(super) safety_status: BTreeMap<String, bool>,
    /// Buffer values captured when the function was initialized; used by the
    /// `Init` range-error action.
    pub(super) init_snapshot: BTreeMap<String, Value>,
    pub(super) last_conditions: BTreeMap<String, bool>,
    pub(super) last_step_end_us: Option<u64>,
    pub(super) debounce_skips: u64,
    pub(super) init_calls: u64,
    pub(super) terminate_calls: u64,
    pub(super) next_tick_index: u64,
}

impl LifecycleNode {
    pub(super) fn new(manifest: AdapterManifest, function: Box<dyn PlatformFunction>) -> Self {
        let error_bank = ErrorBank::new(&manifest.errors);
        let safety_status = manifest
            .safety_reactions
            .iter()
            .map(|r| (r.name.clone(), false))
            .collect();
        LifecycleNode {
            manifest,
            function,
            state: LifecycleState::Unconfigured,
            error_bank,
            safety_status,
            init_snapshot: BTreeMap::new(),
            last_conditions: BTreeMap::new(),
            last_step_end_us: None,
            debounce_skips: 0,
            init_calls: 0,
            terminate_calls: 0,
            next_tick_index: 0,
        }
    }

    pub fn name(&self) -> &str {
        &self.manifest.component_name
    }

    pub fn state(&self) -> LifecycleState {
        self.state
    }

    pub fn manifest(&self) -> &AdapterManifest {
        &self.manifest
    }

    pub fn init_calls(&self) -> u64 {
        self.init_calls
    }

    pub fn terminate_calls(&self) -> u64 {
        self.terminate_calls
    }

    pub fn debounce_skips(&self) -> u64 {
        self.debounce_skips
    }

    /// Error statuses after the most recent evaluation.
    pub fn error_status(&self, name: &str) -> Option<super::errors::ErrorStatus> {
        self.error_bank.status(name)
    }

    /// Conditions sampled at the most recent tick (timeouts, range checks).
    pub fn last_conditions(&self) -> &BTreeMap<String, bool> {
        &self.last_conditions
    }

    pub(super) fn cycle_us(&self) -> u64 {
        ms_to_us(self.manifest.cycle_time)
    }

    pub(super) fn offset_us(&self) -> u64 {
        ms_to_us(self.manifest.initial_offset)
    }

    pub(super) fn debounce_us(&self) -> Option<u64> {
        self.manifest.debounce_time.map(ms_to_us)
    }

    /// Absolute time of the next scheduled tick, if the node is cyclic.
    pub(super) fn next_tick_us(&self) -> Option<u64> {
        let cycle = self.cycle_us();
        if cycle == 0 {
            return None;
        }
        Some(self.offset_us() + self.next_tick_index * cycle)
    }
}

impl fmt::Debug for LifecycleNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LifecycleNode")
            .field("name", &self.manifest.component_name)
            .field("state", &self.state)
            .finish()
    }
}
