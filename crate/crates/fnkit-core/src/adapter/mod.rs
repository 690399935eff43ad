//! Function-adapter generation.
//!
//! For one component of an integration model this produces two coupled
//! artifacts: rendered adapter source (the code a real middleware would
//! compile, with manual-slot regions for the parts that stay hand-written)
//! and a machine-readable manifest that the runtime simulator executes. The
//! manifest always mirrors the source.

mod generate;
mod loc;
mod template;

pub use generate::{
    extract_io_markers, generate_adapter, merge_manual_slots, write_artifact, GenerateError,
    TemplateSet, MANUAL_SLOT_BEGIN, MANUAL_SLOT_END,
};
pub use loc::{loc_report, LocReport};
pub use template::{render_template, TemplateContext, TemplateError, TemplateValue};

use serde::{Deserialize, Serialize};

use crate::canonical::to_canonical_string;
use crate::datatypes::Datatype;
use crate::function_model::{
    parse_strict, ErrorSpec, ParseError, RangeErrorAction, SafetyReaction, WatchdogSpec,
};

/// Reference to one event of the integration model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct EventRef {
    pub service: String,
    pub event: String,
    /// Bus topic key; identical to the interface path the event carries.
    pub source_path: String,
    pub datatype: Datatype,
}

/// Range supervision attached to a subscription.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct RangePolicy {
    pub action: RangeErrorAction,
    pub min: f64,
    pub max: f64,
    pub default: f64,
    /// Declared error raised while the value is out of range, when the
    /// function declares one under the `<Function>_<Leaf>Range_ErrorSts`
    /// convention.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_name: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct Subscription {
    pub event: EventRef,
    pub buffer_name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timeout_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timeout_error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range_policy: Option<RangePolicy>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct Publication {
    pub event: EventRef,
    pub buffer_name: String,
}

/// Binding of lifecycle phases to platform-function entry points. Fixed by
/// contract; [`LifecycleBindings::standard`] is the only valid value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct LifecycleBindings {
    pub configuring: String,
    pub shutting_down: String,
    pub active_cycle: Vec<String>,
}

impl LifecycleBindings {
    pub fn standard() -> Self {
        LifecycleBindings {
            configuring: "init".into(),
            shutting_down: "terminate".into(),
            active_cycle: vec![
                "setExternalInputs".into(),
                "step".into(),
                "getExternalOutputs".into(),
            ],
        }
    }
}

/// Everything the runtime needs to execute one component's adapter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct AdapterManifest {
    pub component_name: String,
    pub executable_name: String,
    /// The platform function embedded in this adapter.
    pub function_name: String,
    pub cycle_time: f64,
    pub initial_offset: f64,
    pub priority: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub debounce_time: Option<f64>,
    pub subscriptions: Vec<Subscription>,
    pub publications: Vec<Publication>,
    pub lifecycle_bindings: LifecycleBindings,
    pub watchdog: WatchdogSpec,
    pub errors: Vec<ErrorSpec>,
    pub safety_reactions: Vec<SafetyReaction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FileOrigin {
    Generated,
    ManualSlot,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArtifactFile {
    pub path: String,
    pub text: String,
    pub origin: FileOrigin,
}

/// Output of [`generate_adapter`]: source files plus the mirrored manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedArtifact {
    pub files: Vec<ArtifactFile>,
    pub manifest: AdapterManifest,
}

/// Parse and check an adapter manifest from JSON text.
pub fn parse_manifest(json_text: &str) -> Result<AdapterManifest, ParseError> {
    let manifest: AdapterManifest = parse_strict(json_text)?;
    if manifest.lifecycle_bindings != LifecycleBindings::standard() {
        return Err(ParseError::Schema {
            path: "LifecycleBindings".into(),
            message: "lifecycle bindings deviate from the init/step/terminate contract".into(),
        });
    }
    Ok(manifest)
}

/// Canonical JSON for an adapter manifest.
pub fn serialize_manifest(manifest: &AdapterManifest) -> String {
    to_canonical_string(manifest).expect("manifest serialization cannot fail")
}

/// Local buffer variable name for a signal path:
/// `Vehicle.ADAS.CruiseControl.SpeedSet` becomes
/// `vehicle_adas_cruise_control_speed_set`.
pub fn buffer_name(path: &str) -> String {
    let mut out = String::with_capacity(path.len() + 8);
    for segment in path.split('.') {
        if !out.is_empty() {
            out.push('_');
        }
        out.push_str(&snake_case(segment));
    }
    out
}

/// Acronym-aware camel-to-snake conversion: `MpcAccelerationRequest` becomes
/// `mpc_acceleration_request`, `ADAS` stays one word.
pub fn snake_case(text: &str) -> String {
    let chars: Vec<char> = text.chars().collect();
    let mut out = String::with_capacity(text.len() + 4);
    for (i, &c) in chars.iter().enumerate() {
        if c.is_ascii_uppercase() {
            let prev_lower = i > 0 && (chars[i - 1].is_ascii_lowercase() || chars[i - 1].is_ascii_digit());
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_ascii_lowercase());
            if i > 0 && (prev_lower || (next_lower && chars[i - 1] != '_')) && !out.ends_with('_') {
                out.push('_');
            }
            out.push(c.to_ascii_lowercase());
        } else {
            out.push(c);
        }
    }
    out
}
