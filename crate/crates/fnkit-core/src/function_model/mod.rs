//! The platform-agnostic function model: structure, strict JSON parsing, and
//! canonical serialization.
//!
//! A function model describes one platform function — its signal interfaces,
//! scheduling needs, parameters, errors, safety reactions, and watchdog
//! supervision — without committing to any middleware. Parsing is strict:
//! unknown members are rejected so schema drift is caught at the boundary.

mod schema;
mod validate;

pub use schema::emit_function_schema;
pub use validate::validate_function_model;

pub(crate) use schema::function_defs as schema_defs;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canonical::to_canonical_string;
use crate::datatypes::{AsilLevel, Datatype};
use crate::validation::Finding;

/// Consumer interfaces are read by the function, provider interfaces written.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Consumer,
    Provider,
}

/// Reaction to an out-of-range consumer value: substitute the datatype default
/// or the value captured when the function was initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RangeErrorAction {
    Default,
    Init,
}

/// One signal interface of the function, named by its dot-separated path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct InterfaceDatatype {
    pub name: String,
    pub description: String,
    pub role: Role,
    /// Free-text interface classification ("Type" in the source format). Only
    /// checked for non-emptiness.
    #[serde(rename = "Type")]
    pub kind: String,
    pub datatype: Datatype,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range_error_action: Option<RangeErrorAction>,
    /// Staleness limit in milliseconds; requires `timeout_error`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timeout_value: Option<f64>,
    /// Error raised when the timeout expires; must resolve to a declared error.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timeout_error: Option<String>,
    pub asil_info: AsilLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParameterAttribute {
    #[serde(rename = "NA")]
    NA,
    Normal,
    LearningParameter,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct Parameter {
    pub name: String,
    pub description: String,
    pub asil_info: AsilLevel,
    pub datatype: Datatype,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range_error_action: Option<RangeErrorAction>,
    pub attribute: ParameterAttribute,
}

/// Error definition with maturation/reset timing in milliseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct ErrorSpec {
    pub name: String,
    pub datatype: Datatype,
    /// Duration the condition must hold continuously before the error latches.
    pub maturation_time: f64,
    /// Free-text severity description.
    pub severity: String,
    /// Duration the reset condition must hold after latching before the error
    /// clears again.
    pub reset_time: f64,
    pub reset_condition: String,
    pub description: String,
    /// Errors from other functions or the platform that set this error too.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dependencies: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct SafetyReaction {
    pub name: String,
    pub datatype: Datatype,
    /// The reaction is active while any listed error is set.
    pub error_list: Vec<String>,
    pub description: String,
}

/// Watchdog supervision kinds, including combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SupervisionType {
    None,
    Alive,
    Deadline,
    Logical,
    AliveDeadline,
    AliveLogical,
    DeadlineLogical,
    AliveDeadlineLogical,
}

impl SupervisionType {
    pub fn has_alive(self) -> bool {
        matches!(
            self,
            SupervisionType::Alive
                | SupervisionType::AliveDeadline
                | SupervisionType::AliveLogical
                | SupervisionType::AliveDeadlineLogical
        )
    }

    pub fn has_deadline(self) -> bool {
        matches!(
            self,
            SupervisionType::Deadline
                | SupervisionType::AliveDeadline
                | SupervisionType::DeadlineLogical
                | SupervisionType::AliveDeadlineLogical
        )
    }

    pub fn has_logical(self) -> bool {
        matches!(
            self,
            SupervisionType::Logical
                | SupervisionType::AliveLogical
                | SupervisionType::DeadlineLogical
                | SupervisionType::AliveDeadlineLogical
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct AliveLimits {
    pub min_indications: u32,
    pub max_indications: u32,
    /// Window over which indications are counted, in milliseconds.
    pub reference_window: f64,
    pub error_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct DeadlineLimits {
    pub min_duration: f64,
    pub max_duration: f64,
    pub error_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct LogicalCheck {
    pub expected_order: Vec<String>,
    pub error_name: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct WatchdogSpec {
    pub supervision_type: SupervisionType,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alive_limits: Option<AliveLimits>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deadline_limits: Option<DeadlineLimits>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub logical_check: Option<LogicalCheck>,
}

impl WatchdogSpec {
    pub fn none() -> Self {
        WatchdogSpec {
            supervision_type: SupervisionType::None,
            alive_limits: None,
            deadline_limits: None,
            logical_check: None,
        }
    }
}

/// Scheduling requirements of the function's step entry point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct SchedulingInfo {
    /// e.g. "init" or "cyclic".
    pub run_type: String,
    /// Step periodicity in milliseconds.
    pub cycle_time: f64,
    pub description: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_offset: Option<f64>,
    /// Relative priority; lower values execute first on coinciding ticks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub priority: Option<i64>,
    /// Free-text scheduling mechanism hint (pre-emptive / non-pre-emptive).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scheduling_hint: Option<String>,
    /// Mandatory gap in milliseconds before the next step of this function.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub debounce_time: Option<f64>,
    pub implemented_asil: AsilLevel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub previous_runnable: Option<String>,
    pub supervision: WatchdogSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stack_size: Option<u64>,
}

/// Opaque named record for message and method lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct NamedItem {
    pub name: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct AllocationInfo {
    /// Memory requirement of the function in bytes.
    pub required_memory: u64,
}

/// The platform-agnostic description of one function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct FunctionModel {
    pub name: String,
    pub description: String,
    pub interface_data: Vec<InterfaceDatatype>,
    pub scheduling_info: SchedulingInfo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message_list: Option<Vec<NamedItem>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method_list: Option<Vec<NamedItem>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter_list: Option<Vec<Parameter>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error_list: Option<Vec<ErrorSpec>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub safety_reaction_list: Option<Vec<SafetyReaction>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub watchdog: Option<WatchdogSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub allocation_info: Option<AllocationInfo>,
}

impl FunctionModel {
    /// Absent optional lists read as empty.
    pub fn parameters(&self) -> &[Parameter] {
        self.parameter_list.as_deref().unwrap_or(&[])
    }

    pub fn errors(&self) -> &[ErrorSpec] {
        self.error_list.as_deref().unwrap_or(&[])
    }

    pub fn safety_reactions(&self) -> &[SafetyReaction] {
        self.safety_reaction_list.as_deref().unwrap_or(&[])
    }

    /// Effective watchdog: the model-level spec wins over the scheduling
    /// supervision entry when both are present.
    pub fn effective_watchdog(&self) -> &WatchdogSpec {
        self.watchdog
            .as_ref()
            .unwrap_or(&self.scheduling_info.supervision)
    }
}

/// Parse failure: syntax, structural schema violation, or semantic findings.
#[derive(Debug, Error)]
pub enum ParseError {
    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("validation failed with {} error finding(s)", .0.len())]
    Invalid(Vec<Finding>),
}

impl ParseError {
    /// All findings carried by the error, one line each.
    pub fn detail_lines(&self) -> Vec<String> {
        match self {
            ParseError::Invalid(findings) => {
                findings.iter().map(|f| f.to_string()).collect()
            }
            other => vec![other.to_string()],
        }
    }
}

pub(crate) fn parse_strict<T: serde::de::DeserializeOwned>(
    json_text: &str,
) -> Result<T, ParseError> {
    let mut deserializer = serde_json::Deserializer::from_str(json_text);
    match serde_path_to_error::deserialize::<_, T>(&mut deserializer) {
        Ok(value) => Ok(value),
        Err(err) => {
            let inner = err.inner();
            if inner.is_syntax() || inner.is_eof() {
                Err(ParseError::Syntax {
                    line: inner.line(),
                    column: inner.column(),
                    message: inner.to_string(),
                })
            } else {
                let path = err.path().to_string();
                Err(ParseError::Schema {
                    path: if path == "." { String::from("$") } else { path },
                    message: err.inner().to_string(),
                })
            }
        }
    }
}

/// Parse and fully validate a function model from JSON text.
///
/// Unknown members are rejected, and any error-severity finding from
/// [`validate_function_model`] fails the parse.
pub fn parse_function_model(json_text: &str) -> Result<FunctionModel, ParseError> {
    let model: FunctionModel = parse_strict(json_text)?;
    let report = validate_function_model(&model);
    if report.is_valid() {
        Ok(model)
    } else {
        Err(ParseError::Invalid(
            report.errors().cloned().collect::<Vec<_>>(),
        ))
    }
}

/// Canonical JSON for a function model; `parse(serialize(m))` equals `m`.
pub fn serialize_function_model(model: &FunctionModel) -> String {
    to_canonical_string(model).expect("function model serialization cannot fail")
}
