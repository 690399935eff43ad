//! The platform-bound integration model.
//!
//! An integration model binds a set of function models to components,
//! executables, and service interfaces for one target platform. It is
//! produced by [`transform`] and consumed by adapter generation.

mod schema;
mod transform;
mod validate;

pub use schema::emit_integration_schema;
pub use transform::{transform, TransformError};
pub use validate::validate_integration;

use serde::{Deserialize, Serialize};

use crate::canonical::to_canonical_string;
use crate::datatypes::Datatype;
use crate::function_model::{parse_strict, FunctionModel, NamedItem, Parameter, ParseError};

/// Wire formats the simulated platform can speak.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SerializationKind {
    #[serde(rename = "binary-le")]
    BinaryLe,
    #[serde(rename = "json-lines")]
    JsonLines,
}

/// Everything the transformation needs to know about the target platform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct PlatformDescriptor {
    pub platform_name: String,
    pub serialization: SerializationKind,
    /// Interfaces are grouped into services on this many leading path
    /// segments (at least one trailing segment is always left for the event).
    pub service_grouping_depth: u32,
    /// First id handed out; services and events each count up from here.
    pub id_base: u32,
    pub transport_label: String,
}

/// One function-to-component assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct TopologyAssignment {
    pub function: String,
    pub component: String,
    pub executable: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct ApplicationInformation {
    pub name: String,
    pub description: String,
}

/// Application composition: which function lands in which component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct ComponentTopology {
    pub application: ApplicationInformation,
    pub assignments: Vec<TopologyAssignment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Direction {
    Provided,
    Required,
}

/// One event of a service interface, traced back to the signal it carries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct EventBinding {
    pub name: String,
    pub event_id: u32,
    pub datatype: Datatype,
    /// The interface path this event carries; doubles as the bus topic key.
    pub source_path: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct ServiceInterface {
    pub name: String,
    pub service_id: u32,
    pub direction: Direction,
    pub events: Vec<EventBinding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub methods: Option<Vec<NamedItem>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct IntegrationComponent {
    pub name: String,
    pub executable_name: String,
    pub function_group_modes: Vec<String>,
    pub function_list: Vec<FunctionModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameter_list: Option<Vec<Parameter>>,
    pub service_interface_list: Vec<ServiceInterface>,
}

/// Datatype declared at model scope, referenced from events.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct NamedDatatype {
    pub name: String,
    pub datatype: Datatype,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct MetaInformation {
    pub tool_version: String,
    /// RFC 3339 creation stamp. Derived from `SOURCE_DATE_EPOCH` when set so
    /// repeated transformations stay byte-identical.
    pub created_at: String,
    /// SHA-256 of the canonical serialization of each source function model,
    /// in function-name order.
    pub source_function_model_digests: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct IntegrationModel {
    pub meta_information: MetaInformation,
    pub application_information: ApplicationInformation,
    pub component_list: Vec<IntegrationComponent>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub data_types: Vec<NamedDatatype>,
}

/// Entity counts used by the integration-efficiency reporting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub struct EntityCounts {
    pub executables: usize,
    pub services: usize,
    pub events: usize,
}

impl std::fmt::Display for EntityCounts {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} executables, {} services, {} events",
            self.executables, self.services, self.events
        )
    }
}

/// Count unique executables plus total services and events.
pub fn count_entities(model: &IntegrationModel) -> EntityCounts {
    let executables: std::collections::BTreeSet<&str> = model
        .component_list
        .iter()
        .map(|c| c.executable_name.as_str())
        .collect();
    let services = model
        .component_list
        .iter()
        .map(|c| c.service_interface_list.len())
        .sum();
    let events = model
        .component_list
        .iter()
        .flat_map(|c| &c.service_interface_list)
        .map(|s| s.events.len())
        .sum();
    EntityCounts {
        executables: executables.len(),
        services,
        events,
    }
}

/// Parse and fully validate an integration model from JSON text.
pub fn parse_integration_model(json_text: &str) -> Result<IntegrationModel, ParseError> {
    let model: IntegrationModel = parse_strict(json_text)?;
    let report = validate_integration(&model);
    if report.is_valid() {
        Ok(model)
    } else {
        Err(ParseError::Invalid(report.errors().cloned().collect()))
    }
}

/// Canonical JSON for an integration model.
pub fn serialize_integration_model(model: &IntegrationModel) -> String {
    to_canonical_string(model).expect("integration model serialization cannot fail")
}

/// Parse a platform descriptor file.
pub fn parse_platform_descriptor(json_text: &str) -> Result<PlatformDescriptor, ParseError> {
    let descriptor: PlatformDescriptor = parse_strict(json_text)?;
    if descriptor.service_grouping_depth < 1 {
        return Err(ParseError::Schema {
            path: "ServiceGroupingDepth".into(),
            message: "grouping depth must be at least 1".into(),
        });
    }
    Ok(descriptor)
}

/// Parse a component topology file.
pub fn parse_topology(json_text: &str) -> Result<ComponentTopology, ParseError> {
    parse_strict(json_text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_model_counts_zero() {
        let model = IntegrationModel {
            meta_information: MetaInformation {
                tool_version: "0.1.0".into(),
                created_at: "1970-01-01T00:00:00Z".into(),
                source_function_model_digests: vec![],
            },
            application_information: ApplicationInformation {
                name: "Empty".into(),
                description: String::new(),
            },
            component_list: vec![],
            data_types: vec![],
        };
        assert_eq!(
            count_entities(&model),
            EntityCounts { executables: 0, services: 0, events: 0 }
        );
    }

    #[test]
    fn descriptor_rejects_zero_grouping_depth() {
        let text = r#"{"PlatformName": "sim", "Serialization": "json-lines",
                       "ServiceGroupingDepth": 0, "IdBase": 1000,
                       "TransportLabel": "simbus"}"#;
        assert!(parse_platform_descriptor(text).is_err());
    }
}
