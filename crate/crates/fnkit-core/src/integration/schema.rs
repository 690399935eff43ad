//! JSON Schema (draft 2020-12) for the integration model.
//!
//! Embeds the full function model definitions because components carry their
//! functions verbatim. Global invariants that need cross-object comparisons
//! (id uniqueness, consumer/provider closure) stay in the semantic validator.

use serde_json::{json, Value};

use crate::canonical::value_to_canonical_string;
use crate::function_model::schema_defs;

/// Emit the canonical JSON Schema text for integration model documents.
pub fn emit_integration_schema() -> String {
    let mut defs = schema_defs();
    let obj = defs.as_object_mut().expect("defs are an object");
    obj.insert("IntegrationModel".into(), integration_model_def());
    obj.insert("IntegrationComponent".into(), component_def());
    obj.insert("ServiceInterface".into(), service_def());
    obj.insert("EventBinding".into(), event_def());
    obj.insert("NamedDatatype".into(), named_datatype_def());
    obj.insert("MetaInformation".into(), meta_def());
    obj.insert("ApplicationInformation".into(), application_def());

    let schema = json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$id": "urn:fnkit:schema:integration-model",
        "title": "Integration model",
        "description": "Platform-bound description of an application: components, executables, and service interfaces.",
        "$ref": "#/$defs/IntegrationModel",
        "$defs": defs,
    });
    value_to_canonical_string(&schema)
}

fn integration_model_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "MetaInformation": { "$ref": "#/$defs/MetaInformation" },
            "ApplicationInformation": { "$ref": "#/$defs/ApplicationInformation" },
            "ComponentList": {
                "type": "array",
                "items": { "$ref": "#/$defs/IntegrationComponent" },
            },
            "DataTypes": {
                "type": "array",
                "items": { "$ref": "#/$defs/NamedDatatype" },
            },
        },
        "required": ["MetaInformation", "ApplicationInformation", "ComponentList"],
        "additionalProperties": false,
    })
}

fn component_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "Name": { "type": "string" },
            "ExecutableName": { "type": "string", "minLength": 1 },
            "FunctionGroupModes": { "type": "array", "items": { "type": "string" } },
            "FunctionList": {
                "type": "array",
                "items": { "$ref": "#/$defs/FunctionModel" },
            },
            "ParameterList": { "type": "array", "items": { "$ref": "#/$defs/Parameter" } },
            "ServiceInterfaceList": {
                "type": "array",
                "items": { "$ref": "#/$defs/ServiceInterface" },
            },
        },
        "required": [
            "Name", "ExecutableName", "FunctionGroupModes",
            "FunctionList", "ServiceInterfaceList"
        ],
        "additionalProperties": false,
    })
}

fn service_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "Name": { "type": "string" },
            "ServiceId": { "type": "integer", "minimum": 0, "maximum": u32::MAX },
            "Direction": { "enum": ["Provided", "Required"] },
            "Events": { "type": "array", "items": { "$ref": "#/$defs/EventBinding" } },
            "Methods": { "type": "array", "items": { "$ref": "#/$defs/NamedItem" } },
        },
        "required": ["Name", "ServiceId", "Direction", "Events"],
        "additionalProperties": false,
    })
}

fn event_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "Name": { "type": "string" },
            "EventId": { "type": "integer", "minimum": 0, "maximum": u32::MAX },
            "Datatype": { "$ref": "#/$defs/Datatype" },
            "SourcePath": { "type": "string" },
        },
        "required": ["Name", "EventId", "Datatype", "SourcePath"],
        "additionalProperties": false,
    })
}

fn named_datatype_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "Name": { "type": "string" },
            "Datatype": { "$ref": "#/$defs/Datatype" },
        },
        "required": ["Name", "Datatype"],
        "additionalProperties": false,
    })
}

fn meta_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "ToolVersion": { "type": "string" },
            "CreatedAt": { "type": "string" },
            "SourceFunctionModelDigests": {
                "type": "array",
                "items": { "type": "string" },
            },
        },
        "required": ["ToolVersion", "CreatedAt", "SourceFunctionModelDigests"],
        "additionalProperties": false,
    })
}

fn application_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "Name": { "type": "string" },
            "Description": { "type": "string" },
        },
        "required": ["Name", "Description"],
        "additionalProperties": false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schema_is_valid_json_and_canonical() {
        let text = emit_integration_schema();
        let value: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(value["$id"], "urn:fnkit:schema:integration-model");
        assert!(value["$defs"]["FunctionModel"].is_object());
        assert_eq!(text, value_to_canonical_string(&value));
    }
}
