//! JSON Schema (draft 2020-12) for the function model.
//!
//! The schema mirrors the strict parser: identical member names, identical
//! required sets, `additionalProperties: false` throughout, and the semantic
//! constraints that JSON Schema can express (enumerations, limit signs,
//! presence dependencies, watchdog limit selection, representability bounds
//! for the small integer bases). Cross-field value comparisons such as
//! `Min <= Max` stay in the semantic validator.

use serde_json::{json, Value};

use crate::canonical::value_to_canonical_string;

/// Emit the canonical JSON Schema text for function model documents.
pub fn emit_function_schema() -> String {
    let schema = json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$id": "urn:fnkit:schema:function-model",
        "title": "Function model",
        "description": "Platform-agnostic description of one function. All durations are milliseconds.",
        "$ref": "#/$defs/FunctionModel",
        "$defs": function_defs(),
    });
    value_to_canonical_string(&schema)
}

pub(crate) fn function_defs() -> Value {
    let mut defs = shared_defs();
    let obj = defs.as_object_mut().expect("defs are an object");
    obj.insert("FunctionModel".into(), function_model_def());
    obj.insert("InterfaceDatatype".into(), interface_def());
    obj.insert("Parameter".into(), parameter_def());
    obj.insert("ErrorSpec".into(), error_def());
    obj.insert("SafetyReaction".into(), safety_reaction_def());
    obj.insert("SchedulingInfo".into(), scheduling_def());
    obj.insert("NamedItem".into(), named_item_def());
    obj.insert("AllocationInfo".into(), allocation_def());
    defs
}

/// Definitions shared between the function and integration schemas.
pub(crate) fn shared_defs() -> Value {
    json!({
        "AsilLevel": { "enum": ["QM", "A", "B", "C", "D"] },
        "NumericBase": {
            "enum": [
                "uint8", "uint16", "uint32", "uint64",
                "int8", "int16", "int32", "int64",
                "float32", "float64"
            ]
        },
        "Datatype": {
            "oneOf": [
                variant("Numerical", "#/$defs/NumericalDatatype"),
                variant("Text", "#/$defs/TextDatatype"),
                variant("Boolean", "#/$defs/BooleanDatatype"),
                variant("Composite", "#/$defs/CompositeDatatype"),
                variant("Array", "#/$defs/ArrayDatatype"),
                variant("Enumeration", "#/$defs/EnumerationDatatype"),
                variant("Reference", "#/$defs/TypeReference"),
            ]
        },
        "NumericalDatatype": numerical_def(),
        "TextDatatype": {
            "type": "object",
            "properties": {
                "MaxLength": uint_schema(u32::MAX as u64),
                "Default": { "type": "string" },
            },
            "required": ["MaxLength", "Default"],
            "additionalProperties": false,
        },
        "BooleanDatatype": {
            "type": "object",
            "properties": { "Default": { "type": "boolean" } },
            "required": ["Default"],
            "additionalProperties": false,
        },
        "CompositeDatatype": {
            "type": "object",
            "properties": {
                "Fields": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "properties": {
                            "Name": { "type": "string" },
                            "Datatype": { "$ref": "#/$defs/Datatype" },
                        },
                        "required": ["Name", "Datatype"],
                        "additionalProperties": false,
                    }
                }
            },
            "required": ["Fields"],
            "additionalProperties": false,
        },
        "ArrayDatatype": {
            "type": "object",
            "properties": {
                "Element": { "$ref": "#/$defs/Datatype" },
                "Length": { "type": "integer", "minimum": 1, "maximum": u32::MAX },
            },
            "required": ["Element", "Length"],
            "additionalProperties": false,
        },
        "EnumerationDatatype": {
            "type": "object",
            "properties": {
                "Literals": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "properties": {
                            "Name": { "type": "string" },
                            "Value": { "type": "integer" },
                        },
                        "required": ["Name", "Value"],
                        "additionalProperties": false,
                    }
                }
            },
            "required": ["Literals"],
            "additionalProperties": false,
        },
        "TypeReference": {
            "type": "object",
            "properties": { "Name": { "type": "string" } },
            "required": ["Name"],
            "additionalProperties": false,
        },
        "WatchdogSpec": watchdog_def(),
        "AliveLimits": {
            "type": "object",
            "properties": {
                "MinIndications": uint_schema(u32::MAX as u64),
                "MaxIndications": uint_schema(u32::MAX as u64),
                "ReferenceWindow": { "type": "number" },
                "ErrorName": { "type": "string" },
            },
            "required": ["MinIndications", "MaxIndications", "ReferenceWindow", "ErrorName"],
            "additionalProperties": false,
        },
        "DeadlineLimits": {
            "type": "object",
            "properties": {
                "MinDuration": { "type": "number", "minimum": 0 },
                "MaxDuration": { "type": "number", "minimum": 0 },
                "ErrorName": { "type": "string" },
            },
            "required": ["MinDuration", "MaxDuration", "ErrorName"],
            "additionalProperties": false,
        },
        "LogicalCheck": {
            "type": "object",
            "properties": {
                "ExpectedOrder": {
                    "type": "array",
                    "minItems": 1,
                    "items": { "type": "string" },
                },
                "ErrorName": { "type": "string" },
            },
            "required": ["ExpectedOrder", "ErrorName"],
            "additionalProperties": false,
        },
    })
}

fn variant(tag: &str, target: &str) -> Value {
    json!({
        "type": "object",
        "properties": { tag: { "$ref": target } },
        "required": [tag],
        "additionalProperties": false,
    })
}

fn uint_schema(max: u64) -> Value {
    json!({ "type": "integer", "minimum": 0, "maximum": max })
}

fn numerical_def() -> Value {
    // Representability windows for the small integer bases; the 64-bit bases
    // exceed exact f64 arithmetic and are left to the semantic validator.
    let mut conds = Vec::new();
    for (base, lo, hi) in [
        ("uint8", 0i64, u8::MAX as i64),
        ("uint16", 0, u16::MAX as i64),
        ("uint32", 0, u32::MAX as i64),
        ("int8", i8::MIN as i64, i8::MAX as i64),
        ("int16", i16::MIN as i64, i16::MAX as i64),
        ("int32", i32::MIN as i64, i32::MAX as i64),
    ] {
        let bounded = json!({ "minimum": lo, "maximum": hi, "multipleOf": 1 });
        conds.push(json!({
            "if": {
                "properties": { "Base": { "const": base } },
                "required": ["Base"],
            },
            "then": {
                "properties": { "Min": bounded, "Max": bounded, "Default": bounded },
            }
        }));
    }
    json!({
        "type": "object",
        "properties": {
            "Base": { "$ref": "#/$defs/NumericBase" },
            "Min": { "type": "number" },
            "Max": { "type": "number" },
            "Unit": { "type": "string" },
            "Default": { "type": "number" },
        },
        "required": ["Base", "Min", "Max", "Unit", "Default"],
        "additionalProperties": false,
        "allOf": conds,
    })
}

fn watchdog_def() -> Value {
    // Limits are present iff the corresponding supervision kind is selected.
    let mut conds = Vec::new();
    for (field, selected) in [
        ("AliveLimits", ["Alive", "AliveDeadline", "AliveLogical", "AliveDeadlineLogical"]),
        ("DeadlineLimits", ["Deadline", "AliveDeadline", "DeadlineLogical", "AliveDeadlineLogical"]),
        ("LogicalCheck", ["Logical", "AliveLogical", "DeadlineLogical", "AliveDeadlineLogical"]),
    ] {
        conds.push(json!({
            "if": {
                "properties": { "SupervisionType": { "enum": selected } },
                "required": ["SupervisionType"],
            },
            "then": { "required": [field] },
            "else": { "not": { "required": [field] } },
        }));
    }
    json!({
        "type": "object",
        "properties": {
            "SupervisionType": {
                "enum": [
                    "None", "Alive", "Deadline", "Logical",
                    "AliveDeadline", "AliveLogical", "DeadlineLogical",
                    "AliveDeadlineLogical"
                ]
            },
            "AliveLimits": { "$ref": "#/$defs/AliveLimits" },
            "DeadlineLimits": { "$ref": "#/$defs/DeadlineLimits" },
            "LogicalCheck": { "$ref": "#/$defs/LogicalCheck" },
        },
        "required": ["SupervisionType"],
        "additionalProperties": false,
        "allOf": conds,
    })
}

fn interface_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "Name": { "type": "string" },
            "Description": { "type": "string" },
            "Role": { "enum": ["Consumer", "Provider"] },
            "Type": { "type": "string", "minLength": 1 },
            "Datatype": { "$ref": "#/$defs/Datatype" },
            "RangeErrorAction": { "enum": ["Default", "Init"] },
            "TimeoutValue": { "type": "number", "minimum": 0 },
            "TimeoutError": { "type": "string" },
            "AsilInfo": { "$ref": "#/$defs/AsilLevel" },
        },
        "required": ["Name", "Description", "Role", "Type", "Datatype", "AsilInfo"],
        "additionalProperties": false,
        "dependentRequired": {
            "TimeoutValue": ["TimeoutError"],
            "TimeoutError": ["TimeoutValue"],
        },
    })
}

fn parameter_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "Name": { "type": "string" },
            "Description": { "type": "string" },
            "AsilInfo": { "$ref": "#/$defs/AsilLevel" },
            "Datatype": { "$ref": "#/$defs/Datatype" },
            "RangeErrorAction": { "enum": ["Default", "Init"] },
            "Attribute": { "enum": ["NA", "Normal", "LearningParameter"] },
        },
        "required": ["Name", "Description", "AsilInfo", "Datatype", "Attribute"],
        "additionalProperties": false,
    })
}

fn error_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "Name": { "type": "string" },
            "Datatype": { "$ref": "#/$defs/Datatype" },
            "MaturationTime": { "type": "number", "minimum": 0 },
            "Severity": { "type": "string" },
            "ResetTime": { "type": "number", "minimum": 0 },
            "ResetCondition": { "type": "string" },
            "Description": { "type": "string" },
            "Dependencies": { "type": "array", "items": { "type": "string" } },
        },
        "required": [
            "Name", "Datatype", "MaturationTime", "Severity",
            "ResetTime", "ResetCondition", "Description"
        ],
        "additionalProperties": false,
    })
}

fn safety_reaction_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "Name": { "type": "string" },
            "Datatype": { "$ref": "#/$defs/Datatype" },
            "ErrorList": { "type": "array", "minItems": 1, "items": { "type": "string" } },
            "Description": { "type": "string" },
        },
        "required": ["Name", "Datatype", "ErrorList", "Description"],
        "additionalProperties": false,
    })
}

fn scheduling_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "RunType": { "type": "string" },
            "CycleTime": { "type": "number" },
            "Description": { "type": "string" },
            "InitialOffset": { "type": "number", "minimum": 0 },
            "Priority": { "type": "integer" },
            "SchedulingHint": { "type": "string" },
            "DebounceTime": { "type": "number", "minimum": 0 },
            "ImplementedAsil": { "$ref": "#/$defs/AsilLevel" },
            "PreviousRunnable": { "type": "string" },
            "Supervision": { "$ref": "#/$defs/WatchdogSpec" },
            "StackSize": { "type": "integer", "minimum": 0 },
        },
        "required": ["RunType", "CycleTime", "Description", "ImplementedAsil", "Supervision"],
        "additionalProperties": false,
        "allOf": [{
            "if": {
                "properties": { "RunType": { "const": "cyclic" } },
                "required": ["RunType"],
            },
            "then": {
                "properties": { "CycleTime": { "exclusiveMinimum": 0 } },
            }
        }],
    })
}

fn named_item_def() -> Value {
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

fn allocation_def() -> Value {
    json!({
        "type": "object",
        "properties": { "RequiredMemory": { "type": "integer", "minimum": 0 } },
        "required": ["RequiredMemory"],
        "additionalProperties": false,
    })
}

fn function_model_def() -> Value {
    json!({
        "type": "object",
        "properties": {
            "Name": { "type": "string", "minLength": 1 },
            "Description": { "type": "string" },
            "InterfaceData": {
                "type": "array",
                "items": { "$ref": "#/$defs/InterfaceDatatype" },
            },
            "SchedulingInfo": { "$ref": "#/$defs/SchedulingInfo" },
            "MessageList": { "type": "array", "items": { "$ref": "#/$defs/NamedItem" } },
            "MethodList": { "type": "array", "items": { "$ref": "#/$defs/NamedItem" } },
            "ParameterList": { "type": "array", "items": { "$ref": "#/$defs/Parameter" } },
            "ErrorList": { "type": "array", "items": { "$ref": "#/$defs/ErrorSpec" } },
            "SafetyReactionList": {
                "type": "array",
                "items": { "$ref": "#/$defs/SafetyReaction" },
            },
            "Watchdog": { "$ref": "#/$defs/WatchdogSpec" },
            "AllocationInfo": { "$ref": "#/$defs/AllocationInfo" },
        },
        "required": ["Name", "Description", "InterfaceData", "SchedulingInfo"],
        "additionalProperties": false,
    })
}
