//! Canonical JSON rendering.
//!
//! All model files emitted by the toolchain go through [`to_canonical_string`]:
//! object members sorted lexicographically, no insignificant whitespace, and
//! numbers in their shortest round-trippable decimal form. Two structurally
//! equal documents therefore serialize to identical bytes, which is what the
//! determinism checks (byte-comparing transform and run outputs) rely on.
//!
//! Sorting is done here explicitly instead of relying on the map type behind
//! `serde_json::Value`, so the output is stable regardless of which features
//! downstream crates enable on `serde_json`.

use serde::Serialize;
use serde_json::Value;

/// Serialize any serde value to canonical JSON text.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String, serde_json::Error> {
    let value = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&value, &mut out);
    Ok(out)
}

/// Canonical form of an already-parsed JSON value.
pub fn value_to_canonical_string(value: &Value) -> String {
    let mut out = String::new();
    write_value(value, &mut out);
    out
}

fn write_value(value: &Value, out: &mut String) {
    match value {
        Value::Null => out.push_str("null"),
        Value::Bool(true) => out.push_str("true"),
        Value::Bool(false) => out.push_str("false"),
        // serde_json renders integers via itoa and floats via ryu, which is
        // the shortest representation that parses back to the same value.
        Value::Number(n) => out.push_str(&n.to_string()),
        Value::String(s) => write_string(s, out),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort_unstable();
            out.push('{');
            for (i, key) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_string(key, out);
                out.push(':');
                write_value(&map[key.as_str()], out);
            }
            out.push('}');
        }
    }
}

fn write_string(s: &str, out: &mut String) {
    // serde_json's escaping is already canonical (shortest escapes, \uXXXX
    // only where required).
    out.push_str(&serde_json::to_string(s).expect("string serialization cannot fail"));
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn members_are_sorted_and_whitespace_free() {
        let v = json!({"b": 1, "a": {"z": [1, 2], "y": "x"}});
        assert_eq!(
            value_to_canonical_string(&v),
            r#"{"a":{"y":"x","z":[1,2]},"b":1}"#
        );
    }

    #[test]
    fn floats_use_shortest_roundtrip_form() {
        let v = json!({"d": 0.5, "e": 1.0, "f": 0.1});
        let text = value_to_canonical_string(&v);
        assert_eq!(text, r#"{"d":0.5,"e":1.0,"f":0.1}"#);
    }

    #[test]
    fn canonicalization_is_idempotent() {
        let v = json!({"b": [true, null, 3.25], "a": "ä \" \\"});
        let once = value_to_canonical_string(&v);
        let parsed: Value = serde_json::from_str(&once).unwrap();
        assert_eq!(once, value_to_canonical_string(&parsed));
    }
}
