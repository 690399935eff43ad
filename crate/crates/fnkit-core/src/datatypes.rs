//! Datatype vocabulary shared by function and integration models.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Automotive Safety Integrity Level. Ordering `QM < A < B < C < D` is total.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum AsilLevel {
    QM,
    A,
    B,
    C,
    D,
}

impl AsilLevel {
    pub const ALL: [AsilLevel; 5] = [
        AsilLevel::QM,
        AsilLevel::A,
        AsilLevel::B,
        AsilLevel::C,
        AsilLevel::D,
    ];
}

impl fmt::Display for AsilLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AsilLevel::QM => "QM",
            AsilLevel::A => "A",
            AsilLevel::B => "B",
            AsilLevel::C => "C",
            AsilLevel::D => "D",
        };
        write!(f, "{s}")
    }
}

/// Scalar numeric bases supported for signal values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NumericBase {
    Uint8,
    Uint16,
    Uint32,
    Uint64,
    Int8,
    Int16,
    Int32,
    Int64,
    Float32,
    Float64,
}

impl NumericBase {
    pub const ALL: [NumericBase; 10] = [
        NumericBase::Uint8,
        NumericBase::Uint16,
        NumericBase::Uint32,
        NumericBase::Uint64,
        NumericBase::Int8,
        NumericBase::Int16,
        NumericBase::Int32,
        NumericBase::Int64,
        NumericBase::Float32,
        NumericBase::Float64,
    ];

    pub fn is_integer(self) -> bool {
        !matches!(self, NumericBase::Float32 | NumericBase::Float64)
    }

    /// Representable value range in engineering units. `None` bound means the
    /// base covers the whole f64 range on that side.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            NumericBase::Uint8 => (0.0, u8::MAX as f64),
            NumericBase::Uint16 => (0.0, u16::MAX as f64),
            NumericBase::Uint32 => (0.0, u32::MAX as f64),
            NumericBase::Uint64 => (0.0, u64::MAX as f64),
            NumericBase::Int8 => (i8::MIN as f64, i8::MAX as f64),
            NumericBase::Int16 => (i16::MIN as f64, i16::MAX as f64),
            NumericBase::Int32 => (i32::MIN as f64, i32::MAX as f64),
            NumericBase::Int64 => (i64::MIN as f64, i64::MAX as f64),
            NumericBase::Float32 => (f32::MIN as f64, f32::MAX as f64),
            NumericBase::Float64 => (f64::MIN, f64::MAX),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            NumericBase::Uint8 => "uint8",
            NumericBase::Uint16 => "uint16",
            NumericBase::Uint32 => "uint32",
            NumericBase::Uint64 => "uint64",
            NumericBase::Int8 => "int8",
            NumericBase::Int16 => "int16",
            NumericBase::Int32 => "int32",
            NumericBase::Int64 => "int64",
            NumericBase::Float32 => "float32",
            NumericBase::Float64 => "float64",
        }
    }

    /// Checks that a value is representable: finite, inside the base's range,
    /// and integral for integer bases.
    pub fn representable(self, value: f64) -> bool {
        if !value.is_finite() {
            return false;
        }
        let (lo, hi) = self.bounds();
        if value < lo || value > hi {
            return false;
        }
        !(self.is_integer() && value.fract() != 0.0)
    }
}

impl fmt::Display for NumericBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

/// Numeric signal datatype with engineering range and default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct NumericalDatatype {
    pub base: NumericBase,
    pub min: f64,
    pub max: f64,
    pub unit: String,
    pub default: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct TextDatatype {
    pub max_length: u32,
    pub default: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct BooleanDatatype {
    pub default: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct CompositeField {
    pub name: String,
    pub datatype: Datatype,
}

/// Ordered record of named fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct CompositeDatatype {
    pub fields: Vec<CompositeField>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct ArrayDatatype {
    pub element: Box<Datatype>,
    pub length: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct EnumLiteral {
    pub name: String,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct EnumerationDatatype {
    pub literals: Vec<EnumLiteral>,
}

/// Reference to a datatype declared elsewhere in the enclosing model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct TypeReference {
    pub name: String,
}

/// The datatype union. Externally tagged in JSON, e.g.
/// `{"Numerical": {"Base": "float32", ...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Datatype {
    Numerical(NumericalDatatype),
    Text(TextDatatype),
    Boolean(BooleanDatatype),
    Composite(CompositeDatatype),
    Array(ArrayDatatype),
    Enumeration(EnumerationDatatype),
    Reference(TypeReference),
}

impl Datatype {
    /// Scalar datatypes stay inline in integration models; everything else is
    /// hoisted into the model-level datatype list.
    pub fn is_scalar(&self) -> bool {
        matches!(
            self,
            Datatype::Numerical(_) | Datatype::Text(_) | Datatype::Boolean(_)
        )
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Datatype::Numerical(_) => "Numerical",
            Datatype::Text(_) => "Text",
            Datatype::Boolean(_) => "Boolean",
            Datatype::Composite(_) => "Composite",
            Datatype::Array(_) => "Array",
            Datatype::Enumeration(_) => "Enumeration",
            Datatype::Reference(_) => "Reference",
        }
    }

    /// Neutral default value for the datatype, used to seed subscriber buffers
    /// before the first publication.
    pub fn default_value(&self) -> Value {
        match self {
            Datatype::Numerical(n) => number_value(n.base, n.default),
            Datatype::Text(t) => Value::String(t.default.clone()),
            Datatype::Boolean(b) => Value::Bool(b.default),
            Datatype::Composite(c) => {
                let mut map = serde_json::Map::new();
                for field in &c.fields {
                    map.insert(field.name.clone(), field.datatype.default_value());
                }
                Value::Object(map)
            }
            Datatype::Array(a) => {
                Value::Array(vec![a.element.default_value(); a.length as usize])
            }
            Datatype::Enumeration(e) => {
                Value::from(e.literals.first().map(|l| l.value).unwrap_or(0))
            }
            Datatype::Reference(_) => Value::Null,
        }
    }

    /// Structural conformance of a JSON value to this datatype. References are
    /// not resolvable here and accept nothing.
    pub fn accepts(&self, value: &Value) -> bool {
        match self {
            Datatype::Numerical(n) => {
                value.as_f64().is_some_and(|v| n.base.representable(v))
            }
            Datatype::Text(t) => value
                .as_str()
                .is_some_and(|s| s.chars().count() as u32 <= t.max_length),
            Datatype::Boolean(_) => value.is_boolean(),
            Datatype::Composite(c) => match value.as_object() {
                Some(map) => {
                    map.len() == c.fields.len()
                        && c.fields.iter().all(|f| {
                            map.get(&f.name).is_some_and(|v| f.datatype.accepts(v))
                        })
                }
                None => false,
            },
            Datatype::Array(a) => match value.as_array() {
                Some(items) => {
                    items.len() == a.length as usize
                        && items.iter().all(|v| a.element.accepts(v))
                }
                None => false,
            },
            Datatype::Enumeration(e) => value
                .as_i64()
                .is_some_and(|v| e.literals.iter().any(|l| l.value == v)),
            Datatype::Reference(_) => false,
        }
    }
}

fn number_value(base: NumericBase, v: f64) -> Value {
    if base.is_integer() {
        if v >= 0.0 {
            Value::from(v as u64)
        } else {
            Value::from(v as i64)
        }
    } else {
        Value::from(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asil_ordering_is_total_and_transitive() {
        for (i, a) in AsilLevel::ALL.iter().enumerate() {
            for (j, b) in AsilLevel::ALL.iter().enumerate() {
                assert_eq!(a.cmp(b), i.cmp(&j), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn integer_bases_reject_fractions_and_overflow() {
        assert!(NumericBase::Uint8.representable(255.0));
        assert!(!NumericBase::Uint8.representable(256.0));
        assert!(!NumericBase::Uint8.representable(-1.0));
        assert!(!NumericBase::Int16.representable(1.5));
        assert!(NumericBase::Float32.representable(3.4e38));
        assert!(!NumericBase::Float32.representable(3.5e38));
        assert!(!NumericBase::Float64.representable(f64::INFINITY));
    }

    #[test]
    fn datatype_json_is_externally_tagged() {
        let dt = Datatype::Numerical(NumericalDatatype {
            base: NumericBase::Float32,
            min: 0.0,
            max: 250.0,
            unit: "km/h".into(),
            default: 0.0,
        });
        let v = serde_json::to_value(&dt).unwrap();
        assert!(v.get("Numerical").is_some());
        assert_eq!(v["Numerical"]["Base"], "float32");
    }

    #[test]
    fn enumeration_accepts_only_declared_literals() {
        let dt = Datatype::Enumeration(EnumerationDatatype {
            literals: vec![
                EnumLiteral { name: "Off".into(), value: 0 },
                EnumLiteral { name: "On".into(), value: 1 },
            ],
        });
        assert!(dt.accepts(&Value::from(1)));
        assert!(!dt.accepts(&Value::from(2)));
        assert_eq!(dt.default_value(), Value::from(0));
    }
}
