//! Dot-separated signal paths.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("signal path must have at least 2 segments, got {0}")]
    TooFewSegments(usize),
    #[error("empty segment at index {0}")]
    EmptySegment(usize),
    #[error("illegal character {character:?} in segment {segment:?} at index {index}")]
    IllegalCharacter {
        index: usize,
        segment: String,
        character: char,
    },
}

/// A parsed dot-separated signal path with at least two segments. Each
/// segment is an identifier of the form `[A-Za-z][A-Za-z0-9]*`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SignalPath {
    segments: Vec<String>,
}

impl SignalPath {
    /// Parse a textual path, reporting the first offending segment.
    pub fn parse(text: &str) -> Result<Self, PathError> {
        let raw: Vec<&str> = text.split('.').collect();
        for (index, segment) in raw.iter().enumerate() {
            if segment.is_empty() {
                return Err(PathError::EmptySegment(index));
            }
            if let Some(character) = illegal_char(segment) {
                return Err(PathError::IllegalCharacter {
                    index,
                    segment: (*segment).to_string(),
                    character,
                });
            }
        }
        if raw.len() < 2 {
            return Err(PathError::TooFewSegments(raw.len()));
        }
        Ok(SignalPath {
            segments: raw.into_iter().map(str::to_string).collect(),
        })
    }

    pub fn segments(&self) -> &[String] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// First `n` segments joined by the given separator.
    pub fn prefix_joined(&self, n: usize, separator: &str) -> String {
        self.segments[..n.min(self.segments.len())].join(separator)
    }

    /// Segments after the first `n`, joined by the given separator.
    pub fn suffix_joined(&self, n: usize, separator: &str) -> String {
        self.segments[n.min(self.segments.len())..].join(separator)
    }
}

/// True for `[A-Za-z][A-Za-z0-9]*`.
pub(crate) fn is_identifier(text: &str) -> bool {
    !text.is_empty() && illegal_char(text).is_none()
}

fn illegal_char(segment: &str) -> Option<char> {
    let mut chars = segment.chars();
    match chars.next() {
        Some(first) if first.is_ascii_alphabetic() => {}
        Some(first) => return Some(first),
        None => return None,
    }
    chars.find(|c| !c.is_ascii_alphanumeric())
}

impl fmt::Display for SignalPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.segments.join("."))
    }
}

impl TryFrom<String> for SignalPath {
    type Error = PathError;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        SignalPath::parse(&value)
    }
}

impl From<SignalPath> for String {
    fn from(path: SignalPath) -> String {
        path.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wheel_speed_path_has_seven_segments() {
        let path = SignalPath::parse("Vehicle.Chassis.Axle.Row1.Wheel.Left.Speed").unwrap();
        assert_eq!(path.len(), 7);
        assert_eq!(path.to_string(), "Vehicle.Chassis.Axle.Row1.Wheel.Left.Speed");
    }

    #[test]
    fn empty_segment_is_reported_with_index() {
        assert_eq!(
            SignalPath::parse("Vehicle..Speed"),
            Err(PathError::EmptySegment(1))
        );
    }

    #[test]
    fn single_segment_is_rejected() {
        assert_eq!(SignalPath::parse("Vehicle"), Err(PathError::TooFewSegments(1)));
    }

    #[test]
    fn illegal_characters_are_named() {
        match SignalPath::parse("Vehicle.Wheel_Speed") {
            Err(PathError::IllegalCharacter { index, character, .. }) => {
                assert_eq!(index, 1);
                assert_eq!(character, '_');
            }
            other => panic!("expected illegal character, got {other:?}"),
        }
        assert!(SignalPath::parse("Vehicle.1Row").is_err());
        assert!(SignalPath::parse("Vehicle.Row1").is_ok());
    }
}
