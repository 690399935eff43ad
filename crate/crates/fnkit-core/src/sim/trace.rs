//! Run traces: the timestamped record of everything a simulation did.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// Record categories. `tick_skipped` marks debounced ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    Transition,
    Publish,
    StepBegin,
    StepEnd,
    AdapterInBegin,
    AdapterInEnd,
    AdapterOutBegin,
    AdapterOutEnd,
    ErrorChange,
    SafetyChange,
    WatchdogViolation,
    TickSkipped,
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = serde_json::to_value(self).expect("kind serializes");
        write!(f, "{}", text.as_str().expect("kind is a string"))
    }
}

/// One trace record. Field order here defines the JSON-lines layout.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub t_us: u64,
    pub kind: TraceKind,
    pub node: Option<String>,
    pub payload: Value,
}

#[derive(Debug, Error)]
pub enum TraceIoError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: timestamp {t_us} decreases below {previous}")]
    OutOfOrder { line: usize, t_us: u64, previous: u64 },
}

/// Ordered trace with non-decreasing timestamps.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub records: Vec<TraceRecord>,
}

impl RunTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, record: TraceRecord) {
        debug_assert!(
            self.records.last().map_or(true, |last| last.t_us <= record.t_us),
            "trace timestamps must be non-decreasing"
        );
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn of_kind(&self, kind: TraceKind) -> impl Iterator<Item = &TraceRecord> {
        self.records.iter().filter(move |r| r.kind == kind)
    }

    pub fn for_node<'a>(&'a self, node: &'a str) -> impl Iterator<Item = &'a TraceRecord> {
        self.records
            .iter()
            .filter(move |r| r.node.as_deref() == Some(node))
    }

    /// One JSON object per line: `{"t_us":…,"kind":…,"node":…,"payload":…}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&serde_json::to_string(record).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Self, TraceIoError> {
        let mut trace = RunTrace::new();
        let mut previous = 0u64;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let record: TraceRecord =
                serde_json::from_str(line).map_err(|e| TraceIoError::Malformed {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            if record.t_us < previous {
                return Err(TraceIoError::OutOfOrder {
                    line: i + 1,
                    t_us: record.t_us,
                    previous,
                });
            }
            previous = record.t_us;
            trace.records.push(record);
        }
        Ok(trace)
    }
}
