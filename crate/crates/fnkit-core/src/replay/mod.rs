//! Signal-trace replay and KPI derivation from run traces.
//!
//! Recorded signal traces stand in for the CAN replay path: the records are
//! published onto the bus at their timestamps, exactly as the gateway would
//! have done, and the resulting run traces are analyzed for timing and
//! behavior-equivalence KPIs.

mod equivalence;
mod kpi;

pub use equivalence::{
    compare_behavior, CompareError, Divergence, EquivalenceReport, EventComparison,
};
pub use kpi::{measure, render_kpi_text, KpiReport, MeasureError, NodeTiming, Stats};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::catalog::{SignalPath, SignalTree};
use crate::sim::{FeedRecord, SimError, Simulator};

/// One replayed signal sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignalRecord {
    pub t_ms: f64,
    pub path: String,
    pub value: Value,
}

/// Time-ordered signal trace, loaded from JSON lines
/// (`{"t_ms":…, "path":…, "value":…}`).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SignalTrace {
    pub records: Vec<SignalRecord>,
}

#[derive(Debug, Error)]
pub enum TraceLoadError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: timestamp {t_ms} ms is earlier than the previous record")]
    OutOfOrder { line: usize, t_ms: f64 },
    #[error("line {line}: unknown path {path:?}")]
    UnknownPath { line: usize, path: String },
}

/// Parse a signal trace, optionally checking every path against a catalog.
pub fn load_trace(
    text: &str,
    catalog: Option<&SignalTree>,
) -> Result<SignalTrace, TraceLoadError> {
    let mut records = Vec::new();
    let mut previous = f64::NEG_INFINITY;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let record: SignalRecord =
            serde_json::from_str(line).map_err(|e| TraceLoadError::Malformed {
                line: i + 1,
                message: e.to_string(),
            })?;
        if record.t_ms < previous {
            return Err(TraceLoadError::OutOfOrder {
                line: i + 1,
                t_ms: record.t_ms,
            });
        }
        previous = record.t_ms;
        if let Some(tree) = catalog {
            let known = SignalPath::parse(&record.path)
                .ok()
                .is_some_and(|p| tree.contains(&p));
            if !known {
                return Err(TraceLoadError::UnknownPath {
                    line: i + 1,
                    path: record.path,
                });
            }
        }
        records.push(record);
    }
    Ok(SignalTrace { records })
}

impl SignalTrace {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for record in &self.records {
            out.push_str(&serde_json::to_string(record).expect("record serializes"));
            out.push('\n');
        }
        out
    }

    /// Convert to the scheduler's feed representation (microseconds).
    pub fn to_feed(&self) -> Vec<FeedRecord> {
        self.records
            .iter()
            .map(|r| FeedRecord {
                t_us: (r.t_ms * 1000.0).round().max(0.0) as u64,
                path: r.path.clone(),
                value: r.value.clone(),
            })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Publish every record at its timestamp onto the simulator's bus: a virtual
/// clock jumps between timestamps, a wall clock sleeps. Returns the number
/// of publications.
pub fn replay(trace: &SignalTrace, sim: &mut Simulator) -> Result<usize, SimError> {
    let mut count = 0;
    for record in &trace.records {
        let t_us = (record.t_ms * 1000.0).round().max(0.0) as u64;
        sim.clock_mut().advance_to(t_us);
        sim.publish(&record.path, record.value.clone())?;
        count += 1;
    }
    Ok(count)
}
