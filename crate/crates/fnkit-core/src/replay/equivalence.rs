//! Behavior-equivalence comparison between two run traces.
//!
//! Per event, the ordered sequence of published values is compared;
//! timestamps are deliberately excluded since different architectures may
//! publish the same values at different instants.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::sim::{RunTrace, TraceKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Divergence {
    /// Position in the publication sequence.
    pub index: usize,
    /// Timestamp of the diverging record in the baseline trace (or the
    /// candidate trace when the baseline ran out of records).
    pub t_us: u64,
    pub expected: Value,
    pub actual: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventComparison {
    pub event: String,
    pub match_count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_divergence: Option<Divergence>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub events: Vec<EventComparison>,
}

impl EquivalenceReport {
    pub fn is_equivalent(&self) -> bool {
        self.events.iter().all(|e| e.first_divergence.is_none())
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum CompareError {
    #[error("event {event:?} never appears in the {side} trace")]
    EventAbsent { event: String, side: &'static str },
}

fn publications(trace: &RunTrace, event: &str) -> Vec<(u64, Value)> {
    trace
        .of_kind(TraceKind::Publish)
        .filter(|r| r.payload.get("topic").and_then(Value::as_str) == Some(event))
        .map(|r| {
            (
                r.t_us,
                r.payload.get("value").cloned().unwrap_or(Value::Null),
            )
        })
        .collect()
}

/// Compare the value sequences of the listed events between a baseline trace
/// `a` and a candidate trace `b`.
pub fn compare_behavior(
    a: &RunTrace,
    b: &RunTrace,
    events: &[String],
) -> Result<EquivalenceReport, CompareError> {
    let mut comparisons = Vec::with_capacity(events.len());
    for event in events {
        let expected = publications(a, event);
        let actual = publications(b, event);
        if expected.is_empty() {
            return Err(CompareError::EventAbsent {
                event: event.clone(),
                side: "baseline",
            });
        }
        if actual.is_empty() {
            return Err(CompareError::EventAbsent {
                event: event.clone(),
                side: "candidate",
            });
        }

        let mut first_divergence = None;
        let mut match_count = 0;
        for i in 0..expected.len().max(actual.len()) {
            match (expected.get(i), actual.get(i)) {
                (Some((_, ev)), Some((_, av))) if ev == av => match_count += 1,
                (Some((t, ev)), Some((_, av))) => {
                    first_divergence = Some(Divergence {
                        index: i,
                        t_us: *t,
                        expected: ev.clone(),
                        actual: av.clone(),
                    });
                    break;
                }
                (Some((t, ev)), None) => {
                    first_divergence = Some(Divergence {
                        index: i,
                        t_us: *t,
                        expected: ev.clone(),
                        actual: Value::Null,
                    });
                    break;
                }
                (None, Some((t, av))) => {
                    first_divergence = Some(Divergence {
                        index: i,
                        t_us: *t,
                        expected: Value::Null,
                        actual: av.clone(),
                    });
                    break;
                }
                (None, None) => break,
            }
        }
        comparisons.push(EventComparison {
            event: event.clone(),
            match_count,
            first_divergence,
        });
    }
    Ok(EquivalenceReport { events: comparisons })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::TraceRecord;
    use serde_json::json;

    fn publish(t_us: u64, topic: &str, value: f64) -> TraceRecord {
        TraceRecord {
            t_us,
            kind: TraceKind::Publish,
            node: Some("N".into()),
            payload: json!({"topic": topic, "value": value, "seq": 1}),
        }
    }

    fn trace(values: &[f64]) -> RunTrace {
        let mut trace = RunTrace::new();
        for (i, v) in values.iter().enumerate() {
            trace.push(publish(i as u64 * 1000, "Vehicle.A.B", *v));
        }
        trace
    }

    #[test]
    fn trace_against_itself_fully_matches() {
        let t = trace(&[1.0, 2.0, 3.0]);
        let report =
            compare_behavior(&t, &t.clone(), &["Vehicle.A.B".to_string()]).unwrap();
        assert!(report.is_equivalent());
        assert_eq!(report.events[0].match_count, 3);
    }

    #[test]
    fn perturbed_value_yields_first_divergence() {
        let a = trace(&[1.0, 2.0, 3.0]);
        let b = trace(&[1.0, 2.5, 3.0]);
        let report = compare_behavior(&a, &b, &["Vehicle.A.B".to_string()]).unwrap();
        assert!(!report.is_equivalent());
        let divergence = report.events[0].first_divergence.as_ref().unwrap();
        assert_eq!(divergence.index, 1);
        assert_eq!(divergence.expected, json!(2.0));
        assert_eq!(divergence.actual, json!(2.5));
        assert_eq!(report.events[0].match_count, 1);
    }

    #[test]
    fn missing_event_is_an_error() {
        let a = trace(&[1.0]);
        let b = RunTrace::new();
        assert_eq!(
            compare_behavior(&a, &b, &["Vehicle.A.B".to_string()]).unwrap_err(),
            CompareError::EventAbsent {
                event: "Vehicle.A.B".into(),
                side: "candidate"
            }
        );
    }

    #[test]
    fn length_mismatch_diverges_at_the_tail() {
        let a = trace(&[1.0, 2.0]);
        let b = trace(&[1.0]);
        let report = compare_behavior(&a, &b, &["Vehicle.A.B".to_string()]).unwrap();
        let divergence = report.events[0].first_divergence.as_ref().unwrap();
        assert_eq!(divergence.index, 1);
        assert_eq!(divergence.actual, Value::Null);
    }
}
