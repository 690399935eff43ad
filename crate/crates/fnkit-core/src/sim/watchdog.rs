//! Watchdog supervision over run traces.
//!
//! Alive supervision counts step executions per reference window, deadline
//! supervision bounds each step's duration, logical supervision checks that
//! supervised steps happen in the expected order. All three work offline on
//! a recorded trace; the scheduler runs them at the end of a run and merges
//! the violations back into the trace.

use serde::{Deserialize, Serialize};

use crate::function_model::WatchdogSpec;

use super::errors::ms_to_us;
use super::trace::{RunTrace, TraceKind};

/// Analysis span in microseconds, end exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeWindow {
    pub start_us: u64,
    pub end_us: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Alive,
    Deadline,
    Logical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WatchdogViolation {
    pub t_us: u64,
    pub kind: ViolationKind,
    pub node: String,
    /// The error name configured in the violated limit.
    pub error_name: String,
    pub detail: String,
}

/// Evaluate a node's watchdog spec against a trace within a window.
pub fn supervise(
    watchdog: &WatchdogSpec,
    trace: &RunTrace,
    node: &str,
    window: TimeWindow,
) -> Vec<WatchdogViolation> {
    let mut violations = Vec::new();
    if watchdog.supervision_type.has_alive() {
        if let Some(limits) = &watchdog.alive_limits {
            check_alive(limits, trace, node, window, &mut violations);
        }
    }
    if watchdog.supervision_type.has_deadline() {
        if let Some(limits) = &watchdog.deadline_limits {
            check_deadline(limits, trace, node, window, &mut violations);
        }
    }
    if watchdog.supervision_type.has_logical() {
        if let Some(check) = &watchdog.logical_check {
            check_logical(check, trace, window, node, &mut violations);
        }
    }
    violations.sort_by_key(|v| v.t_us);
    violations
}

/// Time spans in which the node was Active, derived from transition records.
fn active_spans(trace: &RunTrace, node: &str, window: TimeWindow) -> Vec<(u64, u64)> {
    let mut spans = Vec::new();
    let mut active_since: Option<u64> = None;
    for record in trace.for_node(node) {
        if record.kind != TraceKind::Transition {
            continue;
        }
        let to = record.payload.get("to").and_then(|v| v.as_str());
        let from = record.payload.get("from").and_then(|v| v.as_str());
        if to == Some("Active") && active_since.is_none() {
            active_since = Some(record.t_us);
        } else if from == Some("Active") {
            if let Some(start) = active_since.take() {
                spans.push((start, record.t_us));
            }
        }
    }
    if let Some(start) = active_since {
        spans.push((start, window.end_us));
    }
    spans
}

fn check_alive(
    limits: &crate::function_model::AliveLimits,
    trace: &RunTrace,
    node: &str,
    window: TimeWindow,
    violations: &mut Vec<WatchdogViolation>,
) {
    let window_us = ms_to_us(limits.reference_window);
    if window_us == 0 {
        return;
    }
    let spans = active_spans(trace, node, window);
    let step_times: Vec<u64> = trace
        .for_node(node)
        .filter(|r| r.kind == TraceKind::StepBegin)
        .map(|r| r.t_us)
        .collect();

    let mut window_start = window.start_us;
    while window_start + window_us <= window.end_us {
        let window_end = window_start + window_us;
        // Only windows that begin inside an Active span are supervised; a
        // node deactivated mid-window still counts as an alive shortfall.
        let supervised = spans
            .iter()
            .any(|(start, end)| *start <= window_start && window_start < *end);
        if supervised {
            let count = step_times
                .iter()
                .filter(|t| window_start <= **t && **t < window_end)
                .count() as u32;
            if count < limits.min_indications || count > limits.max_indications {
                violations.push(WatchdogViolation {
                    t_us: window_end,
                    kind: ViolationKind::Alive,
                    node: node.to_string(),
                    error_name: limits.error_name.clone(),
                    detail: format!(
                        "{count} indications in window [{window_start}, {window_end}) us, allowed [{}, {}]",
                        limits.min_indications, limits.max_indications
                    ),
                });
            }
        }
        window_start = window_end;
    }
}

fn check_deadline(
    limits: &crate::function_model::DeadlineLimits,
    trace: &RunTrace,
    node: &str,
    window: TimeWindow,
    violations: &mut Vec<WatchdogViolation>,
) {
    let min_us = ms_to_us(limits.min_duration);
    let max_us = ms_to_us(limits.max_duration);
    let mut begin: Option<u64> = None;
    for record in trace.for_node(node) {
        if record.t_us < window.start_us || record.t_us >= window.end_us {
            continue;
        }
        match record.kind {
            TraceKind::StepBegin => begin = Some(record.t_us),
            TraceKind::StepEnd => {
                if let Some(start) = begin.take() {
                    let duration = record.t_us - start;
                    if duration < min_us || duration > max_us {
                        violations.push(WatchdogViolation {
                            t_us: record.t_us,
                            kind: ViolationKind::Deadline,
                            node: node.to_string(),
                            error_name: limits.error_name.clone(),
                            detail: format!(
                                "step took {duration} us, allowed [{min_us}, {max_us}] us"
                            ),
                        });
                    }
                }
            }
            _ => {}
        }
    }
}

/// Steps of the supervised checkpoints must occur in `expected_order`,
/// cyclically. Checkpoints are node names.
fn check_logical(
    check: &crate::function_model::LogicalCheck,
    trace: &RunTrace,
    window: TimeWindow,
    node: &str,
    violations: &mut Vec<WatchdogViolation>,
) {
    if check.expected_order.is_empty() {
        return;
    }
    let mut expected_index = 0usize;
    for record in trace.of_kind(TraceKind::StepBegin) {
        if record.t_us < window.start_us || record.t_us >= window.end_us {
            continue;
        }
        let Some(step_node) = record.node.as_deref() else {
            continue;
        };
        if !check.expected_order.iter().any(|c| c == step_node) {
            continue;
        }
        let expected = &check.expected_order[expected_index];
        if step_node == expected {
            expected_index = (expected_index + 1) % check.expected_order.len();
        } else {
            violations.push(WatchdogViolation {
                t_us: record.t_us,
                kind: ViolationKind::Logical,
                node: node.to_string(),
                error_name: check.error_name.clone(),
                detail: format!("checkpoint {step_node:?} observed, expected {expected:?}"),
            });
            // Resynchronize after the reported mismatch.
            expected_index = (check
                .expected_order
                .iter()
                .position(|c| c == step_node)
                .expect("checkpoint is supervised")
                + 1)
                % check.expected_order.len();
        }
    }
}
