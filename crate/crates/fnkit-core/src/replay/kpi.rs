//! Timing KPIs from run traces.
//!
//! Per tick, `t_exec` spans the whole adapter execution (adapter-in begin to
//! adapter-out end), `t_adapter` is the adapter's own share (input copy plus
//! output publication), and `t_logic` is the step duration. By construction
//! `t_exec >= t_adapter + t_logic` on every tick.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sim::{RunTrace, TraceKind};

use super::equivalence::EquivalenceReport;

/// Order statistics of one duration series, in microseconds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    /// Lower median.
    pub median_us: u64,
    pub p95_us: u64,
    pub max_us: u64,
    pub count: usize,
}

impl Stats {
    pub fn from_durations(durations: &[u64]) -> Stats {
        if durations.is_empty() {
            return Stats {
                median_us: 0,
                p95_us: 0,
                max_us: 0,
                count: 0,
            };
        }
        let mut sorted = durations.to_vec();
        sorted.sort_unstable();
        let n = sorted.len();
        let p95_index = ((n as f64) * 0.95).ceil() as usize - 1;
        Stats {
            median_us: sorted[(n - 1) / 2],
            p95_us: sorted[p95_index.min(n - 1)],
            max_us: sorted[n - 1],
            count: n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeTiming {
    pub t_exec: Stats,
    pub t_adapter: Stats,
    pub t_logic: Stats,
}

/// The KPI families derived from one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct KpiReport {
    pub per_node: BTreeMap<String, NodeTiming>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivalence: Option<EquivalenceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub loc_fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_time_ms: Option<f64>,
}

#[derive(Debug, Error, PartialEq)]
pub enum MeasureError {
    #[error("node {node:?}: {kind} at {t_us} us has no matching begin")]
    EndWithoutBegin {
        node: String,
        kind: String,
        t_us: u64,
    },
    #[error("node {node:?}: {kind} at {t_us} us while a previous one is still open")]
    BeginWithoutEnd {
        node: String,
        kind: String,
        t_us: u64,
    },
}

#[derive(Default)]
struct TickAccumulator {
    in_begin: Option<u64>,
    in_end: Option<u64>,
    step_begin: Option<u64>,
    out_begin: Option<u64>,
    exec: Vec<u64>,
    adapter: Vec<u64>,
    logic: Vec<u64>,
    adapter_in_part: u64,
}

/// Compute per-node timing statistics from properly nested begin/end pairs.
pub fn measure(trace: &RunTrace) -> Result<KpiReport, MeasureError> {
    let mut per_node: BTreeMap<String, TickAccumulator> = BTreeMap::new();

    for record in &trace.records {
        let Some(node) = record.node.as_deref() else {
            continue;
        };
        let acc = per_node.entry(node.to_string()).or_default();
        let err_end = |kind: &str| MeasureError::EndWithoutBegin {
            node: node.to_string(),
            kind: kind.into(),
            t_us: record.t_us,
        };
        let err_begin = |kind: &str| MeasureError::BeginWithoutEnd {
            node: node.to_string(),
            kind: kind.into(),
            t_us: record.t_us,
        };
        match record.kind {
            TraceKind::AdapterInBegin => {
                if acc.in_begin.is_some() {
                    return Err(err_begin("adapter_in_begin"));
                }
                acc.in_begin = Some(record.t_us);
            }
            TraceKind::AdapterInEnd => {
                let begin = acc.in_begin.ok_or_else(|| err_end("adapter_in_end"))?;
                acc.in_end = Some(record.t_us);
                acc.adapter_in_part = record.t_us - begin;
            }
            TraceKind::StepBegin => {
                if acc.step_begin.is_some() {
                    return Err(err_begin("step_begin"));
                }
                acc.step_begin = Some(record.t_us);
            }
            TraceKind::StepEnd => {
                let begin = acc.step_begin.take().ok_or_else(|| err_end("step_end"))?;
                acc.logic.push(record.t_us - begin);
            }
            TraceKind::AdapterOutBegin => {
                if acc.out_begin.is_some() {
                    return Err(err_begin("adapter_out_begin"));
                }
                acc.out_begin = Some(record.t_us);
            }
            TraceKind::AdapterOutEnd => {
                let out_begin = acc.out_begin.take().ok_or_else(|| err_end("adapter_out_end"))?;
                if let Some(in_begin) = acc.in_begin.take() {
                    acc.exec.push(record.t_us - in_begin);
                    acc.adapter
                        .push(acc.adapter_in_part + (record.t_us - out_begin));
                }
                acc.in_end = None;
            }
            TraceKind::Transition => {
                // A step failure abandons the open tick; its step duration is
                // already accounted for.
                acc.in_begin = None;
                acc.in_end = None;
                acc.out_begin = None;
            }
            _ => {}
        }
    }

    let report = KpiReport {
        per_node: per_node
            .into_iter()
            .filter(|(_, acc)| !acc.exec.is_empty() || !acc.logic.is_empty())
            .map(|(node, acc)| {
                (
                    node,
                    NodeTiming {
                        t_exec: Stats::from_durations(&acc.exec),
                        t_adapter: Stats::from_durations(&acc.adapter),
                        t_logic: Stats::from_durations(&acc.logic),
                    },
                )
            })
            .collect(),
        equivalence: None,
        loc_fraction: None,
        config_time_ms: None,
    };
    Ok(report)
}

/// Plain-text table for terminal output.
pub fn render_kpi_text(report: &KpiReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<24} {:>8} {:>12} {:>8} {:>8} {:>8}",
        "node", "metric", "count", "median", "p95", "max"
    );
    for (node, timing) in &report.per_node {
        for (metric, stats) in [
            ("t_exec", timing.t_exec),
            ("t_adapter", timing.t_adapter),
            ("t_logic", timing.t_logic),
        ] {
            let _ = writeln!(
                out,
                "{:<24} {:>8} {:>12} {:>7}u {:>7}u {:>7}u",
                node, metric, stats.count, stats.median_us, stats.p95_us, stats.max_us
            );
        }
    }
    if let Some(fraction) = report.loc_fraction {
        let _ = writeln!(out, "loc fraction_generated: {fraction:.4}");
    }
    if let Some(config) = report.config_time_ms {
        let _ = writeln!(out, "configuration time: {config:.1} ms");
    }
    if let Some(equivalence) = &report.equivalence {
        let verdict = if equivalence.is_equivalent() {
            "PASS"
        } else {
            "FAIL"
        };
        let _ = writeln!(out, "behavior equivalence: {verdict}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::TraceRecord;
    use serde_json::json;

    fn record(t_us: u64, kind: TraceKind, node: &str) -> TraceRecord {
        TraceRecord {
            t_us,
            kind,
            node: Some(node.into()),
            payload: json!({}),
        }
    }

    fn tick(trace: &mut RunTrace, start: u64, in_d: u64, logic_d: u64, out_d: u64, gap: u64) {
        let mut t = start;
        trace.push(record(t, TraceKind::AdapterInBegin, "N"));
        t += in_d;
        trace.push(record(t, TraceKind::AdapterInEnd, "N"));
        trace.push(record(t, TraceKind::StepBegin, "N"));
        t += logic_d;
        trace.push(record(t, TraceKind::StepEnd, "N"));
        t += gap;
        trace.push(record(t, TraceKind::AdapterOutBegin, "N"));
        t += out_d;
        trace.push(record(t, TraceKind::AdapterOutEnd, "N"));
    }

    #[test]
    fn known_durations_yield_lower_median() {
        let mut trace = RunTrace::new();
        tick(&mut trace, 0, 10, 100, 10, 0);
        tick(&mut trace, 1000, 10, 200, 10, 0);
        tick(&mut trace, 2000, 10, 300, 10, 0);
        let report = measure(&trace).unwrap();
        let timing = &report.per_node["N"];
        assert_eq!(timing.t_logic.median_us, 200);
        assert_eq!(timing.t_logic.max_us, 300);
        assert_eq!(timing.t_adapter.median_us, 20);
        assert_eq!(timing.t_exec.count, 3);
        // Even count: lower median.
        let stats = Stats::from_durations(&[100, 200, 300, 400]);
        assert_eq!(stats.median_us, 200);
    }

    #[test]
    fn exec_covers_adapter_plus_logic() {
        let mut trace = RunTrace::new();
        tick(&mut trace, 0, 7, 100, 9, 3);
        let report = measure(&trace).unwrap();
        let timing = &report.per_node["N"];
        assert!(timing.t_exec.max_us >= timing.t_adapter.max_us + timing.t_logic.max_us);
        assert_eq!(timing.t_exec.max_us, 7 + 100 + 3 + 9);
        assert_eq!(timing.t_adapter.max_us, 16);
    }

    #[test]
    fn unbalanced_records_are_rejected() {
        let mut trace = RunTrace::new();
        trace.push(record(5, TraceKind::StepEnd, "N"));
        assert!(matches!(
            measure(&trace),
            Err(MeasureError::EndWithoutBegin { .. })
        ));
    }
}
