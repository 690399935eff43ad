//! Baseline direct-call harness.
//!
//! Executes the platform functions by calling init/step/terminate directly,
//! bypassing bus, lifecycle, and adapters completely: inputs come from plain
//! variables fed by the signal trace, outputs go back into those variables.
//! The produced trace carries publish records only and serves as the ground
//! truth for behavior-equivalence checks.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use fnkit_core::adapter::buffer_name;
use fnkit_core::function_model::{FunctionModel, Role};
use fnkit_core::replay::SignalTrace;
use fnkit_core::sim::{PlatformFunction, RunTrace, TraceKind, TraceRecord};

struct BaselineUnit {
    name: String,
    function: Box<dyn PlatformFunction>,
    consumer_paths: Vec<String>,
    provider_paths: Vec<String>,
    cycle_us: u64,
    offset_us: u64,
    priority: i64,
    next_index: u64,
}

fn ms_to_us(ms: f64) -> u64 {
    (ms * 1000.0).round().max(0.0) as u64
}

/// Run the functions directly against the signal trace for `duration_us`.
/// Tick times, tie-breaking, and value propagation mirror the scheduler:
/// ticks at `offset + k * cycle`, ascending priority on coincidence, trace
/// values applied before the ticks of the same instant.
pub fn run_baseline(
    mut functions: Vec<(FunctionModel, Box<dyn PlatformFunction>)>,
    trace: &SignalTrace,
    duration_us: u64,
) -> RunTrace {
    let mut variables: BTreeMap<String, Value> = BTreeMap::new();
    let mut units: Vec<BaselineUnit> = Vec::new();
    for (model, mut function) in functions.drain(..) {
        for interface in &model.interface_data {
            variables
                .entry(interface.name.clone())
                .or_insert_with(|| interface.datatype.default_value());
        }
        function.init();
        units.push(BaselineUnit {
            name: model.name.clone(),
            consumer_paths: model
                .interface_data
                .iter()
                .filter(|i| i.role == Role::Consumer)
                .map(|i| i.name.clone())
                .collect(),
            provider_paths: model
                .interface_data
                .iter()
                .filter(|i| i.role == Role::Provider)
                .map(|i| i.name.clone())
                .collect(),
            cycle_us: ms_to_us(model.scheduling_info.cycle_time),
            offset_us: ms_to_us(model.scheduling_info.initial_offset.unwrap_or(0.0)),
            priority: model.scheduling_info.priority.unwrap_or(0),
            next_index: 0,
            function,
        });
    }

    let feed = trace.to_feed();
    let mut feed_index = 0usize;
    let mut sequences: BTreeMap<String, u64> = BTreeMap::new();
    let mut out = RunTrace::new();

    loop {
        let next_feed = feed.get(feed_index).map(|f| f.t_us);
        let next_tick = units
            .iter()
            .filter(|u| u.cycle_us > 0)
            .map(|u| u.offset_us + u.next_index * u.cycle_us)
            .min();
        let t = match (next_feed, next_tick) {
            (Some(f), Some(t)) => f.min(t),
            (Some(f), None) => f,
            (None, Some(t)) => t,
            (None, None) => break,
        };
        if t >= duration_us {
            break;
        }

        while feed.get(feed_index).is_some_and(|f| f.t_us == t) {
            let record = &feed[feed_index];
            variables.insert(record.path.clone(), record.value.clone());
            feed_index += 1;
        }

        let mut due: Vec<usize> = units
            .iter()
            .enumerate()
            .filter(|(_, u)| u.cycle_us > 0 && u.offset_us + u.next_index * u.cycle_us == t)
            .map(|(i, _)| i)
            .collect();
        due.sort_by(|&a, &b| {
            units[a]
                .priority
                .cmp(&units[b].priority)
                .then_with(|| units[a].name.cmp(&units[b].name))
        });
        for index in due {
            let unit = &mut units[index];
            unit.next_index += 1;

            let mut inputs = BTreeMap::new();
            for path in &unit.consumer_paths {
                inputs.insert(buffer_name(path), variables[path].clone());
            }
            unit.function.set_external_inputs(&inputs);
            if unit.function.step().is_err() {
                continue;
            }
            let outputs = unit.function.get_external_outputs();
            for path in &unit.provider_paths {
                let value = outputs
                    .get(&buffer_name(path))
                    .cloned()
                    .unwrap_or(Value::Null);
                variables.insert(path.clone(), value.clone());
                let seq = sequences.entry(path.clone()).or_insert(0);
                *seq += 1;
                out.push(TraceRecord {
                    t_us: t,
                    kind: TraceKind::Publish,
                    node: Some(unit.name.clone()),
                    payload: json!({"topic": path, "value": value, "seq": *seq}),
                });
            }
        }
    }

    for unit in &mut units {
        unit.function.terminate();
    }
    out
}
