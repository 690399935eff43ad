//! The simulator: nodes, bus, clock, and the cyclic scheduler.
//!
//! The simulator is single-threaded and, under a virtual clock, fully
//! deterministic: two runs over the same inputs produce byte-identical
//! traces. Publications scheduled for a time point are delivered before the
//! ticks of that time point, and nodes due at the same instant execute in
//! ascending priority order with names breaking ties.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::adapter::{AdapterManifest, RangePolicy};
use crate::datatypes::Datatype;
use crate::function_model::RangeErrorAction;

use super::bus::Bus;
use super::clock::SimClock;
use super::node::{LifecycleNode, LifecycleState, PlatformFunction, Transition};
use super::trace::{RunTrace, TraceKind, TraceRecord};
use super::watchdog::{supervise, TimeWindow};
use super::SimError;

/// One externally scheduled publication (the replay feed).
#[derive(Debug, Clone, PartialEq)]
pub struct FeedRecord {
    pub t_us: u64,
    pub path: String,
    pub value: Value,
}

pub struct Simulator {
    clock: SimClock,
    bus: Bus,
    nodes: Vec<LifecycleNode>,
    trace: RunTrace,
}

impl Simulator {
    pub fn new(clock: SimClock) -> Self {
        Simulator {
            clock,
            bus: Bus::new(),
            nodes: Vec::new(),
            trace: RunTrace::new(),
        }
    }

    pub fn bus(&self) -> &Bus {
        &self.bus
    }

    pub fn clock(&self) -> &SimClock {
        &self.clock
    }

    pub fn clock_mut(&mut self) -> &mut SimClock {
        &mut self.clock
    }

    pub fn trace(&self) -> &RunTrace {
        &self.trace
    }

    pub fn take_trace(&mut self) -> RunTrace {
        std::mem::take(&mut self.trace)
    }

    pub fn node(&self, name: &str) -> Option<&LifecycleNode> {
        self.nodes.iter().find(|n| n.name() == name)
    }

    pub fn node_names(&self) -> Vec<String> {
        self.nodes.iter().map(|n| n.name().to_string()).collect()
    }

    /// Register every event of a manifest on the bus. Must happen before the
    /// corresponding `create_node`.
    pub fn register_manifest_events(
        &mut self,
        manifest: &AdapterManifest,
    ) -> Result<(), SimError> {
        for subscription in &manifest.subscriptions {
            self.bus.register_topic(
                &subscription.event.source_path,
                &subscription.event.datatype,
            )?;
        }
        for publication in &manifest.publications {
            self.bus.register_topic(
                &publication.event.source_path,
                &publication.event.datatype,
            )?;
        }
        Ok(())
    }

    /// Register a bare topic, e.g. for replay feeds without a providing node.
    pub fn register_topic(&mut self, path: &str, datatype: &Datatype) -> Result<(), SimError> {
        self.bus.register_topic(path, datatype)
    }

    /// Create a node in the Unconfigured state. Every event the manifest
    /// references must already be registered on the bus; subscriptions are
    /// wired immediately but stay inert until activation.
    pub fn create_node(
        &mut self,
        manifest: AdapterManifest,
        function: Box<dyn PlatformFunction>,
    ) -> Result<(), SimError> {
        if self.nodes.iter().any(|n| n.name() == manifest.component_name) {
            return Err(SimError::DuplicateNode(manifest.component_name));
        }
        for subscription in &manifest.subscriptions {
            if !self.bus.has_topic(&subscription.event.source_path) {
                return Err(SimError::UnknownEvent(
                    subscription.event.source_path.clone(),
                ));
            }
        }
        for publication in &manifest.publications {
            if !self.bus.has_topic(&publication.event.source_path) {
                return Err(SimError::UnknownEvent(
                    publication.event.source_path.clone(),
                ));
            }
        }
        for subscription in &manifest.subscriptions {
            self.bus
                .subscribe(&manifest.component_name, &subscription.event.source_path)?;
        }
        self.nodes.push(LifecycleNode::new(manifest, function));
        Ok(())
    }

    /// Trigger a lifecycle transition. Illegal transitions leave the state
    /// unchanged and report an error.
    pub fn trigger_transition(
        &mut self,
        node_name: &str,
        transition: Transition,
    ) -> Result<LifecycleState, SimError> {
        let t_us = self.clock.now_us();
        let index = self
            .nodes
            .iter()
            .position(|n| n.name() == node_name)
            .ok_or_else(|| SimError::UnknownNode(node_name.to_string()))?;
        let node = &mut self.nodes[index];
        let from = node.state;
        let Some(target) = transition.target(from) else {
            return Err(SimError::IllegalTransition {
                node: node_name.to_string(),
                from,
                transition: format!("{:?}", transition.via()),
            });
        };

        node.state = transition.via();
        match transition {
            Transition::Configure => {
                node.function.init();
                node.init_calls += 1;
                node.error_bank.reset_all();
                node.last_step_end_us = None;
                // Capture the post-init buffer values for the Init range action.
                node.init_snapshot = node
                    .manifest
                    .subscriptions
                    .iter()
                    .map(|s| {
                        let value = self
                            .bus
                            .buffer(node_name, &s.event.source_path)
                            .cloned()
                            .unwrap_or(Value::Null);
                        (s.buffer_name.clone(), value)
                    })
                    .collect();
            }
            Transition::Shutdown => {
                node.function.terminate();
                node.terminate_calls += 1;
                self.bus.set_subscriber_active(node_name, false);
            }
            Transition::Activate => {
                self.bus.set_subscriber_active(node_name, true);
            }
            Transition::Deactivate => {
                self.bus.set_subscriber_active(node_name, false);
            }
            Transition::CleanUp => {}
        }
        node.state = target;
        self.trace.push(TraceRecord {
            t_us,
            kind: TraceKind::Transition,
            node: Some(node_name.to_string()),
            payload: json!({
                "from": from.to_string(),
                "via": transition.via().to_string(),
                "to": target.to_string(),
            }),
        });
        Ok(target)
    }

    /// Publish from outside any node (gateway/replay path).
    pub fn publish(&mut self, path: &str, value: Value) -> Result<u64, SimError> {
        let t_us = self.clock.now_us();
        let seq = self.bus.publish(path, value.clone(), t_us)?;
        self.trace.push(TraceRecord {
            t_us,
            kind: TraceKind::Publish,
            node: None,
            payload: json!({"topic": path, "value": value, "seq": seq}),
        });
        Ok(seq)
    }

    /// Run the cyclic scheduler for `duration_us`, interleaving the feed.
    /// Ticks happen at `offset + k * cycle` for every node, feed records at
    /// their own timestamps; both only for `t < duration_us`.
    pub fn run(&mut self, duration_us: u64, feed: &[FeedRecord]) -> Result<(), SimError> {
        debug_assert!(
            feed.windows(2).all(|w| w[0].t_us <= w[1].t_us),
            "feed must be time-ordered"
        );
        let run_start_us = self.clock.now_us();
        let mut feed_index = 0usize;

        loop {
            let next_feed = feed.get(feed_index).map(|f| f.t_us);
            let next_tick = self
                .nodes
                .iter()
                .filter_map(|n| n.next_tick_us())
                .min();
            let next_t = match (next_feed, next_tick) {
                (Some(f), Some(t)) => f.min(t),
                (Some(f), None) => f,
                (None, Some(t)) => t,
                (None, None) => break,
            };
            if next_t >= duration_us {
                break;
            }
            self.clock.advance_to(run_start_us + next_t);

            // Feed first: a value published at t is visible to ticks at t.
            while feed
                .get(feed_index)
                .is_some_and(|f| f.t_us == next_t)
            {
                let record = &feed[feed_index];
                self.publish(&record.path, record.value.clone())?;
                feed_index += 1;
            }

            // Due nodes in ascending priority order, names breaking ties.
            let mut due: Vec<usize> = (0..self.nodes.len())
                .filter(|&i| self.nodes[i].next_tick_us() == Some(next_t))
                .collect();
            due.sort_by(|&a, &b| {
                let na = &self.nodes[a];
                let nb = &self.nodes[b];
                na.manifest
                    .priority
                    .cmp(&nb.manifest.priority)
                    .then_with(|| na.name().cmp(nb.name()))
            });
            for index in due {
                self.nodes[index].next_tick_index += 1;
                self.execute_tick(index, next_t)?;
            }
        }

        self.merge_watchdog_violations(duration_us);
        Ok(())
    }

    fn execute_tick(&mut self, index: usize, planned_t_us: u64) -> Result<(), SimError> {
        if self.nodes[index].state != LifecycleState::Active {
            return Ok(());
        }

        let node_name = self.nodes[index].name().to_string();
        let now = self.clock.now_us();

        // Debounce: skip ticks arriving too soon after the previous step.
        if let (Some(debounce), Some(last_end)) = (
            self.nodes[index].debounce_us(),
            self.nodes[index].last_step_end_us,
        ) {
            if now.saturating_sub(last_end) < debounce {
                self.nodes[index].debounce_skips += 1;
                self.trace.push(TraceRecord {
                    t_us: now,
                    kind: TraceKind::TickSkipped,
                    node: Some(node_name),
                    payload: json!({"planned_t_us": planned_t_us, "reason": "debounce"}),
                });
                return Ok(());
            }
        }

        // Sample error conditions for this tick: timeouts and range checks.
        let mut conditions: BTreeMap<String, bool> = self.nodes[index]
            .manifest
            .errors
            .iter()
            .map(|e| (e.name.clone(), false))
            .collect();
        for subscription in &self.nodes[index].manifest.subscriptions {
            if let (Some(timeout_ms), Some(error_name)) =
                (subscription.timeout_value, &subscription.timeout_error)
            {
                let timeout_us = super::errors::ms_to_us(timeout_ms);
                let stale = match self.bus.last_publication_us(&subscription.event.source_path)
                {
                    Some(last) => now.saturating_sub(last) > timeout_us,
                    None => true,
                };
                if stale {
                    if let Some(flag) = conditions.get_mut(error_name) {
                        *flag = true;
                    }
                }
            }
        }

        // setExternalInputs: copy buffers into the function, applying the
        // range policy on the way.
        self.trace.push(TraceRecord {
            t_us: self.clock.now_us(),
            kind: TraceKind::AdapterInBegin,
            node: Some(node_name.clone()),
            payload: json!({}),
        });
        let mut inputs: BTreeMap<String, Value> = BTreeMap::new();
        for subscription in &self.nodes[index].manifest.subscriptions {
            let raw = self
                .bus
                .buffer(&node_name, &subscription.event.source_path)
                .cloned()
                .unwrap_or(Value::Null);
            let value = match &subscription.range_policy {
                Some(policy) => apply_range_policy(
                    policy,
                    raw,
                    &subscription.event.datatype,
                    self.nodes[index].init_snapshot.get(&subscription.buffer_name),
                    &mut conditions,
                ),
                None => raw,
            };
            inputs.insert(subscription.buffer_name.clone(), value);
        }
        self.nodes[index].function.set_external_inputs(&inputs);
        self.trace.push(TraceRecord {
            t_us: self.clock.now_us(),
            kind: TraceKind::AdapterInEnd,
            node: Some(node_name.clone()),
            payload: json!({}),
        });

        // step
        self.trace.push(TraceRecord {
            t_us: self.clock.now_us(),
            kind: TraceKind::StepBegin,
            node: Some(node_name.clone()),
            payload: json!({}),
        });
        let step_result = self.nodes[index].function.step();
        let step_end_us = self.clock.now_us();
        self.trace.push(TraceRecord {
            t_us: step_end_us,
            kind: TraceKind::StepEnd,
            node: Some(node_name.clone()),
            payload: json!({}),
        });
        self.nodes[index].last_step_end_us = Some(step_end_us);

        if let Err(message) = step_result {
            // Fault isolation: the failing node leaves Active through
            // ErrorProcessing and ends up Unconfigured; others continue.
            let node = &mut self.nodes[index];
            node.state = LifecycleState::Unconfigured;
            self.bus.set_subscriber_active(&node_name, false);
            self.trace.push(TraceRecord {
                t_us: step_end_us,
                kind: TraceKind::Transition,
                node: Some(node_name.clone()),
                payload: json!({
                    "from": LifecycleState::Active.to_string(),
                    "via": LifecycleState::ErrorProcessing.to_string(),
                    "to": LifecycleState::Unconfigured.to_string(),
                    "error": message,
                }),
            });
            return Ok(());
        }

        // getExternalOutputs: publish every provided event.
        self.trace.push(TraceRecord {
            t_us: self.clock.now_us(),
            kind: TraceKind::AdapterOutBegin,
            node: Some(node_name.clone()),
            payload: json!({}),
        });
        let outputs = self.nodes[index].function.get_external_outputs();
        let publications = self.nodes[index].manifest.publications.clone();
        for publication in &publications {
            let value = outputs.get(&publication.buffer_name).cloned().ok_or_else(|| {
                SimError::MissingOutput {
                    node: node_name.clone(),
                    buffer: publication.buffer_name.clone(),
                }
            })?;
            let t_us = self.clock.now_us();
            let seq = self
                .bus
                .publish(&publication.event.source_path, value.clone(), t_us)?;
            self.trace.push(TraceRecord {
                t_us,
                kind: TraceKind::Publish,
                node: Some(node_name.clone()),
                payload: json!({
                    "topic": publication.event.source_path,
                    "value": value,
                    "seq": seq,
                }),
            });
        }
        self.trace.push(TraceRecord {
            t_us: self.clock.now_us(),
            kind: TraceKind::AdapterOutEnd,
            node: Some(node_name.clone()),
            payload: json!({}),
        });

        // Error maturation and safety reactions over this tick's conditions.
        let changed = {
            let node = &mut self.nodes[index];
            node.last_conditions = conditions.clone();
            node.error_bank.evaluate(&conditions, now)?
        };
        for name in &changed {
            let status = self.nodes[index]
                .error_bank
                .status(name)
                .expect("changed error exists");
            self.trace.push(TraceRecord {
                t_us: now,
                kind: TraceKind::ErrorChange,
                node: Some(node_name.clone()),
                payload: json!({"error": name, "status": format!("{status:?}")}),
            });
        }
        let statuses = self.nodes[index].error_bank.statuses();
        let safety =
            super::safety::evaluate_safety(&self.nodes[index].manifest.safety_reactions, &statuses);
        for (reaction, active) in safety {
            let previous = self.nodes[index]
                .safety_status
                .insert(reaction.clone(), active);
            if previous != Some(active) {
                self.trace.push(TraceRecord {
                    t_us: now,
                    kind: TraceKind::SafetyChange,
                    node: Some(node_name.clone()),
                    payload: json!({"reaction": reaction, "active": active}),
                });
            }
        }
        Ok(())
    }

    /// Run watchdog supervision for every node and merge the violations into
    /// the trace in time order (after same-timestamp records).
    fn merge_watchdog_violations(&mut self, duration_us: u64) {
        let window = TimeWindow {
            start_us: 0,
            end_us: duration_us,
        };
        let mut violation_records = Vec::new();
        for node in &self.nodes {
            let watchdog = &node.manifest.watchdog;
            for violation in supervise(watchdog, &self.trace, node.name(), window) {
                violation_records.push(TraceRecord {
                    t_us: violation.t_us,
                    kind: TraceKind::WatchdogViolation,
                    node: Some(violation.node.clone()),
                    payload: json!({
                        "kind": violation.kind,
                        "error": violation.error_name,
                        "detail": violation.detail,
                    }),
                });
            }
        }
        self.trace.records.extend(violation_records);
        self.trace.records.sort_by_key(|r| r.t_us);
    }
}

/// Range policy: out-of-range consumer values are replaced by the datatype
/// default or the init-captured value, and the configured range-error
/// condition is raised for the tick.
fn apply_range_policy(
    policy: &RangePolicy,
    raw: Value,
    datatype: &Datatype,
    init_value: Option<&Value>,
    conditions: &mut BTreeMap<String, bool>,
) -> Value {
    let Some(v) = raw.as_f64() else {
        return raw;
    };
    if v >= policy.min && v <= policy.max {
        return raw;
    }
    if let Some(error_name) = &policy.error_name {
        if let Some(flag) = conditions.get_mut(error_name) {
            *flag = true;
        }
    }
    match policy.action {
        RangeErrorAction::Default => datatype.default_value(),
        RangeErrorAction::Init => init_value.cloned().unwrap_or_else(|| datatype.default_value()),
    }
}
