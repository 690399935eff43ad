//! Acceptance suite: one test per release criterion, each printing a
//! PASS line on success (run with `--nocapture` to see them). Criteria cover
//! behavior equivalence, adapter overhead, generation fraction, configuration
//! speed, lifecycle semantics, error maturation, watchdog supervision,
//! determinism, the schema gate, and scheduling arithmetic.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use fnkit_cli::baseline::run_baseline;
use fnkit_cli::commands::execute_run;
use fnkit_cli::demo::{self, fixtures};
use fnkit_core::adapter::{generate_adapter, loc_report, AdapterManifest};
use fnkit_core::catalog::parse_catalog;
use fnkit_core::function_model::{
    emit_function_schema, parse_function_model, ErrorSpec, SupervisionType, WatchdogSpec,
};
use fnkit_core::integration::{
    emit_integration_schema, parse_integration_model, parse_platform_descriptor, parse_topology,
    transform, IntegrationModel,
};
use fnkit_core::replay::{compare_behavior, load_trace, measure, SignalTrace};
use fnkit_core::sim::{
    ErrorBank, ErrorStatus, LifecycleState, PlatformFunction, SimClock, Simulator, TraceKind,
    Transition,
};

fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root exists")
}

fn fnkit_bin() -> &'static str {
    env!("CARGO_BIN_EXE_fnkit")
}

fn demo_integration() -> IntegrationModel {
    let functions = vec![
        parse_function_model(fixtures::CORE_ACC).unwrap(),
        parse_function_model(fixtures::ECO_MPC).unwrap(),
        parse_function_model(fixtures::SIGNAL_GATEWAY).unwrap(),
    ];
    let platform = parse_platform_descriptor(fixtures::PLATFORM).unwrap();
    let topology = parse_topology(fixtures::TOPOLOGY).unwrap();
    transform(&functions, &platform, &topology).unwrap()
}

fn demo_manifests() -> Vec<AdapterManifest> {
    let model = demo_integration();
    let templates = demo::embedded_templates();
    ["CoreAccComponent", "EcoMpcComponent"]
        .iter()
        .map(|c| generate_adapter(&model, c, &templates).unwrap().manifest)
        .collect()
}

fn demo_signal_trace() -> SignalTrace {
    let tree = parse_catalog(fixtures::CATALOG).unwrap();
    load_trace(fixtures::DEMO_TRACE, Some(&tree)).unwrap()
}

#[test]
fn criterion_01_behavior_equivalence() {
    let started = Instant::now();
    let trace = demo_signal_trace();
    let duration_us = 60_000_000;

    let adapter_trace = execute_run(
        SimClock::virtual_clock(),
        &demo_manifests(),
        &trace,
        duration_us,
    )
    .unwrap();

    let functions = [fixtures::CORE_ACC, fixtures::ECO_MPC]
        .iter()
        .map(|text| {
            let model = parse_function_model(text).unwrap();
            let function = demo::demo_function(&model.name).unwrap();
            (model, function)
        })
        .collect();
    let baseline_trace = run_baseline(functions, &trace, duration_us);

    let events = vec![
        demo::STATUS_PATH.to_string(),
        demo::ACCEL_REQUEST_PATH.to_string(),
    ];
    let report = compare_behavior(&baseline_trace, &adapter_trace, &events).unwrap();
    for comparison in &report.events {
        assert!(
            comparison.first_divergence.is_none(),
            "divergence on {}: {:?}",
            comparison.event,
            comparison.first_divergence
        );
        // 60 s / 50 ms = 1200 CoreAcc publications per output event.
        assert_eq!(comparison.match_count, 1200, "{}", comparison.event);
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(10),
        "virtual-clock equivalence run took {elapsed:?}"
    );
    println!("criterion 01 behavior equivalence (bit-identical outputs, {elapsed:?}): PASS");
}

#[test]
fn criterion_02_adapter_overhead_wall_clock() {
    let trace = demo_signal_trace();
    let duration_us = 60_000_000;
    let wall_trace = execute_run(
        SimClock::wall_clock(),
        &demo_manifests(),
        &trace,
        duration_us,
    )
    .unwrap();

    let report = measure(&wall_trace).unwrap();
    let core = &report.per_node["CoreAccComponent"];
    // Scheduler stalls may debounce the odd tick on a loaded box; the
    // criterion bounds ratios, not the exact tick count.
    assert!(core.t_exec.count >= 1100, "only {} ticks", core.t_exec.count);
    assert!(
        core.t_adapter.median_us < 2_500,
        "median adapter time {} us exceeds 5% of the 50 ms cycle",
        core.t_adapter.median_us
    );

    // t_exec < cycle time for at least 99% of ticks, recomputed from the raw
    // records rather than the aggregated stats.
    let mut exec_durations = Vec::new();
    let mut begin = None;
    for record in wall_trace.for_node("CoreAccComponent") {
        match record.kind {
            TraceKind::AdapterInBegin => begin = Some(record.t_us),
            TraceKind::AdapterOutEnd => {
                if let Some(start) = begin.take() {
                    exec_durations.push(record.t_us - start);
                }
            }
            _ => {}
        }
    }
    let within = exec_durations.iter().filter(|d| **d < 50_000).count();
    let ratio = within as f64 / exec_durations.len() as f64;
    assert!(ratio >= 0.99, "only {ratio:.4} of ticks inside the cycle");
    println!(
        "criterion 02 adapter overhead (median {} us, {:.2}% in cycle): PASS",
        core.t_adapter.median_us,
        ratio * 100.0
    );
}

#[test]
fn criterion_03_generation_fraction() {
    let model = demo_integration();
    let templates = demo::embedded_templates();
    for component in ["CoreAccComponent", "EcoMpcComponent"] {
        let artifact = generate_adapter(&model, component, &templates).unwrap();
        let report = loc_report(&artifact);
        assert!(
            report.fraction_generated >= 0.90,
            "{component}: fraction {}",
            report.fraction_generated
        );
    }
    println!("criterion 03 auto-generation fraction >= 0.90 for both demo adapters: PASS");
}

#[test]
fn criterion_04_configuration_speed() {
    let root = workspace_root();
    let out = tempfile::tempdir().unwrap();
    let integration = out.path().join("integration.json");

    let started = Instant::now();
    let status = Command::new(fnkit_bin())
        .arg("transform")
        .args([
            "fixtures/function/valid/core_acc.json",
            "fixtures/function/valid/eco_mpc.json",
            "fixtures/function/valid/signal_gateway.json",
        ])
        .args(["--platform", "fixtures/platform.json"])
        .args(["--topology", "fixtures/topology.json"])
        .arg("--out")
        .arg(&integration)
        .current_dir(&root)
        .output()
        .unwrap();
    assert!(status.status.success(), "{status:?}");
    for component in ["CoreAccComponent", "EcoMpcComponent"] {
        let output = Command::new(fnkit_bin())
            .arg("generate")
            .arg(&integration)
            .args(["--component", component])
            .arg("--out")
            .arg(out.path().join(component))
            .current_dir(&root)
            .output()
            .unwrap();
        assert!(output.status.success(), "{output:?}");
    }
    let elapsed = started.elapsed();
    assert!(
        elapsed < Duration::from_secs(1),
        "transform + generate took {elapsed:?}"
    );
    println!("criterion 04 configuration speed ({elapsed:?} < 1 s): PASS");
}

struct Nop;

impl PlatformFunction for Nop {
    fn init(&mut self) {}
    fn step(&mut self) -> Result<(), String> {
        Ok(())
    }
    fn terminate(&mut self) {}
    fn set_external_inputs(&mut self, _inputs: &BTreeMap<String, Value>) {}
    fn get_external_outputs(&self) -> BTreeMap<String, Value> {
        BTreeMap::new()
    }
}

fn bare_manifest(name: &str, cycle_ms: f64, priority: i64) -> AdapterManifest {
    AdapterManifest {
        component_name: name.into(),
        executable_name: format!("{name}_app"),
        function_name: name.into(),
        cycle_time: cycle_ms,
        initial_offset: 0.0,
        priority,
        debounce_time: None,
        subscriptions: vec![],
        publications: vec![],
        lifecycle_bindings: fnkit_core::adapter::LifecycleBindings::standard(),
        watchdog: WatchdogSpec::none(),
        errors: vec![],
        safety_reactions: vec![],
    }
}

#[test]
fn criterion_05_lifecycle_state_machine() {
    let started = Instant::now();
    use LifecycleState::*;
    let legal: Vec<(LifecycleState, Transition, LifecycleState)> = vec![
        (Unconfigured, Transition::Configure, Inactive),
        (Inactive, Transition::Activate, Active),
        (Active, Transition::Deactivate, Inactive),
        (Inactive, Transition::CleanUp, Unconfigured),
        (Unconfigured, Transition::Shutdown, Finalized),
        (Inactive, Transition::Shutdown, Finalized),
        (Active, Transition::Shutdown, Finalized),
    ];

    // Exhaustive over all (primary state, transition) pairs on live nodes.
    for from in [Unconfigured, Inactive, Active, Finalized] {
        for transition in Transition::ALL {
            let mut sim = Simulator::new(SimClock::virtual_clock());
            sim.create_node(bare_manifest("N", 50.0, 0), Box::new(Nop))
                .unwrap();
            // Drive the node into the starting state.
            match from {
                Unconfigured => {}
                Inactive => {
                    sim.trigger_transition("N", Transition::Configure).unwrap();
                }
                Active => {
                    sim.trigger_transition("N", Transition::Configure).unwrap();
                    sim.trigger_transition("N", Transition::Activate).unwrap();
                }
                Finalized => {
                    sim.trigger_transition("N", Transition::Shutdown).unwrap();
                }
                _ => unreachable!("only primary states are enumerated"),
            }
            assert_eq!(sim.node("N").unwrap().state(), from);

            let expected = legal
                .iter()
                .find(|(f, t, _)| *f == from && *t == transition)
                .map(|(_, _, to)| *to);
            match (sim.trigger_transition("N", transition), expected) {
                (Ok(result), Some(target)) => assert_eq!(result, target),
                (Err(_), None) => {
                    assert_eq!(sim.node("N").unwrap().state(), from, "state must not change");
                }
                (result, expected) => {
                    panic!("{from:?} + {transition:?}: got {result:?}, expected {expected:?}")
                }
            }

            // Call-count bookkeeping: init per completed Configuring,
            // terminate per completed ShuttingDown.
            let node = sim.node("N").unwrap();
            let configures = sim
                .trace()
                .of_kind(TraceKind::Transition)
                .filter(|r| r.payload["via"] == "Configuring")
                .count() as u64;
            let shutdowns = sim
                .trace()
                .of_kind(TraceKind::Transition)
                .filter(|r| r.payload["via"] == "ShuttingDown")
                .count() as u64;
            assert_eq!(node.init_calls(), configures);
            assert_eq!(node.terminate_calls(), shutdowns);
        }
    }

    // Steps happen only between activation and deactivation.
    let mut sim = Simulator::new(SimClock::virtual_clock());
    sim.create_node(bare_manifest("N", 50.0, 0), Box::new(Nop))
        .unwrap();
    sim.trigger_transition("N", Transition::Configure).unwrap();
    sim.run(200_000, &[]).unwrap();
    assert_eq!(sim.trace().of_kind(TraceKind::StepBegin).count(), 0);
    sim.trigger_transition("N", Transition::Activate).unwrap();
    sim.run(400_000, &[]).unwrap();
    let after_activation = sim.trace().of_kind(TraceKind::StepBegin).count();
    assert!(after_activation > 0);
    sim.trigger_transition("N", Transition::Deactivate).unwrap();
    sim.run(600_000, &[]).unwrap();
    assert_eq!(
        sim.trace().of_kind(TraceKind::StepBegin).count(),
        after_activation,
        "no steps while Inactive"
    );

    let elapsed = started.elapsed();
    assert!(elapsed < Duration::from_secs(1));
    println!("criterion 05 lifecycle state machine ({elapsed:?}): PASS");
}

/// Independent 1 ms brute-force oracle for the error state machine, written
/// directly from the documented semantics: maturation requires the condition
/// continuously true for at least the maturation time (inclusive), reset
/// requires it continuously false for at least the reset time (inclusive)
/// after the error latched, dropping early returns to Clear, re-raising
/// during reset re-latches.
#[derive(Clone, Copy, PartialEq, Debug)]
enum OracleStatus {
    Clear,
    Maturing,
    Set,
    Resetting,
}

struct Oracle {
    maturation_ms: u64,
    reset_ms: u64,
    status: OracleStatus,
    true_since_ms: Option<u64>,
    false_since_ms: Option<u64>,
}

impl Oracle {
    fn new(maturation_ms: u64, reset_ms: u64) -> Self {
        Oracle {
            maturation_ms,
            reset_ms,
            status: OracleStatus::Clear,
            true_since_ms: None,
            false_since_ms: None,
        }
    }

    fn tick(&mut self, t_ms: u64, condition: bool) -> OracleStatus {
        match self.status {
            OracleStatus::Clear => {
                if condition {
                    self.status = OracleStatus::Maturing;
                    self.true_since_ms = Some(t_ms);
                }
            }
            OracleStatus::Maturing => {
                if !condition {
                    self.status = OracleStatus::Clear;
                    self.true_since_ms = None;
                }
            }
            OracleStatus::Set => {
                if !condition {
                    self.status = OracleStatus::Resetting;
                    self.false_since_ms = Some(t_ms);
                }
            }
            OracleStatus::Resetting => {
                if condition {
                    self.status = OracleStatus::Set;
                    self.false_since_ms = None;
                }
            }
        }
        if self.status == OracleStatus::Maturing
            && t_ms - self.true_since_ms.expect("maturing phase started") >= self.maturation_ms
        {
            self.status = OracleStatus::Set;
        }
        if self.status == OracleStatus::Resetting
            && t_ms - self.false_since_ms.expect("reset phase started") >= self.reset_ms
        {
            self.status = OracleStatus::Clear;
            self.true_since_ms = None;
            self.false_since_ms = None;
        }
        self.status
    }
}

fn error_spec(name: &str, maturation_ms: f64, reset_ms: f64) -> ErrorSpec {
    ErrorSpec {
        name: name.into(),
        datatype: fnkit_core::datatypes::Datatype::Boolean(
            fnkit_core::datatypes::BooleanDatatype { default: false },
        ),
        maturation_time: maturation_ms,
        severity: "test".into(),
        reset_time: reset_ms,
        reset_condition: "condition clears".into(),
        description: String::new(),
        dependencies: None,
    }
}

#[test]
fn criterion_06_error_maturation_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    let mut cases = 0;
    for _ in 0..1_000 {
        let maturation_ms = rng.gen_range(0..=500u64);
        let reset_ms = rng.gen_range(0..=500u64);
        let spec = error_spec("E", maturation_ms as f64, reset_ms as f64);
        let mut bank = ErrorBank::new(&[spec]);
        let mut oracle = Oracle::new(maturation_ms, reset_ms);

        // Random piecewise-constant waveform, 3 s at 1 ms resolution.
        let mut condition = false;
        let mut remaining = 0u64;
        for t_ms in 0..3_000u64 {
            if remaining == 0 {
                condition = rng.gen_bool(0.5);
                remaining = rng.gen_range(1..=400);
            }
            remaining -= 1;

            let mut conditions = BTreeMap::new();
            conditions.insert("E".to_string(), condition);
            bank.evaluate(&conditions, t_ms * 1_000).unwrap();
            let expected = oracle.tick(t_ms, condition);
            let actual = bank.status("E").unwrap();
            let matches = matches!(
                (expected, actual),
                (OracleStatus::Clear, ErrorStatus::Clear)
                    | (OracleStatus::Maturing, ErrorStatus::Maturing)
                    | (OracleStatus::Set, ErrorStatus::Set)
                    | (OracleStatus::Resetting, ErrorStatus::Resetting)
            );
            assert!(
                matches,
                "divergence at t={t_ms} ms (maturation {maturation_ms}, reset {reset_ms}): \
                 oracle {expected:?}, implementation {actual:?}"
            );
        }
        cases += 1;
    }
    assert_eq!(cases, 1_000);
    println!("criterion 06 error maturation/reset oracle (1000 waveforms, exact): PASS");
}

/// Sleeps during one specific step to overrun the deadline budget.
struct DelayedStep {
    steps: u64,
    delay_on: u64,
    delay: Duration,
}

impl PlatformFunction for DelayedStep {
    fn init(&mut self) {}
    fn step(&mut self) -> Result<(), String> {
        self.steps += 1;
        if self.steps == self.delay_on {
            std::thread::sleep(self.delay);
        }
        Ok(())
    }
    fn terminate(&mut self) {}
    fn set_external_inputs(&mut self, _inputs: &BTreeMap<String, Value>) {}
    fn get_external_outputs(&self) -> BTreeMap<String, Value> {
        BTreeMap::new()
    }
}

#[test]
fn criterion_07_watchdog_violations() {
    // Deadline: one injected 30 ms delay against a 10 ms budget, wall clock.
    let mut manifest = bare_manifest("Guard", 100.0, 0);
    manifest.watchdog = WatchdogSpec {
        supervision_type: SupervisionType::Deadline,
        alive_limits: None,
        deadline_limits: Some(fnkit_core::function_model::DeadlineLimits {
            min_duration: 0.0,
            max_duration: 10.0,
            error_name: "Guard_Deadline_ErrorSts".into(),
        }),
        logical_check: None,
    };
    let mut sim = Simulator::new(SimClock::wall_clock());
    sim.create_node(
        manifest,
        Box::new(DelayedStep { steps: 0, delay_on: 3, delay: Duration::from_millis(30) }),
    )
    .unwrap();
    sim.trigger_transition("Guard", Transition::Configure).unwrap();
    sim.trigger_transition("Guard", Transition::Activate).unwrap();
    sim.run(500_000, &[]).unwrap();
    let deadline_violations: Vec<_> = sim
        .trace()
        .of_kind(TraceKind::WatchdogViolation)
        .filter(|r| r.payload["kind"] == "deadline")
        .collect();
    assert_eq!(
        deadline_violations.len(),
        1,
        "expected exactly one deadline violation: {deadline_violations:?}"
    );
    assert_eq!(deadline_violations[0].payload["error"], "Guard_Deadline_ErrorSts");

    // Alive: a step failure mid-window deactivates the node and leaves the
    // supervised window short of indications.
    let mut manifest = bare_manifest("Counter", 50.0, 0);
    manifest.watchdog = WatchdogSpec {
        supervision_type: SupervisionType::Alive,
        alive_limits: Some(fnkit_core::function_model::AliveLimits {
            min_indications: 9,
            max_indications: 11,
            reference_window: 500.0,
            error_name: "Counter_Alive_ErrorSts".into(),
        }),
        deadline_limits: None,
        logical_check: None,
    };
    struct FailAt {
        steps: u64,
    }
    impl PlatformFunction for FailAt {
        fn init(&mut self) {}
        fn step(&mut self) -> Result<(), String> {
            self.steps += 1;
            if self.steps == 15 {
                return Err("give up".into());
            }
            Ok(())
        }
        fn terminate(&mut self) {}
        fn set_external_inputs(&mut self, _inputs: &BTreeMap<String, Value>) {}
        fn get_external_outputs(&self) -> BTreeMap<String, Value> {
            BTreeMap::new()
        }
    }
    let mut sim = Simulator::new(SimClock::virtual_clock());
    sim.create_node(manifest, Box::new(FailAt { steps: 0 })).unwrap();
    sim.trigger_transition("Counter", Transition::Configure).unwrap();
    sim.trigger_transition("Counter", Transition::Activate).unwrap();
    sim.run(1_000_000, &[]).unwrap();
    // Window [0,500): 10 steps, fine. Window [500,1000): steps at 500..700
    // only (failure at the 15th step, t=700 ms), a shortfall of 5 < 9.
    let alive_violations: Vec<_> = sim
        .trace()
        .of_kind(TraceKind::WatchdogViolation)
        .filter(|r| r.payload["kind"] == "alive")
        .collect();
    assert_eq!(alive_violations.len(), 1, "{alive_violations:?}");
    assert_eq!(alive_violations[0].payload["error"], "Counter_Alive_ErrorSts");
    assert_eq!(alive_violations[0].t_us, 1_000_000);

    println!("criterion 07 watchdog deadline and alive violations: PASS");
}

#[test]
fn criterion_08_run_determinism() {
    let root = workspace_root();
    let out = tempfile::tempdir().unwrap();
    let integration = out.path().join("integration.json");

    let run = |label: &str| -> Vec<u8> {
        let status = Command::new(fnkit_bin())
            .arg("transform")
            .args([
                "fixtures/function/valid/core_acc.json",
                "fixtures/function/valid/eco_mpc.json",
                "fixtures/function/valid/signal_gateway.json",
            ])
            .args(["--platform", "fixtures/platform.json"])
            .args(["--topology", "fixtures/topology.json"])
            .arg("--out")
            .arg(&integration)
            .current_dir(&root)
            .status()
            .unwrap();
        assert!(status.success());
        for component in ["CoreAccComponent", "EcoMpcComponent"] {
            let status = Command::new(fnkit_bin())
                .arg("generate")
                .arg(&integration)
                .args(["--component", component])
                .arg("--out")
                .arg(out.path().join(label).join(component))
                .current_dir(&root)
                .status()
                .unwrap();
            assert!(status.success());
        }
        let trace_path = out.path().join(label).join("run.jsonl");
        let status = Command::new(fnkit_bin())
            .arg("run")
            .arg("--manifests")
            .arg(out.path().join(label).join("CoreAccComponent/adapter_manifest.json"))
            .arg(out.path().join(label).join("EcoMpcComponent/adapter_manifest.json"))
            .args(["--trace", "fixtures/traces/demo_60s.jsonl"])
            .args(["--duration", "60000", "--clock", "virtual"])
            .arg("--out")
            .arg(&trace_path)
            .current_dir(&root)
            .status()
            .unwrap();
        assert!(status.success());
        std::fs::read(&trace_path).unwrap()
    };

    let first = run("a");
    let second = run("b");
    assert_eq!(first, second, "virtual-clock run traces must be byte-identical");
    assert!(!first.is_empty());
    println!(
        "criterion 08 determinism (two cmd_run traces, {} bytes, byte-identical): PASS",
        first.len()
    );
}

#[test]
fn criterion_09_schema_gate() {
    let root = workspace_root();
    let function_schema: Value = serde_json::from_str(&emit_function_schema()).unwrap();
    let integration_schema: Value = serde_json::from_str(&emit_integration_schema()).unwrap();
    let function_validator = jsonschema::validator_for(&function_schema).unwrap();
    let integration_validator = jsonschema::validator_for(&integration_schema).unwrap();

    let mut checked = 0;
    for (dir, expected_valid, is_function) in [
        ("fixtures/function/valid", true, true),
        ("fixtures/function/invalid", false, true),
        ("fixtures/integration/valid", true, false),
        ("fixtures/integration/invalid", false, false),
    ] {
        let entries: Vec<_> = std::fs::read_dir(root.join(dir))
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|e| e == "json"))
            .collect();
        assert!(
            entries.len() >= 20,
            "{dir} must hold at least 20 fixtures, found {}",
            entries.len()
        );
        for path in entries {
            let text = std::fs::read_to_string(&path).unwrap();
            let builtin_ok = if is_function {
                parse_function_model(&text).is_ok()
            } else {
                parse_integration_model(&text).is_ok()
            };
            assert_eq!(
                builtin_ok,
                expected_valid,
                "built-in validator disagrees with label of {path:?}"
            );

            let document: Value = serde_json::from_str(&text).unwrap();
            let validator = if is_function {
                &function_validator
            } else {
                &integration_validator
            };
            let schema_ok = validator.is_valid(&document);
            assert_eq!(
                schema_ok,
                expected_valid,
                "JSON Schema disagrees with label of {path:?}: {:?}",
                validator
                    .iter_errors(&document)
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
            );
            checked += 1;
        }
    }
    println!("criterion 09 schema gate ({checked} fixtures, both validators agree): PASS");
}

#[test]
fn criterion_10_scheduling_arithmetic() {
    let trace = execute_run(
        SimClock::virtual_clock(),
        &demo_manifests(),
        &SignalTrace::default(),
        5_000_000,
    )
    .unwrap();

    let steps: Vec<(u64, String)> = trace
        .of_kind(TraceKind::StepBegin)
        .map(|r| (r.t_us, r.node.clone().unwrap()))
        .collect();
    let core: Vec<u64> = steps
        .iter()
        .filter(|(_, n)| n == "CoreAccComponent")
        .map(|(t, _)| *t)
        .collect();
    let mpc: Vec<u64> = steps
        .iter()
        .filter(|(_, n)| n == "EcoMpcComponent")
        .map(|(t, _)| *t)
        .collect();
    assert_eq!(core.len(), 100, "50 ms node over 5 s");
    assert_eq!(mpc.len(), 10, "500 ms node over 5 s");
    assert_eq!(core, (0..100).map(|k| k * 50_000).collect::<Vec<_>>());
    assert_eq!(mpc, (0..10).map(|k| k * 500_000).collect::<Vec<_>>());

    // Coinciding ticks execute in ascending priority order (CoreAcc 10
    // before EcoMpc 20).
    for t in &mpc {
        let order: Vec<&String> = steps
            .iter()
            .filter(|(st, _)| st == t)
            .map(|(_, n)| n)
            .collect();
        assert_eq!(order, ["CoreAccComponent", "EcoMpcComponent"], "at {t}");
    }
    println!("criterion 10 scheduling arithmetic (100 + 10 steps, priority order): PASS");
}
