//! The bundled EcoControl demo: two deterministic platform functions plus
//! the embedded fixture set they run against.
//!
//! Both control laws are simple saturated arithmetic. Correctness claims
//! rest on interface behavior and cross-harness equivalence, not on control
//! quality.

use std::collections::BTreeMap;

use serde_json::Value;

use fnkit_core::adapter::{buffer_name, TemplateSet};
use fnkit_core::sim::PlatformFunction;

pub const SPEED_SET_PATH: &str = "Vehicle.ADAS.CruiseControl.SpeedSet";
pub const DISTANCE_PATH: &str = "Vehicle.ADAS.CruiseControl.Distance";
pub const ECO_ACCEL_PATH: &str = "Vehicle.ADAS.EcoControl.AccelerationRequest";
pub const ACCEL_REQUEST_PATH: &str = "Vehicle.ADAS.CruiseControl.AccelerationRequest";
pub const STATUS_PATH: &str = "Vehicle.ADAS.CruiseControl.Status";
pub const ALTITUDE_PATH: &str = "Vehicle.Navigation.Altitude";

pub mod fixtures {
    pub const CORE_ACC: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/function/valid/core_acc.json"
    ));
    pub const ECO_MPC: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/function/valid/eco_mpc.json"
    ));
    pub const SIGNAL_GATEWAY: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/function/valid/signal_gateway.json"
    ));
    pub const CATALOG: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/catalog.json"
    ));
    pub const PLATFORM: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/platform.json"
    ));
    pub const TOPOLOGY: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/topology.json"
    ));
    pub const DEMO_TRACE: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../fixtures/traces/demo_60s.jsonl"
    ));
    pub const ADAPTER_TEMPLATE: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../templates/sim-middleware/adapter_source.cpp.tmpl"
    ));
    pub const MAPPING_TEMPLATE: &str = include_str!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../templates/sim-middleware/mapping.inc.tmpl"
    ));
}

/// The bundled template set, used when no template directory is configured.
pub fn embedded_templates() -> TemplateSet {
    let mut set = TemplateSet::new();
    set.insert("adapter_source.cpp.tmpl", fixtures::ADAPTER_TEMPLATE);
    set.insert("mapping.inc.tmpl", fixtures::MAPPING_TEMPLATE);
    set
}

/// Instantiate a bundled platform function by its model name.
pub fn demo_function(name: &str) -> Option<Box<dyn PlatformFunction>> {
    match name {
        "CoreAcc" => Some(Box::new(CoreAccFunction::new())),
        "EcoMpc" => Some(Box::new(EcoMpcFunction::new())),
        _ => None,
    }
}

fn f64_input(inputs: &BTreeMap<String, Value>, path: &str, slot: &mut f64) {
    if let Some(v) = inputs.get(&buffer_name(path)).and_then(Value::as_f64) {
        *slot = v;
    }
}

/// Core adaptive cruise control (50 ms): arbitrates the driver set speed,
/// the gap to the preceding vehicle, and the energy-optimal request into one
/// acceleration request plus an internal status.
pub struct CoreAccFunction {
    initialized: bool,
    speed_set: f64,
    distance: f64,
    eco_accel: f64,
    accel_request: f64,
    status: u8,
}

impl CoreAccFunction {
    pub fn new() -> Self {
        CoreAccFunction {
            initialized: false,
            speed_set: 0.0,
            distance: 100.0,
            eco_accel: 0.0,
            accel_request: 0.0,
            status: 0,
        }
    }
}

impl Default for CoreAccFunction {
    fn default() -> Self {
        Self::new()
    }
}

impl PlatformFunction for CoreAccFunction {
    fn init(&mut self) {
        self.initialized = true;
        self.speed_set = 0.0;
        self.distance = 100.0;
        self.eco_accel = 0.0;
        self.accel_request = 0.0;
        self.status = 0;
    }

    fn step(&mut self) -> Result<(), String> {
        if !self.initialized {
            return Ok(());
        }
        let set_term = ((self.speed_set - 90.0) * 0.05).clamp(-2.0, 2.0);
        let gap_term = if self.distance < 40.0 {
            -(((40.0 - self.distance) * 0.2).clamp(0.0, 4.5))
        } else {
            ((self.distance - 40.0) * 0.01).clamp(0.0, 1.0)
        };
        let candidate = set_term.min(gap_term);
        // Eco arbitration: the horizon request wins while it asks for less
        // acceleration, limited to a mild deceleration.
        let arbitrated = if self.eco_accel < candidate {
            self.eco_accel.max(-3.0)
        } else {
            candidate
        };
        self.accel_request = arbitrated.clamp(-5.0, 3.0);
        self.status = if self.speed_set <= 0.0 {
            0
        } else if self.distance < 15.0 {
            2
        } else {
            1
        };
        Ok(())
    }

    fn terminate(&mut self) {
        self.initialized = false;
    }

    fn set_external_inputs(&mut self, inputs: &BTreeMap<String, Value>) {
        f64_input(inputs, SPEED_SET_PATH, &mut self.speed_set);
        f64_input(inputs, DISTANCE_PATH, &mut self.distance);
        f64_input(inputs, ECO_ACCEL_PATH, &mut self.eco_accel);
    }

    fn get_external_outputs(&self) -> BTreeMap<String, Value> {
        let mut out = BTreeMap::new();
        out.insert(buffer_name(ACCEL_REQUEST_PATH), Value::from(self.accel_request));
        out.insert(buffer_name(STATUS_PATH), Value::from(u64::from(self.status)));
        out
    }
}

/// Energy-saving horizon controller (500 ms): turns the altitude gradient
/// into an acceleration request (downhill coast, uphill momentum).
pub struct EcoMpcFunction {
    initialized: bool,
    altitude: f64,
    previous_altitude: f64,
    accel_request: f64,
}

impl EcoMpcFunction {
    pub fn new() -> Self {
        EcoMpcFunction {
            initialized: false,
            altitude: 0.0,
            previous_altitude: 0.0,
            accel_request: 0.0,
        }
    }
}

impl Default for EcoMpcFunction {
    fn default() -> Self {
        Self::new()
    }
}

impl PlatformFunction for EcoMpcFunction {
    fn init(&mut self) {
        self.initialized = true;
        self.altitude = 0.0;
        self.previous_altitude = 0.0;
        self.accel_request = 0.0;
    }

    fn step(&mut self) -> Result<(), String> {
        if !self.initialized {
            return Ok(());
        }
        let slope = (self.altitude - self.previous_altitude) / 250.0;
        self.previous_altitude = self.altitude;
        self.accel_request = (-slope * 2.0).clamp(-3.0, 2.0);
        Ok(())
    }

    fn terminate(&mut self) {
        self.initialized = false;
    }

    fn set_external_inputs(&mut self, inputs: &BTreeMap<String, Value>) {
        f64_input(inputs, ALTITUDE_PATH, &mut self.altitude);
    }

    fn get_external_outputs(&self) -> BTreeMap<String, Value> {
        let mut out = BTreeMap::new();
        out.insert(buffer_name(ECO_ACCEL_PATH), Value::from(self.accel_request));
        out
    }
}
