//! Shared helpers for the integration test suites.
//!
//! Each test target compiles this module separately and uses a different
//! subset of it.
#![allow(dead_code)]

use std::path::PathBuf;

use fnkit_core::function_model::{parse_function_model, FunctionModel};
use fnkit_core::integration::{
    parse_platform_descriptor, parse_topology, ComponentTopology, PlatformDescriptor,
};

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root exists")
}

pub fn fixture_text(relative: &str) -> String {
    let path = workspace_root().join("fixtures").join(relative);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path:?}: {e}"))
}

pub fn demo_functions() -> Vec<FunctionModel> {
    ["function/valid/core_acc.json", "function/valid/eco_mpc.json", "function/valid/signal_gateway.json"]
        .iter()
        .map(|p| parse_function_model(&fixture_text(p)).expect("demo fixture parses"))
        .collect()
}

pub fn demo_platform() -> PlatformDescriptor {
    parse_platform_descriptor(&fixture_text("platform.json")).expect("platform fixture parses")
}

pub fn demo_topology() -> ComponentTopology {
    parse_topology(&fixture_text("topology.json")).expect("topology fixture parses")
}
