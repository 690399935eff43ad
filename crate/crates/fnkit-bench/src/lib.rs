//! Shared input builders for the pipeline benchmarks.

use fnkit_core::adapter::{generate_adapter, AdapterManifest, TemplateSet};
use fnkit_core::function_model::{parse_function_model, FunctionModel};
use fnkit_core::integration::{
    parse_platform_descriptor, parse_topology, transform, ComponentTopology, IntegrationModel,
    PlatformDescriptor,
};
use fnkit_core::replay::{load_trace, SignalTrace};

use fnkit_cli::demo::{embedded_templates, fixtures};

pub fn demo_functions() -> Vec<FunctionModel> {
    [fixtures::CORE_ACC, fixtures::ECO_MPC, fixtures::SIGNAL_GATEWAY]
        .iter()
        .map(|text| parse_function_model(text).expect("bundled model parses"))
        .collect()
}

pub fn demo_platform() -> PlatformDescriptor {
    parse_platform_descriptor(fixtures::PLATFORM).expect("bundled platform parses")
}

pub fn demo_topology() -> ComponentTopology {
    parse_topology(fixtures::TOPOLOGY).expect("bundled topology parses")
}

pub fn demo_integration() -> IntegrationModel {
    transform(&demo_functions(), &demo_platform(), &demo_topology()).expect("transform succeeds")
}

pub fn templates() -> TemplateSet {
    embedded_templates()
}

pub fn demo_manifests() -> Vec<AdapterManifest> {
    let model = demo_integration();
    let templates = templates();
    ["CoreAccComponent", "EcoMpcComponent"]
        .iter()
        .map(|c| {
            generate_adapter(&model, c, &templates)
                .expect("generation succeeds")
                .manifest
        })
        .collect()
}

pub fn demo_trace() -> SignalTrace {
    load_trace(fixtures::DEMO_TRACE, None).expect("bundled trace parses")
}
