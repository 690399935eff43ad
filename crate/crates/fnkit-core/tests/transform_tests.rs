//! Transformation tests against the bundled application fixtures.

mod common;

use fnkit_core::function_model::{parse_function_model, Role};
use fnkit_core::integration::{
    count_entities, serialize_integration_model, transform, validate_integration, Direction,
    EntityCounts, TopologyAssignment, TransformError,
};

#[test]
fn demo_counts_match_the_hand_count() {
    // Hand count from the three fixture models: 3 executables; services are
    // the per-component direction groups (CoreAcc 3, EcoMpc 2, Gateway 2);
    // one event per interface leaf (5 + 2 + 3).
    let model = transform(&common::demo_functions(), &common::demo_platform(), &common::demo_topology())
        .unwrap();
    assert_eq!(
        count_entities(&model),
        EntityCounts { executables: 3, services: 7, events: 10 }
    );
}

#[test]
fn transform_is_deterministic_and_self_validating() {
    let functions = common::demo_functions();
    let platform = common::demo_platform();
    let topology = common::demo_topology();

    let a = transform(&functions, &platform, &topology).unwrap();
    let b = transform(&functions, &platform, &topology).unwrap();
    assert_eq!(
        serialize_integration_model(&a),
        serialize_integration_model(&b),
        "two transforms of the same inputs must be byte-identical"
    );

    // Input order must not matter either.
    let mut reversed = functions.clone();
    reversed.reverse();
    let c = transform(&reversed, &platform, &topology).unwrap();
    assert_eq!(serialize_integration_model(&a), serialize_integration_model(&c));

    let report = validate_integration(&a);
    assert!(report.is_valid(), "{:?}", report.findings);
}

#[test]
fn event_count_equals_interface_leaf_count() {
    let functions = common::demo_functions();
    let leaves: usize = functions.iter().map(|f| f.interface_data.len()).sum();
    let model = transform(&functions, &common::demo_platform(), &common::demo_topology()).unwrap();
    assert_eq!(count_entities(&model).events, leaves);
}

#[test]
fn grouping_splits_mixed_directions_and_assigns_sorted_ids() {
    let model = transform(&common::demo_functions(), &common::demo_platform(), &common::demo_topology())
        .unwrap();
    let core = model
        .component_list
        .iter()
        .find(|c| c.name == "CoreAccComponent")
        .unwrap();
    let names: Vec<(&str, Direction)> = core
        .service_interface_list
        .iter()
        .map(|s| (s.name.as_str(), s.direction))
        .collect();
    assert!(names.contains(&("Vehicle_ADAS_CruiseControl_Provided", Direction::Provided)));
    assert!(names.contains(&("Vehicle_ADAS_CruiseControl_Required", Direction::Required)));
    assert!(names.contains(&("Vehicle_ADAS_EcoControl", Direction::Required)));

    // Ids: services sorted by (name, component) from the id base; events
    // numbered in the same global walk.
    let mut all: Vec<(&str, &str, u32)> = model
        .component_list
        .iter()
        .flat_map(|c| {
            c.service_interface_list
                .iter()
                .map(move |s| (s.name.as_str(), c.name.as_str(), s.service_id))
        })
        .collect();
    all.sort_by_key(|(_, _, id)| *id);
    let expected = [
        ("Vehicle_ADAS_CruiseControl", "GatewayComponent", 1000),
        ("Vehicle_ADAS_CruiseControl_Provided", "CoreAccComponent", 1001),
        ("Vehicle_ADAS_CruiseControl_Required", "CoreAccComponent", 1002),
        ("Vehicle_ADAS_EcoControl", "CoreAccComponent", 1003),
        ("Vehicle_ADAS_EcoControl", "EcoMpcComponent", 1004),
        ("Vehicle_Navigation", "EcoMpcComponent", 1005),
        ("Vehicle_Navigation", "GatewayComponent", 1006),
    ];
    assert_eq!(all, expected);
}

#[test]
fn single_provider_leaf_with_depth_three_groups_as_expected() {
    let text = r#"{
        "Name": "StatusReporter",
        "Description": "single provider",
        "InterfaceData": [{
            "Name": "Vehicle.ADAS.ACC.Status",
            "Description": "",
            "Role": "Provider",
            "Type": "data",
            "Datatype": {"Numerical": {"Base": "uint8", "Min": 0, "Max": 3, "Unit": "", "Default": 0}},
            "AsilInfo": "QM"
        }],
        "SchedulingInfo": {
            "RunType": "cyclic", "CycleTime": 100, "Description": "",
            "ImplementedAsil": "QM", "Supervision": {"SupervisionType": "None"}
        }
    }"#;
    let function = parse_function_model(text).unwrap();
    let mut topology = common::demo_topology();
    topology.assignments = vec![TopologyAssignment {
        function: "StatusReporter".into(),
        component: "ReporterComponent".into(),
        executable: "reporter_app".into(),
    }];
    let model = transform(&[function], &common::demo_platform(), &topology).unwrap();
    let services = &model.component_list[0].service_interface_list;
    assert_eq!(services.len(), 1);
    assert_eq!(services[0].name, "Vehicle_ADAS_ACC");
    assert_eq!(services[0].direction, Direction::Provided);
    assert_eq!(services[0].events.len(), 1);
    assert_eq!(services[0].events[0].name, "Status");
    assert_eq!(services[0].events[0].source_path, "Vehicle.ADAS.ACC.Status");
}

#[test]
fn one_component_one_service_two_events_counts_as_such() {
    let function =
        parse_function_model(&common::fixture_text("function/valid/v23_deep_paths.json")).unwrap();
    let mut topology = common::demo_topology();
    topology.assignments = vec![TopologyAssignment {
        function: "WheelSpeedCalculation".into(),
        component: "WheelComponent".into(),
        executable: "wheel_app".into(),
    }];
    let model = transform(&[function], &common::demo_platform(), &topology).unwrap();
    assert_eq!(
        count_entities(&model),
        EntityCounts { executables: 1, services: 1, events: 2 }
    );
}

#[test]
fn counts_match_a_grep_style_oracle_over_the_canonical_json() {
    // Independent route: count the id members textually in the canonical
    // serialization instead of walking the typed model.
    let model = transform(&common::demo_functions(), &common::demo_platform(), &common::demo_topology())
        .unwrap();
    let text = serialize_integration_model(&model);
    let services = text.matches("\"ServiceId\":").count();
    let events = text.matches("\"EventId\":").count();
    let executables: std::collections::BTreeSet<&str> = text
        .match_indices("\"ExecutableName\":\"")
        .map(|(i, token)| {
            let rest = &text[i + token.len()..];
            &rest[..rest.find('"').expect("closing quote")]
        })
        .collect();
    let counts = count_entities(&model);
    assert_eq!(counts.services, services);
    assert_eq!(counts.events, events);
    assert_eq!(counts.executables, executables.len());
}

#[test]
fn empty_function_list_yields_empty_model_with_meta() {
    let mut topology = common::demo_topology();
    topology.assignments.clear();
    let model = transform(&[], &common::demo_platform(), &topology).unwrap();
    assert_eq!(count_entities(&model), EntityCounts { executables: 0, services: 0, events: 0 });
    assert!(!model.meta_information.tool_version.is_empty());
    assert!(!model.meta_information.created_at.is_empty());
    assert_eq!(model.application_information.name, "EcoControl");
}

#[test]
fn unassigned_function_and_double_provider_are_errors() {
    let functions = common::demo_functions();
    let mut topology = common::demo_topology();
    topology.assignments.pop();
    assert!(matches!(
        transform(&functions, &common::demo_platform(), &topology),
        Err(TransformError::UnassignedFunction(name)) if name == "SignalGateway"
    ));

    // A second provider for an already provided path.
    let mut functions = common::demo_functions();
    let mut clone = functions[1].clone();
    clone.name = "EcoMpcShadow".into();
    for interface in &mut clone.interface_data {
        interface.role = match interface.role {
            Role::Provider => Role::Provider,
            Role::Consumer => Role::Consumer,
        };
    }
    functions.push(clone);
    let mut topology = common::demo_topology();
    topology.assignments.push(TopologyAssignment {
        function: "EcoMpcShadow".into(),
        component: "ShadowComponent".into(),
        executable: "shadow_app".into(),
    });
    assert!(matches!(
        transform(&functions, &common::demo_platform(), &topology),
        Err(TransformError::TwoProviders(path)) if path == "Vehicle.ADAS.EcoControl.AccelerationRequest"
    ));
}

#[test]
fn platform_independence_of_event_names_and_datatypes() {
    let functions = common::demo_functions();
    let topology = common::demo_topology();
    let platform_a = common::demo_platform();
    let mut platform_b = platform_a.clone();
    platform_b.platform_name = "sim-middleware-b".into();
    platform_b.id_base = 9000;
    platform_b.transport_label = "altbus".into();
    platform_b.serialization = fnkit_core::integration::SerializationKind::BinaryLe;

    let a = transform(&functions, &platform_a, &topology).unwrap();
    let b = transform(&functions, &platform_b, &topology).unwrap();

    // Masked structural diff: everything except ids must be identical.
    let mask = |model: &fnkit_core::integration::IntegrationModel| {
        model
            .component_list
            .iter()
            .map(|c| {
                (
                    c.name.clone(),
                    c.service_interface_list
                        .iter()
                        .map(|s| {
                            (
                                s.name.clone(),
                                s.direction,
                                s.events
                                    .iter()
                                    .map(|e| (e.name.clone(), e.source_path.clone(), e.datatype.clone()))
                                    .collect::<Vec<_>>(),
                            )
                        })
                        .collect::<Vec<_>>(),
                )
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(mask(&a), mask(&b));
    assert_eq!(a.data_types, b.data_types);
}

#[test]
fn validation_flags_hand_edited_breakage() {
    let model = transform(&common::demo_functions(), &common::demo_platform(), &common::demo_topology())
        .unwrap();

    // Duplicate service id.
    let mut broken = model.clone();
    let id = broken.component_list[0].service_interface_list[0].service_id;
    broken.component_list[1].service_interface_list[0].service_id = id;
    assert!(!validate_integration(&broken).is_valid());

    // Required event with no provider anywhere.
    let mut broken = model.clone();
    broken
        .component_list
        .retain(|c| c.name != "GatewayComponent");
    let report = validate_integration(&broken);
    assert!(report
        .errors()
        .any(|f| f.message.contains("no provider anywhere")));

    // An interface stripped of its event binding breaks completeness.
    let mut broken = model.clone();
    for component in &mut broken.component_list {
        if component.name == "EcoMpcComponent" {
            for service in &mut component.service_interface_list {
                service
                    .events
                    .retain(|e| e.source_path != "Vehicle.Navigation.Altitude");
            }
        }
    }
    let report = validate_integration(&broken);
    assert!(report
        .errors()
        .any(|f| f.message.contains("expected exactly one")));
}
