//! Transformation of function models into a platform-bound integration model.
//!
//! The transformation is a pure function of its inputs: functions are sorted
//! by name, services by name, events by name, and all ids are assigned by
//! walking those sorted orders. Two calls with the same inputs produce
//! byte-identical canonical output.

use std::collections::{BTreeMap, BTreeSet};

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::canonical::to_canonical_string;
use crate::catalog::SignalPath;
use crate::datatypes::{Datatype, TypeReference};
use crate::function_model::{
    validate_function_model, FunctionModel, Parameter, Role,
};
use crate::validation::Finding;

use super::{
    ApplicationInformation, ComponentTopology, Direction, EventBinding, IntegrationComponent,
    IntegrationModel, MetaInformation, NamedDatatype, PlatformDescriptor, ServiceInterface,
};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("function {name:?} is invalid: {}", findings_summary(.findings))]
    InvalidFunction { name: String, findings: Vec<Finding> },
    #[error("duplicate function name {0:?} in input set")]
    DuplicateFunctionName(String),
    #[error("function {0:?} is not assigned to any component")]
    UnassignedFunction(String),
    #[error("function {0:?} is assigned to more than one component")]
    DuplicateAssignment(String),
    #[error("topology assigns unknown function {0:?}")]
    UnknownAssignment(String),
    #[error("component {0:?} is mapped to multiple executables")]
    InconsistentExecutable(String),
    #[error("two providers for the same path {0:?}")]
    TwoProviders(String),
    #[error("conflicting datatypes declared for path {0:?}")]
    ConflictingDatatype(String),
    #[error("component {component:?} consumes path {path:?} through more than one function")]
    DuplicateConsumption { component: String, path: String },
}

fn findings_summary(findings: &[Finding]) -> String {
    findings
        .iter()
        .map(Finding::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

struct Leaf<'a> {
    path: SignalPath,
    datatype: &'a Datatype,
    role: Role,
    component: &'a str,
}

/// Transform validated function models plus platform and topology information
/// into an integration model.
pub fn transform(
    functions: &[FunctionModel],
    platform: &PlatformDescriptor,
    topology: &ComponentTopology,
) -> Result<IntegrationModel, TransformError> {
    let mut sorted: Vec<&FunctionModel> = functions.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));

    let mut names = BTreeSet::new();
    for function in &sorted {
        if !names.insert(function.name.as_str()) {
            return Err(TransformError::DuplicateFunctionName(function.name.clone()));
        }
        let report = validate_function_model(function);
        if !report.is_valid() {
            return Err(TransformError::InvalidFunction {
                name: function.name.clone(),
                findings: report.errors().cloned().collect(),
            });
        }
    }

    // Resolve the topology: function -> component, component -> executable.
    let mut assignment: BTreeMap<&str, &str> = BTreeMap::new();
    let mut executables: BTreeMap<&str, &str> = BTreeMap::new();
    for entry in &topology.assignments {
        if !names.contains(entry.function.as_str()) {
            return Err(TransformError::UnknownAssignment(entry.function.clone()));
        }
        if assignment
            .insert(entry.function.as_str(), entry.component.as_str())
            .is_some()
        {
            return Err(TransformError::DuplicateAssignment(entry.function.clone()));
        }
        match executables.insert(entry.component.as_str(), entry.executable.as_str()) {
            Some(previous) if previous != entry.executable => {
                return Err(TransformError::InconsistentExecutable(
                    entry.component.clone(),
                ))
            }
            _ => {}
        }
    }
    for function in &sorted {
        if !assignment.contains_key(function.name.as_str()) {
            return Err(TransformError::UnassignedFunction(function.name.clone()));
        }
    }

    // Collect interface leaves and check provider/datatype coherence.
    let mut leaves: Vec<Leaf> = Vec::new();
    let mut providers: BTreeMap<String, &str> = BTreeMap::new();
    let mut datatypes_by_path: BTreeMap<String, &Datatype> = BTreeMap::new();
    for function in &sorted {
        let component = assignment[function.name.as_str()];
        for interface in &function.interface_data {
            let path = SignalPath::parse(&interface.name)
                .expect("interface paths were validated above");
            let path_text = path.to_string();
            if interface.role == Role::Provider
                && providers
                    .insert(path_text.clone(), function.name.as_str())
                    .is_some()
            {
                return Err(TransformError::TwoProviders(path_text));
            }
            match datatypes_by_path.get(path_text.as_str()) {
                Some(existing) if *existing != &interface.datatype => {
                    return Err(TransformError::ConflictingDatatype(path_text));
                }
                Some(_) => {}
                None => {
                    datatypes_by_path.insert(path_text.clone(), &interface.datatype);
                }
            }
            leaves.push(Leaf {
                path,
                datatype: &interface.datatype,
                role: interface.role,
                component,
            });
        }
    }

    // Hoist non-scalar datatypes into the model-level declaration list.
    let mut data_types: BTreeMap<String, NamedDatatype> = BTreeMap::new();
    let mut event_datatype = |path_text: &str, datatype: &Datatype| -> Datatype {
        if datatype.is_scalar() {
            datatype.clone()
        } else {
            let name = format!("{}_T", path_text.replace('.', "_"));
            data_types.entry(name.clone()).or_insert_with(|| NamedDatatype {
                name: name.clone(),
                datatype: datatype.clone(),
            });
            Datatype::Reference(TypeReference { name })
        }
    };

    // Group leaves into services per component: key is the path prefix of
    // `service_grouping_depth` segments (always leaving at least one segment
    // for the event name) plus the direction.
    let depth = platform.service_grouping_depth as usize;
    type GroupKey = (String, String, Direction); // component, prefix, direction
    let mut groups: BTreeMap<GroupKey, Vec<EventBinding>> = BTreeMap::new();
    let mut seen_events: BTreeSet<(String, Direction, String)> = BTreeSet::new();
    for leaf in &leaves {
        let split = depth.min(leaf.path.len() - 1);
        let prefix = leaf.path.prefix_joined(split, "_");
        let event_name = leaf.path.suffix_joined(split, "_");
        let path_text = leaf.path.to_string();
        let direction = match leaf.role {
            Role::Provider => Direction::Provided,
            Role::Consumer => Direction::Required,
        };
        if !seen_events.insert((leaf.component.to_string(), direction, path_text.clone())) {
            return Err(TransformError::DuplicateConsumption {
                component: leaf.component.to_string(),
                path: path_text,
            });
        }
        let datatype = event_datatype(&path_text, leaf.datatype);
        groups
            .entry((leaf.component.to_string(), prefix, direction))
            .or_default()
            .push(EventBinding {
                name: event_name,
                event_id: 0, // assigned below
                datatype,
                source_path: path_text,
            });
    }

    // Name services; groups that exist in both directions on one component
    // are split with an explicit direction suffix.
    let mut services: Vec<(String, ServiceInterface)> = Vec::new();
    for ((component, prefix, direction), mut events) in groups {
        events.sort_by(|a, b| a.name.cmp(&b.name));
        services.push((
            component,
            ServiceInterface {
                name: prefix,
                service_id: 0, // assigned below
                direction,
                events,
                methods: None,
            },
        ));
    }
    // Apply the mixed-direction split now that all groups exist.
    let mut by_component_prefix: BTreeMap<(String, String), usize> = BTreeMap::new();
    for (component, service) in &services {
        *by_component_prefix
            .entry((component.clone(), service.name.clone()))
            .or_default() += 1;
    }
    for (component, service) in &mut services {
        let key = (component.clone(), service.name.clone());
        if by_component_prefix[&key] > 1 {
            let suffix = match service.direction {
                Direction::Provided => "_Provided",
                Direction::Required => "_Required",
            };
            service.name.push_str(suffix);
        }
    }

    // Deterministic ids: services sorted by (name, component), events in
    // service-major, name-minor order. Both sequences start at the id base.
    services.sort_by(|(ca, sa), (cb, sb)| sa.name.cmp(&sb.name).then(ca.cmp(cb)));
    let mut next_event_id = platform.id_base;
    for (index, (_, service)) in services.iter_mut().enumerate() {
        service.service_id = platform.id_base + index as u32;
        for event in &mut service.events {
            event.event_id = next_event_id;
            next_event_id += 1;
        }
    }

    // Assemble components in name order.
    let mut components: Vec<IntegrationComponent> = Vec::new();
    let mut component_names: Vec<&str> = executables.keys().copied().collect();
    component_names.sort_unstable();
    for component_name in component_names {
        let function_list: Vec<FunctionModel> = sorted
            .iter()
            .filter(|f| assignment[f.name.as_str()] == component_name)
            .map(|f| (*f).clone())
            .collect();
        if function_list.is_empty() {
            continue;
        }
        let parameters: Vec<Parameter> = function_list
            .iter()
            .flat_map(|f| f.parameters().iter().cloned())
            .collect();
        let service_interface_list: Vec<ServiceInterface> = services
            .iter()
            .filter(|(c, _)| c == component_name)
            .map(|(_, s)| s.clone())
            .collect();
        components.push(IntegrationComponent {
            name: component_name.to_string(),
            executable_name: executables[component_name].to_string(),
            function_group_modes: Vec::new(),
            function_list,
            parameter_list: if parameters.is_empty() {
                None
            } else {
                Some(parameters)
            },
            service_interface_list,
        });
    }

    let digests = sorted
        .iter()
        .map(|f| {
            let canonical =
                to_canonical_string(*f).expect("validated model serializes");
            hex::encode(Sha256::digest(canonical.as_bytes()))
        })
        .collect();

    Ok(IntegrationModel {
        meta_information: MetaInformation {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            created_at: created_at_stamp(),
            source_function_model_digests: digests,
        },
        application_information: ApplicationInformation {
            name: topology.application.name.clone(),
            description: topology.application.description.clone(),
        },
        component_list: components,
        data_types: data_types.into_values().collect(),
    })
}

/// Reproducible creation stamp: `SOURCE_DATE_EPOCH` when set, epoch otherwise.
fn created_at_stamp() -> String {
    let epoch = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse::<i64>().ok())
        .unwrap_or(0);
    chrono::DateTime::from_timestamp(epoch, 0)
        .unwrap_or_default()
        .format("%Y-%m-%dT%H:%M:%SZ")
        .to_string()
}
