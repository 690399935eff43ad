//! Semantic validation of integration models.

use std::collections::{BTreeMap, BTreeSet};

use crate::catalog::SignalPath;
use crate::datatypes::Datatype;
use crate::function_model::{validate_function_model, Role};
use crate::validation::ValidationReport;

use super::{Direction, IntegrationModel};

/// Validate an integration model: id uniqueness, consumer/provider closure,
/// reference resolution, and validity of the embedded function models.
pub fn validate_integration(model: &IntegrationModel) -> ValidationReport {
    let mut report = ValidationReport::new();

    let mut component_names = BTreeSet::new();
    let mut function_owner: BTreeMap<&str, &str> = BTreeMap::new();
    let mut service_ids: BTreeMap<u32, String> = BTreeMap::new();
    let mut event_ids: BTreeMap<u32, String> = BTreeMap::new();
    let mut provided_paths: BTreeMap<&str, &str> = BTreeMap::new();
    let mut required_paths: Vec<(&str, String)> = Vec::new();

    let declared_types: BTreeSet<&str> = model
        .data_types
        .iter()
        .map(|d| d.name.as_str())
        .collect();
    {
        let mut seen = BTreeSet::new();
        for (i, declared) in model.data_types.iter().enumerate() {
            if !seen.insert(declared.name.as_str()) {
                report.error(
                    format!("DataTypes[{i}].Name"),
                    format!("duplicate datatype declaration {:?}", declared.name),
                );
            }
            check_references(
                &declared.datatype,
                &declared_types,
                &format!("DataTypes[{i}].Datatype"),
                &mut report,
            );
        }
    }

    for (ci, component) in model.component_list.iter().enumerate() {
        let at = format!("ComponentList[{ci}]");
        if !component_names.insert(component.name.as_str()) {
            report.error(
                format!("{at}.Name"),
                format!("duplicate component name {:?}", component.name),
            );
        }
        if component.executable_name.is_empty() {
            report.error(
                format!("{at}.ExecutableName"),
                "executable name must not be empty",
            );
        }

        for (fi, function) in component.function_list.iter().enumerate() {
            let fat = format!("{at}.FunctionList[{fi}]");
            if let Some(previous) =
                function_owner.insert(function.name.as_str(), component.name.as_str())
            {
                report.error(
                    format!("{fat}.Name"),
                    format!(
                        "function {:?} already belongs to component {previous:?}",
                        function.name
                    ),
                );
            }
            let inner = validate_function_model(function);
            for finding in inner.findings {
                report.findings.push(crate::validation::Finding {
                    severity: finding.severity,
                    path: format!("{fat}.{}", finding.path),
                    message: finding.message,
                });
            }
        }

        for (si, service) in component.service_interface_list.iter().enumerate() {
            let sat = format!("{at}.ServiceInterfaceList[{si}]");
            if let Some(previous) = service_ids.insert(service.service_id, service.name.clone()) {
                report.error(
                    format!("{sat}.ServiceId"),
                    format!(
                        "service id {} already used by service {previous:?}",
                        service.service_id
                    ),
                );
            }
            let mut event_names = BTreeSet::new();
            for (ei, event) in service.events.iter().enumerate() {
                let eat = format!("{sat}.Events[{ei}]");
                if !event_names.insert(event.name.as_str()) {
                    report.error(
                        format!("{eat}.Name"),
                        format!("duplicate event name {:?} in service", event.name),
                    );
                }
                if let Some(previous) = event_ids.insert(event.event_id, event.name.clone()) {
                    report.error(
                        format!("{eat}.EventId"),
                        format!(
                            "event id {} already used by event {previous:?}",
                            event.event_id
                        ),
                    );
                }
                if let Err(e) = SignalPath::parse(&event.source_path) {
                    report.error(format!("{eat}.SourcePath"), e.to_string());
                }
                check_references(&event.datatype, &declared_types, &format!("{eat}.Datatype"), &mut report);

                // Events must trace back to an interface of the component's
                // own functions with the matching role.
                let wanted_role = match service.direction {
                    Direction::Provided => Role::Provider,
                    Direction::Required => Role::Consumer,
                };
                let backed = component.function_list.iter().any(|f| {
                    f.interface_data.iter().any(|i| {
                        i.name == event.source_path && i.role == wanted_role
                    })
                });
                if !backed {
                    report.error(
                        format!("{eat}.SourcePath"),
                        format!(
                            "no {wanted_role:?} interface {:?} in this component's functions",
                            event.source_path
                        ),
                    );
                }

                match service.direction {
                    Direction::Provided => {
                        if let Some(previous) =
                            provided_paths.insert(&event.source_path, &component.name)
                        {
                            report.error(
                                format!("{eat}.SourcePath"),
                                format!(
                                    "path {:?} already provided by component {previous:?}",
                                    event.source_path
                                ),
                            );
                        }
                    }
                    Direction::Required => {
                        required_paths.push((&event.source_path, eat.clone()));
                    }
                }
            }
        }
    }

    for (path, at) in required_paths {
        if !provided_paths.contains_key(path) {
            report.error(
                format!("{at}.SourcePath"),
                format!("required event {path:?} has no provider anywhere in the model"),
            );
        }
    }

    // Completeness: every Consumer interface has exactly one Required event
    // binding in its component, every Provider exactly one Provided binding.
    for (ci, component) in model.component_list.iter().enumerate() {
        for (fi, function) in component.function_list.iter().enumerate() {
            for (ii, interface) in function.interface_data.iter().enumerate() {
                let wanted_direction = match interface.role {
                    Role::Provider => Direction::Provided,
                    Role::Consumer => Direction::Required,
                };
                let bindings = component
                    .service_interface_list
                    .iter()
                    .filter(|s| s.direction == wanted_direction)
                    .flat_map(|s| &s.events)
                    .filter(|e| e.source_path == interface.name)
                    .count();
                if bindings != 1 {
                    report.error(
                        format!("ComponentList[{ci}].FunctionList[{fi}].InterfaceData[{ii}]"),
                        format!(
                            "interface {:?} has {bindings} {wanted_direction:?} event binding(s), expected exactly one",
                            interface.name
                        ),
                    );
                }
            }
        }
    }

    let total_functions: usize = model
        .component_list
        .iter()
        .map(|c| c.function_list.len())
        .sum();
    if model.meta_information.source_function_model_digests.len() != total_functions {
        report.warning(
            "MetaInformation.SourceFunctionModelDigests",
            format!(
                "{} digest(s) recorded for {} function(s)",
                model.meta_information.source_function_model_digests.len(),
                total_functions
            ),
        );
    }

    report
}

fn check_references(
    datatype: &Datatype,
    declared: &BTreeSet<&str>,
    at: &str,
    report: &mut ValidationReport,
) {
    match datatype {
        Datatype::Reference(r) => {
            if !declared.contains(r.name.as_str()) {
                report.error(
                    format!("{at}.Name"),
                    format!("type reference {:?} does not resolve", r.name),
                );
            }
        }
        Datatype::Composite(c) => {
            for (i, field) in c.fields.iter().enumerate() {
                check_references(
                    &field.datatype,
                    declared,
                    &format!("{at}.Fields[{i}].Datatype"),
                    report,
                );
            }
        }
        Datatype::Array(a) => {
            check_references(&a.element, declared, &format!("{at}.Element"), report);
        }
        _ => {}
    }
}
