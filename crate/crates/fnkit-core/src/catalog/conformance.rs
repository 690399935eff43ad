//! Conformance of a function model against the signal catalog.

use crate::datatypes::Datatype;
use crate::function_model::FunctionModel;
use crate::validation::ValidationReport;

use super::naming::NameKind;
use super::path::SignalPath;
use super::tree::{LeafMetadata, SignalTree};

/// Check a function model against the catalog: every data interface must
/// exist in the tree with matching datatype, unit, and range, and the
/// non-signal interfaces (errors, safety reactions) must follow their naming
/// conventions.
pub fn check_catalog_conformance(
    model: &FunctionModel,
    tree: &SignalTree,
) -> ValidationReport {
    let mut report = ValidationReport::new();

    for (i, interface) in model.interface_data.iter().enumerate() {
        let at = format!("InterfaceData[{i}]");
        let path = match SignalPath::parse(&interface.name) {
            Ok(path) => path,
            Err(e) => {
                report.error(format!("{at}.Name"), e.to_string());
                continue;
            }
        };
        let Some(leaf) = tree.lookup(&path) else {
            report.error(
                format!("{at}.Name"),
                format!("unknown signal {:?}", interface.name),
            );
            continue;
        };
        check_leaf_match(&interface.datatype, leaf, &at, &mut report);
    }

    for (i, error) in model.errors().iter().enumerate() {
        if !NameKind::Error.matches(&error.name) {
            report.warning(
                format!("ErrorList[{i}].Name"),
                format!(
                    "{:?} does not follow the <Function>_<Error>_ErrorSts convention",
                    error.name
                ),
            );
        }
    }
    for (i, reaction) in model.safety_reactions().iter().enumerate() {
        if !NameKind::SafetyReaction.matches(&reaction.name) {
            report.warning(
                format!("SafetyReactionList[{i}].Name"),
                format!(
                    "{:?} does not follow the <Condition>_SftyCondSts convention",
                    reaction.name
                ),
            );
        }
    }

    report
}

fn check_leaf_match(
    datatype: &Datatype,
    leaf: &LeafMetadata,
    at: &str,
    report: &mut ValidationReport,
) {
    match datatype {
        Datatype::Numerical(n) => {
            if n.base.as_str() != leaf.datatype {
                report.error(
                    format!("{at}.Datatype.Base"),
                    format!(
                        "datatype {} does not match catalog datatype {}",
                        n.base, leaf.datatype
                    ),
                );
            }
            if n.unit != leaf.unit {
                report.error(
                    format!("{at}.Datatype.Unit"),
                    format!("unit {:?} does not match catalog unit {:?}", n.unit, leaf.unit),
                );
            }
            if n.min != leaf.min || n.max != leaf.max {
                report.error(
                    format!("{at}.Datatype"),
                    format!(
                        "range [{}, {}] does not match catalog range [{}, {}]",
                        n.min, n.max, leaf.min, leaf.max
                    ),
                );
            }
        }
        Datatype::Boolean(_) => {
            if leaf.datatype != "boolean" {
                report.error(
                    format!("{at}.Datatype"),
                    format!("boolean interface but catalog datatype {}", leaf.datatype),
                );
            }
        }
        Datatype::Text(_) => {
            if leaf.datatype != "string" {
                report.error(
                    format!("{at}.Datatype"),
                    format!("text interface but catalog datatype {}", leaf.datatype),
                );
            }
        }
        // The flat catalog format only describes scalar leaves; structured
        // interfaces are matched by kind name.
        other => {
            if leaf.datatype != other.kind_name().to_ascii_lowercase() {
                report.error(
                    format!("{at}.Datatype"),
                    format!(
                        "{} interface but catalog datatype {}",
                        other.kind_name(),
                        leaf.datatype
                    ),
                );
            }
        }
    }
}
