//! Semantic validation of function models.
//!
//! Everything the strict parser cannot express structurally lands here:
//! range coherence, representability of limits in the declared base,
//! reference resolution for errors and timeouts, scheduling arithmetic, and
//! watchdog limit consistency.

use std::collections::{BTreeMap, BTreeSet};

use crate::catalog::SignalPath;
use crate::datatypes::Datatype;
use crate::function_model::{FunctionModel, WatchdogSpec};
use crate::validation::ValidationReport;

/// Validate a structurally parsed model. The model is valid iff the returned
/// report has no error-severity finding.
pub fn validate_function_model(model: &FunctionModel) -> ValidationReport {
    let mut report = ValidationReport::new();

    if model.name.is_empty() {
        report.error("Name", "function name must not be empty");
    }

    let declared_errors: BTreeSet<&str> =
        model.errors().iter().map(|e| e.name.as_str()).collect();

    let mut seen_interfaces = BTreeSet::new();
    for (i, interface) in model.interface_data.iter().enumerate() {
        let at = format!("InterfaceData[{i}]");
        if !seen_interfaces.insert(interface.name.as_str()) {
            report.error(&at, format!("duplicate interface name {:?}", interface.name));
        }
        if let Err(e) = SignalPath::parse(&interface.name) {
            report.error(format!("{at}.Name"), e.to_string());
        }
        if interface.kind.is_empty() {
            report.error(format!("{at}.Type"), "interface type must not be empty");
        }
        match (&interface.timeout_value, &interface.timeout_error) {
            (Some(_), None) => report.error(
                format!("{at}.TimeoutError"),
                "TimeoutValue requires TimeoutError",
            ),
            (None, Some(_)) => report.error(
                format!("{at}.TimeoutValue"),
                "TimeoutError requires TimeoutValue",
            ),
            (Some(v), Some(_)) if *v < 0.0 => report.error(
                format!("{at}.TimeoutValue"),
                "timeout must not be negative",
            ),
            _ => {}
        }
        if let Some(err_name) = &interface.timeout_error {
            if !declared_errors.contains(err_name.as_str()) {
                report.error(
                    format!("{at}.TimeoutError"),
                    format!("timeout error {err_name:?} is not declared in ErrorList"),
                );
            }
        }
        check_datatype(&interface.datatype, &format!("{at}.Datatype"), &mut report);
    }

    for (i, parameter) in model.parameters().iter().enumerate() {
        check_datatype(
            &parameter.datatype,
            &format!("ParameterList[{i}].Datatype"),
            &mut report,
        );
    }

    validate_scheduling(model, &mut report);
    validate_watchdog(
        &model.scheduling_info.supervision,
        "SchedulingInfo.Supervision",
        &declared_errors,
        &mut report,
    );
    if let Some(watchdog) = &model.watchdog {
        validate_watchdog(watchdog, "Watchdog", &declared_errors, &mut report);
    }
    validate_errors(model, &declared_errors, &mut report);
    validate_safety_reactions(model, &declared_errors, &mut report);

    report
}

fn validate_scheduling(model: &FunctionModel, report: &mut ValidationReport) {
    let sched = &model.scheduling_info;
    if sched.run_type == "cyclic" && sched.cycle_time <= 0.0 {
        report.error(
            "SchedulingInfo.CycleTime",
            "cycle time must be positive for cyclic functions",
        );
    }
    if let Some(offset) = sched.initial_offset {
        if offset < 0.0 {
            report.error("SchedulingInfo.InitialOffset", "offset must not be negative");
        } else if offset >= sched.cycle_time {
            report.error(
                "SchedulingInfo.InitialOffset",
                format!(
                    "initial offset {offset} ms must be smaller than the cycle time {} ms",
                    sched.cycle_time
                ),
            );
        }
    }
    if let Some(debounce) = sched.debounce_time {
        if debounce < 0.0 {
            report.error("SchedulingInfo.DebounceTime", "debounce must not be negative");
        } else if debounce > sched.cycle_time {
            report.error(
                "SchedulingInfo.DebounceTime",
                format!(
                    "debounce time {debounce} ms must not exceed the cycle time {} ms",
                    sched.cycle_time
                ),
            );
        }
    }
}

fn validate_watchdog(
    spec: &WatchdogSpec,
    at: &str,
    declared_errors: &BTreeSet<&str>,
    report: &mut ValidationReport,
) {
    let kind = spec.supervision_type;
    match (&spec.alive_limits, kind.has_alive()) {
        (Some(_), false) => report.error(
            format!("{at}.AliveLimits"),
            "alive limits given but alive supervision is not selected",
        ),
        (None, true) => report.error(
            format!("{at}.AliveLimits"),
            "alive supervision selected but no alive limits given",
        ),
        _ => {}
    }
    match (&spec.deadline_limits, kind.has_deadline()) {
        (Some(_), false) => report.error(
            format!("{at}.DeadlineLimits"),
            "deadline limits given but deadline supervision is not selected",
        ),
        (None, true) => report.error(
            format!("{at}.DeadlineLimits"),
            "deadline supervision selected but no deadline limits given",
        ),
        _ => {}
    }
    match (&spec.logical_check, kind.has_logical()) {
        (Some(_), false) => report.error(
            format!("{at}.LogicalCheck"),
            "logical check given but logical supervision is not selected",
        ),
        (None, true) => report.error(
            format!("{at}.LogicalCheck"),
            "logical supervision selected but no logical check given",
        ),
        _ => {}
    }
    if let Some(alive) = &spec.alive_limits {
        if alive.min_indications > alive.max_indications {
            report.error(
                format!("{at}.AliveLimits"),
                format!(
                    "min indications {} exceed max indications {}",
                    alive.min_indications, alive.max_indications
                ),
            );
        }
        if alive.reference_window <= 0.0 {
            report.error(
                format!("{at}.AliveLimits.ReferenceWindow"),
                "reference window must be positive",
            );
        }
        check_watchdog_error(&alive.error_name, at, declared_errors, report);
    }
    if let Some(deadline) = &spec.deadline_limits {
        if deadline.min_duration > deadline.max_duration {
            report.error(
                format!("{at}.DeadlineLimits"),
                format!(
                    "min duration {} exceeds max duration {}",
                    deadline.min_duration, deadline.max_duration
                ),
            );
        }
        check_watchdog_error(&deadline.error_name, at, declared_errors, report);
    }
    if let Some(logical) = &spec.logical_check {
        if logical.expected_order.is_empty() {
            report.error(
                format!("{at}.LogicalCheck.ExpectedOrder"),
                "expected order must not be empty",
            );
        }
        check_watchdog_error(&logical.error_name, at, declared_errors, report);
    }
}

fn check_watchdog_error(
    name: &str,
    at: &str,
    declared_errors: &BTreeSet<&str>,
    report: &mut ValidationReport,
) {
    // Watchdog errors may be handled by the platform rather than the function
    // itself, so an undeclared name is only suspicious, not fatal.
    if !declared_errors.contains(name) {
        report.warning(
            format!("{at}.ErrorName"),
            format!("watchdog error {name:?} is not declared in ErrorList"),
        );
    }
}

fn validate_errors(
    model: &FunctionModel,
    declared_errors: &BTreeSet<&str>,
    report: &mut ValidationReport,
) {
    let mut internal_deps: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (i, error) in model.errors().iter().enumerate() {
        let at = format!("ErrorList[{i}]");
        if error.maturation_time < 0.0 {
            report.error(
                format!("{at}.MaturationTime"),
                "maturation time must not be negative",
            );
        }
        if error.reset_time < 0.0 {
            report.error(format!("{at}.ResetTime"), "reset time must not be negative");
        }
        check_datatype(&error.datatype, &format!("{at}.Datatype"), report);
        if let Some(deps) = &error.dependencies {
            for dep in deps {
                if declared_errors.contains(dep.as_str()) {
                    internal_deps
                        .entry(error.name.as_str())
                        .or_default()
                        .push(dep.as_str());
                } else {
                    report.warning(
                        format!("{at}.Dependencies"),
                        format!("dependency {dep:?} is external to this function"),
                    );
                }
            }
        }
    }

    // Dependency cycles among the function's own errors would make the error
    // state machine latch forever; reject them here.
    if let Some(cycle_member) = find_cycle(&internal_deps) {
        report.error(
            "ErrorList",
            format!("error dependency cycle involving {cycle_member:?}"),
        );
    }

    let mut seen = BTreeSet::new();
    for (i, error) in model.errors().iter().enumerate() {
        if !seen.insert(error.name.as_str()) {
            report.error(
                format!("ErrorList[{i}].Name"),
                format!("duplicate error name {:?}", error.name),
            );
        }
    }
}

fn validate_safety_reactions(
    model: &FunctionModel,
    declared_errors: &BTreeSet<&str>,
    report: &mut ValidationReport,
) {
    for (i, reaction) in model.safety_reactions().iter().enumerate() {
        let at = format!("SafetyReactionList[{i}]");
        if reaction.error_list.is_empty() {
            report.error(format!("{at}.ErrorList"), "error list must not be empty");
        }
        for err_name in &reaction.error_list {
            if !declared_errors.contains(err_name.as_str()) {
                report.error(
                    format!("{at}.ErrorList"),
                    format!("safety reaction references undeclared error {err_name:?}"),
                );
            }
        }
        check_datatype(&reaction.datatype, &format!("{at}.Datatype"), report);
    }
}

fn find_cycle<'a>(deps: &BTreeMap<&'a str, Vec<&'a str>>) -> Option<&'a str> {
    fn visit<'a>(
        node: &'a str,
        deps: &BTreeMap<&'a str, Vec<&'a str>>,
        visiting: &mut BTreeSet<&'a str>,
        done: &mut BTreeSet<&'a str>,
    ) -> bool {
        if done.contains(node) {
            return false;
        }
        if !visiting.insert(node) {
            return true;
        }
        for next in deps.get(node).into_iter().flatten() {
            if visit(next, deps, visiting, done) {
                return true;
            }
        }
        visiting.remove(node);
        done.insert(node);
        false
    }

    let mut done = BTreeSet::new();
    for node in deps.keys() {
        let mut visiting = BTreeSet::new();
        if visit(node, deps, &mut visiting, &mut done) {
            return Some(node);
        }
    }
    None
}

fn check_datatype(datatype: &Datatype, at: &str, report: &mut ValidationReport) {
    match datatype {
        Datatype::Numerical(n) => {
            if n.min > n.max {
                report.error(
                    format!("{at}.Min"),
                    format!("min {} exceeds max {}", n.min, n.max),
                );
            }
            if n.default < n.min || n.default > n.max {
                report.error(
                    format!("{at}.Default"),
                    format!(
                        "default {} lies outside the range [{}, {}]",
                        n.default, n.min, n.max
                    ),
                );
            }
            for (field, value) in [("Min", n.min), ("Max", n.max), ("Default", n.default)] {
                if !n.base.representable(value) {
                    report.error(
                        format!("{at}.{field}"),
                        format!("{value} is not representable in {}", n.base),
                    );
                }
            }
        }
        Datatype::Text(t) => {
            if t.default.chars().count() as u32 > t.max_length {
                report.error(
                    format!("{at}.Default"),
                    format!("default text longer than MaxLength {}", t.max_length),
                );
            }
        }
        Datatype::Boolean(_) => {}
        Datatype::Composite(c) => {
            let mut names = BTreeSet::new();
            for (i, field) in c.fields.iter().enumerate() {
                if !names.insert(field.name.as_str()) {
                    report.error(
                        format!("{at}.Fields[{i}].Name"),
                        format!("duplicate composite field {:?}", field.name),
                    );
                }
                check_datatype(&field.datatype, &format!("{at}.Fields[{i}].Datatype"), report);
            }
        }
        Datatype::Array(a) => {
            if a.length == 0 {
                report.error(format!("{at}.Length"), "array length must be at least 1");
            }
            check_datatype(&a.element, &format!("{at}.Element"), report);
        }
        Datatype::Enumeration(e) => {
            let mut values = BTreeSet::new();
            let mut names = BTreeSet::new();
            for (i, literal) in e.literals.iter().enumerate() {
                if !values.insert(literal.value) {
                    report.error(
                        format!("{at}.Literals[{i}].Value"),
                        format!("duplicate enumeration value {}", literal.value),
                    );
                }
                if !names.insert(literal.name.as_str()) {
                    report.error(
                        format!("{at}.Literals[{i}].Name"),
                        format!("duplicate enumeration literal {:?}", literal.name),
                    );
                }
            }
            if e.literals.is_empty() {
                report.error(format!("{at}.Literals"), "enumeration must declare literals");
            }
        }
        Datatype::Reference(r) => {
            // Function models carry no datatype declarations, so a reference
            // can never resolve inside one.
            report.error(
                format!("{at}.Name"),
                format!(
                    "type reference {:?} cannot be resolved within a function model",
                    r.name
                ),
            );
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datatypes::{NumericBase, NumericalDatatype};
    use crate::function_model::tests::minimal_model;
    use crate::function_model::{
        AliveLimits, ErrorSpec, SupervisionType,
    };

    fn numerical(min: f64, max: f64, default: f64) -> Datatype {
        Datatype::Numerical(NumericalDatatype {
            base: NumericBase::Float64,
            min,
            max,
            unit: "m".into(),
            default,
        })
    }

    #[test]
    fn clean_cyclic_model_has_no_findings() {
        let report = validate_function_model(&minimal_model());
        assert!(report.findings.is_empty(), "{:?}", report.findings);
    }

    #[test]
    fn range_inversion_is_an_error() {
        let mut model = minimal_model();
        model.interface_data[0].datatype = numerical(10.0, 5.0, 7.0);
        let report = validate_function_model(&model);
        assert!(report
            .errors()
            .any(|f| f.path == "InterfaceData[0].Datatype.Min"));
    }

    #[test]
    fn offset_beyond_cycle_is_an_error() {
        let mut model = minimal_model();
        model.scheduling_info.initial_offset = Some(60.0);
        let report = validate_function_model(&model);
        assert!(report
            .errors()
            .any(|f| f.path == "SchedulingInfo.InitialOffset"));
    }

    #[test]
    fn unrepresentable_limits_are_errors() {
        let mut model = minimal_model();
        model.interface_data[0].datatype = Datatype::Numerical(NumericalDatatype {
            base: NumericBase::Uint8,
            min: 0.0,
            max: 300.0,
            unit: "".into(),
            default: 0.0,
        });
        let report = validate_function_model(&model);
        assert!(report.errors().any(|f| f.message.contains("300")));
    }

    #[test]
    fn dependency_cycle_is_rejected_and_external_deps_warn() {
        let mut model = minimal_model();
        let mk = |name: &str, deps: Vec<String>| ErrorSpec {
            name: name.into(),
            datatype: numerical(0.0, 1.0, 0.0),
            maturation_time: 50.0,
            severity: "warning lamp".into(),
            reset_time: 100.0,
            reset_condition: "condition clears".into(),
            description: String::new(),
            dependencies: if deps.is_empty() { None } else { Some(deps) },
        };
        model.error_list = Some(vec![
            mk("F_E1_ErrorSts", vec!["F_E2_ErrorSts".into()]),
            mk("F_E2_ErrorSts", vec!["F_E1_ErrorSts".into(), "Bsw_Ext_ErrorSts".into()]),
        ]);
        let report = validate_function_model(&model);
        assert!(report.errors().any(|f| f.message.contains("cycle")));
        assert!(report
            .findings
            .iter()
            .any(|f| f.message.contains("external")));
    }

    #[test]
    fn alive_supervision_requires_matching_limits() {
        let mut model = minimal_model();
        model.scheduling_info.supervision.supervision_type = SupervisionType::Alive;
        let report = validate_function_model(&model);
        assert!(!report.is_valid());

        model.scheduling_info.supervision.alive_limits = Some(AliveLimits {
            min_indications: 12,
            max_indications: 9,
            reference_window: 500.0,
            error_name: "F_Alive_ErrorSts".into(),
        });
        let report = validate_function_model(&model);
        assert!(report.errors().any(|f| f.message.contains("min indications")));
    }
}
