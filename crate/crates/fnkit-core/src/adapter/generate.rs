//! Adapter generation from an integration model component.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::catalog::{derive_interface_name, NameKind};
use crate::datatypes::Datatype;
use crate::function_model::{FunctionModel, InterfaceDatatype};
use crate::integration::{Direction, IntegrationModel};

use super::template::{render_template, TemplateContext, TemplateError, TemplateValue};
use super::{
    buffer_name, snake_case, AdapterManifest, ArtifactFile, EventRef, FileOrigin,
    GeneratedArtifact, LifecycleBindings, Publication, RangePolicy, Subscription,
};

pub const MANUAL_SLOT_BEGIN: &str = "// fnkit:manual-slot:begin ";
pub const MANUAL_SLOT_END: &str = "// fnkit:manual-slot:end ";

const SOURCE_TEMPLATE: &str = "adapter_source.cpp.tmpl";
const MAPPING_TEMPLATE: &str = "mapping.inc.tmpl";

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("component {0:?} does not exist in the integration model")]
    UnknownComponent(String),
    #[error("component {component:?} embeds {count} functions; adapters bind exactly one")]
    MultiFunctionComponent { component: String, count: usize },
    #[error("template {0:?} is missing from the template set")]
    MissingTemplate(String),
    #[error("template {template:?}: {source}")]
    Template {
        template: String,
        source: TemplateError,
    },
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

/// Named templates, usually loaded from `templates/<platform>/`.
#[derive(Debug, Clone, Default)]
pub struct TemplateSet {
    templates: BTreeMap<String, String>,
}

impl TemplateSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, text: impl Into<String>) {
        self.templates.insert(name.into(), text.into());
    }

    /// Load every `*.tmpl` file of a directory.
    pub fn load_dir(dir: &Path) -> Result<Self, GenerateError> {
        let mut set = TemplateSet::new();
        let entries = fs::read_dir(dir).map_err(|source| GenerateError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        for entry in entries {
            let entry = entry.map_err(|source| GenerateError::Io {
                path: dir.to_path_buf(),
                source,
            })?;
            let path = entry.path();
            if path.extension().is_some_and(|e| e == "tmpl") {
                let text = fs::read_to_string(&path).map_err(|source| GenerateError::Io {
                    path: path.clone(),
                    source,
                })?;
                let name = path
                    .file_name()
                    .expect("read_dir yields named files")
                    .to_string_lossy()
                    .into_owned();
                set.insert(name, text);
            }
        }
        Ok(set)
    }

    fn get(&self, name: &str) -> Result<&str, GenerateError> {
        self.templates
            .get(name)
            .map(String::as_str)
            .ok_or_else(|| GenerateError::MissingTemplate(name.to_string()))
    }
}

/// Generate the adapter artifact for one component.
///
/// The manifest mirrors the rendered source exactly: one subscription per
/// Required event, one publication per Provided event, lifecycle fixed to
/// init / setExternalInputs-step-getExternalOutputs / terminate.
pub fn generate_adapter(
    model: &IntegrationModel,
    component_name: &str,
    templates: &TemplateSet,
) -> Result<GeneratedArtifact, GenerateError> {
    let component = model
        .component_list
        .iter()
        .find(|c| c.name == component_name)
        .ok_or_else(|| GenerateError::UnknownComponent(component_name.to_string()))?;
    if component.function_list.len() != 1 {
        return Err(GenerateError::MultiFunctionComponent {
            component: component_name.to_string(),
            count: component.function_list.len(),
        });
    }
    let function = &component.function_list[0];

    let mut subscriptions = Vec::new();
    let mut publications = Vec::new();
    let mut services: Vec<_> = component.service_interface_list.iter().collect();
    services.sort_by(|a, b| a.name.cmp(&b.name));
    for service in services {
        let mut events: Vec<_> = service.events.iter().collect();
        events.sort_by(|a, b| a.name.cmp(&b.name));
        for event in events {
            let event_ref = EventRef {
                service: service.name.clone(),
                event: event.name.clone(),
                source_path: event.source_path.clone(),
                datatype: event.datatype.clone(),
            };
            let buffer = buffer_name(&event.source_path);
            match service.direction {
                Direction::Required => {
                    let interface = interface_for(function, &event.source_path);
                    subscriptions.push(Subscription {
                        event: event_ref,
                        buffer_name: buffer,
                        timeout_value: interface.and_then(|i| i.timeout_value),
                        timeout_error: interface.and_then(|i| i.timeout_error.clone()),
                        range_policy: interface.and_then(|i| range_policy(function, i)),
                    });
                }
                Direction::Provided => {
                    publications.push(Publication {
                        event: event_ref,
                        buffer_name: buffer,
                    });
                }
            }
        }
    }

    let scheduling = &function.scheduling_info;
    let manifest = AdapterManifest {
        component_name: component.name.clone(),
        executable_name: component.executable_name.clone(),
        function_name: function.name.clone(),
        cycle_time: scheduling.cycle_time,
        initial_offset: scheduling.initial_offset.unwrap_or(0.0),
        priority: scheduling.priority.unwrap_or(0),
        debounce_time: scheduling.debounce_time,
        subscriptions,
        publications,
        lifecycle_bindings: LifecycleBindings::standard(),
        watchdog: function.effective_watchdog().clone(),
        errors: function.errors().to_vec(),
        safety_reactions: function.safety_reactions().to_vec(),
    };

    let context = template_context(&manifest);
    let component_snake = snake_case(&component.name);
    let files = vec![
        ArtifactFile {
            path: format!("{component_snake}_adapter.cpp"),
            text: render(templates, SOURCE_TEMPLATE, &context)?,
            origin: FileOrigin::Generated,
        },
        ArtifactFile {
            path: format!("{component_snake}_mapping.inc"),
            text: render(templates, MAPPING_TEMPLATE, &context)?,
            origin: FileOrigin::ManualSlot,
        },
    ];

    Ok(GeneratedArtifact { files, manifest })
}

fn render(
    templates: &TemplateSet,
    name: &str,
    context: &TemplateContext,
) -> Result<String, GenerateError> {
    render_template(templates.get(name)?, context).map_err(|source| GenerateError::Template {
        template: name.to_string(),
        source,
    })
}

fn interface_for<'a>(
    function: &'a FunctionModel,
    path: &str,
) -> Option<&'a InterfaceDatatype> {
    function.interface_data.iter().find(|i| i.name == path)
}

/// Range supervision applies when the interface declares a reaction and the
/// datatype carries a range. The raised error is the declared
/// `<Function>_<Leaf>Range_ErrorSts` error when present.
fn range_policy(function: &FunctionModel, interface: &InterfaceDatatype) -> Option<RangePolicy> {
    let action = interface.range_error_action?;
    let Datatype::Numerical(n) = &interface.datatype else {
        return None;
    };
    let leaf = interface.name.rsplit('.').next().unwrap_or(&interface.name);
    let error_name = derive_interface_name(
        NameKind::Error,
        &[function.name.as_str(), &format!("{leaf}Range")],
    )
    .ok()
    .map(|d| d.rendered)
    .filter(|name| function.errors().iter().any(|e| &e.name == name));
    Some(RangePolicy {
        action,
        min: n.min,
        max: n.max,
        default: n.default,
        error_name,
    })
}

fn template_context(manifest: &AdapterManifest) -> TemplateContext {
    let mut context = TemplateContext::new();
    context.insert("component".into(), TemplateValue::text(&manifest.component_name));
    context.insert(
        "component_snake".into(),
        TemplateValue::text(snake_case(&manifest.component_name)),
    );
    context.insert("executable".into(), TemplateValue::text(&manifest.executable_name));
    context.insert("function".into(), TemplateValue::text(&manifest.function_name));
    context.insert(
        "function_snake".into(),
        TemplateValue::text(snake_case(&manifest.function_name)),
    );
    context.insert("cycle_time_ms".into(), TemplateValue::text(manifest.cycle_time));
    context.insert(
        "initial_offset_ms".into(),
        TemplateValue::text(manifest.initial_offset),
    );
    context.insert("priority".into(), TemplateValue::text(manifest.priority));

    let subscriptions = manifest
        .subscriptions
        .iter()
        .map(|s| {
            let mut item = TemplateContext::new();
            item.insert("service".into(), TemplateValue::text(&s.event.service));
            item.insert("event".into(), TemplateValue::text(&s.event.event));
            item.insert("path".into(), TemplateValue::text(&s.event.source_path));
            item.insert("buffer".into(), TemplateValue::text(&s.buffer_name));
            item.insert(
                "value_type".into(),
                TemplateValue::text(cpp_type(&s.event.datatype)),
            );
            // Presence blocks: empty list = absent, single element = present.
            let timeout = match (s.timeout_value, &s.timeout_error) {
                (Some(ms), Some(error)) => {
                    let mut t = TemplateContext::new();
                    t.insert("timeout_ms".into(), TemplateValue::text(ms));
                    t.insert("timeout_error".into(), TemplateValue::text(error));
                    vec![t]
                }
                _ => vec![],
            };
            item.insert("timeout".into(), TemplateValue::List(timeout));
            let range = match &s.range_policy {
                Some(policy) => {
                    let mut r = TemplateContext::new();
                    r.insert("range_min".into(), TemplateValue::text(policy.min));
                    r.insert("range_max".into(), TemplateValue::text(policy.max));
                    r.insert(
                        "range_action".into(),
                        TemplateValue::text(format!("{:?}", policy.action)),
                    );
                    vec![r]
                }
                None => vec![],
            };
            item.insert("range".into(), TemplateValue::List(range));
            item
        })
        .collect();
    context.insert("subscriptions".into(), TemplateValue::List(subscriptions));

    let publications = manifest
        .publications
        .iter()
        .map(|p| {
            let mut item = TemplateContext::new();
            item.insert("service".into(), TemplateValue::text(&p.event.service));
            item.insert("event".into(), TemplateValue::text(&p.event.event));
            item.insert("path".into(), TemplateValue::text(&p.event.source_path));
            item.insert("buffer".into(), TemplateValue::text(&p.buffer_name));
            item.insert(
                "value_type".into(),
                TemplateValue::text(cpp_type(&p.event.datatype)),
            );
            item
        })
        .collect();
    context.insert("publications".into(), TemplateValue::List(publications));

    let errors = manifest
        .errors
        .iter()
        .map(|e| {
            let mut item = TemplateContext::new();
            item.insert("name".into(), TemplateValue::text(&e.name));
            item.insert("maturation_ms".into(), TemplateValue::text(e.maturation_time));
            item.insert("reset_ms".into(), TemplateValue::text(e.reset_time));
            item
        })
        .collect();
    context.insert("errors".into(), TemplateValue::List(errors));

    let reactions = manifest
        .safety_reactions
        .iter()
        .map(|r| {
            let mut item = TemplateContext::new();
            item.insert("name".into(), TemplateValue::text(&r.name));
            item.insert(
                "error_list".into(),
                TemplateValue::text(r.error_list.join(", ")),
            );
            item
        })
        .collect();
    context.insert("safety_reactions".into(), TemplateValue::List(reactions));

    context.insert(
        "supervision_type".into(),
        TemplateValue::text(format!("{:?}", manifest.watchdog.supervision_type)),
    );
    context
}

fn cpp_type(datatype: &Datatype) -> &'static str {
    match datatype {
        Datatype::Numerical(n) => match n.base {
            crate::datatypes::NumericBase::Uint8 => "std::uint8_t",
            crate::datatypes::NumericBase::Uint16 => "std::uint16_t",
            crate::datatypes::NumericBase::Uint32 => "std::uint32_t",
            crate::datatypes::NumericBase::Uint64 => "std::uint64_t",
            crate::datatypes::NumericBase::Int8 => "std::int8_t",
            crate::datatypes::NumericBase::Int16 => "std::int16_t",
            crate::datatypes::NumericBase::Int32 => "std::int32_t",
            crate::datatypes::NumericBase::Int64 => "std::int64_t",
            crate::datatypes::NumericBase::Float32 => "float",
            crate::datatypes::NumericBase::Float64 => "double",
        },
        Datatype::Text(_) => "std::string",
        Datatype::Boolean(_) => "bool",
        _ => "Structured",
    }
}

/// Carry the bodies of named manual slots from `old_text` into `new_text`.
/// Marker lines come from the new render; everything between them comes from
/// the old file, byte for byte.
pub fn merge_manual_slots(new_text: &str, old_text: &str) -> String {
    let old_slots = collect_slots(old_text);
    if old_slots.is_empty() {
        return new_text.to_string();
    }
    let mut out = String::with_capacity(new_text.len());
    let mut skip_until_end: Option<String> = None;
    for line in new_text.split_inclusive('\n') {
        let trimmed = line.trim();
        if let Some(slot) = skip_until_end.as_ref() {
            if trimmed == format!("{MANUAL_SLOT_END}{slot}") {
                out.push_str(line);
                skip_until_end = None;
            }
            continue;
        }
        out.push_str(line);
        if let Some(name) = trimmed.strip_prefix(MANUAL_SLOT_BEGIN) {
            if let Some(body) = old_slots.get(name) {
                out.push_str(body);
                skip_until_end = Some(name.to_string());
            }
        }
    }
    out
}

fn collect_slots(text: &str) -> BTreeMap<String, String> {
    let mut slots = BTreeMap::new();
    let mut current: Option<(String, String)> = None;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        match &mut current {
            Some((name, body)) => {
                if trimmed == format!("{MANUAL_SLOT_END}{name}") {
                    let (name, body) = current.take().expect("slot is open");
                    slots.insert(name, body);
                } else {
                    body.push_str(line);
                }
            }
            None => {
                if let Some(name) = trimmed.strip_prefix(MANUAL_SLOT_BEGIN) {
                    current = Some((name.to_string(), String::new()));
                }
            }
        }
    }
    slots
}

/// Write an artifact to a directory, preserving manual slots of existing
/// files, and emit the manifest as `adapter_manifest.json`.
pub fn write_artifact(
    artifact: &GeneratedArtifact,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, GenerateError> {
    fs::create_dir_all(out_dir).map_err(|source| GenerateError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for file in &artifact.files {
        let target = out_dir.join(&file.path);
        let text = match fs::read_to_string(&target) {
            Ok(existing) => merge_manual_slots(&file.text, &existing),
            Err(_) => file.text.clone(),
        };
        fs::write(&target, text).map_err(|source| GenerateError::Io {
            path: target.clone(),
            source,
        })?;
        written.push(target);
    }
    let manifest_path = out_dir.join("adapter_manifest.json");
    fs::write(&manifest_path, super::serialize_manifest(&artifact.manifest)).map_err(
        |source| GenerateError::Io {
            path: manifest_path.clone(),
            source,
        },
    )?;
    written.push(manifest_path);
    Ok(written)
}

/// Extract `(topic, buffer)` pairs from the coherence markers the source
/// template emits for every subscription and publication.
pub fn extract_io_markers(source: &str) -> (Vec<(String, String)>, Vec<(String, String)>) {
    let mut subscribes = Vec::new();
    let mut publishes = Vec::new();
    for line in source.lines() {
        let trimmed = line.trim();
        for (prefix, bucket) in [
            ("// fnkit:subscribe ", &mut subscribes),
            ("// fnkit:publish ", &mut publishes),
        ] {
            if let Some(rest) = trimmed.strip_prefix(prefix) {
                let mut topic = None;
                let mut buffer = None;
                for part in rest.split_whitespace() {
                    if let Some(v) = part.strip_prefix("topic=") {
                        topic = Some(v.to_string());
                    } else if let Some(v) = part.strip_prefix("buffer=") {
                        buffer = Some(v.to_string());
                    }
                }
                if let (Some(t), Some(b)) = (topic, buffer) {
                    bucket.push((t, b));
                }
            }
        }
    }
    (subscribes, publishes)
}
