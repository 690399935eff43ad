//! Minimal deterministic template engine for adapter generation.
//!
//! `{{name}}` substitutes a bound text value. A line holding only `{{#name}}`
//! opens a block over a list binding; `{{/name}}` closes it. Block bodies are
//! rendered once per element with the element's bindings shadowing the outer
//! scope. Unbound placeholders are hard errors — generation must never emit
//! silently incomplete code.

use std::collections::BTreeMap;

use thiserror::Error;

/// A binding is either text or a list of nested scopes.
#[derive(Debug, Clone, PartialEq)]
pub enum TemplateValue {
    Text(String),
    List(Vec<TemplateContext>),
}

impl TemplateValue {
    pub fn text(value: impl std::fmt::Display) -> Self {
        TemplateValue::Text(value.to_string())
    }
}

pub type TemplateContext = BTreeMap<String, TemplateValue>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TemplateError {
    #[error("unbound placeholder {{{{{0}}}}}")]
    UnboundPlaceholder(String),
    #[error("placeholder {{{{{0}}}}} is bound to a list, not text")]
    NotText(String),
    #[error("block {{{{#{0}}}}} is bound to text, not a list")]
    NotList(String),
    #[error("malformed block: {0}")]
    MalformedBlock(String),
    #[error("unterminated placeholder on line {0}")]
    UnterminatedPlaceholder(usize),
}

#[derive(Debug)]
enum Node {
    Text(String),
    Var(String),
    Section(String, Vec<Node>),
}

/// Render a template against a context.
pub fn render_template(
    template: &str,
    context: &TemplateContext,
) -> Result<String, TemplateError> {
    let nodes = parse(template)?;
    let mut out = String::new();
    let scopes = vec![context];
    render_nodes(&nodes, &scopes, &mut out)?;
    Ok(out)
}

fn parse(template: &str) -> Result<Vec<Node>, TemplateError> {
    let mut stack: Vec<(String, Vec<Node>)> = Vec::new();
    let mut current: Vec<Node> = Vec::new();

    for (line_no, line) in template.split_inclusive('\n').enumerate() {
        let trimmed = line.trim();
        if let Some(name) = tag_name(trimmed, "{{#") {
            stack.push((name.to_string(), std::mem::take(&mut current)));
            continue;
        }
        if let Some(name) = tag_name(trimmed, "{{/") {
            let Some((open_name, outer)) = stack.pop() else {
                return Err(TemplateError::MalformedBlock(format!(
                    "{{{{/{name}}}}} without matching open"
                )));
            };
            if open_name != name {
                return Err(TemplateError::MalformedBlock(format!(
                    "{{{{/{name}}}}} closes {{{{#{open_name}}}}}"
                )));
            }
            let body = std::mem::replace(&mut current, outer);
            current.push(Node::Section(open_name, body));
            continue;
        }
        parse_inline(line, line_no + 1, &mut current)?;
    }

    if let Some((name, _)) = stack.pop() {
        return Err(TemplateError::MalformedBlock(format!(
            "{{{{#{name}}}}} is never closed"
        )));
    }
    Ok(current)
}

/// `{{#name}}` / `{{/name}}` as the only content of a line.
fn tag_name<'a>(trimmed: &'a str, opener: &str) -> Option<&'a str> {
    let rest = trimmed.strip_prefix(opener)?;
    let name = rest.strip_suffix("}}")?;
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    ok.then_some(name)
}

fn parse_inline(line: &str, line_no: usize, out: &mut Vec<Node>) -> Result<(), TemplateError> {
    let mut rest = line;
    while let Some(start) = rest.find("{{") {
        if !rest[..start].is_empty() {
            out.push(Node::Text(rest[..start].to_string()));
        }
        let after = &rest[start + 2..];
        let Some(end) = after.find("}}") else {
            return Err(TemplateError::UnterminatedPlaceholder(line_no));
        };
        out.push(Node::Var(after[..end].trim().to_string()));
        rest = &after[end + 2..];
    }
    if !rest.is_empty() {
        out.push(Node::Text(rest.to_string()));
    }
    Ok(())
}

fn render_nodes(
    nodes: &[Node],
    scopes: &[&TemplateContext],
    out: &mut String,
) -> Result<(), TemplateError> {
    for node in nodes {
        match node {
            Node::Text(text) => out.push_str(text),
            Node::Var(name) => match lookup(scopes, name) {
                Some(TemplateValue::Text(text)) => out.push_str(text),
                Some(TemplateValue::List(_)) => {
                    return Err(TemplateError::NotText(name.clone()))
                }
                None => return Err(TemplateError::UnboundPlaceholder(name.clone())),
            },
            Node::Section(name, body) => match lookup(scopes, name) {
                Some(TemplateValue::List(items)) => {
                    for item in items {
                        let mut inner = scopes.to_vec();
                        inner.push(item);
                        render_nodes(body, &inner, out)?;
                    }
                }
                Some(TemplateValue::Text(_)) => {
                    return Err(TemplateError::NotList(name.clone()))
                }
                None => return Err(TemplateError::UnboundPlaceholder(name.clone())),
            },
        }
    }
    Ok(())
}

fn lookup<'a>(scopes: &[&'a TemplateContext], name: &str) -> Option<&'a TemplateValue> {
    scopes.iter().rev().find_map(|scope| scope.get(name))
}
