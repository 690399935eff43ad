//! Signal tree construction and the flat catalog file format.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::datatypes::AsilLevel;
use crate::function_model::parse_strict;
use crate::function_model::ParseError;

use super::path::SignalPath;

/// Metadata carried by every leaf signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct LeafMetadata {
    /// Scalar datatype name, e.g. "float32" or "boolean".
    pub datatype: String,
    pub unit: String,
    pub min: f64,
    pub max: f64,
    pub default: f64,
    pub description: String,
    #[serde(default = "default_asil", skip_serializing_if = "is_qm")]
    pub asil: AsilLevel,
}

fn default_asil() -> AsilLevel {
    AsilLevel::QM
}

fn is_qm(level: &AsilLevel) -> bool {
    *level == AsilLevel::QM
}

/// One row of the flat catalog file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "PascalCase", deny_unknown_fields)]
pub struct CatalogEntry {
    pub path: String,
    pub datatype: String,
    pub unit: String,
    pub min: f64,
    pub max: f64,
    pub default: f64,
    pub description: String,
    #[serde(default = "default_asil", skip_serializing_if = "is_qm")]
    pub asil: AsilLevel,
}

impl CatalogEntry {
    fn into_parts(self) -> (String, LeafMetadata) {
        (
            self.path,
            LeafMetadata {
                datatype: self.datatype,
                unit: self.unit,
                min: self.min,
                max: self.max,
                default: self.default,
                description: self.description,
                asil: self.asil,
            },
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("invalid path {path:?}: {source}")]
    InvalidPath {
        path: String,
        source: super::path::PathError,
    },
    #[error("duplicate leaf path {0:?}")]
    DuplicateLeaf(String),
    #[error("leaf/branch conflict at {0:?}: a leaf cannot also be a branch")]
    LeafBranchConflict(String),
}

/// A node is either a branch with children or a leaf with metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum TreeNode {
    Branch(BTreeMap<String, TreeNode>),
    Leaf(LeafMetadata),
}

/// The hierarchical signal catalog. Children are kept sorted, so two trees
/// built from the same leaves in any order are structurally equal.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SignalTree {
    root: BTreeMap<String, TreeNode>,
}

impl SignalTree {
    pub fn lookup(&self, path: &SignalPath) -> Option<&LeafMetadata> {
        let mut children = &self.root;
        let segments = path.segments();
        for segment in &segments[..segments.len() - 1] {
            match children.get(segment) {
                Some(TreeNode::Branch(next)) => children = next,
                _ => return None,
            }
        }
        match children.get(segments.last()?.as_str()) {
            Some(TreeNode::Leaf(meta)) => Some(meta),
            _ => None,
        }
    }

    pub fn contains(&self, path: &SignalPath) -> bool {
        self.lookup(path).is_some()
    }

    /// All leaf paths rendered in depth-first sorted order.
    pub fn leaf_paths(&self) -> Vec<String> {
        fn walk(children: &BTreeMap<String, TreeNode>, prefix: &str, out: &mut Vec<String>) {
            for (name, node) in children {
                let path = if prefix.is_empty() {
                    name.clone()
                } else {
                    format!("{prefix}.{name}")
                };
                match node {
                    TreeNode::Leaf(_) => out.push(path),
                    TreeNode::Branch(next) => walk(next, &path, out),
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, "", &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.leaf_paths().len()
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_empty()
    }
}

/// Build a tree from leaves. The result does not depend on input order.
pub fn build_tree(
    leaves: impl IntoIterator<Item = (SignalPath, LeafMetadata)>,
) -> Result<SignalTree, CatalogError> {
    let mut tree = SignalTree::default();
    for (path, metadata) in leaves {
        insert(&mut tree.root, &path, metadata)?;
    }
    Ok(tree)
}

fn insert(
    root: &mut BTreeMap<String, TreeNode>,
    path: &SignalPath,
    metadata: LeafMetadata,
) -> Result<(), CatalogError> {
    let segments = path.segments();
    let mut children = root;
    for (depth, segment) in segments[..segments.len() - 1].iter().enumerate() {
        let entry = children
            .entry(segment.clone())
            .or_insert_with(|| TreeNode::Branch(BTreeMap::new()));
        match entry {
            TreeNode::Branch(next) => children = next,
            TreeNode::Leaf(_) => {
                return Err(CatalogError::LeafBranchConflict(
                    segments[..=depth].join("."),
                ))
            }
        }
    }
    let last = segments.last().expect("paths have >= 2 segments").clone();
    match children.get(&last) {
        None => {
            children.insert(last, TreeNode::Leaf(metadata));
            Ok(())
        }
        Some(TreeNode::Leaf(_)) => Err(CatalogError::DuplicateLeaf(path.to_string())),
        Some(TreeNode::Branch(_)) => Err(CatalogError::LeafBranchConflict(path.to_string())),
    }
}

/// Parse the flat catalog file (a JSON array of entries) into a tree.
pub fn parse_catalog(json_text: &str) -> Result<SignalTree, ParseError> {
    let entries: Vec<CatalogEntry> = parse_strict(json_text)?;
    let mut leaves = Vec::with_capacity(entries.len());
    for (i, entry) in entries.into_iter().enumerate() {
        let (path_text, metadata) = entry.into_parts();
        let path = SignalPath::parse(&path_text).map_err(|e| ParseError::Schema {
            path: format!("[{i}].Path"),
            message: e.to_string(),
        })?;
        leaves.push((path, metadata));
    }
    build_tree(leaves).map_err(|e| ParseError::Schema {
        path: "$".into(),
        message: e.to_string(),
    })
}
