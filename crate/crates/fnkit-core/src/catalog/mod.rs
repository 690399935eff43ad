//! Hierarchical signal catalog and interface naming conventions.
//!
//! Data interfaces are named by dot-separated paths into a vehicle signal
//! tree (`Vehicle.Chassis.Axle.Row1.Wheel.Left.Speed`). Interfaces that are
//! not vehicle signals — errors, safety reactions, modes, and the scheduling
//! entry points — live in a parallel flat namespace with fixed suffix
//! conventions.

mod conformance;
mod naming;
mod path;
mod tree;

pub use conformance::check_catalog_conformance;
pub use naming::{derive_interface_name, DerivedInterfaceName, NameKind};
pub use path::{PathError, SignalPath};
pub use tree::{
    build_tree, parse_catalog, CatalogEntry, CatalogError, LeafMetadata, SignalTree, TreeNode,
};
