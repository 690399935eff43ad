//! fnkit-core: model-driven integration of platform-agnostic automotive
//! functions onto a service-oriented middleware.
//!
//! The crate covers the whole pipeline:
//!
//! * [`function_model`] — the platform-agnostic description of one function
//!   (interfaces, scheduling, errors, safety reactions, watchdog) with strict
//!   JSON parsing, semantic validation, and JSON Schema emission.
//! * [`catalog`] — the hierarchical dot-path signal catalog plus the naming
//!   conventions for non-signal interfaces (errors, safety reactions, modes,
//!   scheduling entry points).
//! * [`integration`] — the platform-bound integration model and the
//!   deterministic transformation that produces it from function models, a
//!   platform descriptor, and a component topology.
//! * [`adapter`] — function-adapter generation: rendered source text with
//!   manual-slot regions, a machine-readable manifest consumed by the runtime,
//!   and line-of-code accounting.
//! * [`sim`] — a deterministic service-oriented middleware simulator:
//!   lifecycle nodes, latest-value topic bus, cyclic scheduler, error
//!   maturation/reset, safety reactions, and watchdog supervision.
//! * [`replay`] — signal-trace replay onto the bus and KPI derivation
//!   (timing statistics and behavior-equivalence comparison) from run traces.

pub mod adapter;
pub mod canonical;
pub mod catalog;
pub mod datatypes;
pub mod function_model;
pub mod integration;
pub mod replay;
pub mod sim;
pub mod validation;

pub use datatypes::{AsilLevel, Datatype, NumericBase};
pub use function_model::FunctionModel;
pub use integration::IntegrationModel;
pub use validation::{Finding, Severity, ValidationReport};
