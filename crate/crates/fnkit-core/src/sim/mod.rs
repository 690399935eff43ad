//! Deterministic service-oriented middleware simulator.
//!
//! A [`Simulator`] owns the topic bus, the lifecycle nodes, the clock, and
//! the run trace. Under a virtual clock the whole system is a deterministic
//! function of its inputs; the wall clock exists for timing KPIs only.

mod bus;
mod clock;
mod errors;
mod node;
mod safety;
mod scheduler;
mod trace;
mod watchdog;

pub use bus::{Bus, Retained};
pub use clock::{ClockMode, SimClock};
pub use errors::{ErrorBank, ErrorState, ErrorStatus};
pub use node::{LifecycleNode, LifecycleState, PlatformFunction, Transition};
pub use safety::evaluate_safety;
pub use scheduler::{FeedRecord, Simulator};
pub use trace::{RunTrace, TraceIoError, TraceKind, TraceRecord};
pub use watchdog::{supervise, TimeWindow, ViolationKind, WatchdogViolation};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("unknown event {0:?} on the bus")]
    UnknownEvent(String),
    #[error("topic {0:?} registered twice with different datatypes")]
    TopicDatatypeConflict(String),
    #[error("datatype mismatch on topic {topic:?}: value {value} rejected")]
    DatatypeMismatch { topic: String, value: String },
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("node {0:?} already exists")]
    DuplicateNode(String),
    #[error("illegal transition {transition} from {from} on node {node:?}")]
    IllegalTransition {
        node: String,
        from: LifecycleState,
        transition: String,
    },
    #[error("unknown error name {0:?}")]
    UnknownError(String),
    #[error("node {node:?} produced no output for buffer {buffer:?}")]
    MissingOutput { node: String, buffer: String },
}
