//! Library surface of the fnkit command-line tool: subcommand
//! implementations, the bundled demo application, and the baseline
//! direct-call harness. The binary in `main.rs` is a thin argument parser
//! over this crate; the acceptance suite drives it through both layers.

pub mod baseline;
pub mod commands;
pub mod demo;
