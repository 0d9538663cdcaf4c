//! Static analysis for Scratch 3.0 projects.
//!
//! Pipeline: [`ast::parse_project`] / [`ast::load_sb3`] produce a [`ast::Program`];
//! [`cfg::build_cfg`] derives the control-flow graph; [`finders::run_all`]
//! applies the issue-finder catalog; [`metrics::compute_metrics`] summarises the
//! code; [`report`] renders results.

pub mod ast;
pub mod cfg;
pub mod finders;
pub mod metrics;
pub mod report;
