//! Test support: a project builder and the finder fixture catalog.

pub mod builder;
pub mod fixtures;
pub mod http;

pub use builder::*;
