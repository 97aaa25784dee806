//! JSON job runner, report formats and acceptance suite for `cyclevol-core`.

pub mod acceptance;
pub mod cache;
pub mod job;
pub mod json;

pub use job::{exit, JobError, JobSpec, Outcome, Settings};
pub use json::Report;
