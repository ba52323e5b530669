//! Std companion to `hyposym-core`: TOML run configs, JSON/CSV reports, the
//! periodic spectral Cauchy solver and the `hyposym` command pipelines.

pub mod app;
pub mod cauchy;
pub mod config;
pub mod report;
pub mod run;

pub use hyposym_core as core;
