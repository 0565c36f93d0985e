//! Spec language, dataset loading, precondition checks, test selection,
//! execution and reporting.

pub mod dataset;
pub mod pipeline;
pub mod properties;
pub mod report;
pub mod runtime;
pub mod solver;
pub mod speclang;

pub use pipeline::{analyze, analyze_file, AnalysisError};
