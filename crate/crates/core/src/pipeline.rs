//! Spec file in, report out.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dataset::{DataError, Dataset};
use crate::report::{AnalysisReport, DataSummary, ExecutionFailure, ReportRow, SpecEcho};
use crate::runtime::{execute_test, RunOptions};
use crate::solver::{select_tests, SelectionOutcome};
use crate::speclang::{load_spec, SpecError, ValidatedSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("{path}: {source}")]
    Data { path: String, source: DataError },
}

/// Data paths in an analysis spec are relative to the spec's directory.
pub fn resolve_data_path(spec_path: &Path, data: &str) -> PathBuf {
    let p = Path::new(data);
    if p.is_absolute() {
        return p.to_path_buf();
    }
    spec_path.parent().map(|d| d.join(p)).unwrap_or_else(|| p.to_path_buf())
}

/// Loads an analysis spec and its data, then runs the analysis.
pub fn analyze_file(spec_path: &Path, options: &RunOptions) -> Result<AnalysisReport, AnalysisError> {
    let spec = load_spec(spec_path)?;
    let data_path = resolve_data_path(spec_path, &spec.spec.data.path);
    let data = Dataset::load_csv(&data_path, &spec)
        .map_err(|source| AnalysisError::Data { path: data_path.display().to_string(), source })?;
    Ok(analyze(&spec, &data, options))
}

pub fn analyze(spec: &ValidatedSpec, data: &Dataset, options: &RunOptions) -> AnalysisReport {
    let selection = select_tests(spec, data);
    build_report(spec, data, selection, options)
}

/// Executes every valid test of a selection and assembles the report.
pub fn build_report(
    spec: &ValidatedSpec,
    data: &Dataset,
    selection: SelectionOutcome,
    options: &RunOptions,
) -> AnalysisReport {
    let mut results = Vec::new();
    let mut failures = Vec::new();
    for v in selection.valid {
        match execute_test(spec, data, v.test, options) {
            Ok(e) => results.push(ReportRow {
                result: e.result,
                family: v.family,
                power_rank: v.power_rank,
                adjusted_p: None,
                excluded: e.excluded,
                evidence: v.evidence,
            }),
            Err(e) => failures.push(ExecutionFailure { test: v.test, family: v.family, error: e.to_string() }),
        }
    }
    AnalysisReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: options.seed,
        resamples: options.resamples,
        spec: SpecEcho {
            hypothesis: spec.spec.hypothesis.clone(),
            hypothesis_text: spec.spec.hypothesis.to_string(),
            alpha: spec.alpha(),
            claims: spec.spec.assumptions.claims.clone(),
        },
        data: DataSummary { path: spec.spec.data.path.clone(), rows: data.row_count() },
        results,
        failures,
        invalid: selection.invalid,
        warnings: selection.warnings,
        notes: spec.warnings.clone(),
        fallback: selection.fallback,
    }
    .finish()
}
