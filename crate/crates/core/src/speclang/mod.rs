//! The analysis spec language: data, variables, design, assumptions and one
//! hypothesis, in a sectioned text format or the equivalent JSON.

mod ast;
mod hypothesis;
mod lexer;
pub(crate) use lexer::parse_number;
mod parse;
mod validate;
mod write;

use std::path::Path;

use thiserror::Error;

pub use ast::*;
pub use hypothesis::parse_hypothesis;
pub use parse::{parse_spec, parse_spec_json};
pub use validate::{validate_spec, ValidatedSpec, VarRole};
pub use write::write_spec;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing section `{0}`")]
    MissingSection(String),
    #[error("variable `{0}` declared more than once")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unknown category `{category}` for variable `{variable}`")]
    UnknownCategory { variable: String, category: String },
    #[error("unsupported hypothesis: {0}")]
    UnsupportedForm(String),
    #[error("variable `{0}` cannot be both independent and dependent")]
    RoleConflict(String),
    #[error("within-subjects variables need a key column")]
    WithinWithoutKey,
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    InvalidAlpha(f64),
    #[error("invalid declaration: {0}")]
    InvalidDeclaration(String),
    #[error("invalid JSON spec: {0}")]
    Json(String),
    #[error("{0}")]
    Io(String),
}

/// Reads, parses and validates a spec file. Files ending in `.json` use the
/// JSON encoding.
pub fn load_spec(path: &Path) -> Result<ValidatedSpec, SpecError> {
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => SpecError::Io(format!("file not found: {}", path.display())),
        _ => SpecError::Io(format!("cannot read {}: {e}", path.display())),
    })?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let spec = if is_json { parse_spec_json(&text)? } else { parse_spec(&text)? };
    validate_spec(spec)
}
