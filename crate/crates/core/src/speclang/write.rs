use std::fmt::Write;

use super::ast::{quote_if_needed, AnalysisSpec};

fn fmt_num(v: f64) -> String {
    // `{:?}` keeps a decimal point and round-trips every finite value
    format!("{v:?}")
}

/// Renders a spec in the text format; `parse_spec` reads it back unchanged.
pub fn write_spec(spec: &AnalysisSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "data:\n    path = {}\n", quote_if_needed(&spec.data.path));

    out.push_str("variables:\n");
    for v in &spec.variables {
        let _ = write!(out, "    {} = {}", v.name, v.dtype);
        if !v.categories.is_empty() {
            let cats: Vec<String> = v.categories.iter().map(|c| quote_if_needed(c)).collect();
            let _ = write!(out, " {{{}}}", cats.join(", "));
        }
        if let Some(r) = v.range {
            let _ = write!(out, " [{}, {}]", fmt_num(r.lo), fmt_num(r.hi));
        }
        out.push('\n');
    }

    let d = &spec.design;
    let (ind, dep) = d.study_type.role_labels();
    let _ = writeln!(out, "\ndesign:\n    study_type = {}", d.study_type.keyword());
    if !d.independent.is_empty() {
        let _ = writeln!(out, "    {ind} = {}", d.independent.join(", "));
    }
    if !d.dependent.is_empty() {
        let _ = writeln!(out, "    {dep} = {}", d.dependent.join(", "));
    }
    if let Some(k) = &d.key {
        let _ = writeln!(out, "    key = {}", quote_if_needed(k));
    }
    if !d.within_subjects.is_empty() {
        let _ = writeln!(out, "    within_subjects = {}", d.within_subjects.join(", "));
    }

    let a = &spec.assumptions;
    let _ = writeln!(out, "\nassumptions:\n    alpha = {}", fmt_num(a.alpha));
    for c in &a.claims {
        let groups = if c.groups.is_empty() { String::new() } else { format!(" | {}", c.groups.join(", ")) };
        let _ = writeln!(out, "    {}({}{groups}) = {}", c.property.keyword(), c.variable, c.holds);
    }

    let _ = writeln!(out, "\nhypothesis:\n    {}", spec.hypothesis);
    out
}
