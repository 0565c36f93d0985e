//! Result assembly: Holm correction, power ordering and rendering.

use std::fmt::Write as _;

use assay_stats::{TestKind, TestResult};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::properties::Provenance;
use crate::solver::{AtomEvidence, ConflictWarning, Family, InvalidReason, InvalidTest};
use crate::speclang::{Claim, HypothesisDecl};

pub const TEXT_WIDTH: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("domain error: {0}")]
    Domain(String),
}

/// Step-down Holm adjustment, returned in input order.
pub fn holm_adjust(p_values: &[f64]) -> Result<Vec<f64>, ReportError> {
    if let Some(p) = p_values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(ReportError::Domain(format!("p-value {p} outside [0, 1]")));
    }
    let m = p_values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| p_values[a].total_cmp(&p_values[b]));
    let mut adjusted = vec![0.0; m];
    let mut running = 0.0f64;
    for (rank, &i) in order.iter().enumerate() {
        running = running.max(((m - rank) as f64 * p_values[i]).min(1.0));
        adjusted[i] = running;
    }
    Ok(adjusted)
}

/// Sort key: family, then knowledge-base power rank, then test id.
pub trait PowerRanked {
    fn family(&self) -> Family;
    fn power_rank(&self) -> u32;
    fn test(&self) -> TestKind;
}

pub fn rank_by_power<T: PowerRanked>(mut results: Vec<T>) -> Vec<T> {
    results
        .sort_by(|a, b| (a.family(), a.power_rank(), a.test().id()).cmp(&(b.family(), b.power_rank(), b.test().id())));
    results
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub hypothesis: HypothesisDecl,
    pub hypothesis_text: String,
    pub alpha: f64,
    pub claims: Vec<Claim>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSummary {
    pub path: String,
    pub rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub result: TestResult,
    pub family: Family,
    pub power_rank: u32,
    /// Holm-adjusted p-value; absent for tests without a p-value.
    pub adjusted_p: Option<f64>,
    /// Rows left out for missing values, or units without a complete set of
    /// conditions for within-subjects tests.
    pub excluded: usize,
    pub evidence: Vec<AtomEvidence>,
}

impl PowerRanked for ReportRow {
    fn family(&self) -> Family {
        self.family
    }
    fn power_rank(&self) -> u32 {
        self.power_rank
    }
    fn test(&self) -> TestKind {
        self.result.test
    }
}

/// A valid test whose execution failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionFailure {
    pub test: TestKind,
    pub family: Family,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub version: String,
    pub seed: u64,
    pub resamples: usize,
    pub spec: SpecEcho,
    pub data: DataSummary,
    /// Executed tests, most powerful first.
    pub results: Vec<ReportRow>,
    pub failures: Vec<ExecutionFailure>,
    pub invalid: Vec<InvalidTest>,
    pub warnings: Vec<ConflictWarning>,
    pub notes: Vec<String>,
    /// Only the bootstrap applied.
    pub fallback: bool,
}

impl AnalysisReport {
    /// Orders the rows by power and fills in Holm-adjusted p-values across
    /// every executed test that has one.
    pub fn finish(mut self) -> Self {
        self.results = rank_by_power(std::mem::take(&mut self.results));
        let with_p: Vec<usize> =
            (0..self.results.len()).filter(|&i| self.results[i].result.p_value.is_some()).collect();
        let raw: Vec<f64> = with_p.iter().map(|&i| self.results[i].result.p_value.unwrap_or(1.0)).collect();
        let adjusted = holm_adjust(&raw).expect("p-values from the stats routines lie in [0, 1]");
        for (i, a) in with_p.into_iter().zip(adjusted) {
            self.results[i].adjusted_p = Some(a);
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn valid_tests(&self) -> Vec<TestKind> {
        self.results.iter().map(|r| r.result.test).chain(self.failures.iter().map(|f| f.test)).collect()
    }

    pub fn row(&self, test: TestKind) -> Option<&ReportRow> {
        self.results.iter().find(|r| r.result.test == test)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RenderOptions {
    /// List every atom behind each valid test, not only the data checks.
    pub all_evidence: bool,
}

pub fn render(report: &AnalysisReport, format: Format, options: &RenderOptions) -> String {
    match format {
        Format::Json => report.to_json() + "\n",
        Format::Text => render_text(report, options),
    }
}

pub fn format_p(p: f64) -> String {
    if p == 0.0 {
        "0".into()
    } else if p < 1e-4 {
        format!("{p:.3e}")
    } else {
        format!("{p:.5}")
    }
}

fn format_num(x: f64) -> String {
    if !x.is_finite() {
        format!("{x}")
    } else if x != 0.0 && (x.abs() < 1e-3 || x.abs() >= 1e6) {
        format!("{x:.3e}")
    } else {
        format!("{x:.4}")
    }
}

fn format_dof(d: f64) -> String {
    if d.fract() == 0.0 {
        format!("{d}")
    } else {
        format!("{d:.2}")
    }
}

fn statistic_cell(r: &TestResult) -> String {
    let dof = if r.dof.is_empty() {
        String::new()
    } else {
        format!("({})", r.dof.iter().map(|d| format_dof(*d)).collect::<Vec<_>>().join(", "))
    };
    format!("{}{dof} = {}", r.statistic.name, format_num(r.statistic.value))
}

fn clip(s: &str, width: usize) -> String {
    if s.chars().count() <= width {
        s.to_string()
    } else {
        let mut out: String = s.chars().take(width.saturating_sub(1)).collect();
        out.push('~');
        out
    }
}

fn wrap_into(out: &mut String, indent: &str, text: &str) {
    let opts = textwrap::Options::new(TEXT_WIDTH)
        .initial_indent(indent)
        .subsequent_indent(indent)
        .word_splitter(textwrap::WordSplitter::NoHyphenation);
    for line in textwrap::wrap(text, opts) {
        out.push_str(&line);
        out.push('\n');
    }
}

fn effect_label(name: &str) -> &str {
    match name {
        "cohen_d" => "d",
        "eta_squared" => "eta^2",
        "partial_eta_squared" => "eta_p^2",
        "epsilon_squared" => "epsilon^2",
        "cramers_v" => "V",
        "kendall_w" => "W",
        "odds_ratio" => "OR",
        other => other,
    }
}

fn provenance(p: Provenance) -> &'static str {
    match p {
        Provenance::Assumed => "assumed",
        Provenance::Computed => "computed",
        Provenance::Structural => "structural",
    }
}

fn render_text(report: &AnalysisReport, options: &RenderOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "assay {} (seed {})", report.version, report.seed);
    wrap_into(&mut out, "", &format!("Hypothesis: {}", report.spec.hypothesis_text));
    let claims: Vec<String> = report
        .spec
        .claims
        .iter()
        .map(|c| {
            let groups = if c.groups.is_empty() { String::new() } else { format!(" | {}", c.groups.join(", ")) };
            format!("{}({}{groups}) = {}", c.property.keyword(), c.variable, c.holds)
        })
        .collect();
    let claims = if claims.is_empty() { "none".to_string() } else { claims.join("; ") };
    wrap_into(&mut out, "", &format!("alpha = {}; assumptions: {claims}", report.spec.alpha));
    let _ = writeln!(out, "Data: {} ({} rows)", report.data.path, report.data.rows);
    out.push('\n');

    if report.fallback {
        wrap_into(
            &mut out,
            "",
            "No test's preconditions hold for these data; reporting bootstrap confidence intervals instead.",
        );
        out.push('\n');
    }

    let with_p = report.results.iter().filter(|r| r.adjusted_p.is_some()).count();
    let _ = writeln!(out, "Results (Holm correction across {with_p} test{})", if with_p == 1 { "" } else { "s" });
    let _ = writeln!(out, "{:>4}  {:<26} {:<22} {:>10} {:>10}  Effect size", "", "Test", "Statistic", "p", "p (Holm)");
    for (i, row) in report.results.iter().enumerate() {
        let r = &row.result;
        let p = r.p_value.map(format_p).unwrap_or_else(|| "-".into());
        let adj = row.adjusted_p.map(format_p).unwrap_or_else(|| "-".into());
        let effect = r
            .effect_size
            .as_ref()
            .map(|e| format!("{} = {}", effect_label(&e.name), format_num(e.value)))
            .unwrap_or_default();
        let line = format!(
            "{:>4}  {:<26} {:<22} {:>10} {:>10}  {}",
            format!("[{}]", i + 1),
            clip(r.test.display_name(), 26),
            clip(&statistic_cell(r), 22),
            p,
            adj,
            clip(&effect, 22)
        );
        let _ = writeln!(out, "{}", line.trim_end());
    }
    if report.results.is_empty() {
        let _ = writeln!(out, "      (no test could be executed)");
    }

    for (i, row) in report.results.iter().enumerate() {
        out.push('\n');
        let r = &row.result;
        let _ = writeln!(out, "[{}] {} ({})", i + 1, r.test.display_name(), row.family.label());
        let ind = "    ";
        let mut facts = Vec::new();
        if let Some(p2) = r.p_two_sided {
            if r.sidedness != assay_stats::Sidedness::TwoSided {
                facts.push(format!(
                    "one-sided p = {}, two-sided p = {}",
                    r.p_value.map(format_p).unwrap_or_default(),
                    format_p(p2)
                ));
            }
        }
        if !r.method.is_empty() {
            facts.push(format!("method: {}", r.method));
        }
        let sizes: Vec<String> = r.sample_sizes.iter().map(|n| n.to_string()).collect();
        facts.push(format!("n = {}; {} excluded", sizes.join(", "), row.excluded));
        wrap_into(&mut out, ind, &facts.join("; "));
        if let Some(ci) = &r.confidence_interval {
            let line = format!(
                "{:.0}% CI for {}: [{}, {}]",
                ci.level * 100.0,
                ci.target,
                format_num(ci.lo),
                format_num(ci.hi)
            );
            wrap_into(&mut out, ind, &line);
        }
        if let Some(b) = &r.bootstrap {
            for g in &b.groups {
                let line = format!(
                    "mean of {} = {} (n = {}), {:.0}% CI [{}, {}]",
                    g.label,
                    format_num(g.mean),
                    g.n,
                    b.level * 100.0,
                    format_num(g.lo),
                    format_num(g.hi)
                );
                wrap_into(&mut out, ind, &line);
            }
            let verdict = if b.significant { "excludes" } else { "includes" };
            if let Some(d) = &b.difference {
                wrap_into(
                    &mut out,
                    ind,
                    &format!("difference {} - {} interval {verdict} 0 ({} resamples)", d.left, d.right, b.resamples),
                );
            }
        }
        for a in &r.anova_table {
            let f = a.f.map(format_num).unwrap_or_default();
            let p = a.p_value.map(format_p).unwrap_or_default();
            let line = format!(
                "{:<24} df {:<8} SS {:<12} F {:<10} p {}",
                clip(&a.effect, 24),
                format_dof(a.df),
                format_num(a.sum_sq),
                f,
                p
            );
            wrap_into(&mut out, ind, line.trim_end());
        }
        for n in &r.notes {
            wrap_into(&mut out, ind, &format!("note: {n}"));
        }
        for e in row.evidence.iter().filter(|e| options.all_evidence || e.atom.is_statistical()) {
            let line = format!("{} holds ({}: {})", e.text, provenance(e.value.provenance), e.value.detail);
            wrap_into(&mut out, ind, &line);
        }
    }

    if !report.failures.is_empty() {
        out.push('\n');
        let _ = writeln!(out, "Execution failures");
        for f in &report.failures {
            wrap_into(&mut out, "  ", &format!("{}: {}", f.test.display_name(), f.error));
        }
    }

    if !report.invalid.is_empty() {
        out.push('\n');
        let _ = writeln!(out, "Not applicable");
        for t in &report.invalid {
            let why = match &t.reason {
                InvalidReason::FailedAtom { text, value, .. } => format!("{text} does not hold ({})", value.detail),
                InvalidReason::EvaluationError { text, error, .. } => format!("{text} could not be checked: {error}"),
                InvalidReason::FallbackNotNeeded => "fallback, not needed".into(),
            };
            wrap_into(&mut out, "  ", &format!("{}: {why}", t.test.display_name()));
        }
    }

    if !report.warnings.is_empty() {
        out.push('\n');
        let _ = writeln!(out, "Warnings");
        for w in &report.warnings {
            wrap_into(&mut out, "  ", &w.message);
        }
    }
    if !report.notes.is_empty() {
        out.push('\n');
        let _ = writeln!(out, "Notes");
        for n in &report.notes {
            wrap_into(&mut out, "  ", n);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holm_worked_example() {
        assert_eq!(holm_adjust(&[0.01, 0.04, 0.03]).unwrap(), vec![0.03, 0.06, 0.06]);
        assert_eq!(holm_adjust(&[0.2]).unwrap(), vec![0.2]);
        assert_eq!(holm_adjust(&[1.0, 1.0]).unwrap(), vec![1.0, 1.0]);
        assert!(holm_adjust(&[]).unwrap().is_empty());
        assert!(matches!(holm_adjust(&[0.5, 1.5]), Err(ReportError::Domain(_))));
        assert!(holm_adjust(&[f64::NAN]).is_err());
    }

    struct R(Family, u32, TestKind);
    impl PowerRanked for R {
        fn family(&self) -> Family {
            self.0
        }
        fn power_rank(&self) -> u32 {
            self.1
        }
        fn test(&self) -> TestKind {
            self.2
        }
    }

    #[test]
    fn power_order() {
        let out = rank_by_power(vec![
            R(Family::Resampling, 30, TestKind::Bootstrap),
            R(Family::Nonparametric, 11, TestKind::MannWhitneyU),
            R(Family::Parametric, 1, TestKind::StudentT),
            R(Family::Nonparametric, 13, TestKind::KruskalWallis),
        ]);
        let tests: Vec<TestKind> = out.iter().map(|r| r.2).collect();
        assert_eq!(
            tests,
            vec![TestKind::StudentT, TestKind::MannWhitneyU, TestKind::KruskalWallis, TestKind::Bootstrap]
        );
    }

    #[test]
    fn p_formatting() {
        assert_eq!(format_p(9.27319e-05), "9.273e-5");
        assert_eq!(format_p(0.00065), "0.00065");
        assert_eq!(format_p(0.5), "0.50000");
    }
}
