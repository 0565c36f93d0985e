use std::fmt;

use serde::{Deserialize, Serialize};

/// Every test the runtime can execute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    StudentT,
    WelchT,
    MannWhitneyU,
    PairedT,
    WilcoxonSignedRank,
    FTest,
    KruskalWallis,
    RmOneWayAnova,
    Friedman,
    TwoWayAnova,
    FactorialAnova,
    Pearson,
    Pointbiserial,
    Spearman,
    Kendall,
    ChiSquare,
    FisherExact,
    Bootstrap,
}

impl TestKind {
    pub const ALL: [TestKind; 18] = [
        TestKind::StudentT,
        TestKind::WelchT,
        TestKind::MannWhitneyU,
        TestKind::PairedT,
        TestKind::WilcoxonSignedRank,
        TestKind::FTest,
        TestKind::KruskalWallis,
        TestKind::RmOneWayAnova,
        TestKind::Friedman,
        TestKind::TwoWayAnova,
        TestKind::FactorialAnova,
        TestKind::Pearson,
        TestKind::Pointbiserial,
        TestKind::Spearman,
        TestKind::Kendall,
        TestKind::ChiSquare,
        TestKind::FisherExact,
        TestKind::Bootstrap,
    ];

    /// Stable machine identifier (same as the serialized form).
    pub fn id(self) -> &'static str {
        match self {
            TestKind::StudentT => "student_t",
            TestKind::WelchT => "welch_t",
            TestKind::MannWhitneyU => "mann_whitney_u",
            TestKind::PairedT => "paired_t",
            TestKind::WilcoxonSignedRank => "wilcoxon_signed_rank",
            TestKind::FTest => "f_test",
            TestKind::KruskalWallis => "kruskal_wallis",
            TestKind::RmOneWayAnova => "rm_one_way_anova",
            TestKind::Friedman => "friedman",
            TestKind::TwoWayAnova => "two_way_anova",
            TestKind::FactorialAnova => "factorial_anova",
            TestKind::Pearson => "pearson",
            TestKind::Pointbiserial => "pointbiserial",
            TestKind::Spearman => "spearman",
            TestKind::Kendall => "kendall",
            TestKind::ChiSquare => "chi_square",
            TestKind::FisherExact => "fisher_exact",
            TestKind::Bootstrap => "bootstrap",
        }
    }

    /// Human readable name used in rendered tables.
    pub fn display_name(self) -> &'static str {
        match self {
            TestKind::StudentT => "Student's t-test",
            TestKind::WelchT => "Welch's t-test",
            TestKind::MannWhitneyU => "Mann-Whitney U",
            TestKind::PairedT => "Paired t-test",
            TestKind::WilcoxonSignedRank => "Wilcoxon signed rank",
            TestKind::FTest => "F-test (one-way ANOVA)",
            TestKind::KruskalWallis => "Kruskal-Wallis",
            TestKind::RmOneWayAnova => "Repeated measures one-way ANOVA",
            TestKind::Friedman => "Friedman",
            TestKind::TwoWayAnova => "Two-way ANOVA",
            TestKind::FactorialAnova => "Factorial ANOVA",
            TestKind::Pearson => "Pearson's r",
            TestKind::Pointbiserial => "Pointbiserial (Pearson's r)",
            TestKind::Spearman => "Spearman's rho",
            TestKind::Kendall => "Kendall's tau",
            TestKind::ChiSquare => "Chi-square",
            TestKind::FisherExact => "Fisher's exact",
            TestKind::Bootstrap => "Bootstrap",
        }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|k| k.id() == id)
    }
}

impl fmt::Display for TestKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}

/// Direction of the alternative hypothesis.
///
/// For two-sample tests `Greater` means the first sample is larger; for
/// correlations it means a positive association.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sidedness {
    TwoSided,
    Greater,
    Less,
}

impl Sidedness {
    pub fn flipped(self) -> Self {
        match self {
            Sidedness::TwoSided => Sidedness::TwoSided,
            Sidedness::Greater => Sidedness::Less,
            Sidedness::Less => Sidedness::Greater,
        }
    }

    /// Picks the p-value for this direction given both tail probabilities of
    /// the observed statistic.
    pub(crate) fn select(self, upper: f64, lower: f64) -> f64 {
        match self {
            Sidedness::Greater => upper,
            Sidedness::Less => lower,
            Sidedness::TwoSided => two_sided(upper, lower),
        }
    }
}

pub(crate) fn two_sided(upper: f64, lower: f64) -> f64 {
    (2.0 * upper.min(lower)).min(1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Statistic {
    pub name: String,
    #[serde(with = "crate::float")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectSize {
    pub name: String,
    #[serde(with = "crate::float")]
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    /// What the interval is for, e.g. "mean difference".
    pub target: String,
    pub level: f64,
    #[serde(with = "crate::float")]
    pub lo: f64,
    #[serde(with = "crate::float")]
    pub hi: f64,
}

/// One line of an ANOVA table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnovaRow {
    pub effect: String,
    pub df: f64,
    pub sum_sq: f64,
    pub mean_sq: f64,
    #[serde(with = "crate::float::option")]
    pub f: Option<f64>,
    pub p_value: Option<f64>,
    pub partial_eta_squared: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupInterval {
    pub label: String,
    pub n: usize,
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub resamples: usize,
    pub seed: u64,
    pub level: f64,
    pub groups: Vec<GroupInterval>,
    /// Interval for `mean(left) - mean(right)`.
    pub difference: Option<DifferenceInterval>,
    /// Whether the difference interval excludes zero.
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferenceInterval {
    pub left: String,
    pub right: String,
    pub estimate: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Outcome of executing one statistical test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub test: TestKind,
    pub statistic: Statistic,
    /// Degrees of freedom: empty when not applicable, two entries for F.
    pub dof: Vec<f64>,
    /// p-value in the direction of the hypothesis. `None` for the bootstrap.
    pub p_value: Option<f64>,
    /// Two-sided p-value, reported alongside for directional hypotheses.
    pub p_two_sided: Option<f64>,
    pub sidedness: Sidedness,
    /// How the p-value was obtained ("exact", "normal approximation", ...).
    pub method: String,
    pub effect_size: Option<EffectSize>,
    pub confidence_interval: Option<ConfidenceInterval>,
    pub sample_sizes: Vec<usize>,
    pub anova_table: Vec<AnovaRow>,
    pub bootstrap: Option<BootstrapSummary>,
    pub notes: Vec<String>,
}

impl TestResult {
    pub(crate) fn new(test: TestKind, statistic_name: &str, value: f64) -> Self {
        Self {
            test,
            statistic: Statistic { name: statistic_name.to_string(), value },
            dof: Vec::new(),
            p_value: None,
            p_two_sided: None,
            sidedness: Sidedness::TwoSided,
            method: String::new(),
            effect_size: None,
            confidence_interval: None,
            sample_sizes: Vec::new(),
            anova_table: Vec::new(),
            bootstrap: None,
            notes: Vec::new(),
        }
    }

    pub(crate) fn with_p(mut self, side: Sidedness, upper: f64, lower: f64) -> Self {
        self.sidedness = side;
        self.p_value = Some(side.select(upper, lower).clamp(0.0, 1.0));
        self.p_two_sided = Some(two_sided(upper, lower).clamp(0.0, 1.0));
        self
    }

    /// Omnibus tests (ANOVA family, chi-square) only have an upper tail.
    pub(crate) fn with_upper_p(mut self, p: f64) -> Self {
        let p = p.clamp(0.0, 1.0);
        self.sidedness = Sidedness::TwoSided;
        self.p_value = Some(p);
        self.p_two_sided = Some(p);
        self
    }

    pub(crate) fn with_effect(mut self, name: &str, value: f64) -> Self {
        if value.is_finite() {
            self.effect_size = Some(EffectSize { name: name.to_string(), value });
        }
        self
    }

    /// Relabels the result, e.g. a Pearson correlation run as a pointbiserial test.
    pub fn with_test(mut self, test: TestKind) -> Self {
        self.test = test;
        self
    }
}
