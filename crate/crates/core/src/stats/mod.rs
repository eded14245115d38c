//! Statistical battery: reliability, normality, homogeneity of variances,
//! group comparisons and correlations, with a self-contained special
//! function kernel for p-values.
//!
//! All variances use the `n - 1` denominator and all comparison p-values are
//! two-sided.

mod correlation;
mod descriptive;
pub mod dist;
mod normality;
mod parametric;
mod rank;
mod reliability;
pub mod simulation;
pub mod special;

use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use correlation::{pearson, spearman};
pub use descriptive::{cohens_d, mean, median, quantile, variance, Descriptives};
pub use normality::shapiro_wilk;
pub use parametric::{anova_oneway, levene, student_t, welch_t};
pub use rank::{kruskal_wallis, midranks, wilcoxon_ranksum, EXACT_RANKSUM_LIMIT};
pub use reliability::{cronbach_alpha, ItemMatrix, ACCEPTABLE_ALPHA};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("{test}: need at least {min} observations, got {actual}")]
    SampleTooSmall {
        test: TestName,
        min: usize,
        actual: usize,
    },
    #[error("{test}: at most {max} observations supported, got {actual}")]
    SampleTooLarge {
        test: TestName,
        max: usize,
        actual: usize,
    },
    #[error("{0}: sample has zero variance")]
    ZeroVariance(TestName),
    #[error("{0}: need at least two groups")]
    TooFewGroups(TestName),
    #[error("{test}: group {group} has {actual} observations, need at least {min}")]
    GroupTooSmall {
        test: TestName,
        group: usize,
        min: usize,
        actual: usize,
    },
    #[error("Welch's t-test: both groups have zero variance")]
    BothDegenerate,
    #[error("ANOVA: pooled within-group variance is zero")]
    DegenerateWithin,
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("{test}: samples have different lengths ({left} vs {right})")]
    LengthMismatch {
        test: TestName,
        left: usize,
        right: usize,
    },
    #[error("{0}: an input is constant")]
    ConstantInput(TestName),
    #[error("sample contains a non-finite value")]
    NonFinite,
    #[error("item matrix is not rectangular")]
    Ragged,
    #[error("domain error: {0}")]
    Domain(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TestName {
    #[serde(rename = "Shapiro-Wilk")]
    ShapiroWilk,
    #[serde(rename = "Levene")]
    Levene,
    #[serde(rename = "Welch t")]
    WelchT,
    #[serde(rename = "Student t")]
    StudentT,
    #[serde(rename = "one-way ANOVA")]
    Anova,
    #[serde(rename = "Wilcoxon rank-sum")]
    RankSum,
    #[serde(rename = "Kruskal-Wallis")]
    KruskalWallis,
    #[serde(rename = "Pearson")]
    Pearson,
    #[serde(rename = "Spearman")]
    Spearman,
    #[serde(rename = "Cronbach alpha")]
    CronbachAlpha,
}

impl fmt::Display for TestName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TestName::ShapiroWilk => "Shapiro-Wilk",
            TestName::Levene => "Levene",
            TestName::WelchT => "Welch t",
            TestName::StudentT => "Student t",
            TestName::Anova => "one-way ANOVA",
            TestName::RankSum => "Wilcoxon rank-sum",
            TestName::KruskalWallis => "Kruskal-Wallis",
            TestName::Pearson => "Pearson",
            TestName::Spearman => "Spearman",
            TestName::CronbachAlpha => "Cronbach alpha",
        })
    }
}

/// Outcome of a hypothesis test.
///
/// `statistic` is W, F, t, U, H, r or rho depending on the test. Rank-sum
/// results also carry the tie-corrected normal score `z` (without
/// continuity correction).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestResult {
    pub test_name: TestName,
    pub statistic: f64,
    pub p_value: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degrees_of_freedom: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl TestResult {
    fn new(test_name: TestName, statistic: f64, p_value: f64) -> Self {
        TestResult {
            test_name,
            statistic,
            p_value: p_value.clamp(0.0, 1.0),
            degrees_of_freedom: Vec::new(),
            z: None,
            note: None,
        }
    }

    fn with_df(mut self, df: &[f64]) -> Self {
        self.degrees_of_freedom = df.to_vec();
        self
    }

    pub fn significant(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}

/// A validated sample of finite observations.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Sample(Vec<f64>);

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self, StatsError> {
        check_finite(&values)?;
        Ok(Sample(values))
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Sample {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = StatsError;

    fn try_from(values: Vec<f64>) -> Result<Self, Self::Error> {
        Sample::new(values)
    }
}

impl From<Sample> for Vec<f64> {
    fn from(s: Sample) -> Self {
        s.0
    }
}

pub(crate) fn check_finite(values: &[f64]) -> Result<(), StatsError> {
    if values.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(StatsError::NonFinite)
    }
}

pub(crate) fn check_groups(
    test: TestName,
    groups: &[&[f64]],
    min_size: usize,
) -> Result<(), StatsError> {
    if groups.len() < 2 {
        return Err(StatsError::TooFewGroups(test));
    }
    for (i, g) in groups.iter().enumerate() {
        check_finite(g)?;
        if g.len() < min_size {
            return Err(StatsError::GroupTooSmall {
                test,
                group: i,
                min: min_size,
                actual: g.len(),
            });
        }
    }
    Ok(())
}

/// Runs the named group-comparison test. Two-sample tests take exactly two
/// groups; Levene, ANOVA and Kruskal-Wallis take two or more.
pub fn compare_groups(test: TestName, groups: &[&[f64]]) -> Result<TestResult, StatsError> {
    let pair = || -> Result<(&[f64], &[f64]), StatsError> {
        match groups {
            [a, b] => Ok((a, b)),
            [_] | [] => Err(StatsError::TooFewGroups(test)),
            _ => Err(StatsError::Domain(format!("{test} compares exactly two groups"))),
        }
    };
    match test {
        TestName::WelchT => pair().and_then(|(a, b)| welch_t(a, b)),
        TestName::StudentT => pair().and_then(|(a, b)| student_t(a, b)),
        TestName::RankSum => pair().and_then(|(a, b)| wilcoxon_ranksum(a, b)),
        TestName::Anova => anova_oneway(groups),
        TestName::KruskalWallis => kruskal_wallis(groups),
        TestName::Levene => levene(groups),
        other => Err(StatsError::Domain(format!("{other} is not a group comparison"))),
    }
}
