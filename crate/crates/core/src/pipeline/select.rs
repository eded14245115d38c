//! Choice of comparison test and correlation method from per-group
//! normality.

use serde::{Deserialize, Serialize};

use crate::stats::{shapiro_wilk, variance, StatsError, TestName, TestResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Branch {
    /// Every group passed Shapiro-Wilk.
    Parametric,
    /// Some group failed Shapiro-Wilk or could not be tested.
    Nonparametric,
    /// Fewer than two groups: descriptives only.
    NotApplicable,
}

/// Shapiro-Wilk outcome of one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalityCheck {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<TestResult>,
    /// Why the test could not be run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_computable: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestChoice {
    pub branch: Branch,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<TestName>,
    pub normality: Vec<NormalityCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

pub(crate) fn normality(sample: &[f64], alpha: f64) -> NormalityCheck {
    let n = sample.len();
    if n >= 3 && variance(sample) == 0.0 {
        return NormalityCheck {
            n,
            result: None,
            not_computable: Some("zero variance".into()),
            passed: false,
        };
    }
    match shapiro_wilk(sample) {
        Ok(r) => NormalityCheck {
            n,
            passed: r.p_value > alpha,
            result: Some(r),
            not_computable: None,
        },
        Err(e) => NormalityCheck {
            n,
            result: None,
            not_computable: Some(e.to_string()),
            passed: false,
        },
    }
}

/// Picks the comparison test for `groups` (in declared order): Welch's t or
/// one-way ANOVA when every group passes Shapiro-Wilk at `alpha`, otherwise
/// the rank-sum or Kruskal-Wallis test. A group that cannot be tested for
/// normality sends the choice to the nonparametric branch with a warning.
pub fn select_comparison_test(groups: &[&[f64]], alpha: f64) -> TestChoice {
    let checks: Vec<NormalityCheck> = groups.iter().map(|g| normality(g, alpha)).collect();
    if groups.len() < 2 {
        return TestChoice {
            branch: Branch::NotApplicable,
            test: None,
            normality: checks,
            warnings: Vec::new(),
        };
    }
    let warnings: Vec<String> = checks
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            c.not_computable
                .as_ref()
                .map(|why| format!("group {} too small or degenerate for a normality test ({why}); using the nonparametric branch", i + 1))
        })
        .collect();
    let parametric = checks.iter().all(|c| c.passed);
    let (branch, test) = match (parametric, groups.len()) {
        (true, 2) => (Branch::Parametric, TestName::WelchT),
        (true, _) => (Branch::Parametric, TestName::Anova),
        (false, 2) => (Branch::Nonparametric, TestName::RankSum),
        (false, _) => (Branch::Nonparametric, TestName::KruskalWallis),
    };
    TestChoice {
        branch,
        test: Some(test),
        normality: checks,
        warnings,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorrelationChoice {
    pub method: TestName,
    pub normality: [NormalityCheck; 2],
}

/// Pearson when both variables pass Shapiro-Wilk at `alpha`, Spearman
/// otherwise.
pub fn select_correlation_method(x: &[f64], y: &[f64], alpha: f64) -> Result<CorrelationChoice, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            test: TestName::Pearson,
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(StatsError::SampleTooSmall {
            test: TestName::Pearson,
            min: 3,
            actual: x.len(),
        });
    }
    let normality = [normality(x, alpha), normality(y, alpha)];
    let method = if normality.iter().all(|c| c.passed) {
        TestName::Pearson
    } else {
        TestName::Spearman
    };
    Ok(CorrelationChoice { method, normality })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::special::normal_quantile;

    fn quantiles(n: usize, shift: f64) -> Vec<f64> {
        (1..=n)
            .map(|i| shift + normal_quantile((i as f64 - 0.375) / (n as f64 + 0.25)))
            .collect()
    }

    fn skewed(n: usize) -> Vec<f64> {
        (0..n).map(|i| (i as f64 * 0.5).exp()).collect()
    }

    #[test]
    fn normal_groups_go_parametric() {
        let (a, b, c) = (quantiles(12, 0.0), quantiles(12, 1.0), quantiles(15, -1.0));
        assert_eq!(select_comparison_test(&[&a, &b], 0.05).test, Some(TestName::WelchT));
        assert_eq!(select_comparison_test(&[&a, &b, &c], 0.05).test, Some(TestName::Anova));
    }

    #[test]
    fn skewed_group_goes_nonparametric() {
        let (a, b, c) = (quantiles(12, 0.0), skewed(12), quantiles(12, 2.0));
        let choice = select_comparison_test(&[&a, &b], 0.05);
        assert_eq!((choice.branch, choice.test), (Branch::Nonparametric, Some(TestName::RankSum)));
        assert_eq!(select_comparison_test(&[&a, &b, &c], 0.05).test, Some(TestName::KruskalWallis));
    }

    #[test]
    fn small_or_flat_groups_fall_back_with_warning() {
        let a = quantiles(12, 0.0);
        let choice = select_comparison_test(&[&a, &[1.0, 2.0]], 0.05);
        assert_eq!(choice.test, Some(TestName::RankSum));
        assert_eq!(choice.warnings.len(), 1);
        let choice = select_comparison_test(&[&a, &[3.0; 6]], 0.05);
        assert_eq!(choice.test, Some(TestName::RankSum));
        assert!(choice.normality[1].not_computable.is_some());
    }

    #[test]
    fn single_group_has_no_test() {
        let a = quantiles(12, 0.0);
        let choice = select_comparison_test(&[&a], 0.05);
        assert_eq!((choice.branch, choice.test), (Branch::NotApplicable, None));
        assert_eq!(choice.normality.len(), 1);
    }

    #[test]
    fn correlation_method() {
        let x = quantiles(15, 0.0);
        let mut y = quantiles(15, 3.0);
        y.reverse();
        assert_eq!(select_correlation_method(&x, &y, 0.05).unwrap().method, TestName::Pearson);
        assert_eq!(select_correlation_method(&x, &skewed(15), 0.05).unwrap().method, TestName::Spearman);
        assert!(select_correlation_method(&[1.0, 2.0], &[2.0, 1.0], 0.05).is_err());
    }
}
