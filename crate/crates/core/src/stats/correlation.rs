use super::dist::t_two_sided;
use super::rank::midranks;
use super::{check_finite, StatsError, TestName, TestResult};

fn check_pair(test: TestName, x: &[f64], y: &[f64]) -> Result<(), StatsError> {
    check_finite(x)?;
    check_finite(y)?;
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch {
            test,
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 3 {
        return Err(StatsError::SampleTooSmall {
            test,
            min: 3,
            actual: x.len(),
        });
    }
    Ok(())
}

fn correlation(test: TestName, x: &[f64], y: &[f64]) -> Result<TestResult, StatsError> {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ConstantInput(test));
    }
    let r = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    let df = n - 2.0;
    let p = if r.abs() == 1.0 {
        0.0
    } else {
        t_two_sided(r * (df / ((1.0 - r) * (1.0 + r))).sqrt(), df)?
    };
    Ok(TestResult::new(test, r, p).with_df(&[df]))
}

/// Pearson product-moment correlation with a t-based two-sided p-value.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<TestResult, StatsError> {
    check_pair(TestName::Pearson, x, y)?;
    correlation(TestName::Pearson, x, y)
}

/// Spearman rank correlation: Pearson on midranks, t-based p-value.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<TestResult, StatsError> {
    check_pair(TestName::Spearman, x, y)?;
    correlation(TestName::Spearman, &midranks(x), &midranks(y))
}
