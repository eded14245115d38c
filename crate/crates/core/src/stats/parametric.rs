use super::descriptive::{mean, variance};
use super::dist::{f_sf, t_two_sided};
use super::{check_groups, StatsError, TestName, TestResult};

struct OneWay {
    f: f64,
    df_between: f64,
    df_within: f64,
    ss_within: f64,
    ss_between: f64,
}

fn one_way(groups: &[&[f64]]) -> OneWay {
    let n_total: usize = groups.iter().map(|g| g.len()).sum();
    let grand = groups.iter().flat_map(|g| g.iter()).sum::<f64>() / n_total as f64;
    let mut ss_between = 0.0;
    let mut ss_within = 0.0;
    for g in groups {
        let m = mean(g);
        ss_between += g.len() as f64 * (m - grand).powi(2);
        ss_within += g.iter().map(|v| (v - m).powi(2)).sum::<f64>();
    }
    let df_between = (groups.len() - 1) as f64;
    let df_within = (n_total - groups.len()) as f64;
    OneWay {
        f: (ss_between / df_between) / (ss_within / df_within),
        df_between,
        df_within,
        ss_within,
        ss_between,
    }
}

/// Levene's test for equal variances, centred on group means.
///
/// When every group is constant the absolute deviations are all zero; the
/// statistic is reported as 0 with p = 1 and a note.
pub fn levene(groups: &[&[f64]]) -> Result<TestResult, StatsError> {
    check_groups(TestName::Levene, groups, 2)?;
    let deviations: Vec<Vec<f64>> = groups
        .iter()
        .map(|g| {
            let m = mean(g);
            g.iter().map(|v| (v - m).abs()).collect()
        })
        .collect();
    let refs: Vec<&[f64]> = deviations.iter().map(Vec::as_slice).collect();
    let ow = one_way(&refs);
    let df = [ow.df_between, ow.df_within];
    if ow.ss_within == 0.0 {
        if ow.ss_between == 0.0 {
            let mut r = TestResult::new(TestName::Levene, 0.0, 1.0).with_df(&df);
            r.note = Some("all groups are constant".into());
            return Ok(r);
        }
        return Ok(TestResult::new(TestName::Levene, f64::INFINITY, 0.0).with_df(&df));
    }
    let p = f_sf(ow.f, ow.df_between, ow.df_within)?;
    Ok(TestResult::new(TestName::Levene, ow.f, p).with_df(&df))
}

/// Welch's unequal-variance t-test. The statistic is `mean(a) - mean(b)`
/// over its standard error.
pub fn welch_t(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    check_groups(TestName::WelchT, &[a, b], 2)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (sa, sb) = (variance(a) / na, variance(b) / nb);
    if sa == 0.0 && sb == 0.0 {
        return Err(StatsError::BothDegenerate);
    }
    let se2 = sa + sb;
    let t = (mean(a) - mean(b)) / se2.sqrt();
    let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    let p = if t == 0.0 { 1.0 } else { t_two_sided(t, df)? };
    Ok(TestResult::new(TestName::WelchT, t, p).with_df(&[df]))
}

/// Student's pooled-variance t-test.
pub fn student_t(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    check_groups(TestName::StudentT, &[a, b], 2)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let df = na + nb - 2.0;
    let pooled = ((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / df;
    if pooled == 0.0 {
        return Err(StatsError::DegenerateWithin);
    }
    let t = (mean(a) - mean(b)) / (pooled * (1.0 / na + 1.0 / nb)).sqrt();
    let p = t_two_sided(t, df)?;
    Ok(TestResult::new(TestName::StudentT, t, p).with_df(&[df]))
}

/// One-way analysis of variance.
pub fn anova_oneway(groups: &[&[f64]]) -> Result<TestResult, StatsError> {
    check_groups(TestName::Anova, groups, 1)?;
    let n_total: usize = groups.iter().map(|g| g.len()).sum();
    if n_total <= groups.len() {
        return Err(StatsError::SampleTooSmall {
            test: TestName::Anova,
            min: groups.len() + 1,
            actual: n_total,
        });
    }
    let ow = one_way(groups);
    if ow.ss_within == 0.0 {
        return Err(StatsError::DegenerateWithin);
    }
    let p = f_sf(ow.f, ow.df_between, ow.df_within)?;
    Ok(TestResult::new(TestName::Anova, ow.f, p).with_df(&[ow.df_between, ow.df_within]))
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: [f64; 6] = [4.1, 5.3, 6.0, 5.5, 4.8, 6.2];
    const B: [f64; 7] = [6.9, 7.4, 5.9, 8.1, 7.7, 6.6, 7.0];

    #[test]
    fn anova_of_two_groups_is_student_t_squared() {
        let t = student_t(&A, &B).unwrap();
        let f = anova_oneway(&[&A, &B]).unwrap();
        assert!((f.statistic - t.statistic.powi(2)).abs() < 1e-10);
        assert!((f.p_value - t.p_value).abs() < 1e-12);
    }

    #[test]
    fn welch_equals_student_for_equal_sizes_and_variances() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [3.0, 4.0, 5.0, 6.0];
        let w = welch_t(&a, &b).unwrap();
        let s = student_t(&a, &b).unwrap();
        assert!((w.statistic - s.statistic).abs() < 1e-12);
        assert!((w.degrees_of_freedom[0] - 6.0).abs() < 1e-12);
        assert!((w.p_value - s.p_value).abs() < 1e-12);
    }

    #[test]
    fn welch_degenerate_cases() {
        assert_eq!(welch_t(&[2.0, 2.0], &[3.0, 3.0, 3.0]), Err(StatsError::BothDegenerate));
        let r = welch_t(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn levene_edges() {
        let r = levene(&[&[1.0, 1.0], &[5.0, 5.0, 5.0]]).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        assert!(r.note.is_some());
        let r = levene(&[&[1.0, 1.0, 1.0], &[1.0, 3.0, 5.0]]).unwrap();
        assert!(r.statistic > 0.0 && r.p_value < 1.0);
        // Equal spreads give F = 0.
        let r = levene(&[&[1.0, 2.0, 3.0], &[11.0, 12.0, 13.0]]).unwrap();
        assert!(r.statistic.abs() < 1e-12);
    }

    #[test]
    fn anova_errors() {
        assert_eq!(anova_oneway(&[&A]), Err(StatsError::TooFewGroups(TestName::Anova)));
        assert_eq!(
            anova_oneway(&[&[1.0, 1.0], &[2.0, 2.0]]),
            Err(StatsError::DegenerateWithin)
        );
    }
}
