use super::dist::{chisq_sf, normal_sf};
use super::{check_finite, check_groups, StatsError, TestName, TestResult};

/// Largest combined sample size for which the rank-sum test enumerates the
/// exact permutation distribution instead of using the normal approximation.
pub const EXACT_RANKSUM_LIMIT: usize = 10;

const RANKSUM_MIN_TOTAL: usize = 4;
const KRUSKAL_MIN_TOTAL: usize = 5;

/// 1-based ranks with ties given the average of the ranks they span.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        let rank = (start + end + 1) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = rank;
        }
        start = end;
    }
    ranks
}

/// `sum(t^3 - t)` over tie groups.
fn tie_sum(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted
        .chunk_by(|a, b| a == b)
        .map(|c| {
            let t = c.len() as f64;
            t * t * t - t
        })
        .sum()
}

/// Visits every `k`-subset of `items`, passing the subset sum.
fn subset_sums(items: &[f64], k: usize, visit: &mut impl FnMut(f64)) {
    fn go(items: &[f64], k: usize, acc: f64, visit: &mut impl FnMut(f64)) {
        if k == 0 {
            visit(acc);
            return;
        }
        for i in 0..=items.len() - k {
            go(&items[i + 1..], k - 1, acc + items[i], visit);
        }
    }
    go(items, k, 0.0, visit);
}

/// Wilcoxon rank-sum (Mann-Whitney) test, two-sided.
///
/// The statistic is `U` for `a`. For a combined size up to
/// [`EXACT_RANKSUM_LIMIT`] the p-value comes from the exact permutation
/// distribution of the midranks; above it, from the normal approximation with
/// tie and continuity corrections.
pub fn wilcoxon_ranksum(a: &[f64], b: &[f64]) -> Result<TestResult, StatsError> {
    check_groups(TestName::RankSum, &[a, b], 1)?;
    let (n1, n2) = (a.len(), b.len());
    let n = n1 + n2;
    if n < RANKSUM_MIN_TOTAL {
        return Err(StatsError::SampleTooSmall {
            test: TestName::RankSum,
            min: RANKSUM_MIN_TOTAL,
            actual: n,
        });
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let r1: f64 = ranks[..n1].iter().sum();
    let (n1f, n2f, nf) = (n1 as f64, n2 as f64, n as f64);
    let u = r1 - n1f * (n1f + 1.0) / 2.0;
    let mu = n1f * n2f / 2.0;
    let var = n1f * n2f / 12.0 * ((nf + 1.0) - tie_sum(&pooled) / (nf * (nf - 1.0)));
    let sigma = var.max(0.0).sqrt();
    let z = if sigma > 0.0 { (u - mu) / sigma } else { 0.0 };

    let mut result = if n <= EXACT_RANKSUM_LIMIT {
        let observed = (u - mu).abs();
        let offset = n1f * (n1f + 1.0) / 2.0;
        let (mut extreme, mut total) = (0u64, 0u64);
        subset_sums(&ranks, n1, &mut |sum| {
            total += 1;
            if ((sum - offset) - mu).abs() >= observed - 1e-9 {
                extreme += 1;
            }
        });
        let mut r = TestResult::new(TestName::RankSum, u, extreme as f64 / total as f64);
        r.note = Some("exact".into());
        r
    } else if sigma == 0.0 {
        TestResult::new(TestName::RankSum, u, 1.0)
    } else {
        let p = 2.0 * normal_sf(((u - mu).abs() - 0.5) / sigma);
        TestResult::new(TestName::RankSum, u, p.min(1.0))
    };
    result.z = Some(z);
    Ok(result)
}

/// Kruskal-Wallis H test with tie correction; p from chi-square with
/// `k - 1` degrees of freedom.
pub fn kruskal_wallis(groups: &[&[f64]]) -> Result<TestResult, StatsError> {
    check_groups(TestName::KruskalWallis, groups, 1)?;
    for g in groups {
        check_finite(g)?;
    }
    let n: usize = groups.iter().map(|g| g.len()).sum();
    if n < KRUSKAL_MIN_TOTAL {
        return Err(StatsError::SampleTooSmall {
            test: TestName::KruskalWallis,
            min: KRUSKAL_MIN_TOTAL,
            actual: n,
        });
    }
    let df = (groups.len() - 1) as f64;
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.iter().copied()).collect();
    let nf = n as f64;
    let correction = 1.0 - tie_sum(&pooled) / (nf * nf * nf - nf);
    if correction <= 0.0 {
        let mut r = TestResult::new(TestName::KruskalWallis, 0.0, 1.0).with_df(&[df]);
        r.note = Some("all observations are tied".into());
        return Ok(r);
    }
    let ranks = midranks(&pooled);
    let mut offset = 0;
    let mut sum = 0.0;
    for g in groups {
        let r: f64 = ranks[offset..offset + g.len()].iter().sum();
        sum += r * r / g.len() as f64;
        offset += g.len();
    }
    let h = (12.0 / (nf * (nf + 1.0)) * sum - 3.0 * (nf + 1.0)) / correction;
    let h = h.max(0.0);
    let p = chisq_sf(h, df)?;
    Ok(TestResult::new(TestName::KruskalWallis, h, p).with_df(&[df]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midranks_average_ties() {
        assert_eq!(midranks(&[10.0, 20.0, 10.0, 30.0]), vec![1.5, 3.0, 1.5, 4.0]);
        assert_eq!(midranks(&[5.0, 5.0, 5.0]), vec![2.0, 2.0, 2.0]);
        assert!(midranks(&[]).is_empty());
    }

    #[test]
    fn exact_small_sample() {
        // Complete separation with 3 vs 3: only 2 of 20 arrangements are as
        // extreme, so p = 0.1.
        let r = wilcoxon_ranksum(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 0.1).abs() < 1e-15);
        let r = wilcoxon_ranksum(&[4.0, 5.0, 6.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.statistic, 9.0);
    }

    #[test]
    fn ranksum_all_tied() {
        let a = [2.0; 8];
        let b = [2.0; 9];
        let r = wilcoxon_ranksum(&a, &b).unwrap();
        assert_eq!(r.p_value, 1.0);
        assert_eq!(r.z, Some(0.0));
    }

    #[test]
    fn kruskal_two_groups_is_z_squared() {
        let a = [1.2, 3.4, 2.2, 5.1, 4.4, 0.3, 2.2];
        let b = [6.1, 2.2, 7.7, 5.0, 8.8, 4.4];
        let w = wilcoxon_ranksum(&a, &b).unwrap();
        let h = kruskal_wallis(&[&a, &b]).unwrap();
        assert!((h.statistic - w.z.unwrap().powi(2)).abs() < 1e-10);
    }

    #[test]
    fn kruskal_edges() {
        let r = kruskal_wallis(&[&[1.0, 1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert_eq!((r.statistic, r.p_value), (0.0, 1.0));
        assert!(matches!(
            kruskal_wallis(&[&[1.0, 2.0], &[3.0, 4.0]]),
            Err(StatsError::SampleTooSmall { .. })
        ));
    }
}
