//! Seeded Monte-Carlo estimates of rejection rates.
//!
//! Replicate `i` draws from `ChaCha8Rng::seed_from_u64(seed + i)`, so results
//! are identical in sequential and parallel execution.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{compare_groups, StatsError, TestName};
use crate::par::Execution;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RejectionRate {
    pub test_name: TestName,
    pub replicates: usize,
    /// Replicates where the test could not be computed.
    pub failed: usize,
    pub rejections: usize,
    pub rate: f64,
}

/// Draws `groups` samples of size `n` per replicate.
pub fn normal_groups(seed: u64, groups: usize, n: usize, shifts: &[f64]) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..groups)
        .map(|g| {
            let shift = shifts.get(g).copied().unwrap_or(0.0);
            (0..n)
                .map(|_| shift + <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
                .collect()
        })
        .collect()
}

/// Fraction of `replicates` datasets, drawn from identical standard normal
/// groups, on which `test` rejects at level `alpha`.
pub fn null_rejection_rate(
    test: TestName,
    groups: usize,
    n: usize,
    replicates: usize,
    alpha: f64,
    seed: u64,
    exec: Execution,
) -> Result<RejectionRate, StatsError> {
    rejection_rate(test, groups, n, &[], replicates, alpha, seed, exec)
}

/// Like [`null_rejection_rate`] with group `g` shifted by `shifts[g]`.
#[allow(clippy::too_many_arguments)]
pub fn rejection_rate(
    test: TestName,
    groups: usize,
    n: usize,
    shifts: &[f64],
    replicates: usize,
    alpha: f64,
    seed: u64,
    exec: Execution,
) -> Result<RejectionRate, StatsError> {
    // Surface configuration errors once instead of per replicate.
    let probe = normal_groups(seed, groups, n, shifts);
    let refs: Vec<&[f64]> = probe.iter().map(Vec::as_slice).collect();
    compare_groups(test, &refs)?;

    let outcomes = exec.map_range(0..replicates as u64, |i| {
        let data = normal_groups(seed.wrapping_add(i), groups, n, shifts);
        let refs: Vec<&[f64]> = data.iter().map(Vec::as_slice).collect();
        compare_groups(test, &refs).ok().map(|r| r.significant(alpha))
    });
    let failed = outcomes.iter().filter(|o| o.is_none()).count();
    let rejections = outcomes.iter().filter(|o| **o == Some(true)).count();
    let valid = replicates - failed;
    Ok(RejectionRate {
        test_name: test,
        replicates,
        failed,
        rejections,
        rate: if valid == 0 { f64::NAN } else { rejections as f64 / valid as f64 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_across_modes() {
        let a = null_rejection_rate(TestName::WelchT, 2, 8, 200, 0.05, 7, Execution::Sequential)
            .unwrap();
        let b = null_rejection_rate(TestName::WelchT, 2, 8, 200, 0.05, 7, Execution::Parallel)
            .unwrap();
        assert_eq!(a, b);
        assert_eq!(a.failed, 0);
    }

    #[test]
    fn large_shift_is_detected() {
        let r = rejection_rate(TestName::Anova, 3, 10, &[0.0, 0.0, 3.0], 100, 0.05, 1, Execution::Sequential)
            .unwrap();
        assert!(r.rate > 0.95);
    }

    #[test]
    fn invalid_configuration_errors() {
        assert!(null_rejection_rate(TestName::WelchT, 2, 1, 10, 0.05, 0, Execution::Sequential).is_err());
    }
}
