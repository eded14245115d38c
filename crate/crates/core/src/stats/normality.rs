//! Shapiro-Wilk W test, following Royston's AS R94 algorithm (coefficient
//! approximation and normalising transformation of W).

use std::f64::consts::PI;

use super::dist::normal_sf;
use super::special::normal_quantile;
use super::{check_finite, StatsError, TestName, TestResult};

const MIN_N: usize = 3;
const MAX_N: usize = 5000;

const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.5440, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

fn poly(coefs: &[f64], x: f64) -> f64 {
    coefs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// The first `n / 2` coefficients `a_i` (positive, largest first); the
/// coefficient of the `i`-th smallest order statistic is `-a_i` and of the
/// `i`-th largest `+a_i`.
fn coefficients(n: usize) -> Vec<f64> {
    let half = n / 2;
    if n == 3 {
        return vec![std::f64::consts::FRAC_1_SQRT_2];
    }
    let an25 = n as f64 + 0.25;
    let m: Vec<f64> = (1..=half)
        .map(|i| normal_quantile((i as f64 - 0.375) / an25))
        .collect();
    let summ2 = 2.0 * m.iter().map(|v| v * v).sum::<f64>();
    let ssumm2 = summ2.sqrt();
    let rsn = 1.0 / (n as f64).sqrt();
    let a1 = poly(&C1, rsn) - m[0] / ssumm2;

    let mut a = vec![0.0; half];
    a[0] = a1;
    let (first, fac) = if n > 5 {
        let a2 = -m[1] / ssumm2 + poly(&C2, rsn);
        a[1] = a2;
        let fac = ((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1])
            / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
            .sqrt();
        (2, fac)
    } else {
        let fac = ((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1)).sqrt();
        (1, fac)
    };
    for i in first..half {
        a[i] = -m[i] / fac;
    }
    a
}

/// Shapiro-Wilk normality test for `3 <= n <= 5000` observations.
pub fn shapiro_wilk(sample: &[f64]) -> Result<TestResult, StatsError> {
    check_finite(sample)?;
    let n = sample.len();
    if n < MIN_N {
        return Err(StatsError::SampleTooSmall {
            test: TestName::ShapiroWilk,
            min: MIN_N,
            actual: n,
        });
    }
    if n > MAX_N {
        return Err(StatsError::SampleTooLarge {
            test: TestName::ShapiroWilk,
            max: MAX_N,
            actual: n,
        });
    }
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if range <= 0.0 || range < 1e-19 * x[0].abs().max(x[n - 1].abs()) {
        return Err(StatsError::ZeroVariance(TestName::ShapiroWilk));
    }

    let a = coefficients(n);
    let scaled: Vec<f64> = x.iter().map(|v| v / range).collect();
    let mean = scaled.iter().sum::<f64>() / n as f64;
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for (i, xi) in scaled.iter().enumerate() {
        let j = n - 1 - i;
        let coef = match i.cmp(&j) {
            std::cmp::Ordering::Less => -a[i],
            std::cmp::Ordering::Greater => a[j],
            std::cmp::Ordering::Equal => 0.0,
        };
        let dev = xi - mean;
        ssa += coef * coef;
        ssx += dev * dev;
        sax += coef * dev;
    }
    let ssassx = (ssa * ssx).sqrt();
    let w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    let w = 1.0 - w1;

    let p = if n == 3 {
        const SIX_OVER_PI: f64 = 6.0 / PI;
        const PI_OVER_THREE: f64 = PI / 3.0;
        (SIX_OVER_PI * (w.sqrt().asin() - PI_OVER_THREE)).max(0.0)
    } else {
        let nf = n as f64;
        let y = w1.ln();
        let (z, m, s) = if n <= 11 {
            let gamma = poly(&G, nf);
            if y >= gamma {
                return Ok(TestResult::new(TestName::ShapiroWilk, w, 1e-99));
            }
            let y = -(gamma - y).ln();
            (y, poly(&C3, nf), poly(&C4, nf).exp())
        } else {
            let ln_n = nf.ln();
            (y, poly(&C5, ln_n), poly(&C6, ln_n).exp())
        };
        normal_sf((z - m) / s)
    };
    Ok(TestResult::new(TestName::ShapiroWilk, w, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn normal_scores(n: usize) -> Vec<f64> {
        (1..=n)
            .map(|i| normal_quantile((i as f64 - 0.375) / (n as f64 + 0.25)))
            .collect()
    }

    #[test]
    fn normal_scores_have_w_near_one() {
        let r = shapiro_wilk(&normal_scores(20)).unwrap();
        assert!(r.statistic > 0.99, "W = {}", r.statistic);
        assert!(r.p_value > 0.5);
    }

    #[test]
    fn exponential_grid_rejects() {
        let x: Vec<f64> = (0..12).map(|i| (i as f64 * 0.5).exp()).collect();
        let r = shapiro_wilk(&x).unwrap();
        assert!(r.p_value < 0.05, "p = {}", r.p_value);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            shapiro_wilk(&[1.0, 2.0]),
            Err(StatsError::SampleTooSmall { .. })
        ));
        assert_eq!(
            shapiro_wilk(&[4.0; 10]),
            Err(StatsError::ZeroVariance(TestName::ShapiroWilk))
        );
        assert!(matches!(
            shapiro_wilk(&vec![0.5; 5001]),
            Err(StatsError::SampleTooLarge { .. })
        ));
        assert_eq!(shapiro_wilk(&[1.0, f64::NAN, 2.0]), Err(StatsError::NonFinite));
    }

    #[test]
    fn three_points() {
        // Equally spaced points are as normal as three points can be.
        let r = shapiro_wilk(&[1.0, 2.0, 3.0]).unwrap();
        assert!((r.statistic - 1.0).abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-9);
    }
}
