use serde::{Deserialize, Serialize};

/// Arithmetic mean; NaN for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Sample variance with the `n - 1` denominator; NaN when `n < 2`.
pub fn variance(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return f64::NAN;
    }
    let m = mean(values);
    values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64
}

fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Quantile by linear interpolation between order statistics
/// (Hyndman-Fan type 7).
pub fn quantile(values: &[f64], q: f64) -> f64 {
    quantile_sorted(&sorted(values), q)
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Summary of one sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Descriptives {
    pub n: usize,
    pub mean: Option<f64>,
    pub sd: Option<f64>,
    pub median: Option<f64>,
    pub q1: Option<f64>,
    pub q3: Option<f64>,
    pub iqr: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl Descriptives {
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Descriptives {
                n: 0,
                mean: None,
                sd: None,
                median: None,
                q1: None,
                q3: None,
                iqr: None,
                min: None,
                max: None,
            };
        }
        let s = sorted(values);
        let q1 = quantile_sorted(&s, 0.25);
        let q3 = quantile_sorted(&s, 0.75);
        Descriptives {
            n: values.len(),
            mean: Some(mean(values)),
            sd: (values.len() > 1).then(|| variance(values).sqrt()),
            median: Some(quantile_sorted(&s, 0.5)),
            q1: Some(q1),
            q3: Some(q3),
            iqr: Some(q3 - q1),
            min: s.first().copied(),
            max: s.last().copied(),
        }
    }
}

/// Cohen's d with the pooled standard deviation; `None` when undefined.
pub fn cohens_d(a: &[f64], b: &[f64]) -> Option<f64> {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    if a.len() < 2 || b.len() < 2 {
        return None;
    }
    let pooled = (((na - 1.0) * variance(a) + (nb - 1.0) * variance(b)) / (na + nb - 2.0)).sqrt();
    (pooled > 0.0).then(|| (mean(a) - mean(b)) / pooled)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_summaries() {
        let v = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        assert_eq!(mean(&v), 31.0 / 8.0);
        assert_eq!(median(&v), 3.5);
        // numpy.percentile(v, [25, 75]) -> [1.75, 5.25]
        assert_eq!(quantile(&v, 0.25), 1.75);
        assert_eq!(quantile(&v, 0.75), 5.25);
        let d = Descriptives::of(&v);
        assert_eq!(d.iqr, Some(3.5));
        assert!((d.sd.unwrap() - variance(&v).sqrt()).abs() < 1e-15);
        assert_eq!(Descriptives::of(&[]).n, 0);
        assert_eq!(Descriptives::of(&[2.0]).sd, None);
    }

    #[test]
    fn cohens_d_sign_and_degenerate() {
        let a = [1.0, 2.0, 3.0];
        let b = [2.0, 3.0, 4.0];
        assert_eq!(cohens_d(&a, &b), Some(-1.0));
        assert_eq!(cohens_d(&b, &a), Some(1.0));
        assert_eq!(cohens_d(&[1.0, 1.0], &[1.0, 1.0]), None);
    }
}
