use super::descriptive::variance;
use super::{check_finite, StatsError, TestName};

/// Conventional lower bound for acceptable internal consistency.
pub const ACCEPTABLE_ALPHA: f64 = 0.7;

/// Respondents-by-items score matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ItemMatrix {
    rows: Vec<Vec<f64>>,
    items: usize,
}

impl ItemMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, StatsError> {
        let items = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != items) {
            return Err(StatsError::Ragged);
        }
        for r in &rows {
            check_finite(r)?;
        }
        Ok(ItemMatrix { rows, items })
    }

    /// Keeps only respondents with every item present.
    pub fn listwise(rows: &[Vec<Option<f64>>]) -> Result<Self, StatsError> {
        Self::new(
            rows.iter()
                .filter_map(|r| r.iter().copied().collect::<Option<Vec<f64>>>())
                .collect(),
        )
    }

    pub fn respondents(&self) -> usize {
        self.rows.len()
    }

    pub fn items(&self) -> usize {
        self.items
    }

    fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j]).collect()
    }
}

/// Cronbach's alpha, `k / (k - 1) * (1 - sum(item variances) / var(total))`.
pub fn cronbach_alpha(m: &ItemMatrix) -> Result<f64, StatsError> {
    if m.items() < 2 {
        return Err(StatsError::SampleTooSmall {
            test: TestName::CronbachAlpha,
            min: 2,
            actual: m.items(),
        });
    }
    if m.respondents() < 2 {
        return Err(StatsError::SampleTooSmall {
            test: TestName::CronbachAlpha,
            min: 2,
            actual: m.respondents(),
        });
    }
    let k = m.items() as f64;
    let item_var: f64 = (0..m.items()).map(|j| variance(&m.column(j))).sum();
    let totals: Vec<f64> = m.rows.iter().map(|r| r.iter().sum()).collect();
    let total_var = variance(&totals);
    if total_var == 0.0 {
        return Err(StatsError::DegenerateInput("total scores have zero variance"));
    }
    Ok(k / (k - 1.0) * (1.0 - item_var / total_var))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_items_give_alpha_one() {
        let m = ItemMatrix::new(vec![vec![1.0, 1.0, 1.0], vec![3.0, 3.0, 3.0], vec![4.0, 4.0, 4.0]])
            .unwrap();
        assert!((cronbach_alpha(&m).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hand_computed() {
        // Items (1,2,3) and (2,1,3): item variances 1 + 1, totals 3, 3, 6
        // with variance 3; alpha = 2 * (1 - 2/3) = 2/3.
        let m = ItemMatrix::new(vec![vec![1.0, 2.0], vec![2.0, 1.0], vec![3.0, 3.0]]).unwrap();
        assert!((cronbach_alpha(&m).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!(cronbach_alpha(&m).unwrap() < ACCEPTABLE_ALPHA);
    }

    #[test]
    fn listwise_and_errors() {
        let m = ItemMatrix::listwise(&[
            vec![Some(1.0), Some(2.0)],
            vec![None, Some(2.0)],
            vec![Some(2.0), Some(2.0)],
        ])
        .unwrap();
        assert_eq!(m.respondents(), 2);
        assert_eq!(ItemMatrix::new(vec![vec![1.0], vec![1.0, 2.0]]), Err(StatsError::Ragged));
        let flat = ItemMatrix::new(vec![vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        assert!(matches!(cronbach_alpha(&flat), Err(StatsError::DegenerateInput(_))));
    }
}
