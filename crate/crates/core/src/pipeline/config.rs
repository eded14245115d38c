use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::PipelineError;

/// Per-participant variables the analysis can compare and correlate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Metric {
    Precision,
    Recall,
    FMeasure,
    ExecutionTime,
    Sus,
    PssuqOverall,
    PssuqSysuse,
    PssuqInfoqual,
    PssuqInterqual,
    Tlx,
    RawTlx,
    Wp,
}

impl Metric {
    pub const ALL: [Metric; 12] = [
        Metric::Precision,
        Metric::Recall,
        Metric::FMeasure,
        Metric::ExecutionTime,
        Metric::Sus,
        Metric::PssuqOverall,
        Metric::PssuqSysuse,
        Metric::PssuqInfoqual,
        Metric::PssuqInterqual,
        Metric::Tlx,
        Metric::RawTlx,
        Metric::Wp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Metric::Precision => "precision",
            Metric::Recall => "recall",
            Metric::FMeasure => "fMeasure",
            Metric::ExecutionTime => "executionTime",
            Metric::Sus => "sus",
            Metric::PssuqOverall => "pssuqOverall",
            Metric::PssuqSysuse => "pssuqSysuse",
            Metric::PssuqInfoqual => "pssuqInfoqual",
            Metric::PssuqInterqual => "pssuqInterqual",
            Metric::Tlx => "tlx",
            Metric::RawTlx => "rawTlx",
            Metric::Wp => "wp",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Metric::ALL.into_iter().find(|m| m.name() == name.trim())
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

fn default_alpha() -> f64 {
    0.05
}

fn default_metrics() -> Vec<Metric> {
    Metric::ALL.to_vec()
}

/// Contents of `analysis.json`. Every field has a default, so `{}` is a
/// valid configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<Metric>,
    /// Pairs to correlate; all pairs of `metrics` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub correlation_pairs: Option<Vec<(Metric, Metric)>>,
    /// Leave out the times of unfinished tasks from `executionTime`.
    #[serde(default)]
    pub censor_dnf_times: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            alpha: default_alpha(),
            metrics: default_metrics(),
            correlation_pairs: None,
            censor_dnf_times: false,
            seed: None,
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        let invalid = |m: String| Err(PipelineError::InvalidConfig(m));
        if !(self.alpha > 0.0 && self.alpha <= 0.5) {
            return invalid(format!("alpha must lie in (0, 0.5], got {}", self.alpha));
        }
        if self.metrics.is_empty() {
            return invalid("at least one metric is required".into());
        }
        for (i, m) in self.metrics.iter().enumerate() {
            if self.metrics[..i].contains(m) {
                return invalid(format!("metric {m} listed twice"));
            }
        }
        for (a, b) in self.correlation_pairs.iter().flatten() {
            if a == b {
                return invalid(format!("cannot correlate {a} with itself"));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, PipelineError> {
        let cfg: AnalysisConfig =
            serde_json::from_str(text).map_err(|e| PipelineError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Io {
            path: path.to_path_buf(),
            source: e,
        })?;
        Self::from_json(&text)
    }

    /// The pairs to correlate, in a fixed order.
    pub fn pairs(&self) -> Vec<(Metric, Metric)> {
        match &self.correlation_pairs {
            Some(p) => p.clone(),
            None => {
                let m = &self.metrics;
                (0..m.len()).flat_map(|i| (i + 1..m.len()).map(move |j| (m[i], m[j]))).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_names() {
        let cfg = AnalysisConfig::from_json("{}").unwrap();
        assert_eq!(cfg, AnalysisConfig::default());
        assert_eq!(cfg.pairs().len(), 66);
        for m in Metric::ALL {
            assert_eq!(Metric::parse(m.name()), Some(m));
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{m}\""));
        }
    }

    #[test]
    fn rejects_invalid() {
        for text in [
            r#"{"alpha": 0}"#,
            r#"{"alpha": 0.6}"#,
            r#"{"metrics": []}"#,
            r#"{"metrics": ["sus", "sus"]}"#,
            r#"{"metrics": ["usability"]}"#,
            r#"{"correlationPairs": [["sus", "sus"]]}"#,
            r#"{"colour": 1}"#,
        ] {
            assert!(AnalysisConfig::from_json(text).is_err(), "{text}");
        }
        let cfg = AnalysisConfig::from_json(r#"{"alpha": 0.5, "correlationPairs": [["sus", "tlx"]]}"#).unwrap();
        assert_eq!(cfg.pairs(), vec![(Metric::Sus, Metric::Tlx)]);
    }
}
