use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::{AnalysisConfig, Metric};
use super::outputs::{grade_study, score_study, GradesFile, ScoresFile};
use super::select::{normality, select_comparison_test, select_correlation_method, Branch, NormalityCheck};
use super::PipelineError;
use crate::compare::CompletionStatus;
use crate::instruments::PssuqSubscale;
use crate::par::Execution;
use crate::stats::{
    cohens_d, compare_groups, cronbach_alpha, levene, pearson, spearman, Descriptives, ItemMatrix,
    TestName, TestResult, ACCEPTABLE_ALPHA,
};
use crate::study::{StudyDataset, FORMAT_VERSION};

/// Groups smaller than this get a power warning.
pub const RECOMMENDED_GROUP_SIZE: usize = 10;

/// Study-level facts echoed into the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StudyInfo {
    pub study_id: String,
    pub timing_method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant_note: Option<String>,
}

impl StudyInfo {
    pub fn of(ds: &StudyDataset) -> Self {
        StudyInfo {
            study_id: ds.study_id.clone(),
            timing_method: ds.timing_method.clone(),
            time_limit_seconds: ds.time_limit_seconds,
            variant_note: ds.variant_note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Provenance {
    pub format_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub study: StudyInfo,
    pub config: AnalysisConfig,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StatusCounts {
    pub completed: usize,
    pub did_not_finish: usize,
    pub did_not_start: usize,
}

impl StatusCounts {
    fn add(&mut self, status: CompletionStatus) {
        match status {
            CompletionStatus::Completed => self.completed += 1,
            CompletionStatus::DidNotFinish => self.did_not_finish += 1,
            CompletionStatus::DidNotStart => self.did_not_start += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupSummary {
    pub label: String,
    pub participants: usize,
    pub status_counts: StatusCounts,
    pub status_counts_by_task: BTreeMap<String, StatusCounts>,
    /// Sum of recorded facilitator interventions, when recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub help_count: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DescriptiveRow {
    pub metric: Metric,
    pub group: String,
    /// Participants without a value for this metric.
    pub missing: usize,
    #[serde(flatten)]
    pub stats: Descriptives,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TimeAggregate {
    pub group: String,
    /// Completed and unfinished tasks.
    pub inclusive: Descriptives,
    /// Completed tasks only.
    pub censored: Descriptives,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReliabilityEntry {
    pub scale: String,
    pub items: usize,
    pub respondents: usize,
    pub alpha: Option<f64>,
    pub acceptable: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_computable: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NormalityRow {
    pub metric: Metric,
    pub group: String,
    #[serde(flatten)]
    pub check: NormalityCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HomogeneityRow {
    pub metric: Metric,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<TestResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_computable: Option<String>,
}

/// Cohen's d of the first group against the second; not part of the
/// prescribed analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EffectSize {
    pub cohens_d: Option<f64>,
    pub beyond_protocol: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparisonEntry {
    pub metric: Metric,
    pub branch: Branch,
    /// Why the branch was taken.
    pub reason: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub test: Option<TestName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<TestResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_computable: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub effect_size: Option<EffectSize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CorrelationEntry {
    pub x: Metric,
    pub y: Metric,
    /// `None` for the pooled sample, otherwise the group label.
    pub group: Option<String>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<TestName>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<TestResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub not_computable: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub provenance: Provenance,
    pub alpha: f64,
    pub groups: Vec<GroupSummary>,
    pub descriptives: Vec<DescriptiveRow>,
    pub execution_time: Vec<TimeAggregate>,
    pub reliability: Vec<ReliabilityEntry>,
    pub normality: Vec<NormalityRow>,
    pub homogeneity: Vec<HomogeneityRow>,
    pub comparisons: Vec<ComparisonEntry>,
    pub correlations: Vec<CorrelationEntry>,
    pub warnings: Vec<String>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn comparison(&self, metric: Metric) -> Option<&ComparisonEntry> {
        self.comparisons.iter().find(|c| c.metric == metric)
    }
}

/// One participant's metric values.
struct Row {
    group: usize,
    values: BTreeMap<Metric, Option<f64>>,
    time_inclusive: Option<f64>,
    time_censored: Option<f64>,
}

fn sum_times(times: &[(CompletionStatus, Option<f64>)], censored: bool) -> Option<f64> {
    let used: Vec<f64> = times
        .iter()
        .filter(|(s, _)| match s {
            CompletionStatus::Completed => true,
            CompletionStatus::DidNotFinish => !censored,
            CompletionStatus::DidNotStart => false,
        })
        .filter_map(|(_, t)| *t)
        .collect();
    (!used.is_empty()).then(|| used.iter().sum())
}

fn build_rows(
    grades: &GradesFile,
    scores: &ScoresFile,
    cfg: &AnalysisConfig,
) -> Result<Vec<Row>, PipelineError> {
    let impossible = |m: String| PipelineError::AnalysisImpossible(m);
    if grades.groups != scores.groups {
        return Err(impossible("grades and scores declare different groups".into()));
    }
    if grades.participants.len() != scores.participants.len() {
        return Err(impossible("grades and scores cover different participants".into()));
    }
    let mut rows = Vec::with_capacity(grades.participants.len());
    for (g, s) in grades.participants.iter().zip(&scores.participants) {
        if g.participant_id != s.participant_id || g.group_label != s.group_label {
            return Err(impossible(format!(
                "participant {} in grades does not match {} in scores",
                g.participant_id, s.participant_id
            )));
        }
        let group = grades
            .groups
            .iter()
            .position(|l| *l == g.group_label)
            .ok_or_else(|| impossible(format!("participant {} is in undeclared group {}", g.participant_id, g.group_label)))?;
        let times: Vec<(CompletionStatus, Option<f64>)> = grades
            .tasks
            .iter()
            .filter(|t| t.participant_id == g.participant_id)
            .map(|t| (t.grade.status, t.grade.execution_time_seconds))
            .collect();
        let time_inclusive = sum_times(&times, false);
        let time_censored = sum_times(&times, true);
        let pssuq = |f: fn(&super::outputs::PssuqSubscaleScores) -> Option<f64>| s.pssuq.as_ref().and_then(f);
        let values = Metric::ALL
            .into_iter()
            .map(|m| {
                let v = match m {
                    Metric::Precision => Some(g.global.precision),
                    Metric::Recall => Some(g.global.recall),
                    Metric::FMeasure => Some(g.global.f_measure),
                    Metric::ExecutionTime => {
                        if cfg.censor_dnf_times {
                            time_censored
                        } else {
                            time_inclusive
                        }
                    }
                    Metric::Sus => s.sus,
                    Metric::PssuqOverall => pssuq(|p| p.overall),
                    Metric::PssuqSysuse => pssuq(|p| p.sysuse),
                    Metric::PssuqInfoqual => pssuq(|p| p.infoqual),
                    Metric::PssuqInterqual => pssuq(|p| p.interqual),
                    Metric::Tlx => s.tlx,
                    Metric::RawTlx => s.raw_tlx,
                    Metric::Wp => s.wp,
                };
                (m, v)
            })
            .collect();
        rows.push(Row {
            group,
            values,
            time_inclusive,
            time_censored,
        });
    }
    Ok(rows)
}

fn group_values(rows: &[Row], groups: usize, metric: Metric) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut values = vec![Vec::new(); groups];
    let mut missing = vec![0; groups];
    for r in rows {
        match r.values[&metric] {
            Some(v) => values[r.group].push(v),
            None => missing[r.group] += 1,
        }
    }
    (values, missing)
}

fn reliability(scores: &ScoresFile) -> Vec<ReliabilityEntry> {
    let entry = |scale: String, rows: Vec<Vec<Option<f64>>>, items: usize| {
        let matrix = ItemMatrix::listwise(&rows).expect("rows have a fixed width");
        let respondents = matrix.respondents();
        match cronbach_alpha(&matrix) {
            Ok(alpha) => ReliabilityEntry {
                scale,
                items,
                respondents,
                alpha: Some(alpha),
                acceptable: Some(alpha >= ACCEPTABLE_ALPHA),
                not_computable: None,
            },
            Err(e) => ReliabilityEntry {
                scale,
                items,
                respondents,
                alpha: None,
                acceptable: None,
                not_computable: Some(e.to_string()),
            },
        }
    };

    // SUS items are recoded to their 0-4 contributions so that all items
    // point the same way.
    let sus_rows: Vec<Vec<Option<f64>>> = scores
        .participants
        .iter()
        .filter_map(|p| p.sus_items.as_ref())
        .map(|items| {
            items
                .iter()
                .enumerate()
                .map(|(i, &v)| Some(if i % 2 == 0 { v as f64 - 1.0 } else { 5.0 - v as f64 }))
                .collect()
        })
        .collect();
    let mut out = vec![entry("SUS".into(), sus_rows, 10)];
    for sub in PssuqSubscale::ALL {
        let range = sub.items();
        let rows = scores
            .participants
            .iter()
            .filter_map(|p| p.pssuq_items.as_ref())
            .map(|items| items[range.clone()].iter().map(|v| v.map(f64::from)).collect())
            .collect();
        out.push(entry(format!("PSSUQ {sub}"), rows, range.len()));
    }
    out
}

fn comparison(metric: Metric, values: &[Vec<f64>], labels: &[String], alpha: f64) -> (ComparisonEntry, Vec<NormalityRow>, HomogeneityRow) {
    let refs: Vec<&[f64]> = values.iter().map(Vec::as_slice).collect();
    let choice = select_comparison_test(&refs, alpha);
    let normality_rows = labels
        .iter()
        .zip(&choice.normality)
        .map(|(g, check)| NormalityRow {
            metric,
            group: g.clone(),
            check: check.clone(),
        })
        .collect();

    let homogeneity = if values.len() < 2 {
        HomogeneityRow {
            metric,
            result: None,
            not_computable: Some("fewer than two groups".into()),
        }
    } else {
        match levene(&refs) {
            Ok(r) => HomogeneityRow {
                metric,
                result: Some(r),
                not_computable: None,
            },
            Err(e) => HomogeneityRow {
                metric,
                result: None,
                not_computable: Some(e.to_string()),
            },
        }
    };

    let reason = match choice.branch {
        Branch::NotApplicable => "single group: descriptives only".to_string(),
        Branch::Parametric => format!("Shapiro-Wilk p > {alpha} in every group"),
        Branch::Nonparametric => {
            let failing: Vec<&str> = labels
                .iter()
                .zip(&choice.normality)
                .filter(|(_, c)| !c.passed)
                .map(|(g, _)| g.as_str())
                .collect();
            format!("normality rejected or untestable at alpha = {alpha} in group(s) {}", failing.join(", "))
        }
    };
    let (result, not_computable) = match choice.test {
        Some(test) => match compare_groups(test, &refs) {
            Ok(r) => (Some(r), None),
            Err(e) => (None, Some(e.to_string())),
        },
        None => (None, None),
    };
    let effect_size = (values.len() == 2).then(|| EffectSize {
        cohens_d: cohens_d(&values[0], &values[1]),
        beyond_protocol: true,
    });
    let entry = ComparisonEntry {
        metric,
        branch: choice.branch,
        reason,
        test: choice.test,
        result,
        not_computable,
        effect_size,
        warnings: choice.warnings,
    };
    (entry, normality_rows, homogeneity)
}

fn correlate(x: Metric, y: Metric, group: Option<(usize, &str)>, rows: &[Row], alpha: f64) -> CorrelationEntry {
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| group.is_none_or(|(g, _)| r.group == g))
        .filter_map(|r| Some((r.values[&x]?, r.values[&y]?)))
        .unzip();
    let mut entry = CorrelationEntry {
        x,
        y,
        group: group.map(|(_, label)| label.to_string()),
        n: xs.len(),
        method: None,
        result: None,
        not_computable: None,
    };
    match select_correlation_method(&xs, &ys, alpha) {
        Err(e) => entry.not_computable = Some(e.to_string()),
        Ok(choice) => {
            entry.method = Some(choice.method);
            let r = if choice.method == TestName::Pearson {
                pearson(&xs, &ys)
            } else {
                spearman(&xs, &ys)
            };
            match r {
                Ok(r) => entry.result = Some(r),
                Err(e) => entry.not_computable = Some(e.to_string()),
            }
        }
    }
    entry
}

/// Runs the statistical analysis over already computed grades and scores.
pub fn analyze(
    grades: &GradesFile,
    scores: &ScoresFile,
    info: &StudyInfo,
    cfg: &AnalysisConfig,
    exec: Execution,
) -> Result<AnalysisReport, PipelineError> {
    cfg.validate()?;
    let rows = build_rows(grades, scores, cfg)?;
    if rows.is_empty() {
        return Err(PipelineError::AnalysisImpossible("the study has no participants".into()));
    }
    let labels = &grades.groups;
    let k = labels.len();
    if cfg.metrics.iter().all(|m| rows.iter().all(|r| r.values[m].is_none())) {
        return Err(PipelineError::AnalysisImpossible("no requested metric has any observation".into()));
    }

    let mut warnings = Vec::new();
    let mut groups = Vec::with_capacity(k);
    for (gi, label) in labels.iter().enumerate() {
        let members: Vec<&str> = grades
            .participants
            .iter()
            .filter(|p| p.group_label == *label)
            .map(|p| p.participant_id.as_str())
            .collect();
        let mut status_counts = StatusCounts::default();
        let mut by_task: BTreeMap<String, StatusCounts> = BTreeMap::new();
        for t in grades.tasks.iter().filter(|t| t.group_label == *label) {
            status_counts.add(t.grade.status);
            by_task.entry(t.grade.task_id.clone()).or_default().add(t.grade.status);
        }
        let help: Vec<u32> = grades
            .participants
            .iter()
            .filter(|p| p.group_label == *label)
            .filter_map(|p| p.help_count)
            .collect();
        if members.len() < RECOMMENDED_GROUP_SIZE {
            warnings.push(format!(
                "group {label} has {} participants; fewer than {RECOMMENDED_GROUP_SIZE} limits the power of every test",
                members.len()
            ));
        }
        let _ = gi;
        groups.push(GroupSummary {
            label: label.clone(),
            participants: members.len(),
            status_counts,
            status_counts_by_task: by_task,
            help_count: (!help.is_empty()).then(|| help.iter().sum()),
        });
    }

    let mut descriptives = Vec::new();
    let per_metric: Vec<(Vec<Vec<f64>>, Vec<usize>)> = cfg.metrics.iter().map(|m| group_values(&rows, k, *m)).collect();
    for (m, (values, missing)) in cfg.metrics.iter().zip(&per_metric) {
        for (gi, label) in labels.iter().enumerate() {
            descriptives.push(DescriptiveRow {
                metric: *m,
                group: label.clone(),
                missing: missing[gi],
                stats: Descriptives::of(&values[gi]),
            });
        }
    }

    let execution_time = labels
        .iter()
        .enumerate()
        .map(|(gi, label)| {
            let pick = |f: fn(&Row) -> Option<f64>| -> Vec<f64> {
                rows.iter().filter(|r| r.group == gi).filter_map(f).collect()
            };
            TimeAggregate {
                group: label.clone(),
                inclusive: Descriptives::of(&pick(|r| r.time_inclusive)),
                censored: Descriptives::of(&pick(|r| r.time_censored)),
            }
        })
        .collect();

    let jobs: Vec<(Metric, &Vec<Vec<f64>>)> = cfg.metrics.iter().copied().zip(per_metric.iter().map(|(v, _)| v)).collect();
    let compared = exec.map(&jobs, |(m, values)| comparison(*m, values, labels, cfg.alpha));
    let mut comparisons = Vec::new();
    let mut normality_rows = Vec::new();
    let mut homogeneity = Vec::new();
    for (c, n, h) in compared {
        comparisons.push(c);
        normality_rows.extend(n);
        homogeneity.push(h);
    }

    let mut corr_jobs: Vec<(Metric, Metric, Option<(usize, &str)>)> = Vec::new();
    for (x, y) in cfg.pairs() {
        corr_jobs.push((x, y, None));
        if k > 1 {
            corr_jobs.extend(labels.iter().enumerate().map(|(gi, l)| (x, y, Some((gi, l.as_str())))));
        }
    }
    let correlations = exec.map(&corr_jobs, |(x, y, g)| correlate(*x, *y, *g, &rows, cfg.alpha));

    Ok(AnalysisReport {
        provenance: Provenance {
            format_version: FORMAT_VERSION,
            tool: env!("CARGO_PKG_NAME").into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            study: info.clone(),
            config: cfg.clone(),
            seed: cfg.seed,
        },
        alpha: cfg.alpha,
        groups,
        descriptives,
        execution_time,
        reliability: reliability(scores),
        normality: normality_rows,
        homogeneity,
        comparisons,
        correlations,
        warnings,
    })
}

/// Grades, scores and analyses a loaded study.
pub fn run_analysis(ds: &StudyDataset, cfg: &AnalysisConfig, exec: Execution) -> Result<AnalysisReport, PipelineError> {
    cfg.validate()?;
    let grades = grade_study(ds, exec)?;
    let scores = score_study(ds)?;
    analyze(&grades, &scores, &StudyInfo::of(ds), cfg, exec)
}

/// Normality of one sample, as used by the decision procedure.
pub fn normality_check(sample: &[f64], alpha: f64) -> NormalityCheck {
    normality(sample, alpha)
}
