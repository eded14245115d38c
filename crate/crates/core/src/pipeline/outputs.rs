//! `grades.json` and `scores.json`: per-participant results that the
//! analysis consumes. Together they carry everything the report is
//! computed from.

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::compare::{global_grade, grade_task, macro_grade, Prf, TaskGrade};
use crate::instruments::{
    score_pssuq_subscale, score_raw_tlx, score_sus, score_tlx, score_wp, PssuqSubscale,
};
use crate::par::Execution;
use crate::study::{StudyDataset, FORMAT_VERSION};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TaskGradeRow {
    pub participant_id: String,
    pub group_label: String,
    #[serde(flatten)]
    pub grade: TaskGrade,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParticipantGrade {
    pub participant_id: String,
    pub group_label: String,
    /// Micro-averaged over all tasks.
    pub global: Prf,
    /// Unweighted mean of the per-task figures.
    #[serde(rename = "macro")]
    pub macro_average: Prf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub help_count: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GradesFile {
    pub format_version: u32,
    pub study_id: String,
    /// Declared group order.
    pub groups: Vec<String>,
    pub tasks: Vec<TaskGradeRow>,
    pub participants: Vec<ParticipantGrade>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PssuqSubscaleScores {
    pub overall: Option<f64>,
    pub sysuse: Option<f64>,
    pub infoqual: Option<f64>,
    pub interqual: Option<f64>,
    pub not_applicable: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ParticipantScores {
    pub participant_id: String,
    pub group_label: String,
    pub sus: Option<f64>,
    pub pssuq: Option<PssuqSubscaleScores>,
    pub tlx: Option<f64>,
    pub raw_tlx: Option<f64>,
    pub wp: Option<f64>,
    /// Raw SUS answers, kept for reliability analysis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sus_items: Option<Vec<u8>>,
    /// Raw PSSUQ answers (`null` = not applicable).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pssuq_items: Option<Vec<Option<u8>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScoresFile {
    pub format_version: u32,
    pub study_id: String,
    pub groups: Vec<String>,
    pub participants: Vec<ParticipantScores>,
}

/// Grades every task of every participant.
pub fn grade_study(ds: &StudyDataset, exec: Execution) -> Result<GradesFile, PipelineError> {
    let per_participant = exec.map(&ds.participants, |p| -> Result<_, PipelineError> {
        let mut rows = Vec::with_capacity(p.tasks.len());
        for (task, result) in &p.tasks {
            let expected = &ds.task_for(p.group(), *task).expected_graph;
            let grade = grade_task(
                task.as_str(),
                result.submission.as_ref(),
                expected,
                result.status,
                result.execution_time_seconds,
            )
            .map_err(|source| PipelineError::Grade {
                participant: p.id().to_string(),
                task: task.to_string(),
                source,
            })?;
            rows.push(grade);
        }
        let global = global_grade(&rows).map_err(|source| PipelineError::Grade {
            participant: p.id().to_string(),
            task: "global".into(),
            source,
        })?;
        let macro_average = macro_grade(&rows).expect("non-empty after global_grade");
        Ok((rows, global, macro_average))
    });

    let mut tasks = Vec::new();
    let mut participants = Vec::new();
    for (p, outcome) in ds.participants.iter().zip(per_participant) {
        let (rows, global, macro_average) = outcome?;
        tasks.extend(rows.into_iter().map(|grade| TaskGradeRow {
            participant_id: p.id().to_string(),
            group_label: p.group().to_string(),
            grade,
        }));
        participants.push(ParticipantGrade {
            participant_id: p.id().to_string(),
            group_label: p.group().to_string(),
            global,
            macro_average,
            help_count: p.help_count,
        });
    }
    Ok(GradesFile {
        format_version: FORMAT_VERSION,
        study_id: ds.study_id.clone(),
        groups: ds.group_labels().into_iter().map(String::from).collect(),
        tasks,
        participants,
    })
}

/// Scores every administered instrument. A PSSUQ subscale whose items are
/// all not-applicable is `null`; TLX without pairwise choices has only the
/// raw score.
pub fn score_study(ds: &StudyDataset) -> Result<ScoresFile, PipelineError> {
    let mut participants = Vec::with_capacity(ds.participants.len());
    for p in &ds.participants {
        let ins = &p.instruments;
        let tlx = match ins.tlx.as_ref().filter(|t| t.choices().is_some()) {
            Some(t) => Some(score_tlx(t).map_err(|source| PipelineError::Score {
                participant: p.id().to_string(),
                source,
            })?),
            None => None,
        };
        let pssuq = ins.pssuq.as_ref().map(|q| {
            let sub = |s| score_pssuq_subscale(q, s).ok();
            PssuqSubscaleScores {
                overall: sub(PssuqSubscale::Overall),
                sysuse: sub(PssuqSubscale::SysUse),
                infoqual: sub(PssuqSubscale::InfoQual),
                interqual: sub(PssuqSubscale::InterQual),
                not_applicable: q.not_applicable_count(),
            }
        });
        participants.push(ParticipantScores {
            participant_id: p.id().to_string(),
            group_label: p.group().to_string(),
            sus: ins.sus.as_ref().map(score_sus),
            pssuq,
            tlx,
            raw_tlx: ins.tlx.as_ref().map(score_raw_tlx),
            wp: ins.wp.as_ref().map(score_wp),
            sus_items: ins.sus.as_ref().map(|s| s.items().to_vec()),
            pssuq_items: ins.pssuq.as_ref().map(|q| q.items().to_vec()),
        });
    }
    Ok(ScoresFile {
        format_version: FORMAT_VERSION,
        study_id: ds.study_id.clone(),
        groups: ds.group_labels().into_iter().map(String::from).collect(),
        participants,
    })
}
