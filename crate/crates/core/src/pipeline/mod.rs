//! From a study directory to grades, instrument scores and the statistical
//! report.

mod analysis;
mod config;
mod outputs;
mod render;
mod select;
mod synth;

use std::path::PathBuf;

use thiserror::Error;

use crate::compare::GradeError;
use crate::instruments::InstrumentError;
use crate::study::StudyError;

pub use analysis::{
    analyze, normality_check, run_analysis, AnalysisReport, ComparisonEntry, CorrelationEntry,
    DescriptiveRow, EffectSize, GroupSummary, HomogeneityRow, NormalityRow, Provenance,
    ReliabilityEntry, StatusCounts, StudyInfo, TimeAggregate, RECOMMENDED_GROUP_SIZE,
};
pub use config::{AnalysisConfig, Metric};
pub use outputs::{
    grade_study, score_study, GradesFile, ParticipantGrade, ParticipantScores, PssuqSubscaleScores,
    ScoresFile, TaskGradeRow,
};
pub use render::{format_number, render, render_csv, render_markdown, ReportFormat};
pub use select::{
    select_comparison_test, select_correlation_method, Branch, CorrelationChoice, NormalityCheck,
    TestChoice,
};
pub use synth::{synth_study, SynthSpec, MAX_EFFECT};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid analysis configuration: {0}")]
    InvalidConfig(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("grading {participant} {task}: {source}")]
    Grade {
        participant: String,
        task: String,
        #[source]
        source: GradeError,
    },
    #[error("scoring {participant}: {source}")]
    Score {
        participant: String,
        #[source]
        source: InstrumentError,
    },
    #[error(transparent)]
    Study(#[from] StudyError),
    #[error("analysis impossible: {0}")]
    AnalysisImpossible(String),
    #[error("invalid synthetic study: {0}")]
    InvalidSynthSpec(String),
    #[error("invalid effect size: {0}")]
    InvalidEffectSize(String),
    #[error("unknown report format {0:?}")]
    UnknownFormat(String),
}

impl PipelineError {
    /// Process exit status: 1 for invalid input, 2 when no analysis can be
    /// run, 3 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Io { .. } | PipelineError::Study(StudyError::Io { .. }) => 3,
            PipelineError::AnalysisImpossible(_) => 2,
            _ => 1,
        }
    }
}
