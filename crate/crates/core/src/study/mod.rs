//! Study datasets on disk: `study.json`, `responses.csv` and the submitted
//! graphs under `submissions/`, plus the anonymity checks and the five-task
//! fixture bundle.
//!
//! ```text
//! <root>/study.json
//! <root>/responses.csv
//! <root>/submissions/<participantId>/<taskId>.nt   (or .ttl)
//! ```

mod anonymity;
mod fixtures;
mod responses;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Component, Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compare::CompletionStatus;
use crate::instruments::{InstrumentResponse, ParticipantRecord};
use crate::rdf::{parse_ntriples, parse_turtle_subset, serialize_ntriples, Graph, ParseError};

pub use anonymity::{validate_anonymity, AnonymityWarning};
pub use fixtures::{
    build_fixture_bundle, fixture_graphs, fixture_tasks, sample_data, Employee, Project, SampleData,
    SampleTask, TaskFixture, EMPLOYEE_BASE, NS, PROJECT_BASE, TASK_BASE,
};

/// Version of the on-disk formats written and accepted by this crate.
pub const FORMAT_VERSION: u32 = 1;

pub const STUDY_FILE: &str = "study.json";
pub const RESPONSES_FILE: &str = "responses.csv";
pub const SUBMISSIONS_DIR: &str = "submissions";

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("{}: {field}: {message}", path.display())]
    Schema {
        path: PathBuf,
        field: String,
        message: String,
    },
    #[error("participant {participant} has no submission for {task}")]
    MissingSubmission { participant: String, task: TaskId },
    #[error("{}: {source}", path.display())]
    Parse {
        path: PathBuf,
        #[source]
        source: ParseError,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl StudyError {
    pub(crate) fn schema(path: &Path, field: impl Into<String>, message: impl fmt::Display) -> Self {
        StudyError::Schema {
            path: path.to_path_buf(),
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        StudyError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// The five core task slots. Variant studies may redefine T4 and T5 per
/// group, but the identifiers stay the same.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TaskId {
    T1,
    T2,
    T3,
    T4,
    T5,
}

impl TaskId {
    pub const ALL: [TaskId; 5] = [TaskId::T1, TaskId::T2, TaskId::T3, TaskId::T4, TaskId::T5];

    pub fn as_str(self) -> &'static str {
        match self {
            TaskId::T1 => "T1",
            TaskId::T2 => "T2",
            TaskId::T3 => "T3",
            TaskId::T4 => "T4",
            TaskId::T5 => "T5",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        TaskId::ALL.into_iter().find(|t| t.as_str() == text.trim())
    }

    /// Prefix of this task's columns in `responses.csv` (`t1`, ...).
    pub fn column_prefix(self) -> String {
        self.as_str().to_ascii_lowercase()
    }

    /// Whether variant studies may redefine the task per group.
    pub fn is_variable(self) -> bool {
        matches!(self, TaskId::T4 | TaskId::T5)
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TaskSpec {
    pub id: TaskId,
    pub description: String,
    /// Location of the expected graph, relative to the study root.
    pub expected_graph_path: String,
    pub expected_graph: Graph,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupSpec {
    pub label: String,
    /// Tool or mapping language used by the group.
    pub tool: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub task_overrides: Vec<TaskSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TaskResult {
    pub status: CompletionStatus,
    pub execution_time_seconds: Option<f64>,
    pub submission_path: Option<String>,
    pub submission: Option<Graph>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Participant {
    #[serde(flatten)]
    pub record: ParticipantRecord,
    pub instruments: InstrumentResponse,
    pub tasks: BTreeMap<TaskId, TaskResult>,
    /// Number of times the facilitator helped, when recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub help_count: Option<u32>,
}

impl Participant {
    pub fn id(&self) -> &str {
        &self.record.participant_id
    }

    pub fn group(&self) -> &str {
        &self.record.group_label
    }
}

/// A fully validated study with every submission parsed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StudyDataset {
    pub format_version: u32,
    pub study_id: String,
    /// How execution time was captured; reported verbatim.
    pub timing_method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_limit_seconds: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant_note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub naming_policy: Option<String>,
    #[serde(default)]
    pub missing_submissions_as_did_not_start: bool,
    pub groups: Vec<GroupSpec>,
    pub tasks: Vec<TaskSpec>,
    pub participants: Vec<Participant>,
}

impl StudyDataset {
    pub fn group(&self, label: &str) -> Option<&GroupSpec> {
        self.groups.iter().find(|g| g.label == label)
    }

    pub fn participant(&self, id: &str) -> Option<&Participant> {
        self.participants.iter().find(|p| p.id() == id)
    }

    /// Task definition seen by members of `group`, honouring overrides.
    pub fn task_for(&self, group: &str, task: TaskId) -> &TaskSpec {
        self.group(group)
            .and_then(|g| g.task_overrides.iter().find(|t| t.id == task))
            .unwrap_or_else(|| self.task(task))
    }

    pub fn task(&self, task: TaskId) -> &TaskSpec {
        self.tasks
            .iter()
            .find(|t| t.id == task)
            .expect("validated dataset declares every task")
    }

    pub fn group_labels(&self) -> Vec<&str> {
        self.groups.iter().map(|g| g.label.as_str()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct StudyFile {
    format_version: u32,
    study_id: String,
    groups: Vec<GroupFile>,
    tasks: Vec<TaskFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    time_limit_seconds: Option<f64>,
    timing_method: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variant_note: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    naming_policy: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    missing_submissions_as_did_not_start: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct GroupFile {
    label: String,
    tool: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    task_overrides: Vec<TaskFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct TaskFile {
    id: String,
    description: String,
    expected_graph: String,
}

fn read_text(path: &Path) -> Result<String, StudyError> {
    fs::read_to_string(path).map_err(|e| StudyError::io(path, e))
}

/// Parses a graph file, choosing the syntax by extension (`.ttl` is read as
/// Turtle, anything else as N-Triples).
pub fn read_graph(path: &Path) -> Result<Graph, StudyError> {
    let text = read_text(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "ttl") {
        parse_turtle_subset(&text)
    } else {
        parse_ntriples(&text)
    };
    parsed.map_err(|source| StudyError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

/// Joins a stored path onto the study root; absolute paths are kept.
fn resolve(root: &Path, stored: &str) -> PathBuf {
    let p = Path::new(stored);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        root.join(p)
    }
}

fn is_contained(stored: &str) -> bool {
    let p = Path::new(stored);
    !stored.is_empty() && p.components().all(|c| matches!(c, Component::Normal(_)))
}

fn serde_field(err: &serde_json::Error) -> String {
    let msg = err.to_string();
    ["missing field `", "unknown field `"]
        .iter()
        .find_map(|marker| {
            let start = msg.find(marker)? + marker.len();
            let end = msg[start..].find('`')?;
            Some(msg[start..start + end].to_string())
        })
        .unwrap_or_else(|| "(document)".into())
}

fn load_task(root: &Path, file: &Path, field: &str, t: &TaskFile) -> Result<TaskSpec, StudyError> {
    let id = TaskId::parse(&t.id).ok_or_else(|| {
        StudyError::schema(file, format!("{field}.id"), format!("unknown task {:?}; tasks are T1..T5", t.id))
    })?;
    if t.expected_graph.trim().is_empty() {
        return Err(StudyError::schema(file, format!("{field}.expectedGraph"), "path is empty"));
    }
    let expected_graph = read_graph(&resolve(root, &t.expected_graph))?;
    Ok(TaskSpec {
        id,
        description: t.description.clone(),
        expected_graph_path: t.expected_graph.clone(),
        expected_graph,
    })
}

fn load_study_file(root: &Path) -> Result<(StudyFile, Vec<TaskSpec>, Vec<GroupSpec>), StudyError> {
    let path = root.join(STUDY_FILE);
    let text = read_text(&path)?;
    let file: StudyFile = serde_json::from_str(&text)
        .map_err(|e| StudyError::schema(&path, serde_field(&e), &e))?;
    if file.format_version != FORMAT_VERSION {
        return Err(StudyError::schema(
            &path,
            "formatVersion",
            format!("unsupported version {} (expected {FORMAT_VERSION})", file.format_version),
        ));
    }
    if file.study_id.trim().is_empty() {
        return Err(StudyError::schema(&path, "studyId", "must not be empty"));
    }
    if file.timing_method.trim().is_empty() {
        return Err(StudyError::schema(&path, "timingMethod", "must describe how time was measured"));
    }
    if let Some(limit) = file.time_limit_seconds {
        if !limit.is_finite() || limit <= 0.0 {
            return Err(StudyError::schema(&path, "timeLimitSeconds", "must be a positive number"));
        }
    }

    let mut tasks = Vec::new();
    for (i, t) in file.tasks.iter().enumerate() {
        let spec = load_task(root, &path, &format!("tasks[{i}]"), t)?;
        if tasks.iter().any(|s: &TaskSpec| s.id == spec.id) {
            return Err(StudyError::schema(&path, format!("tasks[{i}].id"), format!("{} declared twice", spec.id)));
        }
        tasks.push(spec);
    }
    tasks.sort_by_key(|t| t.id);
    if let Some(missing) = TaskId::ALL.into_iter().find(|id| tasks.iter().all(|t| t.id != *id)) {
        return Err(StudyError::schema(&path, "tasks", format!("task {missing} is not declared")));
    }

    if file.groups.is_empty() {
        return Err(StudyError::schema(&path, "groups", "at least one group is required"));
    }
    let mut groups: Vec<GroupSpec> = Vec::new();
    for (gi, g) in file.groups.iter().enumerate() {
        let field = format!("groups[{gi}]");
        if g.label.trim().is_empty() || g.label.contains(',') {
            return Err(StudyError::schema(&path, format!("{field}.label"), "must be non-empty without commas"));
        }
        if groups.iter().any(|x| x.label == g.label) {
            return Err(StudyError::schema(&path, format!("{field}.label"), format!("duplicate group {:?}", g.label)));
        }
        let mut overrides: Vec<TaskSpec> = Vec::new();
        for (ti, t) in g.task_overrides.iter().enumerate() {
            let tfield = format!("{field}.taskOverrides[{ti}]");
            let spec = load_task(root, &path, &tfield, t)?;
            if !spec.id.is_variable() {
                return Err(StudyError::schema(&path, format!("{tfield}.id"), "only T4 and T5 may be overridden"));
            }
            if file.variant_note.as_deref().is_none_or(|n| n.trim().is_empty()) {
                return Err(StudyError::schema(&path, "variantNote", "required when groups override tasks"));
            }
            if overrides.iter().any(|o| o.id == spec.id) {
                return Err(StudyError::schema(&path, format!("{tfield}.id"), "task overridden twice"));
            }
            overrides.push(spec);
        }
        overrides.sort_by_key(|t| t.id);
        groups.push(GroupSpec {
            label: g.label.clone(),
            tool: g.tool.clone(),
            task_overrides: overrides,
        });
    }
    Ok((file, tasks, groups))
}

fn default_submission(root: &Path, participant: &str, task: TaskId) -> Option<String> {
    ["nt", "ttl"].iter().find_map(|ext| {
        let rel = format!("{SUBMISSIONS_DIR}/{participant}/{task}.{ext}");
        root.join(&rel).is_file().then_some(rel)
    })
}

/// Loads and validates a study directory, parsing every submission.
pub fn load_study(root: &Path) -> Result<StudyDataset, StudyError> {
    load_study_with_warnings(root).map(|(ds, _)| ds)
}

/// Like [`load_study`], also returning non-fatal observations (ignored
/// files, downgraded statuses).
pub fn load_study_with_warnings(root: &Path) -> Result<(StudyDataset, Vec<String>), StudyError> {
    let (file, tasks, groups) = load_study_file(root)?;
    let responses_path = root.join(RESPONSES_FILE);
    let labels: Vec<&str> = groups.iter().map(|g| g.label.as_str()).collect();
    let rows = responses::read_responses(&responses_path, &read_text(&responses_path)?, &labels)?;
    let mut warnings = Vec::new();

    let mut participants = Vec::with_capacity(rows.len());
    for row in rows {
        let pid = row.record.participant_id.clone();
        let mut results = BTreeMap::new();
        for task in TaskId::ALL {
            let entry = &row.tasks[&task];
            let mut status = entry.status;
            let mut time = entry.time;
            let located = match &entry.file {
                Some(explicit) => {
                    let exists = resolve(root, explicit).is_file();
                    if !exists && status != CompletionStatus::DidNotStart {
                        return Err(StudyError::schema(
                            &responses_path,
                            format!("{}_file", task.column_prefix()),
                            format!("participant {pid}: file {explicit:?} does not exist"),
                        ));
                    }
                    exists.then(|| explicit.clone())
                }
                None => default_submission(root, &pid, task),
            };

            let mut submission_path = None;
            let mut submission = None;
            match (status, located) {
                (CompletionStatus::DidNotStart, Some(path)) => {
                    warnings.push(format!("{pid} {task}: status DNS, ignoring submitted file {path}"));
                }
                (CompletionStatus::DidNotStart, None) => {}
                (_, Some(path)) => {
                    submission = Some(read_graph(&resolve(root, &path))?);
                    submission_path = Some(path);
                }
                (_, None) if file.missing_submissions_as_did_not_start => {
                    warnings.push(format!("{pid} {task}: no submission, recorded as DNS (was {status})"));
                    status = CompletionStatus::DidNotStart;
                    time = None;
                }
                (_, None) => {
                    return Err(StudyError::MissingSubmission {
                        participant: pid,
                        task,
                    })
                }
            }
            if status == CompletionStatus::Completed {
                if let (Some(limit), Some(t)) = (file.time_limit_seconds, time) {
                    if t > limit {
                        return Err(StudyError::schema(
                            &responses_path,
                            format!("{}_time", task.column_prefix()),
                            format!("participant {pid}: completed in {t} s, above the {limit} s limit"),
                        ));
                    }
                }
            }
            results.insert(
                task,
                TaskResult {
                    status,
                    execution_time_seconds: time,
                    submission_path,
                    submission,
                },
            );
        }
        participants.push(Participant {
            record: row.record,
            instruments: row.instruments,
            tasks: results,
            help_count: row.help_count,
        });
    }

    let ds = StudyDataset {
        format_version: file.format_version,
        study_id: file.study_id,
        timing_method: file.timing_method,
        time_limit_seconds: file.time_limit_seconds,
        variant_note: file.variant_note,
        naming_policy: file.naming_policy,
        missing_submissions_as_did_not_start: file.missing_submissions_as_did_not_start,
        groups,
        tasks,
        participants,
    };
    Ok((ds, warnings))
}

fn write_file(path: &Path, contents: &str) -> Result<(), StudyError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| StudyError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| StudyError::io(path, e))
}

fn write_graph(root: &Path, stored: &str, graph: &Graph, field: &str) -> Result<(), StudyError> {
    if !is_contained(stored) {
        return Err(StudyError::schema(
            &root.join(STUDY_FILE),
            field,
            format!("path {stored:?} must be relative and stay inside the study directory"),
        ));
    }
    write_file(&root.join(stored), &serialize_ntriples(graph))
}

fn task_file(t: &TaskSpec) -> TaskFile {
    TaskFile {
        id: t.id.to_string(),
        description: t.description.clone(),
        expected_graph: t.expected_graph_path.clone(),
    }
}

/// Writes `ds` as a study directory that [`load_study`] reads back to an
/// equal dataset. Graph files are written as canonical N-Triples.
pub fn write_study(ds: &StudyDataset, root: &Path) -> Result<(), StudyError> {
    let file = StudyFile {
        format_version: ds.format_version,
        study_id: ds.study_id.clone(),
        groups: ds
            .groups
            .iter()
            .map(|g| GroupFile {
                label: g.label.clone(),
                tool: g.tool.clone(),
                task_overrides: g.task_overrides.iter().map(task_file).collect(),
            })
            .collect(),
        tasks: ds.tasks.iter().map(task_file).collect(),
        time_limit_seconds: ds.time_limit_seconds,
        timing_method: ds.timing_method.clone(),
        variant_note: ds.variant_note.clone(),
        naming_policy: ds.naming_policy.clone(),
        missing_submissions_as_did_not_start: ds.missing_submissions_as_did_not_start,
    };
    let mut json = serde_json::to_string_pretty(&file).expect("study file serializes");
    json.push('\n');
    write_file(&root.join(STUDY_FILE), &json)?;

    let all_tasks = ds.tasks.iter().chain(ds.groups.iter().flat_map(|g| &g.task_overrides));
    for t in all_tasks {
        write_graph(root, &t.expected_graph_path, &t.expected_graph, "expectedGraph")?;
    }
    for p in &ds.participants {
        for (task, result) in &p.tasks {
            if let (Some(path), Some(graph)) = (&result.submission_path, &result.submission) {
                let field = format!("{}_file", task.column_prefix());
                write_graph(root, path, graph, &field)?;
            }
        }
    }
    write_file(&root.join(RESPONSES_FILE), &responses::write_responses(ds))
}
