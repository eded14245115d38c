use std::fs;
use std::path::{Path, PathBuf};

use kgc_study_kit::compare::{grade_task, CompletionStatus};
use kgc_study_kit::pipeline::{grade_study, score_study};
use kgc_study_kit::par::Execution;
use kgc_study_kit::rdf::{parse_ntriples, parse_turtle_subset};
use kgc_study_kit::study::{
    build_fixture_bundle, fixture_graphs, load_study, load_study_with_warnings, validate_anonymity, write_study,
    StudyDataset, StudyError, TaskId,
};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn copy_dir(from: &Path, to: &Path) {
    fs::create_dir_all(to).unwrap();
    for entry in fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            fs::copy(entry.path(), target).unwrap();
        }
    }
}

const STUDY_JSON: &str = r#"{
  "formatVersion": 1,
  "studyId": "minimal",
  "groups": [{"label": "A", "tool": "editor"}],
  "tasks": [
    {"id": "T1", "description": "employees", "expectedGraph": "expected/T1.nt"},
    {"id": "T2", "description": "projects", "expectedGraph": "expected/T2.nt"},
    {"id": "T3", "description": "managers", "expectedGraph": "expected/T3.nt"},
    {"id": "T4", "description": "tasks", "expectedGraph": "expected/T4.nt"},
    {"id": "T5", "description": "assignments", "expectedGraph": "expected/T5.nt"}
  ],
  "timeLimitSeconds": 1800,
  "timingMethod": "stopwatch"
}
"#;

const DNS_ROW: &str = "participant_id,group,role,training,participation,motivation_enjoyment,motivation_curiosity,motivation_value,t1_status,t2_status,t3_status,t4_status,t5_status,t1_time,t2_time,t3_time,t4_time,t5_time\n\
P01,A,phd-student,,voluntary,3,4,4,DNS,DNS,DNS,DNS,DNS,,,,,\n";

/// A one-participant study directory with the fixture expected graphs.
fn minimal_study(study_json: &str, responses: &str) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&data("fixtures/expected"), &dir.path().join("expected"));
    fs::write(dir.path().join("study.json"), study_json).unwrap();
    fs::write(dir.path().join("responses.csv"), responses).unwrap();
    dir
}

#[test]
fn demo_study_loads_and_round_trips() {
    let ds = load_study(&data("demo-study")).unwrap();
    assert_eq!(ds.participants.len(), 20);
    assert_eq!(ds.group_labels(), ["A", "B"]);
    let json = ds.to_json();
    let back = StudyDataset::from_json(&json).unwrap();
    assert_eq!(back, ds);
    assert_eq!(back.to_json(), json);

    let dir = tempfile::tempdir().unwrap();
    write_study(&ds, dir.path()).unwrap();
    assert_eq!(load_study(dir.path()).unwrap(), ds);
    for file in ["study.json", "responses.csv", "expected/T3.nt", "submissions/P007/T2.nt"] {
        assert_eq!(
            fs::read_to_string(dir.path().join(file)).unwrap(),
            fs::read_to_string(data("demo-study").join(file)).unwrap(),
            "{file}"
        );
    }
}

#[test]
fn all_did_not_start_gives_zeros() {
    let dir = minimal_study(STUDY_JSON, DNS_ROW);
    let ds = load_study(dir.path()).unwrap();
    let grades = grade_study(&ds, Execution::Sequential).unwrap();
    assert_eq!(grades.tasks.len(), 5);
    for t in &grades.tasks {
        assert_eq!(t.grade.status, CompletionStatus::DidNotStart);
        assert_eq!((t.grade.precision, t.grade.recall, t.grade.f_measure), (0.0, 0.0, 0.0));
    }
    let p = &grades.participants[0];
    assert_eq!((p.global.precision, p.global.recall, p.global.f_measure), (0.0, 0.0, 0.0));
    let scores = score_study(&ds).unwrap();
    assert_eq!(scores.participants[0].sus, None);
}

#[test]
fn undeclared_task_is_a_schema_error() {
    let json = STUDY_JSON.replace(r#""id": "T5""#, r#""id": "T6""#);
    let dir = minimal_study(&json, DNS_ROW);
    let err = load_study(dir.path()).unwrap_err();
    assert!(matches!(err, StudyError::Schema { .. }), "{err}");
}

#[test]
fn completed_task_without_file_is_missing_unless_downgraded() {
    let rows = DNS_ROW.replacen("DNS,DNS,DNS,DNS,DNS,,,,,", "C,DNS,DNS,DNS,DNS,120,,,,", 1);
    let dir = minimal_study(STUDY_JSON, &rows);
    let err = load_study(dir.path()).unwrap_err();
    assert!(matches!(err, StudyError::MissingSubmission { task: TaskId::T1, .. }), "{err}");

    let lenient = STUDY_JSON.replace(
        r#""timingMethod": "stopwatch""#,
        r#""timingMethod": "stopwatch", "missingSubmissionsAsDidNotStart": true"#,
    );
    fs::write(dir.path().join("study.json"), lenient).unwrap();
    let (ds, warnings) = load_study_with_warnings(dir.path()).unwrap();
    assert_eq!(ds.participants[0].tasks[&TaskId::T1].status, CompletionStatus::DidNotStart);
    assert_eq!(warnings.len(), 1);
}

#[test]
fn completed_time_above_limit_is_rejected() {
    let rows = DNS_ROW.replacen("DNS,DNS,DNS,DNS,DNS,,,,,", "C,DNS,DNS,DNS,DNS,2000,,,,", 1);
    let dir = minimal_study(STUDY_JSON, &rows);
    fs::create_dir_all(dir.path().join("submissions/P01")).unwrap();
    fs::copy(data("fixtures/expected/T1.nt"), dir.path().join("submissions/P01/T1.nt")).unwrap();
    assert!(matches!(load_study(dir.path()), Err(StudyError::Schema { .. })));
}

#[test]
fn anonymity_warnings_on_a_loaded_study() {
    let mut ds = load_study(&data("demo-study")).unwrap();
    assert!(validate_anonymity(&ds).is_empty());
    ds.participants[0].record.participant_id = "jane.doe@uni.edu".into();
    let path = "/home/realname/mappings/T1.nt".to_string();
    ds.participants[1].tasks.get_mut(&TaskId::T1).unwrap().submission_path = Some(path);
    let warnings = validate_anonymity(&ds);
    assert_eq!(warnings.len(), 2, "{warnings:?}");
    assert_eq!(warnings[0].participant_id.as_deref(), Some("jane.doe@uni.edu"));
    assert_eq!(warnings[1].field, "t1_file");
    assert!(warnings[1].message.contains("realname"));
}

#[test]
fn fixture_bundle_matches_shipped_copy() {
    let dir = tempfile::tempdir().unwrap();
    let fixtures = build_fixture_bundle(dir.path()).unwrap();
    assert_eq!(fixtures.len(), 5);
    for f in &fixtures {
        let written = fs::read_to_string(dir.path().join(&f.expected_graph_path)).unwrap();
        let shipped = fs::read_to_string(data("fixtures").join(&f.expected_graph_path)).unwrap();
        assert_eq!(written, shipped);
        assert_eq!(parse_ntriples(&written).unwrap(), f.expected_graph);
        let grade = grade_task(f.task_id.as_str(), Some(&f.expected_graph), &f.expected_graph, CompletionStatus::Completed, Some(1.0)).unwrap();
        assert!(grade.isomorphic);
        for source in &f.source_data_paths {
            assert!(dir.path().join(source).is_file(), "{source:?}");
        }
    }
}

/// The Turtle files were written by rdflib from the shipped N-Triples.
#[test]
fn rdflib_turtle_parses_to_the_same_graphs() {
    let turtle = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/turtle");
    for (task, expected) in fixture_graphs() {
        let text = fs::read_to_string(turtle.join(format!("{task}.ttl"))).unwrap();
        assert_eq!(parse_turtle_subset(&text).unwrap(), expected, "{task}");
    }
}
