//! The five-task fixture bundle over a small employee/project/task domain.
//!
//! Projects reference their manager and tasks their assignee by employee
//! id, so T3 and T5 require joining sources. Employee IRIs are minted from
//! names, project and task IRIs from ids.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use percent_encoding::{utf8_percent_encode, AsciiSet, NON_ALPHANUMERIC};
use serde::{Deserialize, Serialize};

use super::{StudyError, TaskId};
use crate::rdf::{serialize_ntriples, Graph, Iri, Literal, Term, Triple, RDF_TYPE, XSD_DATE};

pub const NS: &str = "http://example.com/ns#";
pub const EMPLOYEE_BASE: &str = "http://example.com/employee/";
pub const PROJECT_BASE: &str = "http://example.com/project/";
pub const TASK_BASE: &str = "http://example.com/task/";

/// RFC 3986 unreserved characters stay literal.
const PATH_SEGMENT: &AsciiSet = &NON_ALPHANUMERIC.remove(b'-').remove(b'.').remove(b'_').remove(b'~');

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Employee {
    pub id: String,
    pub first_name: String,
    pub last_name: String,
}

impl Employee {
    /// `firstname-lastname`, lowercased and percent-encoded.
    pub fn iri(&self) -> String {
        let name = format!("{}-{}", self.first_name.to_lowercase(), self.last_name.to_lowercase());
        format!("{EMPLOYEE_BASE}{}", utf8_percent_encode(&name, PATH_SEGMENT))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Project {
    pub id: String,
    pub name: String,
    pub start_date: String,
    pub end_date: String,
    pub manager_id: String,
}

impl Project {
    pub fn iri(&self) -> String {
        format!("{PROJECT_BASE}{}", utf8_percent_encode(&self.id, PATH_SEGMENT))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SampleTask {
    pub id: String,
    pub project_id: String,
    pub assignee_id: String,
    pub description_en: String,
    pub description_fr: String,
}

impl SampleTask {
    pub fn iri(&self) -> String {
        format!("{TASK_BASE}{}", utf8_percent_encode(&self.id, PATH_SEGMENT))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleData {
    pub employees: Vec<Employee>,
    pub projects: Vec<Project>,
    pub tasks: Vec<SampleTask>,
}

impl SampleData {
    pub fn employee(&self, id: &str) -> &Employee {
        self.employees.iter().find(|e| e.id == id).expect("sample references are consistent")
    }

    pub fn project(&self, id: &str) -> &Project {
        self.projects.iter().find(|p| p.id == id).expect("sample references are consistent")
    }
}

pub fn sample_data() -> SampleData {
    let employees = [
        ("E01", "Ana", "Silva"),
        ("E02", "Bram", "Peeters"),
        ("E03", "Chiara", "Rossi"),
        ("E04", "Dmitri", "Volkov"),
        ("E05", "Emma", "Dubois"),
        ("E06", "Farid", "Haddad"),
        ("E07", "Grace", "Okafor"),
        ("E08", "Zoë", "Janssens"),
    ]
    .map(|(id, f, l)| Employee {
        id: id.into(),
        first_name: f.into(),
        last_name: l.into(),
    });
    let projects = [
        ("P01", "Knowledge Graph Pilot", "2023-01-09", "2023-06-30", "E01"),
        ("P02", "Data Catalogue", "2023-03-01", "2023-12-15", "E03"),
        ("P03", "Mapping Toolkit", "2023-05-15", "2024-02-29", "E05"),
        ("P04", "Linked Archive", "2023-09-01", "2024-05-31", "E02"),
        ("P05", "Ontology Review", "2024-01-08", "2024-07-19", "E07"),
    ]
    .map(|(id, name, s, e, m)| Project {
        id: id.into(),
        name: name.into(),
        start_date: s.into(),
        end_date: e.into(),
        manager_id: m.into(),
    });
    let tasks = [
        ("101", "P01", "E02", "Collect the source datasets", "Collecter les jeux de données sources"),
        ("102", "P01", "E04", "Design the ontology", "Concevoir l'ontologie"),
        ("103", "P01", "E06", "Write the mappings", "Écrire les correspondances"),
        ("104", "P02", "E03", "Inventory existing catalogues", "Inventorier les catalogues existants"),
        ("105", "P02", "E08", "Define the metadata profile", "Définir le profil de métadonnées"),
        ("106", "P02", "E05", "Publish the catalogue", "Publier le catalogue"),
        ("107", "P03", "E06", "Benchmark mapping engines", "Évaluer les moteurs de correspondance"),
        ("108", "P03", "E01", "Document the toolkit", "Documenter la boîte à outils"),
        ("109", "P04", "E07", "Digitise archive records", "Numériser les notices d'archives"),
        ("110", "P04", "E02", "Link records to authority files", "Lier les notices aux fichiers d'autorité"),
        ("111", "P05", "E08", "Review the class hierarchy", "Réviser la hiérarchie des classes"),
        ("112", "P05", "E04", "Report the review findings", "Rédiger le rapport de revue"),
    ]
    .map(|(id, p, a, en, fr)| SampleTask {
        id: id.into(),
        project_id: p.into(),
        assignee_id: a.into(),
        description_en: en.into(),
        description_fr: fr.into(),
    });
    SampleData {
        employees: employees.to_vec(),
        projects: projects.to_vec(),
        tasks: tasks.to_vec(),
    }
}

fn iri(value: &str) -> Term {
    Term::iri(value).expect("fixture IRIs are absolute")
}

fn ex(local: &str) -> Term {
    iri(&format!("{NS}{local}"))
}

fn triple(s: &str, p: &str, o: Term) -> Triple {
    Triple::new(iri(s), ex(p), o).expect("well-formed fixture triple")
}

fn typed(s: &str, class: &str) -> Triple {
    Triple::new(iri(s), iri(RDF_TYPE), ex(class)).expect("well-formed fixture triple")
}

fn text(value: &str) -> Term {
    Term::Literal(Literal::simple(value))
}

/// Task definitions of the bundle, in order.
pub fn fixture_tasks() -> [(TaskId, &'static str); 5] {
    [
        (TaskId::T1, "Generate instances of ex:Employee with their first name (ex:firstName) and last name (ex:lastName)."),
        (TaskId::T2, "Generate instances of ex:Project with their name (ex:name), start date (ex:startDate) and end date (ex:endDate); both dates are of type xsd:date."),
        (TaskId::T3, "Generate ex:managedBy properties from each project to its manager; requires joining projects with employees."),
        (TaskId::T4, "Generate instances of ex:Task with their descriptions (ex:description) in English and French, tagged @en and @fr."),
        (TaskId::T5, "Generate ex:of properties from each task to its project and ex:assignedTo properties from each task to its assignee."),
    ]
}

/// Expected graph of each task over [`sample_data`].
pub fn fixture_graphs() -> BTreeMap<TaskId, Graph> {
    let data = sample_data();
    let date = || Iri::new(XSD_DATE).expect("constant IRI");
    let mut out = BTreeMap::new();

    let t1 = data.employees.iter().flat_map(|e| {
        let s = e.iri();
        [
            typed(&s, "Employee"),
            triple(&s, "firstName", text(&e.first_name)),
            triple(&s, "lastName", text(&e.last_name)),
        ]
    });
    out.insert(TaskId::T1, t1.collect());

    let t2 = data.projects.iter().flat_map(|p| {
        let s = p.iri();
        [
            typed(&s, "Project"),
            triple(&s, "name", text(&p.name)),
            triple(&s, "startDate", Term::Literal(Literal::typed(&p.start_date, date()))),
            triple(&s, "endDate", Term::Literal(Literal::typed(&p.end_date, date()))),
        ]
    });
    out.insert(TaskId::T2, t2.collect());

    let t3 = data
        .projects
        .iter()
        .map(|p| triple(&p.iri(), "managedBy", iri(&data.employee(&p.manager_id).iri())));
    out.insert(TaskId::T3, t3.collect());

    let t4 = data.tasks.iter().flat_map(|t| {
        let s = t.iri();
        let en = Literal::lang_tagged(&t.description_en, "en").expect("valid tag");
        let fr = Literal::lang_tagged(&t.description_fr, "fr").expect("valid tag");
        [
            typed(&s, "Task"),
            triple(&s, "description", Term::Literal(en)),
            triple(&s, "description", Term::Literal(fr)),
        ]
    });
    out.insert(TaskId::T4, t4.collect());

    let t5 = data.tasks.iter().flat_map(|t| {
        let s = t.iri();
        [
            triple(&s, "of", iri(&data.project(&t.project_id).iri())),
            triple(&s, "assignedTo", iri(&data.employee(&t.assignee_id).iri())),
        ]
    });
    out.insert(TaskId::T5, t5.collect());
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskFixture {
    pub task_id: TaskId,
    pub description: String,
    pub source_data_paths: Vec<PathBuf>,
    pub expected_graph_path: PathBuf,
    pub expected_graph: Graph,
}

fn to_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8")
}

fn to_json<T: Serialize>(rows: &[T]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("serializable");
    s.push('\n');
    s
}

/// Writes the sample sources (`data/*.csv`, `data/*.json`) and the five
/// expected graphs (`expected/T1.nt` ...) under `out`.
pub fn build_fixture_bundle(out: &Path) -> Result<Vec<TaskFixture>, StudyError> {
    let data = sample_data();
    let data_dir = out.join("data");
    let expected_dir = out.join("expected");
    for dir in [&data_dir, &expected_dir] {
        fs::create_dir_all(dir).map_err(|e| StudyError::io(dir, e))?;
    }
    let write = |path: PathBuf, contents: String| -> Result<PathBuf, StudyError> {
        fs::write(&path, contents).map_err(|e| StudyError::io(&path, e))?;
        Ok(path)
    };

    let mut sources: BTreeMap<&str, Vec<PathBuf>> = BTreeMap::new();
    sources.insert(
        "employees",
        vec![
            write(data_dir.join("employees.csv"), to_csv(&data.employees))?,
            write(data_dir.join("employees.json"), to_json(&data.employees))?,
        ],
    );
    sources.insert(
        "projects",
        vec![
            write(data_dir.join("projects.csv"), to_csv(&data.projects))?,
            write(data_dir.join("projects.json"), to_json(&data.projects))?,
        ],
    );
    sources.insert(
        "tasks",
        vec![
            write(data_dir.join("tasks.csv"), to_csv(&data.tasks))?,
            write(data_dir.join("tasks.json"), to_json(&data.tasks))?,
        ],
    );

    let mut graphs = fixture_graphs();
    let mut fixtures = Vec::with_capacity(5);
    for (task, description) in fixture_tasks() {
        let used: &[&str] = match task {
            TaskId::T1 => &["employees"],
            TaskId::T2 => &["projects"],
            TaskId::T3 => &["projects", "employees"],
            TaskId::T4 => &["tasks"],
            TaskId::T5 => &["tasks", "projects", "employees"],
        };
        let graph = graphs.remove(&task).expect("all tasks built");
        let path = write(expected_dir.join(format!("{task}.nt")), serialize_ntriples(&graph))?;
        fixtures.push(TaskFixture {
            task_id: task,
            description: description.to_string(),
            source_data_paths: used.iter().flat_map(|k| sources[k].iter().cloned()).collect(),
            expected_graph_path: path,
            expected_graph: graph,
        });
    }
    Ok(fixtures)
}
