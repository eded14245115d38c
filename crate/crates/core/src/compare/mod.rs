//! Accuracy of submitted graphs: blank-node-aware isomorphism, triple
//! precision/recall/F-measure, per-task and global grades.

mod canon;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rdf::Graph;

pub use canon::{canonical_labeling, canonicalize_blank_nodes};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradeError {
    #[error("status {status} is inconsistent with {detail}")]
    InconsistentStatus {
        status: CompletionStatus,
        detail: &'static str,
    },
    #[error("execution time must be a finite non-negative number of seconds")]
    InvalidTime,
    #[error("no grades to aggregate")]
    EmptyInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CompletionStatus {
    Completed,
    DidNotFinish,
    DidNotStart,
}

impl CompletionStatus {
    /// Short code used in `responses.csv`: `C`, `DNF` or `DNS`.
    pub fn code(self) -> &'static str {
        match self {
            CompletionStatus::Completed => "C",
            CompletionStatus::DidNotFinish => "DNF",
            CompletionStatus::DidNotStart => "DNS",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code.trim() {
            "C" => Some(CompletionStatus::Completed),
            "DNF" => Some(CompletionStatus::DidNotFinish),
            "DNS" => Some(CompletionStatus::DidNotStart),
            _ => None,
        }
    }
}

impl fmt::Display for CompletionStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A bijection between the blank nodes of two graphs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlankNodeMapping {
    pairs: BTreeMap<String, String>,
}

impl BlankNodeMapping {
    pub fn get(&self, from: &str) -> Option<&str> {
        self.pairs.get(from).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    /// Renames the blank nodes of `graph`; unmapped labels are kept.
    pub fn apply(&self, graph: &Graph) -> Graph {
        graph
            .iter()
            .map(|t| t.map_blank_nodes(|l| self.get(l).unwrap_or(l).to_owned()))
            .collect()
    }
}

/// Finds a blank node bijection turning `a` into `b`, if one exists.
pub fn isomorphism(a: &Graph, b: &Graph) -> Option<BlankNodeMapping> {
    if a.len() != b.len() || a.blank_nodes().len() != b.blank_nodes().len() {
        return None;
    }
    let la = canonical_labeling(a);
    let lb = canonical_labeling(b);
    let ca: Graph = a.iter().map(|t| t.map_blank_nodes(|l| la[l].clone())).collect();
    let cb: Graph = b.iter().map(|t| t.map_blank_nodes(|l| lb[l].clone())).collect();
    if ca != cb {
        return None;
    }
    let from_canonical: BTreeMap<&str, &str> =
        lb.iter().map(|(orig, c)| (c.as_str(), orig.as_str())).collect();
    let pairs = la
        .iter()
        .map(|(orig, c)| (orig.clone(), from_canonical[c.as_str()].to_owned()))
        .collect();
    Some(BlankNodeMapping { pairs })
}

/// True iff some blank node bijection makes the triple sets equal.
pub fn graph_isomorphic(a: &Graph, b: &Graph) -> bool {
    isomorphism(a, b).is_some()
}

/// Triple counts behind precision and recall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TripleCounts {
    pub matched: usize,
    pub generated: usize,
    pub expected: usize,
}

impl TripleCounts {
    pub fn between(generated: &Graph, expected: &Graph) -> Self {
        let generated_c = canonicalize_blank_nodes(generated);
        let expected_c = canonicalize_blank_nodes(expected);
        TripleCounts {
            matched: generated_c.intersection_len(&expected_c),
            generated: generated.len(),
            expected: expected.len(),
        }
    }

    /// Precision, recall and F-measure. An empty generated graph has
    /// precision 1 and an empty expected graph recall 1.
    pub fn scores(&self) -> Prf {
        let precision = if self.generated == 0 {
            1.0
        } else {
            self.matched as f64 / self.generated as f64
        };
        let recall = if self.expected == 0 {
            1.0
        } else {
            self.matched as f64 / self.expected as f64
        };
        let f_measure = if self.matched > 0 {
            2.0 * self.matched as f64 / (self.generated + self.expected) as f64
        } else {
            f_measure(precision, recall)
        };
        Prf {
            precision,
            recall,
            f_measure,
        }
    }
}

impl std::ops::Add for TripleCounts {
    type Output = TripleCounts;

    fn add(self, rhs: Self) -> Self {
        TripleCounts {
            matched: self.matched + rhs.matched,
            generated: self.generated + rhs.generated,
            expected: self.expected + rhs.expected,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

/// Precision, recall and F-measure of `generated` against `expected`,
/// after canonicalising blank nodes in both.
pub fn precision_recall(generated: &Graph, expected: &Graph) -> Prf {
    TripleCounts::between(generated, expected).scores()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TaskGrade {
    pub task_id: String,
    pub status: CompletionStatus,
    pub isomorphic: bool,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub execution_time_seconds: Option<f64>,
    pub counts: TripleCounts,
}

pub fn grade_task(
    task_id: &str,
    submission: Option<&Graph>,
    expected: &Graph,
    status: CompletionStatus,
    time_seconds: Option<f64>,
) -> Result<TaskGrade, GradeError> {
    if let Some(t) = time_seconds {
        if !t.is_finite() || t < 0.0 {
            return Err(GradeError::InvalidTime);
        }
    }
    match (status, submission) {
        (CompletionStatus::DidNotStart, Some(_)) => Err(GradeError::InconsistentStatus {
            status,
            detail: "a submitted graph",
        }),
        (CompletionStatus::DidNotStart, None) => {
            if time_seconds.is_some() {
                return Err(GradeError::InconsistentStatus {
                    status,
                    detail: "a recorded execution time",
                });
            }
            Ok(TaskGrade {
                task_id: task_id.to_owned(),
                status,
                isomorphic: false,
                precision: 0.0,
                recall: 0.0,
                f_measure: 0.0,
                execution_time_seconds: None,
                counts: TripleCounts {
                    matched: 0,
                    generated: 0,
                    expected: expected.len(),
                },
            })
        }
        (_, None) => Err(GradeError::InconsistentStatus {
            status,
            detail: "a missing submission",
        }),
        (_, Some(graph)) => {
            let counts = TripleCounts::between(graph, expected);
            let isomorphic = graph_isomorphic(graph, expected);
            let prf = if isomorphic {
                Prf {
                    precision: 1.0,
                    recall: 1.0,
                    f_measure: 1.0,
                }
            } else {
                counts.scores()
            };
            Ok(TaskGrade {
                task_id: task_id.to_owned(),
                status,
                isomorphic,
                precision: prf.precision,
                recall: prf.recall,
                f_measure: prf.f_measure,
                execution_time_seconds: time_seconds,
                counts,
            })
        }
    }
}

/// Micro-averaged figures over the summed triple counts of all tasks.
///
/// When no triples were generated at all, precision is 1 unless some task
/// was never started, in which case it is 0.
pub fn global_grade(grades: &[TaskGrade]) -> Result<Prf, GradeError> {
    if grades.is_empty() {
        return Err(GradeError::EmptyInput);
    }
    let total = grades
        .iter()
        .map(|g| g.counts)
        .fold(TripleCounts::default(), |a, b| a + b);
    let mut prf = total.scores();
    if total.generated == 0 && grades.iter().any(|g| g.status == CompletionStatus::DidNotStart) {
        prf.precision = 0.0;
        prf.f_measure = f_measure(prf.precision, prf.recall);
    }
    Ok(prf)
}

/// Unweighted mean of per-task figures.
pub fn macro_grade(grades: &[TaskGrade]) -> Result<Prf, GradeError> {
    if grades.is_empty() {
        return Err(GradeError::EmptyInput);
    }
    let n = grades.len() as f64;
    Ok(Prf {
        precision: grades.iter().map(|g| g.precision).sum::<f64>() / n,
        recall: grades.iter().map(|g| g.recall).sum::<f64>() / n,
        f_measure: grades.iter().map(|g| g.f_measure).sum::<f64>() / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_ntriples;

    fn chain(n: usize) -> Graph {
        let doc: String = (0..n)
            .map(|i| format!("<http://ex.org/s{i}> <http://ex.org/p> \"v{i}\" .\n"))
            .collect();
        parse_ntriples(&doc).unwrap()
    }

    #[test]
    fn identical_graphs_score_one() {
        let g = chain(7);
        assert_eq!(
            precision_recall(&g, &g),
            Prf {
                precision: 1.0,
                recall: 1.0,
                f_measure: 1.0
            }
        );
    }

    #[test]
    fn one_missing_of_ten() {
        let expected = chain(10);
        let mut generated = expected.clone();
        let first = generated.iter().next().unwrap().clone();
        generated.remove(&first);
        let prf = precision_recall(&generated, &expected);
        assert_eq!(prf.precision, 1.0);
        assert_eq!(prf.recall, 0.9);
        assert!((prf.f_measure - 18.0 / 19.0).abs() < 1e-15);
    }

    #[test]
    fn two_spurious_of_ten() {
        let expected = chain(10);
        let generated = expected.union(&parse_ntriples(
            "<http://ex.org/x> <http://ex.org/p> \"a\" .\n<http://ex.org/y> <http://ex.org/p> \"b\" .",
        )
        .unwrap());
        let prf = precision_recall(&generated, &expected);
        assert_eq!(prf.precision, 10.0 / 12.0);
        assert_eq!(prf.recall, 1.0);
        assert!((prf.f_measure - 20.0 / 22.0).abs() < 1e-15);
    }

    #[test]
    fn empty_generated_is_vacuously_precise() {
        let prf = precision_recall(&Graph::new(), &chain(3));
        assert_eq!((prf.precision, prf.recall, prf.f_measure), (1.0, 0.0, 0.0));
        let prf = precision_recall(&Graph::new(), &Graph::new());
        assert_eq!((prf.precision, prf.recall, prf.f_measure), (1.0, 1.0, 1.0));
    }

    #[test]
    fn grade_completed_identical() {
        let g = chain(12);
        let grade = grade_task("T1", Some(&g), &g, CompletionStatus::Completed, Some(300.0)).unwrap();
        assert!(grade.isomorphic);
        assert_eq!((grade.precision, grade.recall, grade.f_measure), (1.0, 1.0, 1.0));
        assert_eq!(grade.execution_time_seconds, Some(300.0));
    }

    #[test]
    fn grade_did_not_start() {
        let g = chain(12);
        let grade = grade_task("T2", None, &g, CompletionStatus::DidNotStart, None).unwrap();
        assert!(!grade.isomorphic);
        assert_eq!((grade.precision, grade.recall, grade.f_measure), (0.0, 0.0, 0.0));
        assert_eq!(grade.execution_time_seconds, None);
    }

    #[test]
    fn grade_did_not_finish_partial() {
        let expected = chain(12);
        let partial: Graph = expected.iter().skip(2).cloned().collect();
        let grade = grade_task(
            "T3",
            Some(&partial),
            &expected,
            CompletionStatus::DidNotFinish,
            Some(3600.0),
        )
        .unwrap();
        assert!(!grade.isomorphic);
        assert_eq!(grade.precision, 1.0);
        assert_eq!(grade.recall, 10.0 / 12.0);
    }

    #[test]
    fn inconsistent_status() {
        let g = chain(2);
        assert!(matches!(
            grade_task("T1", Some(&g), &g, CompletionStatus::DidNotStart, None),
            Err(GradeError::InconsistentStatus { .. })
        ));
        assert!(matches!(
            grade_task("T1", None, &g, CompletionStatus::Completed, Some(1.0)),
            Err(GradeError::InconsistentStatus { .. })
        ));
        assert!(matches!(
            grade_task("T1", None, &g, CompletionStatus::DidNotStart, Some(1.0)),
            Err(GradeError::InconsistentStatus { .. })
        ));
        assert_eq!(
            grade_task("T1", Some(&g), &g, CompletionStatus::Completed, Some(-1.0)),
            Err(GradeError::InvalidTime)
        );
    }

    #[test]
    fn global_is_micro_averaged() {
        let g = chain(10);
        let perfect = grade_task("T1", Some(&g), &g, CompletionStatus::Completed, Some(1.0)).unwrap();
        let missing = grade_task("T2", None, &g, CompletionStatus::DidNotStart, None).unwrap();
        let prf = global_grade(&[perfect.clone(), missing.clone()]).unwrap();
        assert_eq!(prf.recall, 0.5);
        assert_eq!(prf.precision, 1.0);
        assert_eq!(global_grade(&[perfect.clone(), perfect]).unwrap().f_measure, 1.0);
        assert_eq!(global_grade(&[]), Err(GradeError::EmptyInput));
        let only_missing = global_grade(&[missing]).unwrap();
        assert_eq!((only_missing.precision, only_missing.recall), (0.0, 0.0));
    }

    #[test]
    fn single_edge_relabeling() {
        let a = parse_ntriples("_:a <http://ex.org/p> _:b .").unwrap();
        let b = parse_ntriples("_:x <http://ex.org/p> _:y .").unwrap();
        assert_eq!(canonicalize_blank_nodes(&a), canonicalize_blank_nodes(&b));
        let m = isomorphism(&a, &b).unwrap();
        assert_eq!(m.get("a"), Some("x"));
        assert_eq!(m.apply(&a), b);
    }

    #[test]
    fn ground_graph_canonicalization_is_identity() {
        let g = chain(4);
        assert_eq!(canonicalize_blank_nodes(&g), g);
    }

    #[test]
    fn twin_blank_nodes_are_fast() {
        // 40 interchangeable blank nodes would be 40! leaves without pruning.
        let doc: String = (0..40)
            .map(|i| format!("_:n{i} <http://ex.org/p> <http://ex.org/o> .\n"))
            .collect();
        let g = parse_ntriples(&doc).unwrap();
        let c = canonicalize_blank_nodes(&g);
        assert_eq!(c.len(), 40);
        // 30 disjoint copies of a two-node component.
        let doc: String = (0..30)
            .map(|i| format!("_:a{i} <http://ex.org/p> _:b{i} .\n_:b{i} <http://ex.org/p> _:a{i} .\n"))
            .collect();
        let g = parse_ntriples(&doc).unwrap();
        assert!(graph_isomorphic(&g, &g));
    }

    #[test]
    fn six_cycle_is_not_two_triangles() {
        let cycle: String = (0..6)
            .map(|i| format!("_:n{i} <http://ex.org/p> _:n{} .\n", (i + 1) % 6))
            .collect();
        let triangles: String = (0..6)
            .map(|i| format!("_:n{i} <http://ex.org/p> _:n{} .\n", (i / 3) * 3 + (i + 1) % 3))
            .collect();
        let a = parse_ntriples(&cycle).unwrap();
        let b = parse_ntriples(&triangles).unwrap();
        assert_eq!(a.len(), b.len());
        assert!(!graph_isomorphic(&a, &b));
        assert_ne!(canonicalize_blank_nodes(&a), canonicalize_blank_nodes(&b));
    }
}
