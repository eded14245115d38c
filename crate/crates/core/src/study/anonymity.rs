//! Heuristic checks for personally identifying information left in a
//! dataset. They only warn; callers decide whether warnings are fatal.

use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::StudyDataset;
use crate::rdf::Term;

static EMAIL: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)[a-z0-9._%+-]+@[a-z0-9.-]+\.[a-z]{2,}").unwrap());
/// `jane.doe`, `jane_doe`, `Jane-Doe`: two or more alphabetic words joined
/// by a separator.
static JOINED_NAME: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\p{L}{2,}(?:[._-]\p{L}{2,})+$").unwrap());
/// `Jane Doe`: capitalised words separated by spaces.
static SPACED_NAME: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^\p{Lu}\p{Ll}+(?:\s+\p{Lu}\p{Ll}+)+$").unwrap());
static PHONE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\+?\d[\d\s().-]{7,}\d").unwrap());
static HOME_PATH: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)(?:/home/|/users/|[a-z]:\\users\\|[a-z]:/users/)([^/\\]+)").unwrap()
});

const STRUCTURED_TEXT_LIMIT: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnonymityWarning {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub participant_id: Option<String>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for AnonymityWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.participant_id {
            Some(p) => write!(f, "{p}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

fn home_leak(text: &str) -> Option<String> {
    HOME_PATH
        .captures(text)
        .map(|c| format!("path reveals the account name {:?}", &c[1]))
}

fn contact_details(text: &str) -> Option<&'static str> {
    if EMAIL.is_match(text) {
        Some("contains an email address")
    } else if PHONE.is_match(text) {
        Some("contains what looks like a phone number")
    } else {
        None
    }
}

/// Flags identifiers that look like emails or names, contact details and
/// prose in fields meant for short codes, and file paths or IRIs that
/// reveal account names.
pub fn validate_anonymity(ds: &StudyDataset) -> Vec<AnonymityWarning> {
    let mut out = Vec::new();
    let mut warn = |participant: Option<&str>, field: &str, message: String| {
        out.push(AnonymityWarning {
            participant_id: participant.map(String::from),
            field: field.to_string(),
            message,
        })
    };

    for t in ds.tasks.iter().chain(ds.groups.iter().flat_map(|g| &g.task_overrides)) {
        if let Some(m) = home_leak(&t.expected_graph_path) {
            warn(None, &format!("{}.expectedGraph", t.id), m);
        }
    }

    for p in &ds.participants {
        let id = p.id();
        if EMAIL.is_match(id) {
            warn(Some(id), "participant_id", "identifier looks like an email address".into());
        } else if JOINED_NAME.is_match(id) || SPACED_NAME.is_match(id) {
            warn(Some(id), "participant_id", "identifier looks like a personal name".into());
        }

        for entry in &p.record.formal_training {
            if let Some(m) = contact_details(entry) {
                warn(Some(id), "training", m.into());
            } else if entry.chars().count() > STRUCTURED_TEXT_LIMIT {
                warn(Some(id), "training", "free text in a list field; use short labels".into());
            }
        }
        for name in p.record.competencies.keys() {
            if contact_details(name).is_some() || name.chars().count() > STRUCTURED_TEXT_LIMIT {
                warn(Some(id), "competency", format!("column name {name:?} is not a technology label"));
            }
        }
        if let Some(q) = &p.instruments.pssuq {
            for (i, c) in q.comments().iter().enumerate() {
                if let Some(m) = c.as_deref().and_then(contact_details) {
                    warn(Some(id), &format!("pssuq_c{}", i + 1), m.into());
                }
            }
        }

        for (task, result) in &p.tasks {
            if let Some(m) = result.submission_path.as_deref().and_then(home_leak) {
                warn(Some(id), &format!("{}_file", task.column_prefix()), m);
            }
            let Some(graph) = &result.submission else { continue };
            let leak = graph.iter().find_map(|t| {
                [t.subject(), t.object()].into_iter().find_map(|term| match term {
                    Term::Iri(iri) if iri.as_str().starts_with("file:") => home_leak(iri.as_str()),
                    _ => None,
                })
            });
            if let Some(m) = leak {
                warn(Some(id), &format!("{task} submission"), format!("file IRI {m}"));
            }
        }
    }
    out
}
