//! RDF terms, triples and graphs, plus the N-Triples reader/writer and a
//! Turtle subset reader used for task submissions.

mod ntriples;
mod turtle;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use ntriples::{parse_ntriples, serialize_ntriples};
pub use turtle::parse_turtle_subset;

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_DATE: &str = "http://www.w3.org/2001/XMLSchema#date";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";
pub const XSD_DOUBLE: &str = "http://www.w3.org/2001/XMLSchema#double";
pub const XSD_BOOLEAN: &str = "http://www.w3.org/2001/XMLSchema#boolean";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported Turtle construct at line {line}: {construct}")]
    UnsupportedConstruct { line: usize, construct: String },
}

/// Error raised when constructing a term that violates the RDF abstract syntax.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("not an absolute IRI: {0:?}")]
    RelativeIri(String),
    #[error("invalid language tag: {0:?}")]
    LanguageTag(String),
    #[error("invalid blank node label: {0:?}")]
    BlankNodeLabel(String),
    #[error("literals cannot be used as subject")]
    LiteralSubject,
    #[error("predicate must be an IRI")]
    NonIriPredicate,
}

/// An absolute IRI, compared codepoint by codepoint.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Iri(String);

impl Iri {
    pub fn new(value: impl Into<String>) -> Result<Self, TermError> {
        let value = value.into();
        if is_absolute_iri(&value) {
            Ok(Iri(value))
        } else {
            Err(TermError::RelativeIri(value))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn is_absolute_iri(value: &str) -> bool {
    let Some(colon) = value.find(':') else {
        return false;
    };
    let scheme = &value[..colon];
    let mut chars = scheme.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
}

pub(crate) fn is_valid_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let Some(primary) = parts.next() else {
        return false;
    };
    !primary.is_empty()
        && primary.chars().all(|c| c.is_ascii_alphabetic())
        && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

pub(crate) fn is_pn_chars_base(c: char) -> bool {
    matches!(c,
        'A'..='Z' | 'a'..='z'
        | '\u{00C0}'..='\u{00D6}' | '\u{00D8}'..='\u{00F6}' | '\u{00F8}'..='\u{02FF}'
        | '\u{0370}'..='\u{037D}' | '\u{037F}'..='\u{1FFF}' | '\u{200C}'..='\u{200D}'
        | '\u{2070}'..='\u{218F}' | '\u{2C00}'..='\u{2FEF}' | '\u{3001}'..='\u{D7FF}'
        | '\u{F900}'..='\u{FDCF}' | '\u{FDF0}'..='\u{FFFD}' | '\u{10000}'..='\u{EFFFF}')
}

pub(crate) fn is_pn_chars_u(c: char) -> bool {
    is_pn_chars_base(c) || c == '_'
}

pub(crate) fn is_pn_chars(c: char) -> bool {
    is_pn_chars_u(c)
        || c == '-'
        || c.is_ascii_digit()
        || c == '\u{00B7}'
        || ('\u{0300}'..='\u{036F}').contains(&c)
        || ('\u{203F}'..='\u{2040}').contains(&c)
}

fn is_valid_blank_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {}
        _ => return false,
    }
    !label.ends_with('.') && chars.all(|c| is_pn_chars(c) || c == '.')
}

/// A literal: lexical form, datatype and optional language tag.
///
/// Equality is term equality; `"01"^^xsd:integer` and `"1"^^xsd:integer`
/// are different literals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Iri,
    language: Option<String>,
}

impl Literal {
    pub fn simple(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Iri(XSD_STRING.to_owned()),
            language: None,
        }
    }

    pub fn typed(lexical: impl Into<String>, datatype: Iri) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype,
            language: None,
        }
    }

    pub fn lang_tagged(
        lexical: impl Into<String>,
        language: impl Into<String>,
    ) -> Result<Self, TermError> {
        let language = language.into();
        if !is_valid_language_tag(&language) {
            return Err(TermError::LanguageTag(language));
        }
        Ok(Literal {
            lexical: lexical.into(),
            datatype: Iri(RDF_LANG_STRING.to_owned()),
            language: Some(language),
        })
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }
}

/// An RDF term. The derived ordering is only used to keep graphs sorted; it
/// carries no RDF meaning.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Iri(Iri),
    BlankNode(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl Into<String>) -> Result<Self, TermError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn blank(label: impl Into<String>) -> Result<Self, TermError> {
        let label = label.into();
        if is_valid_blank_label(&label) {
            Ok(Term::BlankNode(label))
        } else {
            Err(TermError::BlankNodeLabel(label))
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::BlankNode(_))
    }

    pub fn blank_label(&self) -> Option<&str> {
        match self {
            Term::BlankNode(label) => Some(label),
            _ => None,
        }
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<Literal> for Term {
    fn from(literal: Literal) -> Self {
        Term::Literal(literal)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        ntriples::write_term(f, self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Term, object: Term) -> Result<Self, TermError> {
        if matches!(subject, Term::Literal(_)) {
            return Err(TermError::LiteralSubject);
        }
        let Term::Iri(predicate) = predicate else {
            return Err(TermError::NonIriPredicate);
        };
        Ok(Triple {
            subject,
            predicate,
            object,
        })
    }

    pub(crate) fn from_parts(subject: Term, predicate: Iri, object: Term) -> Self {
        debug_assert!(!matches!(subject, Term::Literal(_)));
        Triple {
            subject,
            predicate,
            object,
        }
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    /// Applies `f` to every blank node of the triple.
    pub fn map_blank_nodes(&self, mut f: impl FnMut(&str) -> String) -> Triple {
        let mut map = |t: &Term| match t {
            Term::BlankNode(label) => Term::BlankNode(f(label)),
            other => other.clone(),
        };
        Triple {
            subject: map(&self.subject),
            predicate: self.predicate.clone(),
            object: map(&self.object),
        }
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        ntriples::write_triple(f, self)
    }
}

/// A set of triples. Inserting a duplicate is a no-op.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    triples: BTreeSet<Triple>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` if the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn remove(&mut self, triple: &Triple) -> bool {
        self.triples.remove(triple)
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    pub fn intersection_len(&self, other: &Graph) -> usize {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.iter().filter(|t| large.contains(t)).count()
    }

    /// Distinct blank node labels, sorted.
    pub fn blank_nodes(&self) -> BTreeSet<&str> {
        self.iter()
            .flat_map(|t| [t.subject.blank_label(), t.object.blank_label()])
            .flatten()
            .collect()
    }

    pub fn union(&self, other: &Graph) -> Graph {
        self.triples.union(&other.triples).cloned().collect()
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
        }
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter)
    }
}

impl<'a> IntoIterator for &'a Graph {
    type Item = &'a Triple;
    type IntoIter = std::collections::btree_set::Iter<'a, Triple>;

    fn into_iter(self) -> Self::IntoIter {
        self.triples.iter()
    }
}

// Graphs travel through JSON as canonical N-Triples documents.
impl Serialize for Graph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&serialize_ntriples(self))
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_ntriples(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iri_must_be_absolute() {
        assert!(Iri::new("http://ex.org/a").is_ok());
        assert!(Iri::new("urn:x").is_ok());
        assert!(Iri::new("relative/path").is_err());
        assert!(Iri::new("").is_err());
        assert!(Iri::new("1http://x").is_err());
    }

    #[test]
    fn language_tags() {
        assert!(Literal::lang_tagged("hi", "en").is_ok());
        assert!(Literal::lang_tagged("hi", "en-GB").is_ok());
        assert!(Literal::lang_tagged("hi", "").is_err());
        assert!(Literal::lang_tagged("hi", "en-").is_err());
        assert!(Literal::lang_tagged("hi", "e1").is_err());
        let lit = Literal::lang_tagged("hi", "en").unwrap();
        assert_eq!(lit.datatype().as_str(), RDF_LANG_STRING);
    }

    #[test]
    fn simple_literal_defaults_to_xsd_string() {
        assert_eq!(Literal::simple("x").datatype().as_str(), XSD_STRING);
    }

    #[test]
    fn literal_subject_and_blank_predicate_rejected() {
        let lit = Term::Literal(Literal::simple("x"));
        let p = Term::iri("http://ex.org/p").unwrap();
        assert_eq!(
            Triple::new(lit.clone(), p.clone(), lit.clone()),
            Err(TermError::LiteralSubject)
        );
        let b = Term::blank("b").unwrap();
        assert_eq!(
            Triple::new(b.clone(), b.clone(), lit),
            Err(TermError::NonIriPredicate)
        );
    }

    #[test]
    fn duplicate_insert_is_noop() {
        let t = Triple::new(
            Term::iri("http://ex.org/s").unwrap(),
            Term::iri("http://ex.org/p").unwrap(),
            Term::iri("http://ex.org/o").unwrap(),
        )
        .unwrap();
        let mut g = Graph::new();
        assert!(g.insert(t.clone()));
        assert!(!g.insert(t));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn blank_labels() {
        assert!(Term::blank("b0").is_ok());
        assert!(Term::blank("0b").is_ok());
        assert!(Term::blank("a.b").is_ok());
        assert!(Term::blank("a.").is_err());
        assert!(Term::blank("").is_err());
        assert!(Term::blank("-a").is_err());
    }
}
