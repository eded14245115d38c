use std::fmt;

use super::{
    is_absolute_iri, is_pn_chars, is_pn_chars_u, is_valid_language_tag, Graph, Iri, Literal,
    ParseError, Term, Triple, RDF_LANG_STRING, XSD_STRING,
};

/// Character cursor with 1-based line/column tracking, shared with the
/// Turtle reader.
pub(super) struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Cursor {
    pub(super) fn new(text: &str) -> Self {
        Cursor {
            chars: text.chars().collect(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    pub(super) fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    pub(super) fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.pos + offset).copied()
    }

    pub(super) fn starts_with(&self, s: &str) -> bool {
        s.chars().enumerate().all(|(i, c)| self.peek_at(i) == Some(c))
    }

    pub(super) fn starts_with_ignore_case(&self, s: &str) -> bool {
        s.chars()
            .enumerate()
            .all(|(i, c)| self.peek_at(i).is_some_and(|p| p.eq_ignore_ascii_case(&c)))
    }

    pub(super) fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    pub(super) fn line(&self) -> usize {
        self.line
    }

    pub(super) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    pub(super) fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.peek() {
            Some(p) if p == c => {
                self.bump();
                Ok(())
            }
            Some(p) => Err(self.error(format!("expected '{c}', found '{}'", p.escape_debug()))),
            None => Err(self.error(format!("expected '{c}', found end of input"))),
        }
    }

    /// Skips spaces and tabs (and a lone CR before LF).
    pub(super) fn skip_inline_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ' ' || c == '\t' || (c == '\r' && self.peek_at(1) == Some('\n')) {
                self.bump();
            } else {
                break;
            }
        }
    }

    pub(super) fn skip_comment(&mut self) {
        if self.peek() == Some('#') {
            while let Some(c) = self.peek() {
                if c == '\n' {
                    break;
                }
                self.bump();
            }
        }
    }

    fn read_hex(&mut self, digits: usize) -> Result<char, ParseError> {
        let mut value = 0u32;
        for _ in 0..digits {
            let c = self
                .peek()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.error("invalid hexadecimal digit in numeric escape"))?;
            value = value * 16 + c;
            self.bump();
        }
        char::from_u32(value)
            .ok_or_else(|| self.error(format!("escape \\u{value:X} is not a Unicode scalar")))
    }

    /// Reads the remainder of `\u`/`\U` after the backslash has been consumed.
    fn read_uchar(&mut self) -> Result<char, ParseError> {
        match self.bump() {
            Some('u') => self.read_hex(4),
            Some('U') => self.read_hex(8),
            _ => Err(self.error("invalid escape sequence")),
        }
    }

    pub(super) fn read_iriref(&mut self) -> Result<Iri, ParseError> {
        self.expect('<')?;
        let mut value = String::new();
        loop {
            match self.peek() {
                None | Some('\n') => return Err(self.error("unterminated IRI")),
                Some('>') => {
                    self.bump();
                    break;
                }
                Some('\\') => {
                    self.bump();
                    value.push(self.read_uchar()?);
                }
                Some(c) if c <= ' ' || "<\"{}|^`".contains(c) => {
                    return Err(self.error(format!("character '{}' not allowed in IRI", c.escape_debug())))
                }
                Some(c) => {
                    self.bump();
                    value.push(c);
                }
            }
        }
        if !is_absolute_iri(&value) {
            return Err(self.error(format!("IRI <{value}> is not absolute")));
        }
        Ok(Iri(value))
    }

    pub(super) fn read_blank_node(&mut self) -> Result<Term, ParseError> {
        self.expect('_')?;
        self.expect(':')?;
        let mut label = String::new();
        match self.peek() {
            Some(c) if is_pn_chars_u(c) || c.is_ascii_digit() => {
                self.bump();
                label.push(c);
            }
            _ => return Err(self.error("invalid blank node label")),
        }
        while let Some(c) = self.peek() {
            if is_pn_chars(c) || (c == '.' && self.peek_at(1).is_some_and(|n| is_pn_chars(n) || n == '.')) {
                label.push(c);
                self.bump();
            } else {
                break;
            }
        }
        // A label may not end with '.'; trailing dots were never consumed.
        Ok(Term::BlankNode(label))
    }

    /// Reads a string delimited by `quote`; `long` selects the triple-quoted form.
    pub(super) fn read_string(&mut self, quote: char, long: bool) -> Result<String, ParseError> {
        let delim_len = if long { 3 } else { 1 };
        for _ in 0..delim_len {
            self.expect(quote)?;
        }
        let mut value = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated string literal")),
                Some('\n') | Some('\r') if !long => {
                    return Err(self.error("line break inside string literal"))
                }
                Some(c) if c == quote => {
                    if !long {
                        self.bump();
                        break;
                    }
                    if self.peek_at(1) == Some(quote) && self.peek_at(2) == Some(quote) {
                        // """" ends with the first quote kept as content.
                        if self.peek_at(3) == Some(quote) {
                            self.bump();
                            value.push(quote);
                            continue;
                        }
                        self.bump();
                        self.bump();
                        self.bump();
                        break;
                    }
                    self.bump();
                    value.push(c);
                }
                Some('\\') => {
                    self.bump();
                    let c = match self.peek() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{C}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') | Some('U') => {
                            value.push(self.read_uchar()?);
                            continue;
                        }
                        _ => return Err(self.error("invalid escape sequence in string")),
                    };
                    self.bump();
                    value.push(c);
                }
                Some(c) => {
                    self.bump();
                    value.push(c);
                }
            }
        }
        Ok(value)
    }

    pub(super) fn read_langtag(&mut self) -> Result<String, ParseError> {
        self.expect('@')?;
        let mut tag = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                tag.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if !is_valid_language_tag(&tag) {
            return Err(self.error(format!("invalid language tag '{tag}'")));
        }
        Ok(tag)
    }
}

fn read_literal(cur: &mut Cursor) -> Result<Literal, ParseError> {
    let lexical = cur.read_string('"', false)?;
    match cur.peek() {
        Some('@') => {
            let language = cur.read_langtag()?;
            Ok(Literal {
                lexical,
                datatype: Iri(RDF_LANG_STRING.to_owned()),
                language: Some(language),
            })
        }
        Some('^') => {
            cur.bump();
            cur.expect('^')?;
            let datatype = cur.read_iriref()?;
            if datatype.as_str() == RDF_LANG_STRING {
                return Err(cur.error("rdf:langString literal without a language tag"));
            }
            Ok(Literal::typed(lexical, datatype))
        }
        _ => Ok(Literal::simple(lexical)),
    }
}

fn read_statement(cur: &mut Cursor) -> Result<Triple, ParseError> {
    let subject = match cur.peek() {
        Some('<') => Term::Iri(cur.read_iriref()?),
        Some('_') => cur.read_blank_node()?,
        _ => return Err(cur.error("expected IRI or blank node as subject")),
    };
    cur.skip_inline_ws();
    if cur.peek() != Some('<') {
        return Err(cur.error("expected IRI as predicate"));
    }
    let predicate = cur.read_iriref()?;
    cur.skip_inline_ws();
    let object = match cur.peek() {
        Some('<') => Term::Iri(cur.read_iriref()?),
        Some('_') => cur.read_blank_node()?,
        Some('"') => Term::Literal(read_literal(cur)?),
        _ => return Err(cur.error("expected IRI, blank node or literal as object")),
    };
    cur.skip_inline_ws();
    cur.expect('.')?;
    Ok(Triple::from_parts(subject, predicate, object))
}

/// Parses an N-Triples document. Either the whole document parses or an
/// error is returned.
pub fn parse_ntriples(text: &str) -> Result<Graph, ParseError> {
    let mut cur = Cursor::new(text.strip_prefix('\u{FEFF}').unwrap_or(text));
    let mut graph = Graph::new();
    while cur.peek().is_some() {
        cur.skip_inline_ws();
        match cur.peek() {
            None => break,
            Some('\n') => {
                cur.bump();
                continue;
            }
            Some('\r') => {
                cur.bump();
                continue;
            }
            Some('#') => {}
            Some(_) => {
                graph.insert(read_statement(&mut cur)?);
                cur.skip_inline_ws();
            }
        }
        cur.skip_comment();
        match cur.peek() {
            None => {}
            Some('\n') => {
                cur.bump();
            }
            Some('\r') => {
                cur.bump();
                if cur.peek() == Some('\n') {
                    cur.bump();
                }
            }
            Some(_) => return Err(cur.error("expected end of line after statement")),
        }
    }
    Ok(graph)
}

pub(super) fn write_iri(out: &mut impl fmt::Write, iri: &str) -> fmt::Result {
    out.write_char('<')?;
    for c in iri.chars() {
        if c <= ' ' || "<>\"{}|^`\\".contains(c) {
            write!(out, "\\u{:04X}", c as u32)?;
        } else {
            out.write_char(c)?;
        }
    }
    out.write_char('>')
}

fn write_string(out: &mut impl fmt::Write, value: &str) -> fmt::Result {
    out.write_char('"')?;
    for c in value.chars() {
        match c {
            '"' => out.write_str("\\\"")?,
            '\\' => out.write_str("\\\\")?,
            '\n' => out.write_str("\\n")?,
            '\r' => out.write_str("\\r")?,
            '\t' => out.write_str("\\t")?,
            '\u{8}' => out.write_str("\\b")?,
            '\u{C}' => out.write_str("\\f")?,
            c if c < ' ' || c == '\u{7F}' => write!(out, "\\u{:04X}", c as u32)?,
            c => out.write_char(c)?,
        }
    }
    out.write_char('"')
}

pub(super) fn write_term(out: &mut impl fmt::Write, term: &Term) -> fmt::Result {
    match term {
        Term::Iri(iri) => write_iri(out, iri.as_str()),
        Term::BlankNode(label) => write!(out, "_:{label}"),
        Term::Literal(lit) => {
            write_string(out, &lit.lexical)?;
            if let Some(lang) = &lit.language {
                write!(out, "@{lang}")
            } else if lit.datatype.as_str() != XSD_STRING {
                out.write_str("^^")?;
                write_iri(out, lit.datatype.as_str())
            } else {
                Ok(())
            }
        }
    }
}

pub(super) fn write_triple(out: &mut impl fmt::Write, triple: &Triple) -> fmt::Result {
    write_term(out, &triple.subject)?;
    out.write_char(' ')?;
    write_iri(out, triple.predicate.as_str())?;
    out.write_char(' ')?;
    write_term(out, &triple.object)?;
    out.write_str(" .")
}

/// Canonical N-Triples: one statement per line, lines sorted, LF endings.
pub fn serialize_ntriples(graph: &Graph) -> String {
    let mut lines: Vec<String> = graph.iter().map(|t| t.to_string()).collect();
    lines.sort_unstable();
    let mut out = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for line in lines {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term_iri(s: &str) -> Term {
        Term::iri(s).unwrap()
    }

    #[test]
    fn empty_document() {
        assert_eq!(parse_ntriples("").unwrap().len(), 0);
        assert_eq!(parse_ntriples("\n# just a comment\n\n").unwrap().len(), 0);
    }

    #[test]
    fn language_tagged_object() {
        let g = parse_ntriples("<http://ex.org/s> <http://ex.org/p> \"hi\"@en .").unwrap();
        assert_eq!(g.len(), 1);
        let t = g.iter().next().unwrap();
        assert_eq!(t.subject(), &term_iri("http://ex.org/s"));
        assert_eq!(
            t.object(),
            &Term::Literal(Literal::lang_tagged("hi", "en").unwrap())
        );
    }

    #[test]
    fn typed_literal_and_blank_nodes() {
        let doc = "_:a <http://ex.org/p> \"2024-01-01\"^^<http://www.w3.org/2001/XMLSchema#date> .\n\
                   _:a <http://ex.org/q> _:b.\n";
        let g = parse_ntriples(doc).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.blank_nodes().len(), 2);
    }

    #[test]
    fn numeric_escapes_decoded() {
        let g = parse_ntriples("<http://ex.org/s> <http://ex.org/p> \"caf\\u00E9 \\U0001F600\" .")
            .unwrap();
        let Term::Literal(lit) = g.iter().next().unwrap().object() else {
            panic!("expected literal");
        };
        assert_eq!(lit.lexical(), "café 😀");
    }

    #[test]
    fn crlf_and_trailing_comments() {
        let doc = "<http://ex.org/s> <http://ex.org/p> <http://ex.org/o> . # c\r\n\
                   <http://ex.org/s> <http://ex.org/p> <http://ex.org/o2> .\r\n";
        assert_eq!(parse_ntriples(doc).unwrap().len(), 2);
    }

    #[test]
    fn errors_report_position() {
        let doc = "<http://ex.org/s> <http://ex.org/p> <http://ex.org/o> .\n<http://ex.org/s> \"lit\" <http://ex.org/o> .\n";
        match parse_ntriples(doc) {
            Err(ParseError::Syntax { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, 19);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_statements_rejected() {
        for doc in [
            "<http://ex.org/s> <http://ex.org/p> <http://ex.org/o>",
            "<http://ex.org/s> <http://ex.org/p> <http://ex.org/o> . extra",
            "<rel> <http://ex.org/p> <http://ex.org/o> .",
            "\"lit\" <http://ex.org/p> <http://ex.org/o> .",
            "<http://ex.org/s> _:p <http://ex.org/o> .",
            "<http://ex.org/s> <http://ex.org/p> \"unterminated .",
            "<http://ex.org/s> <http://ex.org/p> \"x\"@ .",
            "<http://ex.org/s> <http://ex.org/p> \"bad \\q\" .",
            "<http://ex.org/s> <http://ex.org/p> \"x\"^^<http://www.w3.org/1999/02/22-rdf-syntax-ns#langString> .",
            "<http://ex.org/s p> <http://ex.org/p> <http://ex.org/o> .",
            "<http://ex.org/s> <http://ex.org/p> \"\\uD800\" .",
        ] {
            assert!(parse_ntriples(doc).is_err(), "accepted {doc:?}");
        }
    }

    #[test]
    fn serialize_single_triple() {
        let doc = "<http://ex.org/s> <http://ex.org/p> \"a\\\"b\\\\c\\n\" .\n";
        let g = parse_ntriples(doc).unwrap();
        assert_eq!(serialize_ntriples(&g), doc);
        assert_eq!(serialize_ntriples(&Graph::new()), "");
    }

    #[test]
    fn xsd_string_is_written_bare() {
        let g = parse_ntriples(
            "<http://ex.org/s> <http://ex.org/p> \"x\"^^<http://www.w3.org/2001/XMLSchema#string> .",
        )
        .unwrap();
        assert_eq!(
            serialize_ntriples(&g),
            "<http://ex.org/s> <http://ex.org/p> \"x\" .\n"
        );
    }

    #[test]
    fn control_characters_escaped() {
        let lit = Literal::simple("a\u{1}b\u{7F}\u{8}");
        let t = Triple::new(term_iri("http://ex.org/s"), term_iri("http://ex.org/p"), lit.into())
            .unwrap();
        let line = t.to_string();
        assert_eq!(line, "<http://ex.org/s> <http://ex.org/p> \"a\\u0001b\\u007F\\b\" .");
        let back = parse_ntriples(&line).unwrap();
        assert!(back.contains(&t));
    }
}
