//! Turtle reader for the subset mapping tools commonly emit: prefix
//! declarations, `a`, predicate lists (`;`) and object lists (`,`).
//! Collections, blank node property lists, quoted triples and base IRIs
//! are rejected as unsupported.

use std::collections::HashMap;

use super::ntriples::Cursor;
use super::{
    is_pn_chars, is_pn_chars_base, is_pn_chars_u, Graph, Iri, Literal, ParseError, Term, Triple,
    RDF_LANG_STRING, RDF_TYPE, XSD_BOOLEAN, XSD_DECIMAL, XSD_DOUBLE, XSD_INTEGER,
};

struct TurtleParser {
    cur: Cursor,
    prefixes: HashMap<String, String>,
    graph: Graph,
}

/// Parses a Turtle document restricted to the supported subset.
pub fn parse_turtle_subset(text: &str) -> Result<Graph, ParseError> {
    let mut parser = TurtleParser {
        cur: Cursor::new(text.strip_prefix('\u{FEFF}').unwrap_or(text)),
        prefixes: HashMap::new(),
        graph: Graph::new(),
    };
    parser.document()?;
    Ok(parser.graph)
}

impl TurtleParser {
    fn unsupported(&self, construct: &str) -> ParseError {
        ParseError::UnsupportedConstruct {
            line: self.cur.line(),
            construct: construct.to_owned(),
        }
    }

    fn skip_ws(&mut self) {
        loop {
            match self.cur.peek() {
                Some(c) if c.is_whitespace() => {
                    self.cur.bump();
                }
                Some('#') => self.cur.skip_comment(),
                _ => break,
            }
        }
    }

    fn keyword_follows(&self, word: &str) -> bool {
        self.cur.starts_with_ignore_case(word)
            && !self
                .cur
                .peek_at(word.len())
                .is_some_and(|c| is_pn_chars(c) || c == ':')
    }

    fn document(&mut self) -> Result<(), ParseError> {
        loop {
            self.skip_ws();
            match self.cur.peek() {
                None => return Ok(()),
                Some('@') => {
                    if self.cur.starts_with("@prefix") {
                        for _ in 0.."@prefix".len() {
                            self.cur.bump();
                        }
                        self.prefix_body()?;
                        self.skip_ws();
                        self.cur.expect('.')?;
                    } else if self.cur.starts_with("@base") {
                        return Err(self.unsupported("@base"));
                    } else {
                        return Err(self.cur.error("unknown directive"));
                    }
                }
                Some(_) if self.keyword_follows("PREFIX") => {
                    for _ in 0.."PREFIX".len() {
                        self.cur.bump();
                    }
                    self.prefix_body()?;
                }
                Some(_) if self.keyword_follows("BASE") => return Err(self.unsupported("BASE")),
                Some(_) => {
                    self.triples()?;
                    self.skip_ws();
                    self.cur.expect('.')?;
                }
            }
        }
    }

    fn prefix_body(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        let name = self.pname_prefix()?;
        self.cur.expect(':')?;
        self.skip_ws();
        let iri = self.cur.read_iriref()?;
        self.prefixes.insert(name, iri.as_str().to_owned());
        Ok(())
    }

    fn pname_prefix(&mut self) -> Result<String, ParseError> {
        let mut name = String::new();
        match self.cur.peek() {
            Some(':') => return Ok(name),
            Some(c) if is_pn_chars_base(c) => {
                name.push(c);
                self.cur.bump();
            }
            _ => return Err(self.cur.error("invalid prefix name")),
        }
        while let Some(c) = self.cur.peek() {
            if is_pn_chars(c)
                || (c == '.' && self.cur.peek_at(1).is_some_and(|n| is_pn_chars(n) || n == '.'))
            {
                name.push(c);
                self.cur.bump();
            } else {
                break;
            }
        }
        Ok(name)
    }

    fn check_unsupported_term(&self) -> Result<(), ParseError> {
        match self.cur.peek() {
            Some('[') => Err(self.unsupported("blank node property list")),
            Some('(') => Err(self.unsupported("collection")),
            Some('<') if self.cur.peek_at(1) == Some('<') => Err(self.unsupported("quoted triple")),
            _ => Ok(()),
        }
    }

    fn triples(&mut self) -> Result<(), ParseError> {
        self.check_unsupported_term()?;
        let subject = match self.cur.peek() {
            Some('_') => self.cur.read_blank_node()?,
            Some('"') | Some('\'') => return Err(self.cur.error("literal used as subject")),
            _ => Term::Iri(self.iri()?),
        };
        self.skip_ws();
        loop {
            let predicate = self.verb()?;
            self.skip_ws();
            loop {
                let object = self.object()?;
                self.graph
                    .insert(Triple::from_parts(subject.clone(), predicate.clone(), object));
                self.skip_ws();
                if self.cur.peek() == Some(',') {
                    self.cur.bump();
                    self.skip_ws();
                } else {
                    break;
                }
            }
            if self.cur.peek() != Some(';') {
                return Ok(());
            }
            while self.cur.peek() == Some(';') {
                self.cur.bump();
                self.skip_ws();
            }
            if matches!(self.cur.peek(), Some('.') | None) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, ParseError> {
        if self.cur.peek() == Some('a')
            && !self
                .cur
                .peek_at(1)
                .is_some_and(|c| is_pn_chars(c) || c == ':' || c == '.')
        {
            self.cur.bump();
            return Ok(Iri(RDF_TYPE.to_owned()));
        }
        match self.cur.peek() {
            Some('_') => Err(self.cur.error("blank node used as predicate")),
            Some('"') | Some('\'') => Err(self.cur.error("literal used as predicate")),
            _ => self.iri(),
        }
    }

    fn object(&mut self) -> Result<Term, ParseError> {
        self.check_unsupported_term()?;
        match self.cur.peek() {
            Some('_') => self.cur.read_blank_node(),
            Some('"') | Some('\'') => self.literal().map(Term::Literal),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => {
                self.numeric().map(Term::Literal)
            }
            _ if self.keyword_follows("true") || self.keyword_follows("false") => {
                let value = if self.cur.peek() == Some('t') { "true" } else { "false" };
                for _ in 0..value.len() {
                    self.cur.bump();
                }
                Ok(Term::Literal(Literal::typed(value, Iri(XSD_BOOLEAN.to_owned()))))
            }
            _ => self.iri().map(Term::Iri),
        }
    }

    fn iri(&mut self) -> Result<Iri, ParseError> {
        if self.cur.peek() == Some('<') {
            return self.cur.read_iriref();
        }
        let prefix = self.pname_prefix()?;
        self.cur.expect(':')?;
        let Some(namespace) = self.prefixes.get(&prefix).cloned() else {
            return Err(self.cur.error(format!("undeclared prefix '{prefix}:'")));
        };
        let local = self.pn_local()?;
        Iri::new(namespace + &local).map_err(|e| self.cur.error(e.to_string()))
    }

    fn pn_local(&mut self) -> Result<String, ParseError> {
        let mut local = String::new();
        let mut first = true;
        while let Some(c) = self.cur.peek() {
            let accepted = if c == '%' {
                let (h1, h2) = (self.cur.peek_at(1), self.cur.peek_at(2));
                if !(h1.is_some_and(|h| h.is_ascii_hexdigit()) && h2.is_some_and(|h| h.is_ascii_hexdigit())) {
                    return Err(self.cur.error("invalid percent escape in local name"));
                }
                for _ in 0..3 {
                    local.push(self.cur.bump().unwrap_or_default());
                }
                true
            } else if c == '\\' {
                let escaped = self.cur.peek_at(1);
                match escaped {
                    Some(e) if "_~.-!$&'()*+,;=/?#@%".contains(e) => {
                        self.cur.bump();
                        self.cur.bump();
                        local.push(e);
                    }
                    _ => return Err(self.cur.error("invalid escape in local name")),
                }
                true
            } else if (first && (is_pn_chars_u(c) || c == ':' || c.is_ascii_digit()))
                || (!first && (is_pn_chars(c) || c == ':'))
                || (!first
                    && c == '.'
                    && self
                        .cur
                        .peek_at(1)
                        .is_some_and(|n| is_pn_chars(n) || matches!(n, ':' | '.' | '%' | '\\')))
            {
                local.push(c);
                self.cur.bump();
                true
            } else {
                false
            };
            if !accepted {
                break;
            }
            first = false;
        }
        Ok(local)
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let quote = self.cur.peek().unwrap_or('"');
        let long = self.cur.peek_at(1) == Some(quote) && self.cur.peek_at(2) == Some(quote);
        let lexical = self.cur.read_string(quote, long)?;
        match self.cur.peek() {
            Some('@') => {
                let language = self.cur.read_langtag()?;
                Ok(Literal {
                    lexical,
                    datatype: Iri(RDF_LANG_STRING.to_owned()),
                    language: Some(language),
                })
            }
            Some('^') => {
                self.cur.bump();
                self.cur.expect('^')?;
                let datatype = self.iri()?;
                if datatype.as_str() == RDF_LANG_STRING {
                    return Err(self.cur.error("rdf:langString literal without a language tag"));
                }
                Ok(Literal::typed(lexical, datatype))
            }
            _ => Ok(Literal::simple(lexical)),
        }
    }

    fn numeric(&mut self) -> Result<Literal, ParseError> {
        let mut text = String::new();
        if let Some(sign @ ('+' | '-')) = self.cur.peek() {
            text.push(sign);
            self.cur.bump();
        }
        let digits = |p: &mut Self, text: &mut String| {
            let mut n = 0;
            while let Some(c) = p.cur.peek().filter(char::is_ascii_digit) {
                text.push(c);
                p.cur.bump();
                n += 1;
            }
            n
        };
        let int_digits = digits(self, &mut text);
        let mut frac_digits = 0;
        let mut has_dot = false;
        if self.cur.peek() == Some('.') && self.cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            has_dot = true;
            text.push('.');
            self.cur.bump();
            frac_digits = digits(self, &mut text);
        }
        if int_digits + frac_digits == 0 {
            return Err(self.cur.error("invalid numeric literal"));
        }
        if let Some(e @ ('e' | 'E')) = self.cur.peek() {
            text.push(e);
            self.cur.bump();
            if let Some(sign @ ('+' | '-')) = self.cur.peek() {
                text.push(sign);
                self.cur.bump();
            }
            if digits(self, &mut text) == 0 {
                return Err(self.cur.error("invalid exponent in numeric literal"));
            }
            return Ok(Literal::typed(text, Iri(XSD_DOUBLE.to_owned())));
        }
        let datatype = if has_dot { XSD_DECIMAL } else { XSD_INTEGER };
        Ok(Literal::typed(text, Iri(datatype.to_owned())))
    }
}
