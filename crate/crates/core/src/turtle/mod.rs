//! A Turtle subset reader, an in-memory triple store, and Brick schema
//! extraction.
//!
//! Supported: `@prefix`/`PREFIX`, prefixed names, absolute IRIs, the `a`
//! keyword, string literals (short and long, with language tags or an
//! `xsd:string` datatype), booleans, `;` and `,` lists, blank nodes (`[]`
//! and `_:label`) and collections. Anything else is a located error.

mod brick;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::model::{escape_literal, Iri, Literal, Term, Triple};

pub use brick::{extract_brick_schema, subclass_closure, BrickError, BrickSchema, BrickVocabulary};

pub const RDF: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
pub const RDFS: &str = "http://www.w3.org/2000/01/rdf-schema#";
pub const OWL: &str = "http://www.w3.org/2002/07/owl#";
pub const XSD: &str = "http://www.w3.org/2001/XMLSchema#";

const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {kind}")]
pub struct TurtleError {
    pub line: usize,
    pub col: usize,
    pub kind: TurtleErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TurtleErrorKind {
    UndefinedPrefix(String),
    Unbalanced { open: char, close: char },
    Unsupported(String),
    Syntax(String),
}

impl fmt::Display for TurtleErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TurtleErrorKind::UndefinedPrefix(p) => write!(f, "undefined prefix {p:?}"),
            TurtleErrorKind::Unbalanced { open, close } => write!(f, "unbalanced '{open}': expected '{close}'"),
            TurtleErrorKind::Unsupported(what) => write!(f, "unsupported: {what}"),
            TurtleErrorKind::Syntax(msg) => f.write_str(msg),
        }
    }
}

/// A set of triples with subject and predicate indexes.
#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    triples: Vec<Triple>,
    seen: HashSet<Triple>,
    prefixes: BTreeMap<String, String>,
    by_subject: HashMap<Term, Vec<usize>>,
    by_predicate: HashMap<Iri, Vec<usize>>,
}

impl TripleStore {
    pub fn new() -> TripleStore {
        TripleStore::default()
    }

    /// Add a triple; returns false if it was already present.
    pub fn insert(&mut self, t: Triple) -> bool {
        if self.seen.contains(&t) {
            return false;
        }
        let k = self.triples.len();
        self.by_subject.entry(t.subject.clone()).or_default().push(k);
        self.by_predicate.entry(t.predicate.clone()).or_default().push(k);
        self.seen.insert(t.clone());
        self.triples.push(t);
        true
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn contains(&self, t: &Triple) -> bool {
        self.seen.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.iter()
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn add_prefix(&mut self, prefix: &str, base: &str) {
        self.prefixes.insert(prefix.to_string(), base.to_string());
    }

    pub fn about<'a>(&'a self, s: &Term) -> impl Iterator<Item = &'a Triple> + 'a {
        self.by_subject.get(s).into_iter().flatten().map(move |&k| &self.triples[k])
    }

    pub fn with_predicate<'a>(&'a self, p: &str) -> impl Iterator<Item = &'a Triple> + 'a {
        self.by_predicate.get(&Iri::new(p)).into_iter().flatten().map(move |&k| &self.triples[k])
    }

    pub fn objects<'a>(&'a self, s: &Term, p: &'a str) -> impl Iterator<Item = &'a Term> + 'a {
        self.about(s).filter(move |t| t.predicate.as_str() == p).map(|t| &t.object)
    }

    /// Expand `prefix:local` using the store's prefixes.
    pub fn expand(&self, pname: &str) -> Option<Iri> {
        let (p, l) = pname.split_once(':')?;
        self.prefixes.get(p).map(|base| Iri::new(format!("{base}{l}")))
    }
}

/// Base IRI used for relative references when the document sets none.
pub const DEFAULT_BASE: &str = "file:///";

/// Parse a Turtle document, resolving relative IRIs against [`DEFAULT_BASE`].
pub fn parse_turtle(text: &str) -> Result<TripleStore, TurtleError> {
    parse_turtle_with_base(text, DEFAULT_BASE)
}

/// Parse a Turtle document with an explicit base IRI.
pub fn parse_turtle_with_base(text: &str, base: &str) -> Result<TripleStore, TurtleError> {
    let mut p = Parser {
        s: text.chars().collect(),
        base: base.to_string(),
        i: 0,
        store: TripleStore::new(),
        labels: HashMap::new(),
        next_blank: 0,
        depth: 0,
    };
    p.document()?;
    Ok(p.store)
}

/// Write the store as Turtle with full IRIs. Blank nodes keep their ids as
/// labels, so reparsing gives the same triples up to blank renumbering.
pub fn serialize(store: &TripleStore) -> String {
    let mut out = String::new();
    for (p, base) in store.prefixes() {
        out.push_str(&format!("@prefix {p}: <{base}> .\n"));
    }
    out.push('\n');
    for t in store.iter() {
        out.push_str(&format!("{} <{}> {} .\n", t.subject, t.predicate, term_text(&t.object)));
    }
    out
}

fn term_text(t: &Term) -> String {
    match t {
        Term::Literal(l) => {
            let mut s = format!("\"{}\"", escape_literal(&l.lexical));
            if let Some(lang) = &l.lang {
                s.push('@');
                s.push_str(lang);
            } else if let Some(dt) = &l.datatype {
                s.push_str(&format!("^^<{dt}>"));
            }
            s
        }
        other => other.to_string(),
    }
}

/// Resolve a relative reference by replacing the last path segment (or the
/// fragment) of `base`. Dot segments are not interpreted.
fn resolve_relative(base: &str, rel: &str) -> String {
    let base = base.split('#').next().unwrap_or(base);
    if rel.is_empty() {
        return base.to_string();
    }
    if rel.starts_with('#') {
        return format!("{base}{rel}");
    }
    if let Some(path) = rel.strip_prefix('/') {
        if let Some(k) = base.find("://") {
            let host_end = base[k + 3..].find('/').map(|e| k + 3 + e).unwrap_or(base.len());
            return format!("{}/{path}", &base[..host_end]);
        }
    }
    match base.rfind('/') {
        Some(k) => format!("{}{rel}", &base[..=k]),
        None => format!("{base}{rel}"),
    }
}

struct Parser {
    s: Vec<char>,
    base: String,
    i: usize,
    store: TripleStore,
    labels: HashMap<String, u32>,
    next_blank: u32,
    depth: usize,
}

fn is_pn_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.' || c == '\u{b7}'
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.s.get(self.i).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.s.get(self.i + k).copied()
    }

    fn starts_with(&self, word: &str) -> bool {
        word.chars().enumerate().all(|(k, c)| self.peek_at(k) == Some(c))
    }

    fn error_at(&self, pos: usize, kind: TurtleErrorKind) -> TurtleError {
        let mut line = 1;
        let mut col = 1;
        for &c in &self.s[..pos.min(self.s.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        TurtleError { line, col, kind }
    }

    fn syntax(&self, msg: impl Into<String>) -> TurtleError {
        self.error_at(self.i, TurtleErrorKind::Syntax(msg.into()))
    }

    fn ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.i += 1;
            } else if c == '#' {
                while !matches!(self.peek(), None | Some('\n')) {
                    self.i += 1;
                }
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, c: char, what: &str) -> Result<(), TurtleError> {
        self.ws();
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            Err(self.syntax(format!("expected {what}")))
        }
    }

    fn fresh_blank(&mut self) -> Term {
        let b = Term::Blank(self.next_blank);
        self.next_blank += 1;
        b
    }

    fn emit(&mut self, subject: Term, predicate: Iri, object: Term) {
        self.store.insert(Triple { subject, predicate, object });
    }

    fn document(&mut self) -> Result<(), TurtleError> {
        loop {
            self.ws();
            if self.peek().is_none() {
                return Ok(());
            }
            if self.starts_with("@prefix") {
                self.i += 7;
                self.prefix_decl()?;
                self.expect('.', "'.' after @prefix")?;
            } else if self.starts_with("@base") {
                self.i += 5;
                self.base_decl()?;
                self.expect('.', "'.' after @base")?;
            } else if self.starts_with("BASE") && matches!(self.peek_at(4), Some(c) if c.is_whitespace()) {
                self.i += 4;
                self.base_decl()?;
            } else if self.starts_with("PREFIX") && matches!(self.peek_at(6), Some(c) if c.is_whitespace()) {
                self.i += 6;
                self.prefix_decl()?;
            } else if self.peek() == Some('@') {
                return Err(self.syntax("unknown directive"));
            } else {
                self.triples()?;
                self.expect('.', "'.' at end of statement")?;
            }
        }
    }

    fn base_decl(&mut self) -> Result<(), TurtleError> {
        self.ws();
        if self.peek() != Some('<') {
            return Err(self.syntax("expected '<' IRI in base declaration"));
        }
        self.base = self.iriref()?.0;
        Ok(())
    }

    fn prefix_decl(&mut self) -> Result<(), TurtleError> {
        self.ws();
        let start = self.i;
        while matches!(self.peek(), Some(c) if is_pn_char(c)) {
            self.i += 1;
        }
        let prefix: String = self.s[start..self.i].iter().collect();
        if prefix.ends_with('.') || prefix.starts_with(|c: char| !c.is_alphabetic()) {
            return Err(self.error_at(start, TurtleErrorKind::Syntax("invalid prefix name".into())));
        }
        if self.peek() != Some(':') {
            return Err(self.syntax("expected ':' after prefix name"));
        }
        self.i += 1;
        self.ws();
        if self.peek() != Some('<') {
            return Err(self.syntax("expected '<' IRI in prefix declaration"));
        }
        let iri = self.iriref()?;
        self.store.add_prefix(&prefix, iri.as_str());
        Ok(())
    }

    fn triples(&mut self) -> Result<(), TurtleError> {
        if self.peek() == Some('[') {
            let subject = self.blank_property_list()?;
            self.ws();
            if self.peek() == Some('.') {
                return Ok(());
            }
            return self.predicate_object_list(&subject);
        }
        let subject = match self.peek() {
            Some('<') => Term::Iri(self.iriref()?),
            Some('_') => self.blank_label()?,
            Some('(') => self.collection()?,
            Some('"' | '\'') => return Err(self.syntax("a literal cannot be a subject")),
            _ => Term::Iri(self.prefixed_name()?),
        };
        self.predicate_object_list(&subject)
    }

    fn predicate_object_list(&mut self, subject: &Term) -> Result<(), TurtleError> {
        loop {
            self.ws();
            let predicate = self.verb()?;
            self.object_list(subject, &predicate)?;
            self.ws();
            if self.peek() != Some(';') {
                return Ok(());
            }
            while self.peek() == Some(';') {
                self.i += 1;
                self.ws();
            }
            if matches!(self.peek(), None | Some('.' | ']')) {
                return Ok(());
            }
        }
    }

    fn verb(&mut self) -> Result<Iri, TurtleError> {
        if self.peek() == Some('a') && matches!(self.peek_at(1), Some(c) if c.is_whitespace() || matches!(c, '<' | '[' | '(' | '"' | '\'')) {
            self.i += 1;
            return Ok(Iri::new(format!("{RDF}type")));
        }
        match self.peek() {
            Some('<') => self.iriref(),
            Some(c) if c.is_alphabetic() || c == ':' => self.prefixed_name(),
            None => Err(self.syntax("unexpected end of input, expected a predicate")),
            Some(c) => Err(self.syntax(format!("expected a predicate, found {c:?}"))),
        }
    }

    fn object_list(&mut self, subject: &Term, predicate: &Iri) -> Result<(), TurtleError> {
        loop {
            self.ws();
            let object = self.object()?;
            self.emit(subject.clone(), predicate.clone(), object);
            self.ws();
            if self.peek() == Some(',') {
                self.i += 1;
            } else {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Term, TurtleError> {
        match self.peek() {
            Some('<') => Ok(Term::Iri(self.iriref()?)),
            Some('_') => self.blank_label(),
            Some('[') => self.blank_property_list(),
            Some('(') => self.collection(),
            Some('"' | '\'') => self.literal(),
            Some(c) if c.is_ascii_digit() || matches!(c, '+' | '-' | '.') => {
                Err(self.error_at(self.i, TurtleErrorKind::Unsupported("numeric literals".into())))
            }
            Some(_) if self.keyword("true") || self.keyword("false") => {
                let v = if self.keyword("true") { "true" } else { "false" };
                self.i += v.len();
                Ok(Term::Literal(Literal {
                    lexical: v.into(),
                    lang: None,
                    datatype: Some(Iri::new(format!("{XSD}boolean"))),
                }))
            }
            Some(c) if c.is_alphabetic() || c == ':' => Ok(Term::Iri(self.prefixed_name()?)),
            None => Err(self.syntax("unexpected end of input, expected an object")),
            Some(c) => Err(self.syntax(format!("expected an object, found {c:?}"))),
        }
    }

    fn keyword(&self, word: &str) -> bool {
        self.starts_with(word) && !matches!(self.peek_at(word.len()), Some(c) if is_pn_char(c) || c == ':')
    }

    fn enter(&mut self, open: char) -> Result<(), TurtleError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.syntax(format!("'{open}' nested too deeply")));
        }
        Ok(())
    }

    fn blank_property_list(&mut self) -> Result<Term, TurtleError> {
        let open = self.i;
        self.i += 1;
        self.enter('[')?;
        let b = self.fresh_blank();
        self.ws();
        if self.peek() != Some(']') {
            self.predicate_object_list(&b)?;
            self.ws();
        }
        if self.peek() != Some(']') {
            if self.peek().is_none() {
                return Err(self.error_at(open, TurtleErrorKind::Unbalanced { open: '[', close: ']' }));
            }
            return Err(self.syntax("expected ']'"));
        }
        self.i += 1;
        self.depth -= 1;
        Ok(b)
    }

    fn collection(&mut self) -> Result<Term, TurtleError> {
        let open = self.i;
        self.i += 1;
        self.enter('(')?;
        let mut items = Vec::new();
        loop {
            self.ws();
            match self.peek() {
                Some(')') => {
                    self.i += 1;
                    break;
                }
                None => return Err(self.error_at(open, TurtleErrorKind::Unbalanced { open: '(', close: ')' })),
                _ => items.push(self.object()?),
            }
        }
        self.depth -= 1;
        let nil = Term::iri(format!("{RDF}nil"));
        if items.is_empty() {
            return Ok(nil);
        }
        let nodes: Vec<Term> = items.iter().map(|_| self.fresh_blank()).collect();
        for (k, item) in items.into_iter().enumerate() {
            let rest = nodes.get(k + 1).cloned().unwrap_or_else(|| nil.clone());
            self.emit(nodes[k].clone(), Iri::new(format!("{RDF}first")), item);
            self.emit(nodes[k].clone(), Iri::new(format!("{RDF}rest")), rest);
        }
        Ok(nodes[0].clone())
    }

    fn blank_label(&mut self) -> Result<Term, TurtleError> {
        if self.peek_at(1) != Some(':') {
            return Err(self.syntax("expected '_:' blank node label"));
        }
        self.i += 2;
        let start = self.i;
        while matches!(self.peek(), Some(c) if is_pn_char(c)) {
            self.i += 1;
        }
        while self.i > start && self.s[self.i - 1] == '.' {
            self.i -= 1;
        }
        if self.i == start {
            return Err(self.syntax("empty blank node label"));
        }
        let label: String = self.s[start..self.i].iter().collect();
        if let Some(&id) = self.labels.get(&label) {
            return Ok(Term::Blank(id));
        }
        let id = self.next_blank;
        self.next_blank += 1;
        self.labels.insert(label, id);
        Ok(Term::Blank(id))
    }

    fn iriref(&mut self) -> Result<Iri, TurtleError> {
        let open = self.i;
        self.i += 1;
        let start = self.i;
        loop {
            match self.peek() {
                None => return Err(self.error_at(open, TurtleErrorKind::Unbalanced { open: '<', close: '>' })),
                Some('>') => break,
                Some('\\') => {
                    return Err(self.error_at(self.i, TurtleErrorKind::Unsupported("escapes in IRIs".into())));
                }
                Some(c) if c.is_whitespace() || matches!(c, '<' | '"' | '{' | '}' | '|' | '^' | '`') => {
                    return Err(self.syntax(format!("invalid character {c:?} in IRI")));
                }
                Some(_) => self.i += 1,
            }
        }
        let iri: String = self.s[start..self.i].iter().collect();
        self.i += 1;
        let absolute = iri
            .split_once(':')
            .map(|(s, _)| {
                let mut c = s.chars();
                matches!(c.next(), Some(f) if f.is_ascii_alphabetic())
                    && c.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
            })
            .unwrap_or(false);
        if absolute {
            Ok(Iri::new(iri))
        } else {
            Ok(Iri::new(resolve_relative(&self.base, &iri)))
        }
    }

    fn prefixed_name(&mut self) -> Result<Iri, TurtleError> {
        let start = self.i;
        while matches!(self.peek(), Some(c) if is_pn_char(c)) {
            self.i += 1;
        }
        let prefix: String = self.s[start..self.i].iter().collect();
        if self.peek() != Some(':') {
            self.i = start;
            return Err(self.syntax(format!("expected a prefixed name, found {prefix:?}")));
        }
        if prefix.ends_with('.') {
            return Err(self.error_at(start, TurtleErrorKind::Syntax("prefix name ends with '.'".into())));
        }
        self.i += 1;
        let lstart = self.i;
        while matches!(self.peek(), Some(c) if is_pn_char(c) || c == ':') {
            self.i += 1;
        }
        if matches!(self.peek(), Some('%' | '\\')) {
            return Err(self.error_at(self.i, TurtleErrorKind::Unsupported("escapes in prefixed names".into())));
        }
        // a trailing '.' ends the statement rather than the name
        while self.i > lstart && self.s[self.i - 1] == '.' {
            self.i -= 1;
        }
        let local: String = self.s[lstart..self.i].iter().collect();
        if local.starts_with(['-', '.']) {
            return Err(self.error_at(lstart, TurtleErrorKind::Syntax("invalid local name".into())));
        }
        match self.store.prefixes.get(&prefix) {
            Some(base) => Ok(Iri::new(format!("{base}{local}"))),
            None => Err(self.error_at(start, TurtleErrorKind::UndefinedPrefix(prefix))),
        }
    }

    fn literal(&mut self) -> Result<Term, TurtleError> {
        let open = self.i;
        let q = self.s[self.i];
        let long = self.peek_at(1) == Some(q) && self.peek_at(2) == Some(q);
        self.i += if long { 3 } else { 1 };
        let mut out = String::new();
        loop {
            match self.peek() {
                None => return Err(self.error_at(open, TurtleErrorKind::Syntax("unterminated string".into()))),
                Some(c) if c == q => {
                    if !long {
                        self.i += 1;
                        break;
                    }
                    if self.peek_at(1) == Some(q) && self.peek_at(2) == Some(q) {
                        // a long string may end with extra quote characters
                        while self.peek_at(3) == Some(q) {
                            out.push(q);
                            self.i += 1;
                        }
                        self.i += 3;
                        break;
                    }
                    out.push(c);
                    self.i += 1;
                }
                Some('\n' | '\r') if !long => {
                    return Err(self.error_at(open, TurtleErrorKind::Syntax("unterminated string".into())));
                }
                Some('\\') => {
                    let e = self.peek_at(1);
                    let ch = match e {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u' | 'U') => {
                            return Err(self.error_at(self.i, TurtleErrorKind::Unsupported("numeric escapes".into())));
                        }
                        _ => return Err(self.syntax("invalid escape sequence")),
                    };
                    out.push(ch);
                    self.i += 2;
                }
                Some(c) => {
                    out.push(c);
                    self.i += 1;
                }
            }
        }
        let mut lit = Literal { lexical: out, lang: None, datatype: None };
        if self.peek() == Some('@') {
            self.i += 1;
            let start = self.i;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
                self.i += 1;
            }
            if self.i == start {
                return Err(self.syntax("empty language tag"));
            }
            while self.peek() == Some('-') && matches!(self.peek_at(1), Some(c) if c.is_ascii_alphanumeric()) {
                self.i += 1;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                    self.i += 1;
                }
            }
            lit.lang = Some(self.s[start..self.i].iter().collect());
        } else if self.peek() == Some('^') && self.peek_at(1) == Some('^') {
            let at = self.i;
            self.i += 2;
            let dt = if self.peek() == Some('<') { self.iriref()? } else { self.prefixed_name()? };
            let string = format!("{XSD}string");
            let boolean = format!("{XSD}boolean");
            if dt.as_str() == string {
                // plain and xsd:string literals are the same term
            } else if dt.as_str() == boolean && matches!(lit.lexical.as_str(), "true" | "false") {
                lit.datatype = Some(dt);
            } else {
                return Err(self.error_at(at, TurtleErrorKind::Unsupported(format!("datatype <{dt}>"))));
            }
        }
        Ok(Term::Literal(lit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_statement() {
        let s = parse_turtle("@prefix b: <http://x#> . b:AHU a b:Equipment .").unwrap();
        assert_eq!(s.len(), 1);
        let t = s.iter().next().unwrap();
        assert_eq!(t.subject, Term::iri("http://x#AHU"));
        assert_eq!(t.predicate.as_str(), format!("{RDF}type"));
        assert_eq!(t.object, Term::iri("http://x#Equipment"));
    }

    #[test]
    fn undefined_prefix_is_located() {
        let e = parse_turtle("b:AHU a b:Equipment .").unwrap_err();
        assert_eq!(e.kind, TurtleErrorKind::UndefinedPrefix("b".into()));
        assert_eq!((e.line, e.col), (1, 1));
    }

    #[test]
    fn unbalanced_brackets() {
        let e = parse_turtle("@prefix b: <http://x#> .\nb:A b:p [ b:q b:r .").unwrap_err();
        assert!(matches!(e.kind, TurtleErrorKind::Syntax(_) | TurtleErrorKind::Unbalanced { .. }));
        let e = parse_turtle("@prefix b: <http://x#> .\nb:A b:p ( b:q").unwrap_err();
        assert_eq!(e.kind, TurtleErrorKind::Unbalanced { open: '(', close: ')' });
        assert_eq!((e.line, e.col), (2, 9));
    }

    #[test]
    fn lists_blank_nodes_and_collections() {
        let text = r#"@prefix b: <http://x#> .
# comment
b:A a b:C, b:D ;
    b:p [ b:q "v"@en ; b:r true ] ;
    b:l ( _:x b:E ) ;
    .
_:x b:name 'n' .
"#;
        let s = parse_turtle(text).unwrap();
        // 2 types + p + q + r + l + 2x(first,rest) + name
        assert_eq!(s.len(), 11);
        let x: Vec<_> = s.iter().filter(|t| t.predicate.as_str() == "http://x#name").collect();
        let first: Vec<_> = s.iter().filter(|t| t.object == x[0].subject).collect();
        assert_eq!(first.len(), 1, "labelled blank node is shared");
    }

    #[test]
    fn long_strings_and_escapes() {
        let s = parse_turtle("@prefix b: <http://x#> . b:A b:p \"\"\"two\nlines \"q\" \"\"\" ; b:q \"t\\tab\" .").unwrap();
        let lits: Vec<String> = s.iter().filter_map(|t| t.object.as_literal().map(|l| l.lexical.clone())).collect();
        assert!(lits.contains(&"two\nlines \"q\" ".to_string()));
        assert!(lits.contains(&"t\tab".to_string()));
    }

    #[test]
    fn rejected_constructs() {
        let base = "@prefix b: <http://x#> . b:A b:p ";
        for bad in ["12 .", "\"x\"^^b:int .", "\"\\u0041\" .", "<a b> .", "\"open ."] {
            assert!(parse_turtle(&format!("{base}{bad}")).is_err(), "{bad}");
        }
    }

    #[test]
    fn relative_iris_use_the_base() {
        let s = parse_turtle("@prefix b: <http://x#> . b:A b:p <ASHRAE> .").unwrap();
        assert_eq!(s.iter().next().unwrap().object, Term::iri("file:///ASHRAE"));
        let s = parse_turtle("@base <http://h/doc/d.ttl> . <#a> <p> </root> .").unwrap();
        let t = s.iter().next().unwrap();
        assert_eq!(t.subject, Term::iri("http://h/doc/d.ttl#a"));
        assert_eq!(t.predicate.as_str(), "http://h/doc/p");
        assert_eq!(t.object, Term::iri("http://h/root"));
    }

    #[test]
    fn duplicates_collapse() {
        let s = parse_turtle("@prefix b: <http://x#> . b:A b:p b:B . b:A b:p b:B .").unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn serialize_round_trip_count() {
        let text = "@prefix b: <http://x#> . b:A a b:C ; b:l (b:x b:y) ; b:p [ b:q \"a\\\"b\" ], \"x\"@en-GB, false .";
        let s = parse_turtle(text).unwrap();
        let again = parse_turtle(&serialize(&s)).unwrap();
        assert_eq!(s.len(), again.len());
    }
}
