use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Symbol;

/// An absolute IRI, stored fully expanded.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Iri(pub String);

impl Iri {
    pub fn new(s: impl Into<String>) -> Iri {
        Iri(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The part after the last `#` or `/`.
    pub fn local_name(&self) -> &str {
        let s = self.0.as_str();
        match s.rfind(['#', '/']) {
            Some(i) => &s[i + 1..],
            None => s,
        }
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Literal {
    pub lexical: String,
    pub lang: Option<String>,
    pub datatype: Option<Iri>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
pub enum Term {
    Iri(Iri),
    /// Skolemised blank node; ids are assigned in file order.
    Blank(u32),
    Literal(Literal),
}

impl Term {
    pub fn iri(s: impl Into<String>) -> Term {
        Term::Iri(Iri::new(s))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(i) => Some(i),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => write!(f, "<{i}>"),
            Term::Blank(n) => write!(f, "_:b{n}"),
            Term::Literal(l) => {
                write!(f, "\"{}\"", escape_literal(&l.lexical))?;
                if let Some(lang) = &l.lang {
                    write!(f, "@{lang}")?;
                } else if let Some(dt) = &l.datatype {
                    write!(f, "^^<{dt}>")?;
                }
                Ok(())
            }
        }
    }
}

pub(crate) fn escape_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            '\u{8}' => out.push_str("\\b"),
            '\u{c}' => out.push_str("\\f"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Iri,
    pub object: Term,
}

/// The four primary Brick classes, also used as endpoint kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EntityKind {
    Equipment,
    Location,
    Measurable,
    Point,
}

impl EntityKind {
    pub const ALL: [EntityKind; 4] = [
        EntityKind::Equipment,
        EntityKind::Location,
        EntityKind::Measurable,
        EntityKind::Point,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EntityKind::Equipment => "Equipment",
            EntityKind::Location => "Location",
            EntityKind::Measurable => "Measurable",
            EntityKind::Point => "Point",
        }
    }

    pub fn universal() -> BTreeSet<EntityKind> {
        EntityKind::ALL.into_iter().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrickClass {
    pub iri: Iri,
    pub parents: Vec<Iri>,
    pub associated_tags: BTreeSet<Symbol>,
    pub label: Option<String>,
    /// The primary root this class falls under.
    pub root: EntityKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrickRelationship {
    pub iri: Iri,
    pub inverse: Option<Iri>,
    pub domain_kinds: BTreeSet<EntityKind>,
    pub range_kinds: BTreeSet<EntityKind>,
}
