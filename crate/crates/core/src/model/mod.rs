//! Domain types shared by both ontology paradigms and by the metric engines.

pub mod graph;
mod haystack;
mod rdf;
mod symbol;
mod value;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use haystack::{HaystackDef, HaystackNamespace, SourceSpan};
pub use rdf::{BrickClass, BrickRelationship, EntityKind, Iri, Literal, Term, Triple};
pub(crate) use rdf::escape_literal;
pub use symbol::{symbol_parts, Symbol, SymbolKind};
pub use value::ZincScalar;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("malformed symbol {text:?}: {reason}")]
    MalformedSymbol { text: String, reason: String },
    #[error("duplicate def ^{symbol} at {first} and {second}")]
    DuplicateDef { symbol: String, first: SourceSpan, second: SourceSpan },
    #[error("^{symbol} at {span}: `is` target ^{target} does not resolve")]
    UnresolvedSupertype { symbol: String, target: String, span: SourceSpan },
    #[error("unknown symbol ^{0}")]
    UnknownSymbol(String),
    #[error("cycle in hierarchy: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
}

/// Outcome of classifying one point type against one ontology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    Maps,
    PartiallyMaps,
    DoesNotMap,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 3] = [ClassLabel::Maps, ClassLabel::PartiallyMaps, ClassLabel::DoesNotMap];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassLabel::Maps => "Maps",
            ClassLabel::PartiallyMaps => "Partially Maps",
            ClassLabel::DoesNotMap => "Does Not Map",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
