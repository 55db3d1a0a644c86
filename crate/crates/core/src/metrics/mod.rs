//! Completeness and expressiveness metrics.

mod completeness;
mod expressiveness;
mod facets;

use serde::Serialize;
use thiserror::Error;

pub use completeness::{
    classify, evaluate_completeness, gap_order, ClassificationResult, CompletenessReport, CompletenessRow, GapRecord, UnresolvedCount,
};
pub use expressiveness::{
    derive_key_relationships, evaluate_expressiveness, format_path, load_key_relationships, load_relationship_tables, map_key_relationship,
    parse_key_relationships_csv, parse_relationship_csv, reverse_path, Direction, EndpointKind, Evidence, ExcludedKey, ExpressivenessReport,
    KeyRelationship, KeyRelationshipSet, KeyRelationshipRow, OntologyExpressiveness, PathStep, RelInfo, RelationshipEntry, RelationshipKind,
    RelationshipMapping, RelationshipTable, RelationshipVocabulary, Side,
};
pub use facets::{decision_rule, resolve_facets, FacetOutcome, FacetResolution, FacetVector, GapConcept, GapType, UnresolvedToken};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("set size is zero")]
    EmptySet,
    #[error("no key relationships to evaluate")]
    NoKeyRelationships,
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error("{path}:{line}: {message}")]
    Row { path: String, line: u64, message: String },
    #[error("{path}: {} invalid row(s):\n  {}", .errors.len(), .errors.join("\n  "))]
    Rows { path: String, errors: Vec<String> },
}

impl MetricsError {
    fn file(path: &str, e: impl std::fmt::Display) -> MetricsError {
        MetricsError::File { path: path.to_string(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Significance {
    Significant,
    Insignificant,
}

/// A gap is significant when it touches at least 2% of the set.
/// Compared as `50 * count >= size`, so no rounding is involved.
pub fn significance(count: usize, set_size: usize) -> Result<Significance, MetricsError> {
    if set_size == 0 {
        return Err(MetricsError::EmptySet);
    }
    Ok(if 50 * count as u128 >= set_size as u128 {
        Significance::Significant
    } else {
        Significance::Insignificant
    })
}

/// `100 * num / den` rounded half up. Zero when `den` is zero.
pub fn pct_half_up(num: u64, den: u64) -> u32 {
    if den == 0 {
        return 0;
    }
    ((200 * num as u128 + den as u128) / (2 * den as u128)) as u32
}
