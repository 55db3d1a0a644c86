//! Curated alignment tables: dataset tokens to ontology entities, per facet
//! and per ontology.

mod suggest;

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{HaystackNamespace, Iri, Symbol};
use crate::turtle::BrickSchema;

pub use suggest::{suggest_alignments, MatchRank, OntologyRef, Suggestion};

/// Columns of the alignment CSV.
pub const CSV_COLUMNS: [&str; 6] = ["token", "facet", "ontology", "target", "relation", "note"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OntologyId {
    Haystack,
    Brick,
}

impl OntologyId {
    pub const ALL: [OntologyId; 2] = [OntologyId::Haystack, OntologyId::Brick];

    pub fn as_str(self) -> &'static str {
        match self {
            OntologyId::Haystack => "haystack",
            OntologyId::Brick => "brick",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OntologyId::Haystack => "Haystack",
            OntologyId::Brick => "Brick",
        }
    }
}

impl fmt::Display for OntologyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OntologyId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "haystack" | "ph" => Ok(OntologyId::Haystack),
            "brick" => Ok(OntologyId::Brick),
            other => Err(format!("unknown ontology {other:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Facet {
    EquipmentClass,
    EquipmentType,
    PointClass,
    MeasurementControlType,
    Service,
    /// A word of the point name that qualifies the point class.
    Modifier,
}

impl Facet {
    pub const ALL: [Facet; 6] = [
        Facet::EquipmentClass,
        Facet::EquipmentType,
        Facet::PointClass,
        Facet::MeasurementControlType,
        Facet::Service,
        Facet::Modifier,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Facet::EquipmentClass => "equipmentClass",
            Facet::EquipmentType => "equipmentType",
            Facet::PointClass => "pointClass",
            Facet::MeasurementControlType => "measurementControlType",
            Facet::Service => "service",
            Facet::Modifier => "modifier",
        }
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Facet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.trim().chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match key.as_str() {
            "equipmentclass" | "ec" => Ok(Facet::EquipmentClass),
            "equipmenttype" | "et" => Ok(Facet::EquipmentType),
            "pointclass" | "pc" => Ok(Facet::PointClass),
            "measurementcontroltype" | "mct" => Ok(Facet::MeasurementControlType),
            "service" | "medium" => Ok(Facet::Service),
            "modifier" => Ok(Facet::Modifier),
            _ => Err(format!("unknown facet {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    #[default]
    Equivalence,
    Subsumption,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Equivalence => "equivalence",
            Relation::Subsumption => "subsumption",
        }
    }
}

impl FromStr for Relation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "" | "equivalence" | "equivalent" | "=" => Ok(Relation::Equivalence),
            "subsumption" | "subsumed" | "<" => Ok(Relation::Subsumption),
            other => Err(format!("unknown relation {other:?}")),
        }
    }
}

/// A resolved alignment target.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum EntityRef {
    Haystack(Symbol),
    Brick(Iri),
}

impl fmt::Display for EntityRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EntityRef::Haystack(s) => write!(f, "^{s}"),
            EntityRef::Brick(i) => f.write_str(i.local_name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlignmentEntry {
    pub token: String,
    pub facet: Facet,
    pub ontology: OntologyId,
    /// `None` is a curated gap.
    pub target: Option<Vec<EntityRef>>,
    pub relation: Relation,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Resolution<'a> {
    Mapped(&'a AlignmentEntry),
    Gap(&'a AlignmentEntry),
    Unresolved,
}

impl Resolution<'_> {
    pub fn is_mapped(&self) -> bool {
        matches!(self, Resolution::Mapped(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlignmentError {
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error("{path}: {} invalid row(s):\n  {}", .errors.len(), .errors.join("\n  "))]
    Rows { path: String, errors: Vec<String> },
}

pub type Key = (String, Facet, OntologyId);

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AlignmentTable {
    entries: BTreeMap<Key, AlignmentEntry>,
}

impl AlignmentTable {
    pub fn new() -> AlignmentTable {
        AlignmentTable::default()
    }

    /// Add an entry; fails if its key is taken.
    pub fn insert(&mut self, entry: AlignmentEntry) -> Result<(), String> {
        let key: Key = (entry.token.to_lowercase(), entry.facet, entry.ontology);
        if self.entries.contains_key(&key) {
            return Err(format!("duplicate entry for token {:?} ({}, {})", entry.token, entry.facet, entry.ontology));
        }
        self.entries.insert(key, entry);
        Ok(())
    }

    pub fn get(&self, token: &str, facet: Facet, ontology: OntologyId) -> Option<&AlignmentEntry> {
        self.entries.get(&(token.to_lowercase(), facet, ontology))
    }

    pub fn resolve(&self, token: &str, facet: Facet, ontology: OntologyId) -> Resolution<'_> {
        match self.get(token, facet, ontology) {
            Some(e) if e.target.is_some() => Resolution::Mapped(e),
            Some(e) => Resolution::Gap(e),
            None => Resolution::Unresolved,
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = &AlignmentEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Union of two tables; any shared key is an error.
    pub fn merge(mut self, other: AlignmentTable) -> Result<AlignmentTable, Vec<String>> {
        let mut errors = Vec::new();
        for e in other.entries.into_values() {
            if let Err(msg) = self.insert(e) {
                errors.push(msg);
            }
        }
        if errors.is_empty() {
            Ok(self)
        } else {
            Err(errors)
        }
    }
}

#[derive(Debug, Deserialize)]
struct Row {
    token: String,
    facet: String,
    ontology: String,
    #[serde(default)]
    target: String,
    #[serde(default)]
    relation: String,
    #[serde(default)]
    note: String,
}

fn resolve_target(raw: &str, ontology: OntologyId, haystack: &HaystackNamespace, brick: &BrickSchema) -> Result<EntityRef, String> {
    match ontology {
        OntologyId::Haystack => {
            let name = raw.strip_prefix('^').unwrap_or(raw);
            let sym = Symbol::parse(name).map_err(|e| format!("target {raw:?}: {e}"))?;
            if haystack.contains(&sym) {
                Ok(EntityRef::Haystack(sym))
            } else {
                Err(format!("target {raw:?} is not a def"))
            }
        }
        OntologyId::Brick => {
            let iri = brick.expand(raw);
            if brick.is_entity(&iri) {
                Ok(EntityRef::Brick(iri))
            } else {
                Err(format!("target {raw:?} is not a Brick class or substance"))
            }
        }
    }
}

/// Parse an alignment CSV and check every target against the ontologies.
/// Either every row is valid and the whole table loads, or nothing does.
pub fn parse_alignment_csv(text: &str, path: &str, haystack: &HaystackNamespace, brick: &BrickSchema) -> Result<AlignmentTable, AlignmentError> {
    let file_err = |message: String| AlignmentError::File { path: path.to_string(), message };
    if text.trim().is_empty() {
        return Ok(AlignmentTable::new());
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| file_err(e.to_string()))?.clone();
    for col in ["token", "facet", "ontology", "target"] {
        if !headers.iter().any(|h| h == col) {
            return Err(file_err(format!("missing column {col:?}")));
        }
    }
    let mut table = AlignmentTable::new();
    let mut errors = Vec::new();
    let mut current_line;
    for rec in rdr.records() {
        let row: Row = match rec.and_then(|r| {
            let line = r.position().map_or(0, |p| p.line());
            r.deserialize(Some(&headers)).map(|row| (line, row))
        }) {
            Ok((line, r)) => {
                current_line = line;
                r
            }
            Err(e) => {
                errors.push(e.to_string());
                continue;
            }
        };
        let line = current_line;
        let mut problems = Vec::new();
        if row.token.is_empty() {
            problems.push("empty token".to_string());
        }
        let facet = row.facet.parse::<Facet>().map_err(|e| problems.push(e)).ok();
        let ontology = row.ontology.parse::<OntologyId>().map_err(|e| problems.push(e)).ok();
        let relation = row.relation.parse::<Relation>().map_err(|e| problems.push(e)).ok();
        let mut target = None;
        if let Some(ont) = ontology {
            if !row.target.is_empty() {
                let mut refs = Vec::new();
                for part in row.target.split('|').map(str::trim) {
                    match resolve_target(part, ont, haystack, brick) {
                        Ok(r) => refs.push(r),
                        Err(e) => problems.push(format!("token {:?}: {e}", row.token)),
                    }
                }
                target = Some(refs);
            }
        }
        if !problems.is_empty() {
            errors.extend(problems.into_iter().map(|p| format!("line {line}: {p}")));
            continue;
        }
        let entry = AlignmentEntry {
            token: row.token,
            facet: facet.expect("checked"),
            ontology: ontology.expect("checked"),
            target,
            relation: relation.expect("checked"),
            note: row.note,
        };
        if let Err(e) = table.insert(entry) {
            errors.push(format!("line {line}: {e}"));
        }
    }
    if errors.is_empty() {
        Ok(table)
    } else {
        Err(AlignmentError::Rows { path: path.to_string(), errors })
    }
}

pub fn load_alignment(path: &Path, haystack: &HaystackNamespace, brick: &BrickSchema) -> Result<AlignmentTable, AlignmentError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AlignmentError::File { path: path.display().to_string(), message: e.to_string() })?;
    parse_alignment_csv(&text, &path.display().to_string(), haystack, brick)
}

/// Load several tables into one; keys may not repeat across files.
pub fn load_alignments(paths: &[impl AsRef<Path>], haystack: &HaystackNamespace, brick: &BrickSchema) -> Result<AlignmentTable, AlignmentError> {
    let mut table = AlignmentTable::new();
    for p in paths {
        let next = load_alignment(p.as_ref(), haystack, brick)?;
        table = table
            .merge(next)
            .map_err(|errors| AlignmentError::Rows { path: p.as_ref().display().to_string(), errors })?;
    }
    Ok(table)
}
