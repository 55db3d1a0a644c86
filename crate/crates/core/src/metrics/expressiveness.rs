use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{pct_half_up, MetricsError};
use crate::alignment::OntologyId;
use crate::dataset::{Dataset, Mct, System};
use crate::model::{ClassLabel, EntityKind, HaystackNamespace, Symbol};
use crate::turtle::BrickSchema;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RelationshipKind {
    SensorLocation,
    LocationLocation,
    EquipmentLocation,
    SensorEquipment,
    EquipmentEquipment,
    LocationPersons,
    EquipmentName,
}

/// What sits at one end of a key relationship.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EndpointKind {
    Equipment,
    Point,
    Location,
    Measurable,
    Person,
    Name,
}

impl EndpointKind {
    pub fn entities() -> BTreeSet<EndpointKind> {
        EntityKind::ALL.iter().map(|k| EndpointKind::from(*k)).collect()
    }
}

impl From<EntityKind> for EndpointKind {
    fn from(k: EntityKind) -> Self {
        match k {
            EntityKind::Equipment => EndpointKind::Equipment,
            EntityKind::Point => EndpointKind::Point,
            EntityKind::Location => EndpointKind::Location,
            EntityKind::Measurable => EndpointKind::Measurable,
        }
    }
}

impl RelationshipKind {
    pub const ALL: [RelationshipKind; 7] = [
        RelationshipKind::SensorLocation,
        RelationshipKind::LocationLocation,
        RelationshipKind::EquipmentLocation,
        RelationshipKind::SensorEquipment,
        RelationshipKind::EquipmentEquipment,
        RelationshipKind::LocationPersons,
        RelationshipKind::EquipmentName,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            RelationshipKind::SensorLocation => "sensor-location",
            RelationshipKind::LocationLocation => "location-location",
            RelationshipKind::EquipmentLocation => "equipment-location",
            RelationshipKind::SensorEquipment => "sensor-equipment",
            RelationshipKind::EquipmentEquipment => "equipment-equipment",
            RelationshipKind::LocationPersons => "location-persons",
            RelationshipKind::EquipmentName => "equipment-name",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            RelationshipKind::SensorLocation => "Sensor ↔ Location",
            RelationshipKind::LocationLocation => "Location ↔ Location",
            RelationshipKind::EquipmentLocation => "Equipment ↔ Location",
            RelationshipKind::SensorEquipment => "Sensor ↔ Equipment",
            RelationshipKind::EquipmentEquipment => "Equipment ↔ Equipment",
            RelationshipKind::LocationPersons => "Location ↔ Persons",
            RelationshipKind::EquipmentName => "Equipment ↔ Name",
        }
    }

    pub fn endpoint_kinds(self) -> (EndpointKind, EndpointKind) {
        use EndpointKind::*;
        match self {
            RelationshipKind::SensorLocation => (Point, Location),
            RelationshipKind::LocationLocation => (Location, Location),
            RelationshipKind::EquipmentLocation => (Equipment, Location),
            RelationshipKind::SensorEquipment => (Point, Equipment),
            RelationshipKind::EquipmentEquipment => (Equipment, Equipment),
            RelationshipKind::LocationPersons => (Location, Person),
            RelationshipKind::EquipmentName => (Equipment, Name),
        }
    }
}

impl fmt::Display for RelationshipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for RelationshipKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphabetic()).collect::<String>().to_ascii_lowercase();
        RelationshipKind::ALL
            .into_iter()
            .find(|k| k.slug().replace('-', "") == key)
            .ok_or_else(|| format!("unknown relationship kind {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Air,
    Water,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Air => "air",
            Side::Water => "water",
            Side::NotApplicable => "n/a",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "air" => Ok(Side::Air),
            "water" => Ok(Side::Water),
            "n/a" | "na" | "" | "none" => Ok(Side::NotApplicable),
            other => Err(format!("unknown side {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct KeyRelationship {
    pub kind: RelationshipKind,
    pub system: System,
    pub side: Side,
    pub endpoints: (String, String),
    /// Set when the dataset only states the relationship from the second
    /// endpoint to the first.
    pub reversed: bool,
}

impl KeyRelationship {
    /// Endpoint kinds in traversal order.
    pub fn endpoint_kinds(&self) -> (EndpointKind, EndpointKind) {
        let (a, b) = self.kind.endpoint_kinds();
        if self.reversed {
            (b, a)
        } else {
            (a, b)
        }
    }

    pub fn reverse(&self) -> KeyRelationship {
        KeyRelationship {
            endpoints: (self.endpoints.1.clone(), self.endpoints.0.clone()),
            reversed: !self.reversed,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", content = "value", rename_all = "lowercase")]
pub enum Evidence {
    /// Some point belongs to the system.
    System,
    /// Some sensor-like (AI/DI) point belongs to the system.
    Sensor,
    /// The dataset associates the two endpoints.
    Association,
    /// Some point name in the system contains this word.
    Word(String),
}

impl FromStr for Evidence {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "system" => Ok(Evidence::System),
            "sensor" => Ok(Evidence::Sensor),
            "association" => Ok(Evidence::Association),
            _ => match s.split_once(':') {
                Some((w, word)) if w.eq_ignore_ascii_case("word") && !word.trim().is_empty() => Ok(Evidence::Word(word.trim().to_string())),
                _ => Err(format!("unknown evidence {s:?}")),
            },
        }
    }
}

/// One row of the key-relationship configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KeyRelationshipRow {
    pub kind: RelationshipKind,
    pub system: System,
    pub side: Side,
    pub endpoint_a: String,
    pub endpoint_b: String,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExcludedKey {
    pub decl: KeyRelationshipRow,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct KeyRelationshipSet {
    pub expressed: Vec<KeyRelationship>,
    pub excluded: Vec<ExcludedKey>,
}

#[derive(Debug, Deserialize)]
struct RawKeyRow {
    kind: String,
    system: String,
    side: String,
    endpoint_a: String,
    endpoint_b: String,
    evidence: String,
}

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes())
}

pub fn parse_key_relationships_csv(text: &str, path: &str) -> Result<Vec<KeyRelationshipRow>, MetricsError> {
    let mut out = Vec::new();
    let mut rdr = csv_reader(text);
    let headers = rdr.headers().map_err(|e| MetricsError::file(path, e))?.clone();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| MetricsError::file(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let row_err = |message: String| MetricsError::Row { path: path.to_string(), line, message };
        let row: RawKeyRow = rec.deserialize(Some(&headers)).map_err(|e| row_err(e.to_string()))?;
        out.push(KeyRelationshipRow {
            kind: row.kind.parse().map_err(row_err)?,
            system: row.system.parse().map_err(row_err)?,
            side: row.side.parse().map_err(row_err)?,
            endpoint_a: row.endpoint_a,
            endpoint_b: row.endpoint_b,
            evidence: row.evidence.parse().map_err(row_err)?,
        });
    }
    Ok(out)
}

pub fn load_key_relationships(path: &Path) -> Result<Vec<KeyRelationshipRow>, MetricsError> {
    let text = std::fs::read_to_string(path).map_err(|e| MetricsError::file(&path.display().to_string(), e))?;
    parse_key_relationships_csv(&text, &path.display().to_string())
}

fn eq_ci(a: &str, b: &str) -> bool {
    a.trim().eq_ignore_ascii_case(b.trim())
}

/// Keep the configured key relationships that the dataset gives evidence
/// for. The rest are returned as excluded, each with a reason.
pub fn derive_key_relationships(ds: &Dataset, decls: &[KeyRelationshipRow]) -> KeyRelationshipSet {
    let mut set = KeyRelationshipSet::default();
    let mut seen = BTreeSet::new();
    for decl in decls {
        let in_system = || ds.points.iter().filter(|p| p.system == decl.system);
        let mut reversed = false;
        let reason = if decl.kind == RelationshipKind::LocationPersons {
            Some("the dataset has no person concepts".to_string())
        } else if in_system().next().is_none() {
            Some(format!("no {} points in the dataset", decl.system.label()))
        } else {
            match &decl.evidence {
                Evidence::System => None,
                Evidence::Sensor => {
                    let sensor = in_system().any(|p| matches!(p.mct, Mct::AI | Mct::DI));
                    (!sensor).then(|| format!("no sensor points in {}", decl.system.label()))
                }
                Evidence::Association => {
                    let fwd = ds.associations.iter().any(|a| eq_ci(&a.parent, &decl.endpoint_a) && eq_ci(&a.child, &decl.endpoint_b));
                    let rev = ds.associations.iter().any(|a| eq_ci(&a.parent, &decl.endpoint_b) && eq_ci(&a.child, &decl.endpoint_a));
                    reversed = !fwd && rev;
                    (!fwd && !rev).then(|| format!("no association between {} and {}", decl.endpoint_a, decl.endpoint_b))
                }
                Evidence::Word(w) => {
                    let found = in_system().any(|p| p.words.iter().any(|x| eq_ci(x, w)));
                    (!found).then(|| format!("no {} point name contains {w:?}", decl.system.label()))
                }
            }
        };
        if let Some(reason) = reason {
            set.excluded.push(ExcludedKey { decl: decl.clone(), reason });
            continue;
        }
        let key = KeyRelationship {
            kind: decl.kind,
            system: decl.system,
            side: decl.side,
            endpoints: (decl.endpoint_a.clone(), decl.endpoint_b.clone()),
            reversed: false,
        };
        let key = if reversed { key.reverse() } else { key };
        if seen.insert((key.kind, key.system, key.side, key.endpoints.clone())) {
            set.expressed.push(key);
        }
    }
    set.expressed.sort();
    set
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Fwd,
    Rev,
}

impl Direction {
    pub fn flip(self) -> Direction {
        match self {
            Direction::Fwd => Direction::Rev,
            Direction::Rev => Direction::Fwd,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PathStep {
    pub relationship: String,
    pub direction: Direction,
}

impl fmt::Display for PathStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = match self.direction {
            Direction::Fwd => "fwd",
            Direction::Rev => "rev",
        };
        write!(f, "{}:{d}", self.relationship)
    }
}

impl FromStr for PathStep {
    type Err = String;

    /// `name:dir`, split on the last colon so prefixed names work.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (name, dir) = s.rsplit_once(':').ok_or_else(|| format!("path step {s:?} lacks a direction"))?;
        let direction = match dir.trim().to_ascii_lowercase().as_str() {
            "fwd" | "forward" | "->" => Direction::Fwd,
            "rev" | "reverse" | "<-" => Direction::Rev,
            other => return Err(format!("path step {s:?}: unknown direction {other:?}")),
        };
        let relationship = name.trim().to_string();
        if relationship.is_empty() {
            return Err(format!("path step {s:?} has no relationship"));
        }
        Ok(PathStep { relationship, direction })
    }
}

pub fn format_path(path: &[PathStep]) -> String {
    path.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(";")
}

/// Domain, range and inverse of a relationship, as endpoint kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelInfo {
    pub domain: BTreeSet<EndpointKind>,
    pub range: BTreeSet<EndpointKind>,
    pub inverse: Option<String>,
}

pub trait RelationshipVocabulary {
    fn ontology(&self) -> OntologyId;
    fn lookup(&self, name: &str) -> Option<RelInfo>;
}

fn haystack_kinds(ns: &HaystackNamespace, syms: &[Symbol]) -> BTreeSet<EndpointKind> {
    let mut out = BTreeSet::new();
    for s in syms {
        if s.as_str() == "entity" {
            return EndpointKind::entities();
        }
        let of = |anc: &str| ns.is_a(s, anc) || (!ns.contains(s) && s.parts().iter().any(|p| ns.is_a(p, anc)));
        if of("point") {
            out.insert(EndpointKind::Point);
        }
        if of("equip") {
            out.insert(EndpointKind::Equipment);
        }
        if of("space") || of("site") {
            out.insert(EndpointKind::Location);
        }
        if of("quantity") || of("substance") || of("phenomenon") {
            out.insert(EndpointKind::Measurable);
        }
    }
    if out.is_empty() {
        EndpointKind::entities()
    } else {
        out
    }
}

impl RelationshipVocabulary for HaystackNamespace {
    fn ontology(&self) -> OntologyId {
        OntologyId::Haystack
    }

    fn lookup(&self, name: &str) -> Option<RelInfo> {
        let name = name.trim().trim_start_matches('^');
        let def = self.get_str(name)?;
        let inverse = def.symbols_of("reciprocalOf").first().map(|s| s.to_string());
        let sym = &def.symbol;
        if sym.as_str() == "children" || self.is_a(sym, "relationship") {
            return Some(RelInfo { domain: EndpointKind::entities(), range: EndpointKind::entities(), inverse });
        }
        if self.is_a(sym, "ref") {
            return Some(RelInfo {
                domain: haystack_kinds(self, &def.symbols_of("tagOn")),
                range: haystack_kinds(self, &def.symbols_of("of")),
                inverse,
            });
        }
        if self.is_a(sym, "str") {
            return Some(RelInfo { domain: EndpointKind::entities(), range: [EndpointKind::Name].into(), inverse: None });
        }
        None
    }
}

fn brick_name(schema: &BrickSchema, iri: &crate::model::Iri) -> String {
    match iri.as_str().strip_prefix(schema.namespace.as_str()) {
        Some(local) => local.to_string(),
        None => iri.to_string(),
    }
}

impl RelationshipVocabulary for BrickSchema {
    fn ontology(&self) -> OntologyId {
        OntologyId::Brick
    }

    fn lookup(&self, name: &str) -> Option<RelInfo> {
        let iri = self.expand(name);
        if let Some(rel) = self.relationships.get(&iri) {
            let conv = |s: &BTreeSet<EntityKind>| s.iter().map(|k| EndpointKind::from(*k)).collect();
            return Some(RelInfo {
                domain: conv(&rel.domain_kinds),
                range: conv(&rel.range_kinds),
                inverse: rel.inverse.as_ref().map(|i| brick_name(self, i)),
            });
        }
        self.annotation_predicates
            .contains(&iri)
            .then(|| RelInfo { domain: EndpointKind::entities(), range: [EndpointKind::Name].into(), inverse: None })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationshipEntry {
    pub kind: RelationshipKind,
    pub system: System,
    pub side: Side,
    pub ontology: OntologyId,
    /// Empty for a curated non-mapping.
    pub path: Vec<PathStep>,
    pub note: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationshipTable {
    entries: BTreeMap<(RelationshipKind, System, Side, OntologyId), RelationshipEntry>,
}

impl RelationshipTable {
    pub fn get(&self, kind: RelationshipKind, system: System, side: Side, ont: OntologyId) -> Option<&RelationshipEntry> {
        self.entries.get(&(kind, system, side, ont))
    }

    pub fn entries(&self) -> impl Iterator<Item = &RelationshipEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn insert(&mut self, e: RelationshipEntry) -> Result<(), String> {
        let key = (e.kind, e.system, e.side, e.ontology);
        if self.entries.contains_key(&key) {
            return Err(format!("duplicate path for {} {} {} {}", e.kind, e.system.slug(), e.side, e.ontology));
        }
        self.entries.insert(key, e);
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
struct PathRow {
    kind: String,
    system: String,
    side: String,
    ontology: String,
    #[serde(default)]
    path: String,
    #[serde(default)]
    label_note: String,
}

/// Parse a relationship-alignment CSV. Every named relationship must exist
/// in the vocabulary of its row's ontology; otherwise nothing loads.
pub fn parse_relationship_csv(
    text: &str,
    path: &str,
    vocabularies: &[&dyn RelationshipVocabulary],
) -> Result<RelationshipTable, MetricsError> {
    let mut table = RelationshipTable::default();
    let mut errors = Vec::new();
    let mut rdr = csv_reader(text);
    let headers = rdr.headers().map_err(|e| MetricsError::file(path, e))?.clone();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| MetricsError::file(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let mut problems = Vec::new();
        let row: PathRow = match rec.deserialize(Some(&headers)) {
            Ok(r) => r,
            Err(e) => {
                errors.push(format!("line {line}: {e}"));
                continue;
            }
        };
        let kind = row.kind.parse::<RelationshipKind>().map_err(|e| problems.push(e)).ok();
        let system = row.system.parse::<System>().map_err(|e| problems.push(e)).ok();
        let side = row.side.parse::<Side>().map_err(|e| problems.push(e)).ok();
        let ontology = row.ontology.parse::<OntologyId>().map_err(|e| problems.push(e)).ok();
        let steps: Vec<PathStep> = row
            .path
            .split(';')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .filter_map(|s| s.parse::<PathStep>().map_err(|e| problems.push(e)).ok())
            .collect();
        if let Some(ont) = ontology {
            match vocabularies.iter().find(|v| v.ontology() == ont) {
                Some(vocab) => {
                    for s in &steps {
                        if vocab.lookup(&s.relationship).is_none() {
                            problems.push(format!("{} has no relationship {:?}", ont.label(), s.relationship));
                        }
                    }
                }
                None => problems.push(format!("{} is not loaded", ont.label())),
            }
        }
        if !problems.is_empty() {
            errors.extend(problems.into_iter().map(|p| format!("line {line}: {p}")));
            continue;
        }
        let entry = RelationshipEntry {
            kind: kind.expect("checked"),
            system: system.expect("checked"),
            side: side.expect("checked"),
            ontology: ontology.expect("checked"),
            path: steps,
            note: row.label_note,
        };
        if let Err(e) = table.insert(entry) {
            errors.push(format!("line {line}: {e}"));
        }
    }
    if errors.is_empty() {
        Ok(table)
    } else {
        Err(MetricsError::Rows { path: path.to_string(), errors })
    }
}

pub fn load_relationship_tables(
    paths: &[impl AsRef<Path>],
    vocabularies: &[&dyn RelationshipVocabulary],
) -> Result<RelationshipTable, MetricsError> {
    let mut table = RelationshipTable::default();
    for p in paths {
        let name = p.as_ref().display().to_string();
        let text = std::fs::read_to_string(p.as_ref()).map_err(|e| MetricsError::file(&name, e))?;
        let next = parse_relationship_csv(&text, &name, vocabularies)?;
        let errors: Vec<String> = next.entries.into_values().filter_map(|e| table.insert(e).err()).collect();
        if !errors.is_empty() {
            return Err(MetricsError::Rows { path: name, errors });
        }
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationshipMapping {
    pub key: KeyRelationship,
    pub ontology: OntologyId,
    pub path: Vec<PathStep>,
    pub label: ClassLabel,
    /// The reverse traversal, when every step has an inverse and it checks.
    pub inverse_path: Option<Vec<PathStep>>,
    pub reason: Option<String>,
}

/// Walk the path from `start`, checking each step's domain or range.
fn check_path(path: &[PathStep], vocab: &dyn RelationshipVocabulary, start: EndpointKind, end: EndpointKind) -> Result<(), String> {
    if path.is_empty() {
        return Err("no curated path".to_string());
    }
    let mut cur: BTreeSet<EndpointKind> = [start].into();
    for step in path {
        let info = vocab.lookup(&step.relationship).ok_or_else(|| format!("unknown relationship {:?}", step.relationship))?;
        let (from, to) = match step.direction {
            Direction::Fwd => (info.domain, info.range),
            Direction::Rev => (info.range, info.domain),
        };
        if cur.is_disjoint(&from) {
            return Err(format!("{step}: cannot start from {cur:?}"));
        }
        cur = to;
    }
    if cur.contains(&end) {
        Ok(())
    } else {
        Err(format!("path ends at {cur:?}, not {end:?}"))
    }
}

/// The same path walked from the other end. Steps with an inverse use it in
/// the same direction; the rest are traversed backwards.
pub fn reverse_path(path: &[PathStep], vocab: &dyn RelationshipVocabulary) -> Vec<PathStep> {
    path.iter()
        .rev()
        .map(|s| match vocab.lookup(&s.relationship).and_then(|i| i.inverse) {
            Some(inv) => PathStep { relationship: inv, direction: s.direction },
            None => PathStep { relationship: s.relationship.clone(), direction: s.direction.flip() },
        })
        .collect()
}

fn has_inverses(path: &[PathStep], vocab: &dyn RelationshipVocabulary) -> bool {
    path.iter().all(|s| vocab.lookup(&s.relationship).is_some_and(|i| i.inverse.is_some()))
}

pub fn map_key_relationship(k: &KeyRelationship, vocab: &dyn RelationshipVocabulary, table: &RelationshipTable) -> RelationshipMapping {
    let ont = vocab.ontology();
    let curated = table.get(k.kind, k.system, k.side, ont).map(|e| e.path.clone()).unwrap_or_default();
    let path = if k.reversed { reverse_path(&curated, vocab) } else { curated };
    let (start, end) = k.endpoint_kinds();
    let checked = check_path(&path, vocab, start, end);
    let inverse_path = match (&checked, ont) {
        (Ok(()), OntologyId::Brick) if has_inverses(&path, vocab) => {
            let inv = reverse_path(&path, vocab);
            check_path(&inv, vocab, end, start).is_ok().then_some(inv)
        }
        _ => None,
    };
    RelationshipMapping {
        key: k.clone(),
        ontology: ont,
        label: if checked.is_ok() { ClassLabel::Maps } else { ClassLabel::DoesNotMap },
        reason: checked.err(),
        path,
        inverse_path,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OntologyExpressiveness {
    pub ontology: OntologyId,
    pub mapped: usize,
    pub total: usize,
    pub pct: u32,
    pub rows: Vec<RelationshipMapping>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExpressivenessReport {
    pub ontologies: Vec<OntologyExpressiveness>,
}

impl ExpressivenessReport {
    pub fn get(&self, ont: OntologyId) -> Option<&OntologyExpressiveness> {
        self.ontologies.iter().find(|o| o.ontology == ont)
    }
}

pub fn evaluate_expressiveness(
    keys: &[KeyRelationship],
    per_ontology: &[(&dyn RelationshipVocabulary, &RelationshipTable)],
) -> Result<ExpressivenessReport, MetricsError> {
    if keys.is_empty() {
        return Err(MetricsError::NoKeyRelationships);
    }
    let ontologies = per_ontology
        .iter()
        .map(|(vocab, table)| {
            let rows: Vec<RelationshipMapping> = keys.iter().map(|k| map_key_relationship(k, *vocab, table)).collect();
            let mapped = rows.iter().filter(|r| r.label == ClassLabel::Maps).count();
            OntologyExpressiveness { ontology: vocab.ontology(), mapped, total: rows.len(), pct: pct_half_up(mapped as u64, rows.len() as u64), rows }
        })
        .collect();
    Ok(ExpressivenessReport { ontologies })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::tests::{tiny_brick, tiny_haystack};
    use crate::dataset::{EquipmentAssociation, PointType};

    const HEADER: &str = "kind,system,side,ontology,path,label_note\n";

    fn key(kind: RelationshipKind, system: System) -> KeyRelationship {
        KeyRelationship { kind, system, side: Side::NotApplicable, endpoints: ("a".into(), "b".into()), reversed: false }
    }

    #[test]
    fn brick_has_point_and_inverse() {
        let b = tiny_brick();
        let t = parse_relationship_csv(&format!("{HEADER}sensor-equipment,boiler,n/a,brick,hasPoint:rev,\n"), "r", &[&b]).unwrap();
        let m = map_key_relationship(&key(RelationshipKind::SensorEquipment, System::Boiler), &b, &t);
        assert_eq!(m.label, ClassLabel::Maps, "{:?}", m.reason);
        assert_eq!(format_path(m.inverse_path.as_ref().unwrap()), "isPointOf:rev");
        let back = map_key_relationship(&key(RelationshipKind::SensorEquipment, System::Boiler).reverse(), &b, &t);
        assert_eq!(back.label, ClassLabel::Maps);
        assert_eq!(format_path(&back.path), "isPointOf:rev");
    }

    #[test]
    fn two_step_loop_path() {
        let b = tiny_brick();
        let t = parse_relationship_csv(&format!("{HEADER}equipment-equipment,loop,water,brick,feeds:fwd;feeds:rev,\n"), "r", &[&b]).unwrap();
        let mut k = key(RelationshipKind::EquipmentEquipment, System::Loop);
        k.side = Side::Water;
        let m = map_key_relationship(&k, &b, &t);
        assert_eq!(m.label, ClassLabel::Maps);
        assert_eq!(m.path.len(), 2);
        assert_eq!(format_path(m.inverse_path.as_ref().unwrap()), "isFedBy:rev;isFedBy:fwd");
    }

    #[test]
    fn missing_path_and_kind_mismatch() {
        let b = tiny_brick();
        let t = parse_relationship_csv(&format!("{HEADER}sensor-location,ahu,air,brick,hasPoint:fwd,\n"), "r", &[&b]).unwrap();
        let mut k = key(RelationshipKind::SensorLocation, System::Ahu);
        k.side = Side::Air;
        let m = map_key_relationship(&k, &b, &t);
        assert_eq!(m.label, ClassLabel::DoesNotMap);
        let m = map_key_relationship(&key(RelationshipKind::EquipmentEquipment, System::Chiller), &b, &t);
        assert_eq!(m.reason.as_deref(), Some("no curated path"));
    }

    #[test]
    fn unknown_relationship_is_load_error() {
        let b = tiny_brick();
        let h = tiny_haystack();
        let err = parse_relationship_csv(&format!("{HEADER}sensor-equipment,ahu,air,brick,hasPointy:fwd,\n"), "r", &[&b, &h]).unwrap_err();
        assert!(err.to_string().contains("hasPointy"));
        assert!(parse_relationship_csv(&format!("{HEADER}sensor-equipment,ahu,air,haystack,ahu:fwd,\n"), "r", &[&b, &h]).is_err());
    }

    #[test]
    fn name_endpoint() {
        let b = tiny_brick();
        let h = tiny_haystack();
        let t = parse_relationship_csv(
            &format!("{HEADER}equipment-name,ahu,n/a,brick,rdfs:label:fwd,\nequipment-name,ahu,n/a,haystack,dis:fwd,\n"),
            "r",
            &[&b, &h],
        )
        .unwrap();
        let k = key(RelationshipKind::EquipmentName, System::Ahu);
        assert_eq!(map_key_relationship(&k, &b, &t).label, ClassLabel::Maps);
        assert_eq!(map_key_relationship(&k, &h, &t).label, ClassLabel::Maps);
    }

    #[test]
    fn percentages_and_empty() {
        let b = tiny_brick();
        let t = parse_relationship_csv(&format!("{HEADER}sensor-equipment,boiler,n/a,brick,hasPoint:rev,\n"), "r", &[&b]).unwrap();
        let keys = vec![key(RelationshipKind::SensorEquipment, System::Boiler), key(RelationshipKind::EquipmentEquipment, System::Boiler)];
        let rep = evaluate_expressiveness(&keys, &[(&b, &t)]).unwrap();
        let o = rep.get(OntologyId::Brick).unwrap();
        assert_eq!((o.mapped, o.total, o.pct), (1, 2, 50));
        assert!(matches!(evaluate_expressiveness(&[], &[(&b, &t)]), Err(MetricsError::NoKeyRelationships)));
    }

    fn decl(kind: RelationshipKind, system: System, a: &str, b: &str, evidence: Evidence) -> KeyRelationshipRow {
        KeyRelationshipRow { kind, system, side: Side::NotApplicable, endpoint_a: a.into(), endpoint_b: b.into(), evidence }
    }

    #[test]
    fn derivation() {
        let pts = vec![
            PointType::new("BoilerTemp", System::Boiler, "Boiler", None, "Temperature", Mct::AI, None).unwrap(),
            PointType::new("ChillerCmd", System::Chiller, "Chiller", Some("Compressor"), "Command", Mct::DO, None).unwrap(),
        ];
        let ds = Dataset::new(pts, vec![EquipmentAssociation { parent: "Chiller".into(), child: "Compressor".into() }]).unwrap();
        let decls = vec![
            decl(RelationshipKind::SensorEquipment, System::Boiler, "Sensor", "Boiler", Evidence::Sensor),
            decl(RelationshipKind::SensorEquipment, System::Chiller, "Sensor", "Chiller", Evidence::Sensor),
            decl(RelationshipKind::EquipmentEquipment, System::Chiller, "Compressor", "Chiller", Evidence::Association),
            decl(RelationshipKind::LocationPersons, System::Boiler, "Room", "Person", Evidence::System),
            decl(RelationshipKind::EquipmentName, System::Ahu, "AHU", "Name", Evidence::System),
            decl(RelationshipKind::EquipmentName, System::Chiller, "Chiller", "Name", Evidence::Word("cmd".into())),
        ];
        let set = derive_key_relationships(&ds, &decls);
        assert_eq!(set.expressed.len(), 3);
        assert_eq!(set.excluded.len(), 3);
        let ee = set.expressed.iter().find(|k| k.kind == RelationshipKind::EquipmentEquipment).unwrap();
        assert!(ee.reversed);
        assert_eq!(ee.endpoints, ("Chiller".to_string(), "Compressor".to_string()));

        let empty = Dataset::new(vec![], vec![]).unwrap();
        assert!(derive_key_relationships(&empty, &decls).expressed.is_empty());
        let only = derive_key_relationships(&ds, &decls[..1]);
        assert_eq!(only.expressed.len(), 1);
    }

    #[test]
    fn step_parsing() {
        let s: PathStep = "brick:feeds:fwd".parse().unwrap();
        assert_eq!(s.relationship, "brick:feeds");
        assert!("feeds".parse::<PathStep>().is_err());
        assert!("feeds:up".parse::<PathStep>().is_err());
        for k in RelationshipKind::ALL {
            assert_eq!(k.slug().parse::<RelationshipKind>().unwrap(), k);
        }
    }
}
