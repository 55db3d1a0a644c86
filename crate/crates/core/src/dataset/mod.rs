//! Point-type datasets: loading, name tokenization and representative-set
//! selection.

mod select;
mod tokenize;

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use select::{select_representative, RejectReason, Rejection, RepresentativeSet, SystemSelection};
pub use tokenize::tokenize_point_name;

/// Columns of the dataset CSV, in their documented order.
pub const CSV_COLUMNS: [&str; 7] = ["name", "system", "equipment_class", "equipment_type", "point_class", "mct", "service"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error("point name is empty")]
    EmptyName,
    #[error("point name {0:?} contains no words")]
    NoWords(String),
    #[error("{path}: {message}")]
    File { path: String, message: String },
    #[error("{path}:{line}: {message}")]
    Row { path: String, line: u64, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum System {
    #[serde(rename = "AHU")]
    Ahu,
    Chiller,
    Boiler,
    Loop,
    TerminalUnit,
    Other,
}

impl System {
    pub const ALL: [System; 6] = [System::Ahu, System::Chiller, System::Boiler, System::Loop, System::TerminalUnit, System::Other];

    /// Name used in report rows.
    pub fn label(self) -> &'static str {
        match self {
            System::Ahu => "AHU",
            System::Chiller => "Chiller",
            System::Boiler => "Boiler",
            System::Loop => "Loop",
            System::TerminalUnit => "Terminal Units",
            System::Other => "Other",
        }
    }

    /// Name used on the command line and in config files.
    pub fn slug(self) -> &'static str {
        match self {
            System::Ahu => "ahu",
            System::Chiller => "chiller",
            System::Boiler => "boiler",
            System::Loop => "loop",
            System::TerminalUnit => "terminal_unit",
            System::Other => "other",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for System {
    type Err = String;
    fn from_str(s: &str) -> Result<System, String> {
        let key: String = s.chars().filter(|c| c.is_alphanumeric()).collect::<String>().to_lowercase();
        Ok(match key.as_str() {
            "ahu" | "airhandler" | "airhandlingunit" => System::Ahu,
            "chiller" | "chillers" => System::Chiller,
            "boiler" | "boilers" => System::Boiler,
            "loop" | "loops" => System::Loop,
            "terminalunit" | "terminalunits" | "tu" => System::TerminalUnit,
            "other" => System::Other,
            _ => return Err(format!("unknown system {s:?}")),
        })
    }
}

/// Measurement/control type of a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mct {
    AI,
    AO,
    DI,
    DO,
    #[serde(rename = "none")]
    None,
}

impl Mct {
    pub fn as_str(self) -> &'static str {
        match self {
            Mct::AI => "AI",
            Mct::AO => "AO",
            Mct::DI => "DI",
            Mct::DO => "DO",
            Mct::None => "none",
        }
    }
}

impl FromStr for Mct {
    type Err = String;
    fn from_str(s: &str) -> Result<Mct, String> {
        Ok(match s.trim().to_ascii_uppercase().as_str() {
            "AI" => Mct::AI,
            "AO" => Mct::AO,
            "DI" => Mct::DI,
            "DO" => Mct::DO,
            "NONE" | "" => Mct::None,
            _ => return Err(format!("unknown measurement/control type {s:?} (expected AI, AO, DI, DO or none)")),
        })
    }
}

impl fmt::Display for Mct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PointType {
    pub name: String,
    pub system: System,
    pub equipment_class: String,
    pub equipment_type: Option<String>,
    pub point_class: String,
    pub mct: Mct,
    pub service: Option<String>,
    pub words: Vec<String>,
}

/// The facet values that identify a point type for de-duplication.
pub type FacetTuple = (String, Option<String>, String, Mct, Option<String>);

impl PointType {
    pub fn new(
        name: &str,
        system: System,
        equipment_class: &str,
        equipment_type: Option<&str>,
        point_class: &str,
        mct: Mct,
        service: Option<&str>,
    ) -> Result<PointType, DatasetError> {
        let words = tokenize_point_name(name)?;
        Ok(PointType {
            name: name.to_string(),
            system,
            equipment_class: equipment_class.to_string(),
            equipment_type: equipment_type.map(String::from),
            point_class: point_class.to_string(),
            mct,
            service: service.map(String::from),
            words,
        })
    }

    pub fn facet_tuple(&self) -> FacetTuple {
        (
            self.equipment_class.clone(),
            self.equipment_type.clone(),
            self.point_class.clone(),
            self.mct,
            self.service.clone(),
        )
    }

    /// Lowercased words, for coverage checks.
    pub fn word_keys(&self) -> BTreeSet<String> {
        self.words.iter().map(|w| w.to_lowercase()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquipmentAssociation {
    pub parent: String,
    pub child: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    pub points: Vec<PointType>,
    pub associations: Vec<EquipmentAssociation>,
    pub equipment_classes: BTreeSet<String>,
    pub equipment_types: BTreeSet<String>,
    pub point_classes: BTreeSet<String>,
    pub services: BTreeSet<String>,
}

impl Dataset {
    /// Derive vocabularies and check that associations name known equipment.
    pub fn new(points: Vec<PointType>, associations: Vec<EquipmentAssociation>) -> Result<Dataset, DatasetError> {
        let equipment_classes: BTreeSet<String> = points.iter().map(|p| p.equipment_class.clone()).collect();
        let equipment_types: BTreeSet<String> = points.iter().filter_map(|p| p.equipment_type.clone()).collect();
        let point_classes = points.iter().map(|p| p.point_class.clone()).collect();
        let services = points.iter().filter_map(|p| p.service.clone()).collect();
        for a in &associations {
            for side in [&a.parent, &a.child] {
                if !equipment_classes.contains(side) && !equipment_types.contains(side) {
                    return Err(DatasetError::File {
                        path: "<associations>".into(),
                        message: format!("association {} -> {} names unknown equipment {side:?}", a.parent, a.child),
                    });
                }
            }
        }
        Ok(Dataset { points, associations, equipment_classes, equipment_types, point_classes, services })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Points per system, in report order.
    pub fn system_counts(&self) -> Vec<(System, usize)> {
        System::ALL
            .iter()
            .map(|s| (*s, self.points.iter().filter(|p| p.system == *s).count()))
            .filter(|(_, n)| *n > 0)
            .collect()
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct RawPoint {
    name: String,
    system: String,
    equipment_class: String,
    #[serde(default)]
    equipment_type: Option<String>,
    point_class: String,
    #[serde(default)]
    mct: Option<String>,
    #[serde(default)]
    service: Option<String>,
}

#[derive(Debug, Deserialize)]
struct RawDataset {
    points: Vec<RawPoint>,
    #[serde(default)]
    associations: Vec<EquipmentAssociation>,
}

fn blank_to_none(v: Option<String>) -> Option<String> {
    v.map(|s| s.trim().to_string()).filter(|s| !s.is_empty())
}

fn build_point(raw: RawPoint) -> Result<PointType, String> {
    let name = raw.name.trim();
    let system: System = raw.system.parse()?;
    let mct: Mct = raw.mct.as_deref().unwrap_or("").parse()?;
    for (field, v) in [("equipment_class", &raw.equipment_class), ("point_class", &raw.point_class)] {
        if v.trim().is_empty() {
            return Err(format!("{field} is required"));
        }
    }
    PointType::new(
        name,
        system,
        raw.equipment_class.trim(),
        blank_to_none(raw.equipment_type).as_deref(),
        raw.point_class.trim(),
        mct,
        blank_to_none(raw.service).as_deref(),
    )
    .map_err(|e| e.to_string())
}

/// Load a dataset from `.csv` or `.json` (chosen by extension).
pub fn load_dataset(path: &Path) -> Result<Dataset, DatasetError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| DatasetError::File { path: path.display().to_string(), message: e.to_string() })?;
    let is_json = path.extension().is_some_and(|x| x.eq_ignore_ascii_case("json"));
    if is_json {
        parse_dataset_json(&text, &path.display().to_string())
    } else {
        parse_dataset_csv(&text, &path.display().to_string())
    }
}

pub fn parse_dataset_csv(text: &str, path: &str) -> Result<Dataset, DatasetError> {
    let file_err = |message: String| DatasetError::File { path: path.to_string(), message };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::Headers).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| file_err(e.to_string()))?.clone();
    let missing: Vec<&str> = CSV_COLUMNS.iter().copied().filter(|c| !headers.iter().any(|h| h == *c)).collect();
    if !missing.is_empty() {
        return Err(file_err(format!("missing required column(s): {}", missing.join(", "))));
    }
    let mut points = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| file_err(e.to_string()))?;
        let line = rec.position().map(|p| p.line()).unwrap_or(0);
        let raw: RawPoint = rec
            .deserialize(Some(&headers))
            .map_err(|e| DatasetError::Row { path: path.to_string(), line, message: e.to_string() })?;
        let p = build_point(raw).map_err(|message| DatasetError::Row { path: path.to_string(), line, message })?;
        points.push(p);
    }
    Dataset::new(points, Vec::new()).map_err(|e| relocate(e, path))
}

pub fn parse_dataset_json(text: &str, path: &str) -> Result<Dataset, DatasetError> {
    let raw: RawDataset =
        serde_json::from_str(text).map_err(|e| DatasetError::File { path: path.to_string(), message: e.to_string() })?;
    let mut points = Vec::new();
    for (k, rp) in raw.points.into_iter().enumerate() {
        let p = build_point(rp).map_err(|message| DatasetError::Row {
            path: path.to_string(),
            line: k as u64 + 1,
            message: format!("point #{}: {message}", k + 1),
        })?;
        points.push(p);
    }
    Dataset::new(points, raw.associations).map_err(|e| relocate(e, path))
}

fn relocate(e: DatasetError, path: &str) -> DatasetError {
    match e {
        DatasetError::File { message, .. } => DatasetError::File { path: path.to_string(), message },
        other => other,
    }
}

/// Load `parent,child` association rows.
pub fn load_associations(path: &Path) -> Result<Vec<EquipmentAssociation>, DatasetError> {
    let file_err = |message: String| DatasetError::File { path: path.display().to_string(), message };
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(|e| file_err(e.to_string()))?;
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        out.push(rec.map_err(|e: csv::Error| file_err(e.to_string()))?);
    }
    Ok(out)
}

/// Write a dataset back as JSON in the documented layout.
pub fn dataset_to_json(ds: &Dataset) -> serde_json::Value {
    let points: Vec<RawPoint> = ds
        .points
        .iter()
        .map(|p| RawPoint {
            name: p.name.clone(),
            system: p.system.slug().to_string(),
            equipment_class: p.equipment_class.clone(),
            equipment_type: p.equipment_type.clone(),
            point_class: p.point_class.clone(),
            mct: Some(p.mct.as_str().to_string()),
            service: p.service.clone(),
        })
        .collect();
    serde_json::json!({ "points": points, "associations": ds.associations })
}
