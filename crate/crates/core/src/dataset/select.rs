use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::{Dataset, FacetTuple, PointType, System};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "kebab-case")]
pub enum RejectReason {
    Excluded,
    Duplicate { of: String },
    NoUniqueWord,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::Excluded => f.write_str("excluded"),
            RejectReason::Duplicate { of } => write!(f, "duplicate of {of}"),
            RejectReason::NoUniqueWord => f.write_str("no-unique-word"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rejection {
    pub point: PointType,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RepresentativeSet {
    pub selected: Vec<PointType>,
    pub rejected: Vec<Rejection>,
    pub target_systems: BTreeSet<System>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemSelection {
    pub system: System,
    pub selected: usize,
    pub rejected: usize,
}

impl RepresentativeSet {
    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    /// Selected and rejected counts per target system, in report order.
    pub fn per_system(&self) -> Vec<SystemSelection> {
        self.target_systems
            .iter()
            .map(|s| SystemSelection {
                system: *s,
                selected: self.selected.iter().filter(|p| p.system == *s).count(),
                rejected: self.rejected.iter().filter(|r| r.point.system == *s).count(),
            })
            .collect()
    }

    /// The selection as a dataset, keeping the associations of `source`.
    pub fn to_dataset(&self, source: &Dataset) -> Dataset {
        Dataset::new(self.selected.clone(), source.associations.clone())
            .unwrap_or_else(|_| Dataset::new(self.selected.clone(), Vec::new()).expect("no associations"))
    }
}

/// Pick the representative points of the target systems.
///
/// Points are scanned in name order (input order breaks ties). Within each
/// system a point is dropped if it is on the exclusion list, if its facet
/// tuple was already selected, or if every one of its words (compared
/// case-insensitively) already appears in a selected point.
pub fn select_representative(ds: &Dataset, target_systems: &BTreeSet<System>, exclusions: &[String]) -> RepresentativeSet {
    let mut warnings = Vec::new();
    if target_systems.is_empty() {
        warnings.push("no target systems given; nothing selected".to_string());
    }
    let excluded: BTreeSet<&str> = exclusions.iter().map(|s| s.trim()).collect();
    let mut order: Vec<&PointType> = ds.points.iter().filter(|p| target_systems.contains(&p.system)).collect();
    order.sort_by(|a, b| a.name.cmp(&b.name));

    let mut tuples: BTreeMap<(System, FacetTuple), String> = BTreeMap::new();
    let mut covered: BTreeMap<System, BTreeSet<String>> = BTreeMap::new();
    let mut selected = Vec::new();
    let mut rejected = Vec::new();
    for p in order {
        let key = (p.system, p.facet_tuple());
        let words = p.word_keys();
        let seen_words = covered.entry(p.system).or_default();
        let reason = if excluded.contains(p.name.as_str()) {
            Some(RejectReason::Excluded)
        } else if let Some(first) = tuples.get(&key) {
            Some(RejectReason::Duplicate { of: first.clone() })
        } else if words.is_subset(seen_words) {
            Some(RejectReason::NoUniqueWord)
        } else {
            None
        };
        match reason {
            Some(reason) => rejected.push(Rejection { point: p.clone(), reason }),
            None => {
                tuples.insert(key, p.name.clone());
                seen_words.extend(words);
                selected.push(p.clone());
            }
        }
    }
    if selected.is_empty() && !target_systems.is_empty() {
        warnings.push("representative set is empty".to_string());
    }
    RepresentativeSet { selected, rejected, target_systems: target_systems.clone(), warnings }
}
