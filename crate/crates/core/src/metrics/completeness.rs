use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::facets::{decision_rule, resolve_facets, FacetVector, GapConcept, GapType, UnresolvedToken};
use super::{pct_half_up, significance, Significance};
use crate::alignment::{AlignmentTable, OntologyId};
use crate::dataset::{PointType, RepresentativeSet, System};
use crate::model::ClassLabel;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub point: PointType,
    pub ontology: OntologyId,
    pub label: ClassLabel,
    pub vector: FacetVector,
    pub gaps: Vec<GapConcept>,
}

pub fn classify(p: &PointType, table: &AlignmentTable, ont: OntologyId) -> (ClassificationResult, Vec<UnresolvedToken>) {
    let r = resolve_facets(p, table, ont);
    let result = ClassificationResult {
        point: p.clone(),
        ontology: ont,
        label: decision_rule(&r.vector),
        gaps: r.vector.gaps(),
        vector: r.vector,
    };
    (result, r.unresolved)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GapRecord {
    pub gap_type: GapType,
    pub concept: String,
    pub classification: ClassLabel,
    /// Distinct point types showing the gap in this classification.
    pub count: usize,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessRow {
    /// `None` for the total row.
    pub system: Option<System>,
    pub selected: usize,
    pub maps: usize,
    pub partially_maps: usize,
    pub does_not_map: usize,
    pub pct_maps: u32,
    pub pct_maps_or_partial: u32,
}

impl CompletenessRow {
    fn new(system: Option<System>, labels: &[ClassLabel]) -> CompletenessRow {
        let count = |l: ClassLabel| labels.iter().filter(|x| **x == l).count();
        let (maps, partial, dnm) = (count(ClassLabel::Maps), count(ClassLabel::PartiallyMaps), count(ClassLabel::DoesNotMap));
        let n = labels.len();
        CompletenessRow {
            system,
            selected: n,
            maps,
            partially_maps: partial,
            does_not_map: dnm,
            pct_maps: pct_half_up(maps as u64, n as u64),
            pct_maps_or_partial: pct_half_up((maps + partial) as u64, n as u64),
        }
    }

    pub fn label(&self) -> &'static str {
        self.system.map_or("Total", System::label)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnresolvedCount {
    #[serde(flatten)]
    pub token: UnresolvedToken,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompletenessReport {
    pub ontology: OntologyId,
    pub set_size: usize,
    pub rows: Vec<CompletenessRow>,
    pub gaps: Vec<GapRecord>,
    pub results: Vec<ClassificationResult>,
    /// Curation to-do list: tokens that had no alignment entry.
    pub unresolved: Vec<UnresolvedCount>,
    pub warnings: Vec<String>,
}

impl CompletenessReport {
    pub fn total(&self) -> Option<&CompletenessRow> {
        self.rows.iter().find(|r| r.system.is_none())
    }

    pub fn significant_gaps(&self) -> impl Iterator<Item = &GapRecord> {
        self.gaps.iter().filter(|g| g.significant)
    }

    pub fn insignificant_gaps(&self) -> impl Iterator<Item = &GapRecord> {
        self.gaps.iter().filter(|g| !g.significant)
    }
}

/// Report order for gap rows, laid out like a gap table: gap type by name,
/// significant rows first, Does Not Map before Partially Maps, then
/// ascending count and concept name.
pub fn gap_order(a: &GapRecord, b: &GapRecord) -> std::cmp::Ordering {
    fn key(g: &GapRecord) -> (&'static str, bool, std::cmp::Reverse<ClassLabel>, usize, &str) {
        (g.gap_type.as_str(), !g.significant, std::cmp::Reverse(g.classification), g.count, &g.concept)
    }
    key(a).cmp(&key(b))
}

/// Classify every selected point and aggregate per-system rates and gaps.
pub fn evaluate_completeness(rs: &RepresentativeSet, table: &AlignmentTable, ont: OntologyId) -> CompletenessReport {
    let mut warnings = Vec::new();
    let classified: Vec<(ClassificationResult, Vec<UnresolvedToken>)> = rs.selected.iter().map(|p| classify(p, table, ont)).collect();
    let set_size = classified.len();

    let mut rows = Vec::new();
    for system in &rs.target_systems {
        let labels: Vec<ClassLabel> = classified.iter().filter(|(r, _)| r.point.system == *system).map(|(r, _)| r.label).collect();
        if labels.is_empty() {
            warnings.push(format!("no selected points for {}", system.label()));
            continue;
        }
        rows.push(CompletenessRow::new(Some(*system), &labels));
    }
    if set_size == 0 {
        warnings.push("representative set is empty; no completeness rows".to_string());
    } else {
        let labels: Vec<ClassLabel> = classified.iter().map(|(r, _)| r.label).collect();
        rows.push(CompletenessRow::new(None, &labels));
    }

    let mut by_gap: BTreeMap<(GapType, String, ClassLabel), BTreeSet<usize>> = BTreeMap::new();
    let mut todo: BTreeMap<UnresolvedToken, BTreeSet<usize>> = BTreeMap::new();
    for (i, (r, unresolved)) in classified.iter().enumerate() {
        for g in &r.gaps {
            by_gap.entry((g.gap_type, g.concept.clone(), r.label)).or_default().insert(i);
        }
        for u in unresolved {
            todo.entry(u.clone()).or_default().insert(i);
        }
    }
    let mut gaps: Vec<GapRecord> = by_gap
        .into_iter()
        .map(|((gap_type, concept, classification), pts)| GapRecord {
            gap_type,
            concept,
            classification,
            count: pts.len(),
            significant: significance(pts.len(), set_size) == Ok(Significance::Significant),
        })
        .collect();
    gaps.sort_by(gap_order);
    if !todo.is_empty() {
        warnings.push(format!("{} token(s) have no {} alignment entry", todo.len(), ont.label()));
    }
    let unresolved = todo.into_iter().map(|(token, pts)| UnresolvedCount { token, points: pts.len() }).collect();

    CompletenessReport {
        ontology: ont,
        set_size,
        rows,
        gaps,
        results: classified.into_iter().map(|(r, _)| r).collect(),
        unresolved,
        warnings,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alignment::{AlignmentEntry, EntityRef, Facet, Relation};
    use crate::dataset::{select_representative, Dataset, Mct};
    use crate::model::Symbol;

    fn table(gaps: &[(&str, Facet)], mapped: &[(&str, Facet)]) -> AlignmentTable {
        let mut t = AlignmentTable::new();
        for (tok, f, m) in gaps.iter().map(|(a, b)| (a, b, false)).chain(mapped.iter().map(|(a, b)| (a, b, true))) {
            t.insert(AlignmentEntry {
                token: tok.to_string(),
                facet: *f,
                ontology: OntologyId::Brick,
                target: m.then(|| vec![EntityRef::Haystack(Symbol::parse("x").unwrap())]),
                relation: Relation::Equivalence,
                note: String::new(),
            })
            .unwrap();
        }
        t
    }

    #[test]
    fn rows_and_gaps() {
        let pts = vec![
            PointType::new("SupplyTemp", System::Ahu, "AHU", None, "Temperature", Mct::AI, Some("Air")).unwrap(),
            PointType::new("DamperPos", System::Ahu, "AHU", None, "Position", Mct::AO, Some("Air")).unwrap(),
            PointType::new("ValvePos", System::Ahu, "AHU", None, "Position", Mct::AO, Some("Water")).unwrap(),
            PointType::new("BoilerTemp", System::Boiler, "Boiler", None, "Temperature", Mct::AI, Some("Glycol")).unwrap(),
        ];
        let ds = Dataset::new(pts, vec![]).unwrap();
        let rs = select_representative(&ds, &[System::Ahu, System::Boiler].into_iter().collect(), &[]);
        assert_eq!(rs.len(), 4);
        let t = table(
            &[("Position", Facet::PointClass), ("Glycol", Facet::Service)],
            &[
                ("AHU", Facet::EquipmentClass),
                ("Boiler", Facet::EquipmentClass),
                ("Temperature", Facet::PointClass),
                ("AI", Facet::MeasurementControlType),
                ("AO", Facet::MeasurementControlType),
                ("Air", Facet::Service),
                ("Water", Facet::Service),
            ],
        );
        let rep = evaluate_completeness(&rs, &t, OntologyId::Brick);
        assert_eq!(rep.rows.len(), 3);
        let ahu = &rep.rows[0];
        assert_eq!((ahu.selected, ahu.maps, ahu.partially_maps, ahu.pct_maps, ahu.pct_maps_or_partial), (3, 1, 0, 33, 33));
        let boiler = &rep.rows[1];
        assert_eq!((boiler.maps, boiler.partially_maps, boiler.pct_maps_or_partial), (0, 1, 100));
        assert_eq!(rep.total().unwrap().pct_maps, 25);
        assert_eq!(rep.gaps.len(), 2);
        assert_eq!(rep.gaps[0].concept, "Position");
        assert_eq!(rep.gaps[0].count, 2);
        assert_eq!(rep.gaps[0].classification, ClassLabel::DoesNotMap);
        assert_eq!(rep.gaps[1].gap_type, GapType::Medium);
        assert_eq!(rep.gaps[1].classification, ClassLabel::PartiallyMaps);
        assert!(rep.unresolved.is_empty());
    }

    #[test]
    fn empty_set_warns() {
        let ds = Dataset::new(vec![], vec![]).unwrap();
        let rs = select_representative(&ds, &[System::Ahu].into_iter().collect(), &[]);
        let rep = evaluate_completeness(&rs, &AlignmentTable::new(), OntologyId::Haystack);
        assert!(rep.rows.is_empty());
        assert!(!rep.warnings.is_empty());
    }
}
