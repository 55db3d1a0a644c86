use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::alignment::{AlignmentTable, Facet, OntologyId, Resolution};
use crate::dataset::PointType;
use crate::model::ClassLabel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GapType {
    Measure,
    Equipment,
    Medium,
    Concept,
}

impl GapType {
    pub const ALL: [GapType; 4] = [GapType::Measure, GapType::Equipment, GapType::Medium, GapType::Concept];

    pub fn for_facet(facet: Facet) -> GapType {
        match facet {
            Facet::PointClass => GapType::Measure,
            Facet::EquipmentClass | Facet::EquipmentType => GapType::Equipment,
            Facet::Service => GapType::Medium,
            Facet::MeasurementControlType | Facet::Modifier => GapType::Concept,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GapType::Measure => "measure",
            GapType::Equipment => "equipment",
            GapType::Medium => "medium",
            GapType::Concept => "concept",
        }
    }
}

impl fmt::Display for GapType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GapConcept {
    pub gap_type: GapType,
    pub concept: String,
    pub facet: Facet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", content = "gaps", rename_all = "kebab-case")]
pub enum FacetOutcome {
    Mapped,
    Gap(Vec<GapConcept>),
    NotApplicable,
}

impl FacetOutcome {
    pub fn is_gap(&self) -> bool {
        matches!(self, FacetOutcome::Gap(_))
    }

    pub fn is_mapped(&self) -> bool {
        matches!(self, FacetOutcome::Mapped)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FacetVector {
    pub equipment_class: FacetOutcome,
    pub point_class: FacetOutcome,
    pub equipment_type: FacetOutcome,
    pub measurement_control_type: FacetOutcome,
    pub service: FacetOutcome,
}

impl FacetVector {
    pub fn all_mapped() -> FacetVector {
        FacetVector {
            equipment_class: FacetOutcome::Mapped,
            point_class: FacetOutcome::Mapped,
            equipment_type: FacetOutcome::Mapped,
            measurement_control_type: FacetOutcome::Mapped,
            service: FacetOutcome::Mapped,
        }
    }

    /// Outcomes in the fixed order EC, PC, ET, MCT, service.
    pub fn outcomes(&self) -> [&FacetOutcome; 5] {
        [&self.equipment_class, &self.point_class, &self.equipment_type, &self.measurement_control_type, &self.service]
    }

    pub fn outcomes_mut(&mut self) -> [&mut FacetOutcome; 5] {
        [
            &mut self.equipment_class,
            &mut self.point_class,
            &mut self.equipment_type,
            &mut self.measurement_control_type,
            &mut self.service,
        ]
    }

    pub fn gap_count(&self) -> usize {
        self.outcomes().iter().filter(|o| o.is_gap()).count()
    }

    /// Every gap concept in the vector, deduplicated.
    pub fn gaps(&self) -> Vec<GapConcept> {
        let set: BTreeSet<GapConcept> = self
            .outcomes()
            .iter()
            .flat_map(|o| match o {
                FacetOutcome::Gap(g) => g.clone(),
                _ => Vec::new(),
            })
            .collect();
        set.into_iter().collect()
    }
}

/// The three-way classification.
///
/// Maps when no facet is a gap. PartiallyMaps when equipment class and
/// point class are mapped and exactly one of equipment type, measurement
/// type and service is a gap. Everything else does not map.
pub fn decision_rule(v: &FacetVector) -> ClassLabel {
    if v.gap_count() == 0 {
        return ClassLabel::Maps;
    }
    let minor = [&v.equipment_type, &v.measurement_control_type, &v.service].iter().filter(|o| o.is_gap()).count();
    if v.equipment_class.is_mapped() && v.point_class.is_mapped() && minor == 1 {
        ClassLabel::PartiallyMaps
    } else {
        ClassLabel::DoesNotMap
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct UnresolvedToken {
    pub facet: Facet,
    pub token: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FacetResolution {
    pub vector: FacetVector,
    /// Tokens with no curated entry; they count as gaps.
    pub unresolved: Vec<UnresolvedToken>,
}

fn resolve_one(table: &AlignmentTable, token: &str, facet: Facet, ont: OntologyId, todo: &mut Vec<UnresolvedToken>) -> FacetOutcome {
    let gap = || vec![GapConcept { gap_type: GapType::for_facet(facet), concept: token.to_string(), facet }];
    match table.resolve(token, facet, ont) {
        Resolution::Mapped(_) => FacetOutcome::Mapped,
        Resolution::Gap(_) => FacetOutcome::Gap(gap()),
        Resolution::Unresolved => {
            todo.push(UnresolvedToken { facet, token: token.to_string() });
            FacetOutcome::Gap(gap())
        }
    }
}

/// Resolve the five facets of a point through the alignment table.
///
/// Name words with a curated modifier gap become `concept` gaps in the
/// measurement/control type slot, next to the other concept facet. Modifier
/// words without an entry are ignored.
pub fn resolve_facets(p: &PointType, table: &AlignmentTable, ont: OntologyId) -> FacetResolution {
    let mut todo = Vec::new();
    let equipment_class = resolve_one(table, &p.equipment_class, Facet::EquipmentClass, ont, &mut todo);
    let equipment_type = match &p.equipment_type {
        Some(t) => resolve_one(table, t, Facet::EquipmentType, ont, &mut todo),
        None => FacetOutcome::NotApplicable,
    };
    let point_class = resolve_one(table, &p.point_class, Facet::PointClass, ont, &mut todo);
    let mut measurement_control_type = resolve_one(table, p.mct.as_str(), Facet::MeasurementControlType, ont, &mut todo);
    let service = match &p.service {
        Some(s) => resolve_one(table, s, Facet::Service, ont, &mut todo),
        None => FacetOutcome::NotApplicable,
    };

    let mut seen = BTreeSet::new();
    let modifier_gaps: Vec<GapConcept> = p
        .words
        .iter()
        .filter(|w| seen.insert(w.to_lowercase()))
        .filter_map(|w| match table.resolve(w, Facet::Modifier, ont) {
            Resolution::Gap(e) => Some(GapConcept { gap_type: GapType::Concept, concept: e.token.clone(), facet: Facet::Modifier }),
            _ => None,
        })
        .collect();
    if !modifier_gaps.is_empty() {
        measurement_control_type = match measurement_control_type {
            FacetOutcome::Gap(mut g) => {
                g.extend(modifier_gaps);
                FacetOutcome::Gap(g)
            }
            _ => FacetOutcome::Gap(modifier_gaps),
        };
    }

    FacetResolution {
        vector: FacetVector { equipment_class, point_class, equipment_type, measurement_control_type, service },
        unresolved: todo,
    }
}
