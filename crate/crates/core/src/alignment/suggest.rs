use serde::Serialize;

use super::{EntityRef, Facet};
use crate::model::{EntityKind, HaystackNamespace};
use crate::turtle::BrickSchema;

#[derive(Debug, Clone, Copy)]
pub enum OntologyRef<'a> {
    Haystack(&'a HaystackNamespace),
    Brick(&'a BrickSchema),
}

/// How a candidate matched; earlier variants rank higher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "rank", content = "distance", rename_all = "kebab-case")]
pub enum MatchRank {
    /// The whole identifier equals the token.
    Exact,
    /// A symbol part or an associated tag equals the token.
    Part,
    Substring,
    Edit(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Suggestion {
    pub target: EntityRef,
    pub identifier: String,
    pub rank: MatchRank,
}

struct Candidate {
    target: EntityRef,
    identifier: String,
    parts: Vec<String>,
}

const MAX_EDIT: usize = 2;
const MIN_FUZZY_LEN: usize = 3;

fn haystack_candidates(ns: &HaystackNamespace, facet: Facet) -> Vec<Candidate> {
    let wanted: &[&str] = match facet {
        Facet::EquipmentClass | Facet::EquipmentType => &["equip"],
        Facet::Service => &["substance", "phenomenon"],
        _ => &[],
    };
    ns.defs()
        .filter(|d| wanted.is_empty() || wanted.iter().any(|w| ns.is_a(&d.symbol, w)))
        .map(|d| Candidate {
            target: EntityRef::Haystack(d.symbol.clone()),
            identifier: d.symbol.to_string(),
            parts: d.symbol.parts().iter().map(|p| p.as_str().to_lowercase()).collect(),
        })
        .collect()
}

fn brick_candidates(schema: &BrickSchema, facet: Facet) -> Vec<Candidate> {
    let wanted: &[EntityKind] = match facet {
        Facet::EquipmentClass | Facet::EquipmentType => &[EntityKind::Equipment],
        Facet::Service => &[EntityKind::Measurable],
        Facet::PointClass => &[EntityKind::Point, EntityKind::Measurable],
        Facet::MeasurementControlType => &[EntityKind::Point],
        Facet::Modifier => &EntityKind::ALL,
    };
    let classes = schema.classes.values().map(|c| (c.iri.clone(), c.root, c.associated_tags.iter().map(|t| t.to_string()).collect::<Vec<_>>()));
    let individuals = schema.individuals.keys().map(|i| (i.clone(), EntityKind::Measurable, Vec::new()));
    classes
        .chain(individuals)
        .filter(|(_, kind, _)| wanted.contains(kind))
        .map(|(iri, _, tags)| {
            let identifier = iri.local_name().to_string();
            let mut parts: Vec<String> = identifier.split('_').filter(|p| !p.is_empty()).map(str::to_lowercase).collect();
            parts.extend(tags);
            Candidate { target: EntityRef::Brick(iri), identifier, parts }
        })
        .collect()
}

fn rank(token: &str, c: &Candidate) -> Option<MatchRank> {
    let ident = c.identifier.to_lowercase();
    let squashed: String = ident.chars().filter(|ch| *ch != '_' && *ch != '-').collect();
    if ident == token || squashed == token {
        return Some(MatchRank::Exact);
    }
    if c.parts.iter().any(|p| p == token) {
        return Some(MatchRank::Part);
    }
    if token.len() >= MIN_FUZZY_LEN && (ident.contains(token) || squashed.contains(token)) {
        return Some(MatchRank::Substring);
    }
    if token.chars().count() < MIN_FUZZY_LEN {
        return None;
    }
    std::iter::once(&squashed)
        .chain(c.parts.iter())
        .filter(|p| p.chars().count() >= MIN_FUZZY_LEN)
        .map(|p| strsim::levenshtein(token, p))
        .filter(|d| *d <= MAX_EDIT)
        .min()
        .map(MatchRank::Edit)
}

/// Rank ontology entities that might align with `token`.
///
/// Advisory only; nothing in the metric engines reads these. Ties are
/// broken by identifier so the output is stable.
pub fn suggest_alignments(token: &str, facet: Facet, ontology: OntologyRef<'_>, limit: usize) -> Vec<Suggestion> {
    let token = token.trim().to_lowercase();
    if token.is_empty() {
        return Vec::new();
    }
    let candidates = match ontology {
        OntologyRef::Haystack(ns) => haystack_candidates(ns, facet),
        OntologyRef::Brick(schema) => brick_candidates(schema, facet),
    };
    let mut out: Vec<Suggestion> = candidates
        .into_iter()
        .filter_map(|c| rank(&token, &c).map(|rank| Suggestion { target: c.target, identifier: c.identifier, rank }))
        .collect();
    out.sort_by(|a, b| (a.rank, a.identifier.len(), &a.identifier).cmp(&(b.rank, b.identifier.len(), &b.identifier)));
    out.truncate(limit);
    out
}
