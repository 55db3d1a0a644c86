use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use super::{TripleStore, OWL, RDF, RDFS};
use crate::model::graph::{find_cycle, reach};
use crate::model::{BrickClass, BrickRelationship, EntityKind, Iri, Symbol, Term};

pub const DEFAULT_BRICK_NS: &str = "https://brickschema.org/schema/1.1/Brick#";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BrickError {
    #[error("primary root class {0} is not declared in the schema")]
    MissingRoot(String),
    #[error("cycle in subclass hierarchy: {}", .0.join(" -> "))]
    Cycle(Vec<String>),
    #[error("relationship {relationship} names inverse {inverse}, which is not a declared relationship")]
    DanglingInverse { relationship: String, inverse: String },
    #[error("relationship {relationship} has inverse {declared}, but {other} declares it as its inverse")]
    InconsistentInverse { relationship: String, declared: String, other: String },
    #[error("unknown class {0}")]
    UnknownClass(String),
}

impl BrickError {
    /// Integrity errors (as opposed to lookups) make a schema unusable.
    pub fn is_integrity(&self) -> bool {
        !matches!(self, BrickError::UnknownClass(_))
    }
}

/// The predicate IRIs extraction relies on. Brick vocabularies move between
/// releases, so these are values rather than constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrickVocabulary {
    pub namespace: String,
    pub subclass: String,
    pub inverse: String,
    pub tag_association: String,
    pub domain: String,
    pub range: String,
    pub rdf_type: String,
    pub object_property: String,
    pub label: String,
}

impl BrickVocabulary {
    pub fn with_namespace(ns: &str) -> BrickVocabulary {
        BrickVocabulary {
            namespace: ns.to_string(),
            subclass: format!("{RDFS}subClassOf"),
            inverse: format!("{OWL}inverseOf"),
            tag_association: format!("{ns}hasAssociatedTag"),
            domain: format!("{RDFS}domain"),
            range: format!("{RDFS}range"),
            rdf_type: format!("{RDF}type"),
            object_property: format!("{OWL}ObjectProperty"),
            label: format!("{RDFS}label"),
        }
    }

    /// Take the namespace from the document's `brick` prefix when declared.
    pub fn from_store(store: &TripleStore) -> BrickVocabulary {
        let ns = store.prefixes().get("brick").map(String::as_str).unwrap_or(DEFAULT_BRICK_NS);
        BrickVocabulary::with_namespace(ns)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BrickSchema {
    pub namespace: String,
    pub version: Option<String>,
    pub roots: BTreeMap<EntityKind, Iri>,
    pub classes: BTreeMap<Iri, BrickClass>,
    pub relationships: BTreeMap<Iri, BrickRelationship>,
    /// Punned individuals typed by a Measurable class (substances, quantities).
    pub individuals: BTreeMap<Iri, Iri>,
    /// Subclasses of `brick:System`. Brick models water loops and plants
    /// as systems, outside the four roots.
    pub systems: BTreeSet<Iri>,
    /// Predicates that carry literal values, such as `rdfs:label`.
    pub annotation_predicates: BTreeSet<Iri>,
    pub tag_vocabulary: BTreeSet<Symbol>,
    pub prefixes: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

/// Build the class hierarchy under the four roots, the declared
/// relationships with inverse pairing, and each class's associated tags.
pub fn extract_brick_schema(store: &TripleStore, vocab: &BrickVocabulary) -> Result<BrickSchema, BrickError> {
    let mut warnings = Vec::new();
    let ns = vocab.namespace.as_str();

    let mut parents_all: BTreeMap<Iri, Vec<Iri>> = BTreeMap::new();
    for t in store.with_predicate(&vocab.subclass) {
        if let (Term::Iri(s), Term::Iri(o)) = (&t.subject, &t.object) {
            let list = parents_all.entry(s.clone()).or_default();
            if !list.contains(o) {
                list.push(o.clone());
            }
            parents_all.entry(o.clone()).or_default();
        }
    }

    let mut roots = BTreeMap::new();
    for kind in EntityKind::ALL {
        let iri = Iri::new(format!("{ns}{}", kind.name()));
        let declared = parents_all.contains_key(&iri) || store.about(&Term::Iri(iri.clone())).next().is_some();
        if !declared {
            return Err(BrickError::MissingRoot(iri.to_string()));
        }
        roots.insert(kind, iri);
    }

    if let Some(cycle) = find_cycle(&parents_all) {
        return Err(BrickError::Cycle(cycle.iter().map(|i| i.to_string()).collect()));
    }

    let mut children: BTreeMap<Iri, Vec<Iri>> = BTreeMap::new();
    for (c, ps) in &parents_all {
        for p in ps {
            children.entry(p.clone()).or_default().push(c.clone());
        }
    }
    let mut root_sets: BTreeMap<Iri, Vec<EntityKind>> = BTreeMap::new();
    for (kind, iri) in &roots {
        for c in reach(&children, iri) {
            root_sets.entry(c).or_default().push(*kind);
        }
    }

    let mut classes = BTreeMap::new();
    let mut untagged = Vec::new();
    for (iri, kinds) in &root_sets {
        if kinds.len() > 1 {
            let names: Vec<&str> = kinds.iter().map(|k| k.name()).collect();
            warnings.push(format!("class {iri} falls under several roots: {}", names.join(", ")));
        }
        let is_root = roots.values().any(|r| r == iri);
        let mut parents = Vec::new();
        for p in parents_all.get(iri).into_iter().flatten() {
            if root_sets.contains_key(p) {
                parents.push(p.clone());
            } else if !is_root {
                warnings.push(format!("class {iri} has parent {p} outside the four roots"));
            }
        }
        let subject = Term::Iri(iri.clone());
        let mut tags = BTreeSet::new();
        for o in store.objects(&subject, &vocab.tag_association) {
            if let Term::Iri(tag) = o {
                match Symbol::parse(&tag.local_name().to_lowercase()) {
                    Ok(s) => {
                        tags.insert(s);
                    }
                    Err(e) => warnings.push(format!("class {iri}: tag {tag} skipped: {e}")),
                }
            }
        }
        let label = store.objects(&subject, &vocab.label).find_map(|o| o.as_literal()).map(|l| l.lexical.clone());
        let root = kinds[0];
        let is_leaf = children.get(iri).map(|c| c.is_empty()).unwrap_or(true);
        if is_leaf && tags.is_empty() && matches!(root, EntityKind::Point | EntityKind::Equipment) {
            untagged.push(iri.local_name().to_string());
        }
        classes.insert(iri.clone(), BrickClass { iri: iri.clone(), parents, associated_tags: tags, label, root });
    }
    if !untagged.is_empty() {
        warnings.push(format!(
            "{} leaf point/equipment classes have no associated tags (e.g. {})",
            untagged.len(),
            untagged.iter().take(3).cloned().collect::<Vec<_>>().join(", ")
        ));
    }

    let systems = reach(&children, &Iri::new(format!("{ns}System"))).into_iter().collect();

    let relationships = extract_relationships(store, vocab, &classes, &roots, &mut warnings)?;

    let mut individuals = BTreeMap::new();
    for t in store.with_predicate(&vocab.rdf_type) {
        if let (Term::Iri(s), Term::Iri(ty)) = (&t.subject, &t.object) {
            if classes.get(ty).is_some_and(|c| c.root == EntityKind::Measurable) {
                individuals.entry(s.clone()).or_insert_with(|| ty.clone());
            }
        }
    }

    let annotation_predicates = store
        .iter()
        .filter(|t| matches!(t.object, Term::Literal(_)))
        .map(|t| t.predicate.clone())
        .collect();

    let mut tag_vocabulary: BTreeSet<Symbol> = classes.values().flat_map(|c| c.associated_tags.iter().cloned()).collect();
    let tag_class = Term::iri(format!("{ns}Tag"));
    for t in store.with_predicate(&vocab.rdf_type) {
        if t.object == tag_class {
            if let Some(Ok(s)) = t.subject.as_iri().map(|i| Symbol::parse(&i.local_name().to_lowercase())) {
                tag_vocabulary.insert(s);
            }
        }
    }

    let ontology = Term::iri(format!("{OWL}Ontology"));
    let version = store
        .with_predicate(&vocab.rdf_type)
        .filter(|t| t.object == ontology)
        .flat_map(|t| store.about(&t.subject))
        .filter(|t| t.predicate.local_name() == "version" || t.predicate.as_str() == format!("{OWL}versionInfo"))
        .find_map(|t| t.object.as_literal().map(|l| l.lexical.clone()));

    Ok(BrickSchema {
        namespace: ns.to_string(),
        version,
        roots,
        classes,
        relationships,
        individuals,
        systems,
        annotation_predicates,
        tag_vocabulary,
        prefixes: store.prefixes().clone(),
        warnings,
    })
}

fn extract_relationships(
    store: &TripleStore,
    vocab: &BrickVocabulary,
    classes: &BTreeMap<Iri, BrickClass>,
    roots: &BTreeMap<EntityKind, Iri>,
    warnings: &mut Vec<String>,
) -> Result<BTreeMap<Iri, BrickRelationship>, BrickError> {
    let object_property = Term::iri(vocab.object_property.clone());
    let declared: BTreeSet<Iri> = store
        .with_predicate(&vocab.rdf_type)
        .filter(|t| t.object == object_property)
        .filter_map(|t| t.subject.as_iri())
        .filter(|i| i.as_str().starts_with(&vocab.namespace))
        .cloned()
        .collect();

    let kinds_of = |iri: &Iri| -> BTreeSet<EntityKind> {
        if let Some((k, _)) = roots.iter().find(|(_, r)| *r == iri) {
            return [*k].into_iter().collect();
        }
        classes.get(iri).map(|c| [c.root].into_iter().collect()).unwrap_or_default()
    };
    let declared_kinds = |rel: &Iri, pred: &str| -> Option<BTreeSet<EntityKind>> {
        let targets: Vec<Iri> = store
            .objects(&Term::Iri(rel.clone()), pred)
            .filter_map(|o| o.as_iri().cloned())
            .collect();
        if targets.is_empty() {
            None
        } else {
            Some(targets.iter().flat_map(kinds_of).collect())
        }
    };

    let mut inverse: BTreeMap<Iri, Option<Iri>> = BTreeMap::new();
    for rel in &declared {
        let mut invs: Vec<Iri> = store
            .objects(&Term::Iri(rel.clone()), &vocab.inverse)
            .filter_map(|o| o.as_iri().cloned())
            .collect();
        invs.dedup();
        if invs.len() > 1 {
            return Err(BrickError::InconsistentInverse {
                relationship: rel.to_string(),
                declared: invs[0].to_string(),
                other: invs[1].to_string(),
            });
        }
        if let Some(inv) = invs.first() {
            if !declared.contains(inv) {
                return Err(BrickError::DanglingInverse { relationship: rel.to_string(), inverse: inv.to_string() });
            }
        }
        inverse.insert(rel.clone(), invs.into_iter().next());
    }
    // complete the inverse pairing in both directions
    let pairs: Vec<(Iri, Iri)> =
        inverse.iter().filter_map(|(a, b)| b.as_ref().map(|b| (a.clone(), b.clone()))).collect();
    for (a, b) in pairs {
        match inverse.get(&b).cloned().flatten() {
            None => {
                inverse.insert(b.clone(), Some(a.clone()));
            }
            Some(x) if x != a => {
                return Err(BrickError::InconsistentInverse {
                    relationship: b.to_string(),
                    declared: x.to_string(),
                    other: a.to_string(),
                });
            }
            Some(_) => {}
        }
    }

    // declared (domain, range) per relationship
    type Kinds = Option<BTreeSet<EntityKind>>;
    let mut raw: BTreeMap<Iri, (Kinds, Kinds)> = BTreeMap::new();
    for rel in &declared {
        raw.insert(rel.clone(), (declared_kinds(rel, &vocab.domain), declared_kinds(rel, &vocab.range)));
    }
    let mut out = BTreeMap::new();
    for rel in &declared {
        let inv = inverse[rel].clone();
        let (mut domain, mut range) = raw[rel].clone();
        if let Some(inv) = &inv {
            let (inv_domain, inv_range) = &raw[inv];
            if domain.is_none() {
                domain = inv_range.clone();
            }
            if range.is_none() {
                range = inv_domain.clone();
            }
        }
        if domain.is_none() || range.is_none() {
            warnings.push(format!(
                "relationship {} has no declared {}; treating it as unrestricted",
                rel.local_name(),
                match (domain.is_none(), range.is_none()) {
                    (true, true) => "domain or range",
                    (true, false) => "domain",
                    _ => "range",
                }
            ));
        }
        out.insert(
            rel.clone(),
            BrickRelationship {
                iri: rel.clone(),
                inverse: inv,
                domain_kinds: domain.unwrap_or_else(EntityKind::universal),
                range_kinds: range.unwrap_or_else(EntityKind::universal),
            },
        );
    }
    Ok(out)
}

/// Reflexive-transitive ancestors of a class.
pub fn subclass_closure(schema: &BrickSchema, iri: &Iri) -> Result<BTreeSet<Iri>, BrickError> {
    schema.closure(iri)
}

impl BrickSchema {
    pub fn closure(&self, iri: &Iri) -> Result<BTreeSet<Iri>, BrickError> {
        if !self.classes.contains_key(iri) {
            return Err(BrickError::UnknownClass(iri.to_string()));
        }
        let edges: BTreeMap<Iri, Vec<Iri>> = self.classes.iter().map(|(k, c)| (k.clone(), c.parents.clone())).collect();
        Ok(reach(&edges, iri))
    }

    pub fn check_acyclic(&self) -> Result<(), BrickError> {
        let edges: BTreeMap<Iri, Vec<Iri>> = self.classes.iter().map(|(k, c)| (k.clone(), c.parents.clone())).collect();
        match find_cycle(&edges) {
            Some(c) => Err(BrickError::Cycle(c.iter().map(|i| i.to_string()).collect())),
            None => Ok(()),
        }
    }

    pub fn class(&self, iri: &Iri) -> Option<&BrickClass> {
        self.classes.get(iri)
    }

    pub fn root(&self, kind: EntityKind) -> &Iri {
        &self.roots[&kind]
    }

    /// Expand a reference written as a full IRI (optionally in `<>`),
    /// a prefixed name, or a bare local name in the Brick namespace.
    pub fn expand(&self, name: &str) -> Iri {
        let name = name.trim();
        if let Some(inner) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
            return Iri::new(inner);
        }
        if name.contains("://") {
            return Iri::new(name);
        }
        if let Some((p, local)) = name.split_once(':') {
            if let Some(base) = self.prefixes.get(p) {
                return Iri::new(format!("{base}{local}"));
            }
        }
        Iri::new(format!("{}{}", self.namespace, name))
    }

    /// The root kind of a class, or Measurable for a punned individual.
    pub fn kind_of(&self, iri: &Iri) -> Option<EntityKind> {
        if let Some(c) = self.classes.get(iri) {
            return Some(c.root);
        }
        self.individuals.contains_key(iri).then_some(EntityKind::Measurable)
    }

    /// A valid alignment target: a class under a root, a punned individual
    /// or a system class.
    pub fn is_entity(&self, iri: &Iri) -> bool {
        self.kind_of(iri).is_some() || self.systems.contains(iri)
    }

    /// Tags of a class, optionally with those of all its ancestors.
    pub fn class_tags(&self, iri: &Iri, inherit: bool) -> Result<BTreeSet<Symbol>, BrickError> {
        let class = self.classes.get(iri).ok_or_else(|| BrickError::UnknownClass(iri.to_string()))?;
        if !inherit {
            return Ok(class.associated_tags.clone());
        }
        Ok(self
            .closure(iri)?
            .iter()
            .filter_map(|c| self.classes.get(c))
            .flat_map(|c| c.associated_tags.iter().cloned())
            .collect())
    }

    pub fn class_count_by_root(&self) -> BTreeMap<EntityKind, usize> {
        let mut out = BTreeMap::new();
        for c in self.classes.values() {
            *out.entry(c.root).or_insert(0) += 1;
        }
        out
    }
}
