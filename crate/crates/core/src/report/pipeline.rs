use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::config::RunConfig;
use super::{PipelineError, Stage};
use crate::alignment::{load_alignments, AlignmentTable, OntologyId};
use crate::dataset::{load_associations, load_dataset, select_representative, Dataset, RepresentativeSet, SystemSelection};
use crate::metrics::{
    derive_key_relationships, evaluate_completeness, evaluate_expressiveness, load_key_relationships, load_relationship_tables,
    CompletenessReport, ExpressivenessReport, GapType, KeyRelationshipSet, KeyRelationshipRow, RelationshipTable,
};
use crate::model::{ClassLabel, HaystackNamespace, ModelError};
use crate::trio::{load_haystack_dir, TrioError};
use crate::turtle::{extract_brick_schema, parse_turtle, BrickSchema, BrickVocabulary};

pub fn load_haystack(dir: &Path) -> Result<HaystackNamespace, PipelineError> {
    load_haystack_dir(dir).map_err(|errs| {
        let integrity = errs.0.iter().any(|e| matches!(e, TrioError::Model(ModelError::Cycle(_))));
        let message = errs.to_string();
        if integrity {
            PipelineError::Integrity { stage: Stage::Haystack, message }
        } else {
            PipelineError::Load { stage: Stage::Haystack, message }
        }
    })
}

pub fn load_brick(path: &Path) -> Result<BrickSchema, PipelineError> {
    let load = |message: String| PipelineError::Load { stage: Stage::Brick, message };
    let text = std::fs::read_to_string(path).map_err(|e| load(format!("{}: {e}", path.display())))?;
    let store = parse_turtle(&text).map_err(|e| load(format!("{}:{e}", path.display())))?;
    extract_brick_schema(&store, &BrickVocabulary::from_store(&store)).map_err(|e| {
        let message = format!("{}: {e}", path.display());
        if e.is_integrity() {
            PipelineError::Integrity { stage: Stage::Brick, message }
        } else {
            load(message)
        }
    })
}

pub fn load_exclusions(path: &Path) -> Result<Vec<String>, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| PipelineError::Load { stage: Stage::Selection, message: format!("{}: {e}", path.display()) })?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect())
}

/// Both ontologies, parsed concurrently.
pub fn load_ontologies(cfg: &RunConfig) -> Result<(HaystackNamespace, BrickSchema), PipelineError> {
    let hs_dir = cfg.resolve(&cfg.paths.haystack);
    let brick_file = cfg.resolve(&cfg.paths.brick);
    let (hs, brick) = std::thread::scope(|s| {
        let h = s.spawn(|| load_haystack(&hs_dir));
        let b = s.spawn(|| load_brick(&brick_file));
        (h.join(), b.join())
    });
    let hs = hs.map_err(|_| PipelineError::Load { stage: Stage::Haystack, message: "parser thread panicked".into() })??;
    let brick = brick.map_err(|_| PipelineError::Load { stage: Stage::Brick, message: "parser thread panicked".into() })??;
    Ok((hs, brick))
}

pub fn load_dataset_with_associations(cfg: &RunConfig) -> Result<Dataset, PipelineError> {
    let err = |e: crate::dataset::DatasetError| PipelineError::Load { stage: Stage::Dataset, message: e.to_string() };
    let mut ds = load_dataset(&cfg.resolve(&cfg.paths.dataset)).map_err(err)?;
    if let Some(a) = &cfg.paths.associations {
        let mut assoc = ds.associations.clone();
        assoc.extend(load_associations(&cfg.resolve(a)).map_err(err)?);
        ds = Dataset::new(ds.points, assoc).map_err(err)?;
    }
    Ok(ds)
}

/// Everything a run reads, parsed and validated.
pub struct Inputs {
    pub haystack: HaystackNamespace,
    pub brick: BrickSchema,
    pub dataset: Dataset,
    pub exclusions: Vec<String>,
    pub alignment: AlignmentTable,
    pub relationships: RelationshipTable,
    pub key_decls: Vec<KeyRelationshipRow>,
}

pub fn load_inputs(cfg: &RunConfig) -> Result<Inputs, PipelineError> {
    let (haystack, brick) = load_ontologies(cfg)?;
    let dataset = load_dataset_with_associations(cfg)?;
    let exclusions = match &cfg.paths.exclusions {
        Some(p) => load_exclusions(&cfg.resolve(p))?,
        None => Vec::new(),
    };
    let align_paths: Vec<_> = cfg.paths.alignment.iter().map(|p| cfg.resolve(p)).collect();
    let alignment = load_alignments(&align_paths, &haystack, &brick)
        .map_err(|e| PipelineError::Load { stage: Stage::Alignment, message: e.to_string() })?;
    let rel_paths: Vec<_> = cfg.paths.relationships.iter().map(|p| cfg.resolve(p)).collect();
    let relationships = load_relationship_tables(&rel_paths, &[&haystack, &brick])
        .map_err(|e| PipelineError::Load { stage: Stage::Relationships, message: e.to_string() })?;
    let key_decls = load_key_relationships(&cfg.resolve(&cfg.paths.key_relationships))
        .map_err(|e| PipelineError::Load { stage: Stage::Relationships, message: e.to_string() })?;
    Ok(Inputs { haystack, brick, dataset, exclusions, alignment, relationships, key_decls })
}

/// SHA-256 over the input paths as written, the target systems and the
/// bytes of every input file. Output settings are left out, so the same
/// inputs hash the same wherever the reports go.
pub fn config_hash(cfg: &RunConfig) -> Result<String, PipelineError> {
    let mut h = Sha256::new();
    let head = serde_json::to_vec(&(&cfg.paths, &cfg.target_systems)).map_err(|e| PipelineError::Config(e.to_string()))?;
    h.update(head);
    let io = |p: &Path, e: std::io::Error| PipelineError::Config(format!("{}: {e}", p.display()));
    for path in cfg.input_paths() {
        let mut files = Vec::new();
        if path.is_dir() {
            let mut entries: Vec<_> = std::fs::read_dir(&path)
                .map_err(|e| io(&path, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            entries.sort();
            files.extend(entries);
        } else {
            files.push(path.clone());
        }
        for f in files {
            let name = f.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let bytes = std::fs::read(&f).map_err(|e| io(&f, e))?;
            h.update((name.len() as u64).to_le_bytes());
            h.update(name.as_bytes());
            h.update((bytes.len() as u64).to_le_bytes());
            h.update(&bytes);
        }
    }
    Ok(hex::encode(h.finalize()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub tool_version: String,
    pub haystack_libs: BTreeMap<String, String>,
    pub haystack_def_count: usize,
    pub brick_version: Option<String>,
    pub brick_class_count: usize,
    pub config_hash: String,
    pub timestamp: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Shared,
    HaystackOnly,
    BrickOnly,
}

impl Membership {
    pub fn as_str(self) -> &'static str {
        match self {
            Membership::Shared => "shared",
            Membership::HaystackOnly => "haystack-only",
            Membership::BrickOnly => "brick-only",
        }
    }
}

/// A significant Does-Not-Map gap in at least one ontology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapRow {
    pub gap_type: GapType,
    pub concept: String,
    pub haystack_count: Option<usize>,
    pub brick_count: Option<usize>,
    pub membership: Membership,
}

pub fn gap_overlap(haystack: &CompletenessReport, brick: &CompletenessReport) -> Vec<OverlapRow> {
    let pick = |r: &CompletenessReport| -> BTreeMap<(GapType, String), usize> {
        r.significant_gaps()
            .filter(|g| g.classification == ClassLabel::DoesNotMap)
            .map(|g| ((g.gap_type, g.concept.clone()), g.count))
            .collect()
    };
    let (h, b) = (pick(haystack), pick(brick));
    let keys: BTreeSet<&(GapType, String)> = h.keys().chain(b.keys()).collect();
    let mut rows: Vec<OverlapRow> = keys
        .into_iter()
        .map(|k| {
            let (hc, bc) = (h.get(k).copied(), b.get(k).copied());
            let membership = match (hc, bc) {
                (Some(_), Some(_)) => Membership::Shared,
                (Some(_), None) => Membership::HaystackOnly,
                _ => Membership::BrickOnly,
            };
            OverlapRow { gap_type: k.0, concept: k.1.clone(), haystack_count: hc, brick_count: bc, membership }
        })
        .collect();
    rows.sort_by(|a, b| (a.membership, a.gap_type, &a.concept).cmp(&(b.membership, b.gap_type, &b.concept)));
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportBundle {
    pub metadata: RunMetadata,
    pub selection: RepresentativeSet,
    pub selection_counts: Vec<SystemSelection>,
    pub completeness: Vec<CompletenessReport>,
    pub key_relationships: KeyRelationshipSet,
    pub expressiveness: ExpressivenessReport,
    pub overlap: Vec<OverlapRow>,
    pub warnings: Vec<String>,
}

impl ReportBundle {
    pub fn completeness(&self, ont: OntologyId) -> Option<&CompletenessReport> {
        self.completeness.iter().find(|c| c.ontology == ont)
    }

    /// Significant Does-Not-Map gaps present in both ontologies.
    pub fn shared_gaps(&self) -> impl Iterator<Item = &OverlapRow> {
        self.overlap.iter().filter(|r| r.membership == Membership::Shared)
    }
}

/// Evaluate already loaded inputs.
pub fn evaluate(cfg: &RunConfig, inputs: &Inputs, config_hash: String) -> Result<ReportBundle, PipelineError> {
    let systems = cfg.systems()?;
    let selection = select_representative(&inputs.dataset, &systems, &inputs.exclusions);
    let mut warnings: Vec<String> = inputs.brick.warnings.iter().map(|w| format!("brick: {w}")).collect();
    warnings.extend(selection.warnings.iter().map(|w| format!("selection: {w}")));

    let (haystack, brick) = std::thread::scope(|s| {
        let h = s.spawn(|| evaluate_completeness(&selection, &inputs.alignment, OntologyId::Haystack));
        let b = s.spawn(|| evaluate_completeness(&selection, &inputs.alignment, OntologyId::Brick));
        (h.join(), b.join())
    });
    let panicked = |_| PipelineError::Load { stage: Stage::Completeness, message: "worker thread panicked".into() };
    let completeness = vec![haystack.map_err(panicked)?, brick.map_err(panicked)?];
    for c in &completeness {
        warnings.extend(c.warnings.iter().map(|w| format!("completeness ({}): {w}", c.ontology)));
    }

    let key_relationships = derive_key_relationships(&inputs.dataset, &inputs.key_decls);
    let expressiveness = evaluate_expressiveness(
        &key_relationships.expressed,
        &[(&inputs.haystack, &inputs.relationships), (&inputs.brick, &inputs.relationships)],
    )
    .map_err(|e| PipelineError::Load { stage: Stage::Expressiveness, message: e.to_string() })?;

    let overlap = gap_overlap(&completeness[0], &completeness[1]);
    let metadata = RunMetadata {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        haystack_libs: inputs.haystack.lib_versions(),
        haystack_def_count: inputs.haystack.len(),
        brick_version: inputs.brick.version.clone(),
        brick_class_count: inputs.brick.classes.len(),
        config_hash,
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
    };
    Ok(ReportBundle {
        metadata,
        selection_counts: selection.per_system(),
        selection,
        completeness,
        key_relationships,
        expressiveness,
        overlap,
        warnings,
    })
}

/// Parse, select, measure. Any stage failure aborts with that stage's name.
pub fn run_pipeline(cfg: &RunConfig) -> Result<ReportBundle, PipelineError> {
    cfg.validate()?;
    let hash = config_hash(cfg)?;
    let inputs = load_inputs(cfg)?;
    evaluate(cfg, &inputs, hash)
}
