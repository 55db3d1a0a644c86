use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::config::Format;
use super::pipeline::ReportBundle;
use super::PipelineError;
use crate::alignment::OntologyId;
use crate::metrics::{format_path, CompletenessReport, GapRecord};
use crate::model::ClassLabel;

/// The static checklist for the qualitative assessment, filled in by hand.
pub const QUALITATIVE_CHECKLIST: &str = include_str!("qualitative_checklist.md");

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Result<Vec<u8>, PipelineError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let err = |e: csv::Error| PipelineError::Report(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(&r).map_err(err)?;
    }
    w.into_inner().map_err(|e| PipelineError::Report(e.to_string()))
}

fn yes_no(b: bool) -> String {
    if b { "Yes" } else { "No" }.to_string()
}

pub fn completeness_csv(r: &CompletenessReport) -> Result<Vec<u8>, PipelineError> {
    let rows = r
        .rows
        .iter()
        .map(|row| vec![row.label().to_string(), row.pct_maps.to_string(), row.pct_maps_or_partial.to_string()])
        .collect();
    csv_bytes(&["system", "pct_maps", "pct_maps_or_partial"], rows)
}

pub fn completeness_counts_csv(r: &CompletenessReport) -> Result<Vec<u8>, PipelineError> {
    let rows = r
        .rows
        .iter()
        .map(|row| {
            vec![
                row.label().to_string(),
                row.selected.to_string(),
                row.maps.to_string(),
                row.partially_maps.to_string(),
                row.does_not_map.to_string(),
            ]
        })
        .collect();
    csv_bytes(&["system", "selected", "maps", "partially_maps", "does_not_map"], rows)
}

pub fn gaps_csv(gaps: &[GapRecord]) -> Result<Vec<u8>, PipelineError> {
    let rows = gaps
        .iter()
        .map(|g| {
            vec![
                g.gap_type.to_string(),
                yes_no(g.significant),
                g.classification.to_string(),
                g.concept.clone(),
                g.count.to_string(),
            ]
        })
        .collect();
    csv_bytes(&["gap_type", "significant", "classification", "concept", "count"], rows)
}

fn opt(n: Option<usize>) -> String {
    n.map(|n| n.to_string()).unwrap_or_default()
}

fn render_csvs(b: &ReportBundle) -> Result<Vec<(String, Vec<u8>)>, PipelineError> {
    let mut files = Vec::new();
    for c in &b.completeness {
        files.push((format!("completeness_{}.csv", c.ontology), completeness_csv(c)?));
        files.push((format!("completeness_{}_counts.csv", c.ontology), completeness_counts_csv(c)?));
        files.push((format!("gaps_{}.csv", c.ontology), gaps_csv(&c.gaps)?));
    }
    let overlap = b
        .overlap
        .iter()
        .map(|r| vec![r.gap_type.to_string(), r.concept.clone(), opt(r.haystack_count), opt(r.brick_count), r.membership.as_str().to_string()])
        .collect();
    files.push(("gap_overlap.csv".into(), csv_bytes(&["gap_type", "concept", "haystack_count", "brick_count", "membership"], overlap)?));

    let summary = b
        .expressiveness
        .ontologies
        .iter()
        .map(|o| vec![o.ontology.to_string(), o.mapped.to_string(), o.total.to_string(), o.pct.to_string()])
        .collect();
    files.push(("expressiveness.csv".into(), csv_bytes(&["ontology", "mapped", "total", "pct"], summary)?));
    let detail = b
        .expressiveness
        .ontologies
        .iter()
        .flat_map(|o| o.rows.iter())
        .map(|m| {
            vec![
                m.ontology.to_string(),
                m.key.kind.to_string(),
                m.key.system.slug().to_string(),
                m.key.side.to_string(),
                m.key.endpoints.0.clone(),
                m.key.endpoints.1.clone(),
                m.key.reversed.to_string(),
                m.label.to_string(),
                format_path(&m.path),
                m.inverse_path.as_deref().map(format_path).unwrap_or_default(),
                m.reason.clone().unwrap_or_default(),
            ]
        })
        .collect();
    files.push((
        "expressiveness_detail.csv".into(),
        csv_bytes(
            &["ontology", "kind", "system", "side", "endpoint_a", "endpoint_b", "reversed", "label", "path", "inverse_path", "reason"],
            detail,
        )?,
    ));

    let selection = b
        .selection_counts
        .iter()
        .map(|s| vec![s.system.label().to_string(), s.selected.to_string(), s.rejected.to_string()])
        .collect();
    files.push(("selection.csv".into(), csv_bytes(&["system", "selected", "rejected"], selection)?));

    let unresolved = b
        .completeness
        .iter()
        .flat_map(|c| c.unresolved.iter().map(move |u| (c.ontology, u)))
        .map(|(o, u)| vec![o.to_string(), u.token.facet.to_string(), u.token.token.clone(), u.points.to_string()])
        .collect();
    files.push(("unresolved_tokens.csv".into(), csv_bytes(&["ontology", "facet", "token", "points"], unresolved)?));
    Ok(files)
}

fn md_gap_table(out: &mut String, gaps: &[&GapRecord]) {
    if gaps.is_empty() {
        out.push_str("_None._\n\n");
        return;
    }
    out.push_str("| Gap type | Classification | Concept | Count |\n|---|---|---|---:|\n");
    for g in gaps {
        let _ = writeln!(out, "| {} | {} | {} | {} |", g.gap_type, g.classification, g.concept, g.count);
    }
    out.push('\n');
}

/// The Markdown report. Carries no timestamp, so reruns are byte-identical.
pub fn render_markdown(b: &ReportBundle) -> String {
    let mut out = String::from("# Ontology validation report\n\n");
    let _ = writeln!(out, "- Config hash: `{}`", b.metadata.config_hash);
    let libs: Vec<String> = b.metadata.haystack_libs.iter().map(|(k, v)| format!("{k} {v}")).collect();
    let _ = writeln!(out, "- Haystack: {} defs ({})", b.metadata.haystack_def_count, libs.join(", "));
    let _ = writeln!(
        out,
        "- Brick: {} classes (version {})",
        b.metadata.brick_class_count,
        b.metadata.brick_version.as_deref().unwrap_or("unknown")
    );
    let _ = writeln!(out, "- Representative set: {} point types\n", b.selection.selected.len());

    out.push_str("## Representative set\n\n| System | Selected | Rejected |\n|---|---:|---:|\n");
    for s in &b.selection_counts {
        let _ = writeln!(out, "| {} | {} | {} |", s.system.label(), s.selected, s.rejected);
    }

    out.push_str("\n## Completeness\n\n");
    let (h, k) = (b.completeness(OntologyId::Haystack), b.completeness(OntologyId::Brick));
    out.push_str("| System | Haystack % Maps | Haystack % Maps or Partially Maps | Brick % Maps | Brick % Maps or Partially Maps |\n");
    out.push_str("|---|---:|---:|---:|---:|\n");
    let labels: Vec<&str> = h.or(k).map(|r| r.rows.iter().map(|row| row.label()).collect()).unwrap_or_default();
    for label in labels {
        let cell = |r: Option<&CompletenessReport>| {
            r.and_then(|r| r.rows.iter().find(|row| row.label() == label))
                .map(|row| (row.pct_maps.to_string(), row.pct_maps_or_partial.to_string()))
                .unwrap_or_default()
        };
        let ((hm, hp), (bm, bp)) = (cell(h), cell(k));
        let _ = writeln!(out, "| {label} | {hm} | {hp} | {bm} | {bp} |");
    }

    for c in &b.completeness {
        let _ = writeln!(out, "\n### {} gaps\n", c.ontology.label());
        out.push_str("Significant (2% or more of the set):\n\n");
        md_gap_table(&mut out, &c.significant_gaps().collect::<Vec<_>>());
        out.push_str("Not significant:\n\n");
        md_gap_table(&mut out, &c.insignificant_gaps().collect::<Vec<_>>());
    }

    out.push_str("## Gap overlap\n\n");
    if b.overlap.is_empty() {
        out.push_str("_No significant Does Not Map gaps._\n");
    } else {
        out.push_str("| Gap type | Concept | Haystack | Brick | Membership |\n|---|---|---:|---:|---|\n");
        for r in &b.overlap {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                r.gap_type,
                r.concept,
                opt(r.haystack_count),
                opt(r.brick_count),
                r.membership.as_str()
            );
        }
    }

    out.push_str("\n## Expressiveness\n\n| Ontology | Maps | Total | % |\n|---|---:|---:|---:|\n");
    for o in &b.expressiveness.ontologies {
        let _ = writeln!(out, "| {} | {} | {} | {} |", o.ontology.label(), o.mapped, o.total, o.pct);
    }
    let misses: Vec<_> = b.expressiveness.ontologies.iter().flat_map(|o| o.rows.iter()).filter(|m| m.label != ClassLabel::Maps).collect();
    if !misses.is_empty() {
        out.push_str("\nRelationships that do not map:\n\n");
        for m in misses {
            let _ = writeln!(
                out,
                "- {}: {} {} ({} to {}): {}",
                m.ontology.label(),
                m.key.system.label(),
                m.key.kind.label(),
                m.key.endpoints.0,
                m.key.endpoints.1,
                m.reason.as_deref().unwrap_or("")
            );
        }
    }
    if !b.key_relationships.excluded.is_empty() {
        out.push_str("\nKey relationships excluded from the set:\n\n");
        for e in &b.key_relationships.excluded {
            let _ = writeln!(out, "- {} {}: {}", e.decl.system.label(), e.decl.kind.label(), e.reason);
        }
    }

    let unresolved: usize = b.completeness.iter().map(|c| c.unresolved.len()).sum();
    if unresolved > 0 {
        let _ = writeln!(out, "\n## Curation to-do\n\n{unresolved} token(s) lack an alignment entry; see `unresolved_tokens.csv`.");
    }
    if !b.warnings.is_empty() {
        out.push_str("\n## Warnings\n\n");
        for w in &b.warnings {
            let _ = writeln!(out, "- {w}");
        }
    }
    out
}

/// Write the requested formats into `dir` and return the paths written.
pub fn emit_reports(bundle: &ReportBundle, formats: &[Format], dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    let io = |p: &Path, e: std::io::Error| PipelineError::Report(format!("{}: {e}", p.display()));
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for f in formats {
        if !seen.insert(*f) {
            continue;
        }
        match f {
            Format::Csv => files.extend(render_csvs(bundle)?),
            Format::Markdown => {
                files.push(("report.md".into(), render_markdown(bundle).into_bytes()));
                files.push(("qualitative_checklist.md".into(), QUALITATIVE_CHECKLIST.as_bytes().to_vec()));
            }
            Format::Json => {
                let mut json = serde_json::to_vec_pretty(bundle).map_err(|e| PipelineError::Report(e.to_string()))?;
                json.push(b'\n');
                files.push(("bundle.json".into(), json));
            }
        }
    }
    let mut written = Vec::new();
    for (name, bytes) in files {
        let path = dir.join(name);
        std::fs::write(&path, bytes).map_err(|e| io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_gap_list_is_header_only() {
        assert_eq!(gaps_csv(&[]).unwrap(), b"gap_type,significant,classification,concept,count\n");
    }

    #[test]
    fn lf_and_quoting() {
        let g = GapRecord {
            gap_type: crate::metrics::GapType::Concept,
            concept: "Primary, Secondary".into(),
            classification: ClassLabel::DoesNotMap,
            count: 3,
            significant: false,
        };
        let s = String::from_utf8(gaps_csv(&[g]).unwrap()).unwrap();
        assert_eq!(s.lines().nth(1).unwrap(), "concept,No,Does Not Map,\"Primary, Secondary\",3");
        assert!(!s.contains('\r'));
    }
}
