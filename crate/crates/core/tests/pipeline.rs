mod common;

use std::fs;
use std::path::Path;

use ontobench_core::report::{config_hash, emit_reports, run_pipeline, Format, PipelineError, RunConfig};

fn copy_fixture(to: &Path) -> RunConfig {
    let src = common::fixtures();
    for f in ["dataset.csv", "associations.csv", "exclusions.txt"] {
        fs::copy(src.join("mini").join(f), to.join(f)).unwrap();
    }
    for f in ["key_relationships.csv", "relationships.csv"] {
        fs::copy(src.join(f), to.join(f)).unwrap();
    }
    fs::copy(src.join("alignment/haystack.csv"), to.join("haystack.csv")).unwrap();
    fs::copy(src.join("alignment/brick.csv"), to.join("brick.csv")).unwrap();
    let data = common::data();
    let toml = format!(
        r#"output_dir = "out"
[paths]
haystack = "{}"
brick = "{}"
dataset = "dataset.csv"
associations = "associations.csv"
exclusions = "exclusions.txt"
alignment = ["haystack.csv", "brick.csv"]
relationships = ["relationships.csv"]
key_relationships = "key_relationships.csv"
"#,
        data.join("haystack").display(),
        data.join("brick/Brick-1.1.0.ttl").display()
    );
    fs::write(to.join("run.toml"), toml).unwrap();
    RunConfig::load(&to.join("run.toml")).unwrap()
}

fn emit_all(cfg: &RunConfig, dir: &Path) -> Vec<(String, Vec<u8>)> {
    let bundle = run_pipeline(cfg).unwrap();
    let mut files: Vec<_> = emit_reports(&bundle, &[Format::Csv, Format::Markdown], dir)
        .unwrap()
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = common::config("mini", a.path());
    assert_eq!(config_hash(&cfg).unwrap(), config_hash(&common::config("mini", b.path())).unwrap());
    let first = emit_all(&cfg, a.path());
    let second = emit_all(&cfg, b.path());
    let names: Vec<&str> = first.iter().map(|(n, _)| n.as_str()).collect();
    assert!(names.contains(&"report.md") && names.contains(&"gaps_brick.csv"), "{names:?}");
    assert_eq!(names.iter().filter(|n| n.ends_with(".md")).count(), 2);
    assert_eq!(first, second);
}

#[test]
fn hash_follows_input_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = copy_fixture(tmp.path());
    let before = config_hash(&cfg).unwrap();
    assert_eq!(before.len(), 64);
    let ds = tmp.path().join("dataset.csv");
    let mut text = fs::read_to_string(&ds).unwrap();
    text.push_str("VavNewPoint,TerminalUnit,VAV,,Level,AI,\n");
    fs::write(&ds, text).unwrap();
    assert_ne!(before, config_hash(&cfg).unwrap());
    let bundle = run_pipeline(&cfg).unwrap();
    assert_eq!(bundle.selection.len(), 35);
}

#[test]
fn missing_brick_file_names_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = copy_fixture(tmp.path());
    cfg.paths.brick = tmp.path().join("nowhere/Brick.ttl");
    let err = run_pipeline(&cfg).unwrap_err();
    assert!(matches!(err, PipelineError::Config(_)), "{err:?}");
    assert!(err.to_string().contains("nowhere/Brick.ttl"), "{err}");
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn malformed_brick_file_is_a_load_error() {
    let tmp = tempfile::tempdir().unwrap();
    let mut cfg = copy_fixture(tmp.path());
    let bad = tmp.path().join("bad.ttl");
    fs::write(&bad, "@prefix brick: <https://brickschema.org/schema/1.1/Brick#> .\nbrick:AHU a \n").unwrap();
    cfg.paths.brick = bad;
    let err = run_pipeline(&cfg).unwrap_err();
    assert!(matches!(err, PipelineError::Load { .. }), "{err:?}");
    assert!(err.to_string().contains("bad.ttl"), "{err}");
}

#[test]
fn json_only_writes_one_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = copy_fixture(tmp.path());
    let bundle = run_pipeline(&cfg).unwrap();
    let out = tmp.path().join("json-out");
    let written = emit_reports(&bundle, &[Format::Json], &out).unwrap();
    assert_eq!(written.len(), 1);
    assert_eq!(fs::read_dir(&out).unwrap().count(), 1);
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&written[0]).unwrap()).unwrap();
    assert_eq!(v["metadata"]["haystack_def_count"], 714);
    assert_eq!(v["metadata"]["brick_version"], "1.1.0");
}

#[test]
fn unknown_alignment_target_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = copy_fixture(tmp.path());
    let p = tmp.path().join("brick.csv");
    let mut text = fs::read_to_string(&p).unwrap();
    text.push_str("Widget,equipmentClass,brick,Widget_Box,equivalence,\n");
    fs::write(&p, text).unwrap();
    let err = run_pipeline(&cfg).unwrap_err();
    assert!(err.to_string().contains("Widget_Box"), "{err}");
}

#[test]
fn markdown_report_has_both_tables() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = common::config("hvac440", tmp.path());
    let bundle = run_pipeline(&cfg).unwrap();
    let md = ontobench_core::report::render_markdown(&bundle);
    assert!(md.contains("Terminal Units"));
    assert!(md.contains("| Total | 43 | 69 | 59 | 77 |"), "{md}");
    assert!(md.contains("| AHU | 32 | 67 | 56 | 82 |"), "{md}");
    assert!(!md.contains(&bundle.metadata.timestamp));
}
