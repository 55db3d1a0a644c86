#![allow(dead_code)]

pub mod fuzz;

use std::path::PathBuf;
use std::sync::OnceLock;

use ontobench_core::model::HaystackNamespace;
use ontobench_core::report::{load_brick, load_haystack, RunConfig};
use ontobench_core::turtle::BrickSchema;

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn fixtures() -> PathBuf {
    root().join("fixtures")
}

pub fn data() -> PathBuf {
    root().join("data")
}

pub fn haystack() -> &'static HaystackNamespace {
    static NS: OnceLock<HaystackNamespace> = OnceLock::new();
    NS.get_or_init(|| load_haystack(&data().join("haystack")).expect("vendored haystack defs"))
}

pub fn brick() -> &'static BrickSchema {
    static B: OnceLock<BrickSchema> = OnceLock::new();
    B.get_or_init(|| load_brick(&data().join("brick/Brick-1.1.0.ttl")).expect("vendored brick"))
}

/// A fixture config with its output redirected to `out`.
pub fn config(fixture: &str, out: &std::path::Path) -> RunConfig {
    let mut cfg = RunConfig::load(&fixtures().join(fixture).join("run.toml")).expect("fixture config");
    cfg.output_dir = out.to_path_buf();
    cfg
}
