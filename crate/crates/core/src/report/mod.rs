//! Run configuration, the end-to-end pipeline and report writers.

mod config;
mod convert;
mod emit;
mod pipeline;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

pub use config::{Format, InputPaths, RunConfig};
pub use convert::{convert_brick_class_to_tags, TagConversion};
pub use emit::{completeness_counts_csv, completeness_csv, emit_reports, gaps_csv, render_markdown, QUALITATIVE_CHECKLIST};
pub use pipeline::{
    config_hash, evaluate, gap_overlap, load_brick, load_dataset_with_associations, load_exclusions, load_haystack, load_inputs,
    load_ontologies, run_pipeline, Inputs, Membership, OverlapRow, ReportBundle, RunMetadata,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Haystack,
    Brick,
    Dataset,
    Selection,
    Alignment,
    Relationships,
    Completeness,
    Expressiveness,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Haystack => "haystack",
            Stage::Brick => "brick",
            Stage::Dataset => "dataset",
            Stage::Selection => "selection",
            Stage::Alignment => "alignment",
            Stage::Relationships => "relationships",
            Stage::Completeness => "completeness",
            Stage::Expressiveness => "expressiveness",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("{stage}: {message}")]
    Load { stage: Stage, message: String },
    #[error("{stage}: integrity: {message}")]
    Integrity { stage: Stage, message: String },
    #[error("report: {0}")]
    Report(String),
}

impl PipelineError {
    /// 1 config or parse, 2 integrity, 3 report I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) | PipelineError::Load { .. } => 1,
            PipelineError::Integrity { .. } => 2,
            PipelineError::Report(_) => 3,
        }
    }
}
