use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::dataset::System;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Csv, Format::Json, Format::Markdown];
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Markdown => "markdown",
        })
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputPaths {
    /// Directory of `.trio` def libraries.
    pub haystack: PathBuf,
    /// Brick schema `.ttl` file.
    pub brick: PathBuf,
    pub dataset: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub associations: Option<PathBuf>,
    pub alignment: Vec<PathBuf>,
    pub relationships: Vec<PathBuf>,
    pub key_relationships: PathBuf,
    /// One excluded point name per line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exclusions: Option<PathBuf>,
}

fn default_systems() -> Vec<String> {
    ["ahu", "chiller", "boiler", "loop", "terminal-units"].map(String::from).to_vec()
}

fn default_formats() -> Vec<Format> {
    Format::ALL.to_vec()
}

/// Run configuration, read from TOML or JSON. Relative paths are taken
/// from the directory holding the config file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub paths: InputPaths,
    #[serde(default = "default_systems")]
    pub target_systems: Vec<String>,
    pub output_dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<RunConfig, PipelineError> {
        toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<RunConfig, PipelineError> {
        serde_json::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))
    }

    /// Read a config (JSON if the extension says so, TOML otherwise) and
    /// check it.
    pub fn load(path: &Path) -> Result<RunConfig, PipelineError> {
        let text = std::fs::read_to_string(path).map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            RunConfig::from_json(&text)
        } else {
            RunConfig::from_toml(&text)
        }
        .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_path(&self) -> PathBuf {
        self.resolve(&self.output_dir)
    }

    /// Every input path, resolved, in a fixed order.
    pub fn input_paths(&self) -> Vec<PathBuf> {
        let p = &self.paths;
        let mut out = vec![p.haystack.clone(), p.brick.clone(), p.dataset.clone()];
        out.extend(p.associations.clone());
        out.extend(p.alignment.iter().cloned());
        out.extend(p.relationships.iter().cloned());
        out.push(p.key_relationships.clone());
        out.extend(p.exclusions.clone());
        out.iter().map(|x| self.resolve(x)).collect()
    }

    pub fn systems(&self) -> Result<BTreeSet<System>, PipelineError> {
        self.target_systems
            .iter()
            .map(|s| s.parse::<System>().map_err(PipelineError::Config))
            .collect()
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        for p in self.input_paths() {
            if !p.exists() {
                return Err(PipelineError::Config(format!("input path {} does not exist", p.display())));
            }
        }
        if self.formats.is_empty() {
            return Err(PipelineError::Config("no output format selected".into()));
        }
        if self.systems()?.is_empty() {
            return Err(PipelineError::Config("no target systems".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOML: &str = r#"
target_systems = ["ahu", "boiler"]
output_dir = "out"
formats = ["csv", "json"]

[paths]
haystack = "hs"
brick = "b.ttl"
dataset = "d.csv"
alignment = ["a.csv"]
relationships = ["r.csv"]
key_relationships = "k.csv"
"#;

    #[test]
    fn parse_and_defaults() {
        let cfg = RunConfig::from_toml(TOML).unwrap();
        assert_eq!(cfg.formats, [Format::Csv, Format::Json]);
        assert_eq!(cfg.systems().unwrap().len(), 2);
        let json = serde_json::to_string(&cfg).unwrap();
        assert_eq!(RunConfig::from_json(&json).unwrap(), cfg);
        let bare = RunConfig::from_toml(&TOML.replace("formats = [\"csv\", \"json\"]\n", "")).unwrap();
        assert_eq!(bare.formats.len(), 3);
    }

    #[test]
    fn missing_path_named() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, TOML).unwrap();
        let err = RunConfig::load(&path).unwrap_err();
        assert!(err.to_string().contains("hs"), "{err}");
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(RunConfig::from_toml(&format!("{TOML}\nbogus = 1\n")).is_err());
    }
}
