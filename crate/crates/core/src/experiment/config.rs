use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::presets::{paper_suite, PAPER_SUITE};
use crate::detectors::{DetectorConfig, SignalMapping};
use crate::eval::Direction;
use crate::learners::LearnerConfig;
use crate::stream::{DriftKind, StreamSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Pacc,
    Mcc,
    MuD,
    RamHours,
    Precision,
    Recall,
}

impl Metric {
    pub const ALL: [Metric; 6] = [Metric::Pacc, Metric::Mcc, Metric::MuD, Metric::RamHours, Metric::Precision, Metric::Recall];

    pub fn key(self) -> &'static str {
        match self {
            Metric::Pacc => "pacc",
            Metric::Mcc => "mcc",
            Metric::MuD => "mu_d",
            Metric::RamHours => "ram_hours",
            Metric::Precision => "precision",
            Metric::Recall => "recall",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Metric::MuD | Metric::RamHours => Direction::LowerIsBetter,
            _ => Direction::HigherIsBetter,
        }
    }
}

/// A stream read from disk instead of generated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvStream {
    pub name: String,
    pub path: PathBuf,
    pub drift: DriftKind,
    #[serde(default)]
    pub positions: Vec<u64>,
    /// Defaults to the length divided into equal segments.
    #[serde(default)]
    pub concept_size: Option<u64>,
    #[serde(default)]
    pub grid_bins: Option<usize>,
}

fn default_prep() -> usize {
    50
}

fn default_metrics() -> Vec<Metric> {
    vec![Metric::Pacc, Metric::Mcc, Metric::MuD, Metric::RamHours]
}

fn default_sample_every() -> u64 {
    1000
}

/// A batch of runs: every learner with every detector on every stream and
/// seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_prep")]
    pub prep_size: usize,
    /// Stream seeds. Each generated stream is realised once per seed and all
    /// schemes share that realisation. Empty means each spec's own seed.
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_metrics")]
    pub metrics: Vec<Metric>,
    /// Steps between memory samples.
    #[serde(default = "default_sample_every")]
    pub sample_every: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<u64>,
    #[serde(default)]
    pub signal: SignalMapping,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default)]
    pub learners: Vec<LearnerConfig>,
    #[serde(default)]
    pub detectors: Vec<DetectorConfig>,
    #[serde(default)]
    pub streams: Vec<StreamSpec>,
    #[serde(default)]
    pub csv_streams: Vec<CsvStream>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            prep_size: default_prep(),
            seeds: Vec::new(),
            output_dir: None,
            metrics: default_metrics(),
            sample_every: default_sample_every(),
            snapshot_every: None,
            signal: SignalMapping::default(),
            preset: None,
            learners: Vec::new(),
            detectors: Vec::new(),
            streams: Vec::new(),
            csv_streams: Vec::new(),
        }
    }
}

impl ExperimentConfig {
    /// NB and KNN with all five detectors on the 20-dataset suite.
    pub fn paper_suite(seeds: Vec<u64>) -> Self {
        Self {
            seeds,
            preset: Some(PAPER_SUITE.to_string()),
            learners: vec![LearnerConfig::NaiveBayes, LearnerConfig::knn_default()],
            detectors: DetectorConfig::defaults(),
            ..Self::default()
        }
    }

    pub fn from_toml(text: &str, origin: &Path) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| text[..s.start.min(text.len())].lines().count().max(1) as u64);
            Error::Parse { path: origin.to_path_buf(), line, message: e.message().to_string() }
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidConfig(e.to_string()))
    }

    /// Reads and validates a config file. Relative CSV paths are resolved
    /// against the file's directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut config = Self::from_toml(&text, path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for s in &mut config.csv_streams {
            if s.path.is_relative() {
                s.path = base.join(&s.path);
            }
        }
        config.validate()?;
        Ok(config)
    }

    /// Inline specs followed by the preset's specs.
    pub fn stream_specs(&self) -> Result<Vec<StreamSpec>> {
        let mut specs = self.streams.clone();
        match self.preset.as_deref() {
            None => {}
            Some(PAPER_SUITE) => specs.extend(paper_suite(0)),
            Some(other) => return Err(Error::InvalidConfig(format!("unknown preset {other:?}"))),
        }
        Ok(specs)
    }

    /// Every (spec, seed) realisation to generate.
    pub fn realisations(&self) -> Result<Vec<StreamSpec>> {
        let mut out = Vec::new();
        for spec in self.stream_specs()? {
            if self.seeds.is_empty() {
                out.push(spec);
            } else {
                for &seed in &self.seeds {
                    out.push(StreamSpec { seed, ..spec.clone() });
                }
            }
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.prep_size == 0 {
            return bad("prep_size must be positive");
        }
        if self.metrics.is_empty() {
            return bad("no metrics selected");
        }
        self.signal.validate()?;
        let specs = self.stream_specs()?;
        if specs.is_empty() && self.csv_streams.is_empty() {
            return bad("no streams configured");
        }
        for spec in &specs {
            spec.validate()?;
            if spec.length <= self.prep_size as u64 {
                return Err(Error::InvalidConfig(format!("stream {} is not longer than prep_size", spec.name)));
            }
        }
        for s in &self.csv_streams {
            if !s.path.is_file() {
                return Err(Error::InvalidConfig(format!("stream {}: no such file {}", s.name, s.path.display())));
            }
        }
        let mut names: Vec<&str> = specs.iter().map(|s| s.name.as_str()).chain(self.csv_streams.iter().map(|s| s.name.as_str())).collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidConfig(format!("duplicate stream name {}", w[0])));
        }
        Ok(())
    }

    /// Validation for running, which also needs learners and detectors.
    pub fn validate_for_run(&self) -> Result<()> {
        self.validate()?;
        if self.learners.is_empty() {
            return Err(Error::InvalidConfig("no learners configured".into()));
        }
        if self.detectors.is_empty() {
            return Err(Error::InvalidConfig("no detectors configured".into()));
        }
        for l in &self.learners {
            l.build()?;
        }
        for d in &self.detectors {
            d.build_signal()?;
        }
        Ok(())
    }
}
