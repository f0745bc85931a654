//! Error-signal drift detectors: DDM, EDDM, ADWIN and Page-Hinkley.
//!
//! All four consume one value per step and share [`DriftDetector`]. DDM and
//! EDDM take a binary signal where `1.0` means the base learner erred; ADWIN
//! and Page-Hinkley take any real value (the harness feeds them the same
//! error indicator).

mod adwin;
mod ddm;
mod eddm;
mod page_hinkley;

use serde::{Deserialize, Serialize};

pub use adwin::{Adwin, AdwinConfig};
pub use ddm::{Ddm, DdmConfig};
pub use eddm::{Eddm, EddmConfig};
pub use page_hinkley::{PageHinkley, PageHinkleyConfig};

use crate::{Error, Result, Verdict};

pub trait DriftDetector: Send {
    /// Feeds one observation and returns the verdict for this step.
    fn add_element(&mut self, value: f64) -> Result<Verdict>;

    /// True iff the latest `add_element` returned [`Verdict::Drift`].
    /// Reading clears the flag.
    fn detected_change(&mut self) -> bool;

    /// Restores the post-construction state, keeping parameters.
    fn reset(&mut self);

    /// Rough heap footprint in bytes.
    fn footprint(&self) -> usize {
        std::mem::size_of_val(self)
    }
}

/// Which value of the learner-side signal marks a misclassification.
///
/// The learning loop emits `0` for a wrong prediction and `1` for a correct
/// one; detectors expect `1.0` for an error. With the default
/// `error_value = 0` the mapping translates between the two. Setting
/// `error_value = 1` feeds the raw signal through unchanged.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalMapping {
    pub error_value: u8,
}

impl SignalMapping {
    /// Learner-side signal for a prediction: 0 if wrong, 1 if right.
    pub fn emit(correct: bool) -> u8 {
        u8::from(correct)
    }

    /// Detector input (1.0 = error) for a learner-side signal.
    pub fn to_detector(self, signal: u8) -> f64 {
        if signal == self.error_value {
            1.0
        } else {
            0.0
        }
    }

    pub fn validate(self) -> Result<()> {
        if self.error_value > 1 {
            return Err(Error::InvalidConfig("signal error_value must be 0 or 1".into()));
        }
        Ok(())
    }
}

pub(crate) fn binary(value: f64) -> Result<bool> {
    if value == 0.0 {
        Ok(false)
    } else if value == 1.0 {
        Ok(true)
    } else {
        Err(Error::NonBinarySignal(value))
    }
}

/// Detector selection with the parameter names used in experiment configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DetectorConfig {
    Ddm(DdmConfig),
    Eddm(EddmConfig),
    Adwin(AdwinConfig),
    #[serde(rename = "ph")]
    PageHinkley(PageHinkleyConfig),
    Curie(CurieParams),
}

impl DetectorConfig {
    pub fn name(&self) -> &'static str {
        match self {
            DetectorConfig::Ddm(_) => "DDM",
            DetectorConfig::Eddm(_) => "EDDM",
            DetectorConfig::Adwin(_) => "ADWIN",
            DetectorConfig::PageHinkley(_) => "PH",
            DetectorConfig::Curie(_) => "CURIE",
        }
    }

    /// The five detectors with their default parameters.
    pub fn defaults() -> Vec<DetectorConfig> {
        vec![
            DetectorConfig::Ddm(DdmConfig::default()),
            DetectorConfig::Eddm(EddmConfig::default()),
            DetectorConfig::Adwin(AdwinConfig::default()),
            DetectorConfig::PageHinkley(PageHinkleyConfig::default()),
            DetectorConfig::Curie(CurieParams::default()),
        ]
    }

    /// Builds a signal detector; `None` for CURIE, which is built by the
    /// harness once the feature count is known.
    pub fn build_signal(&self) -> Result<Option<Box<dyn DriftDetector>>> {
        Ok(Some(match self {
            DetectorConfig::Ddm(c) => Box::new(Ddm::new(c.clone())?),
            DetectorConfig::Eddm(c) => Box::new(Eddm::new(c.clone())?),
            DetectorConfig::Adwin(c) => Box::new(Adwin::new(c.clone())?),
            DetectorConfig::PageHinkley(c) => Box::new(PageHinkley::new(c.clone())?),
            DetectorConfig::Curie(_) => return Ok(None),
        }))
    }
}

/// CURIE parameters as they appear in configs. The grid dimension is taken
/// from the stream; `n_bins` falls back to the stream's recommended bins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurieParams {
    pub r: usize,
    pub r_mut: usize,
    pub mutation_period: u64,
    pub num_mutants_neighbors: usize,
    pub n_bins: Option<usize>,
    pub states: Vec<crate::Label>,
}

impl Default for CurieParams {
    fn default() -> Self {
        Self { r: 2, r_mut: 2, mutation_period: 10, num_mutants_neighbors: 2, n_bins: None, states: vec![0, 1] }
    }
}
