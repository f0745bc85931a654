//! Incremental base learners used in the test-then-train loop.

mod knn;
mod naive_bayes;

use serde::{Deserialize, Serialize};

pub use knn::Knn;
pub use naive_bayes::GaussianNb;

use crate::{Error, Label, Result};

pub trait Learner: Send {
    fn partial_fit(&mut self, x: &[f64], y: Label) -> Result<()>;

    fn predict(&self, x: &[f64]) -> Result<Label>;

    /// Clears the model, keeping hyper-parameters.
    fn reset(&mut self);

    /// Rough heap footprint in bytes.
    fn footprint(&self) -> usize;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LearnerConfig {
    #[serde(rename = "nb")]
    NaiveBayes,
    Knn {
        #[serde(default = "default_k")]
        k: usize,
        #[serde(default = "default_window")]
        max_window_size: usize,
    },
}

fn default_k() -> usize {
    5
}

fn default_window() -> usize {
    50
}

impl LearnerConfig {
    pub fn name(&self) -> &'static str {
        match self {
            LearnerConfig::NaiveBayes => "NB",
            LearnerConfig::Knn { .. } => "KNN",
        }
    }

    pub fn knn_default() -> Self {
        LearnerConfig::Knn { k: default_k(), max_window_size: default_window() }
    }

    pub fn build(&self) -> Result<Box<dyn Learner>> {
        Ok(match *self {
            LearnerConfig::NaiveBayes => Box::new(GaussianNb::new()),
            LearnerConfig::Knn { k, max_window_size } => Box::new(Knn::new(k, max_window_size)?),
        })
    }
}

pub(crate) fn check_features(x: &[f64], dims: Option<usize>) -> Result<()> {
    if let Some(d) = dims {
        if d != x.len() {
            return Err(Error::DimensionMismatch { expected: d, actual: x.len() });
        }
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteFeature(i));
    }
    Ok(())
}
