//! Streaming concept drift detection built around a cellular automaton.
//!
//! The crate is organised bottom-up:
//!
//! - [`grid`]: the d-dimensional cellular automaton that discretises feature space.
//! - [`curie`]: the mutation-based drift detector running on top of the grid.
//! - [`detectors`]: DDM, EDDM, ADWIN and Page-Hinkley behind one streaming interface.
//! - [`learners`]: incremental Gaussian Naive Bayes and sliding-window KNN.
//! - [`stream`]: synthetic drifting streams (Sine, Random Tree, Mixed, SEA, STAGGER) and CSV IO.
//! - [`eval`]: the test-then-train learning/detection loop and its metrics.
//! - [`experiment`]: config files, presets and the batch runner used by the CLI.

pub mod curie;
pub mod detectors;
mod error;
pub mod eval;
pub mod experiment;
pub mod grid;
mod instance;
pub mod learners;
pub mod snapshot;
pub mod stream;

pub use error::{Error, Result};
pub use instance::{Instance, Label};

/// Per-step output of any drift detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoChange,
    Warning,
    Drift,
}

impl Verdict {
    pub fn is_drift(self) -> bool {
        self == Verdict::Drift
    }
}
