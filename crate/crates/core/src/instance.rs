use serde::{Deserialize, Serialize};

/// Class label. Binary streams use 0 and 1.
pub type Label = u32;

/// One labelled stream element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    /// Position in the stream, starting at 0.
    pub t: u64,
    pub x: Vec<f64>,
    pub y: Label,
}

impl Instance {
    pub fn new(t: u64, x: Vec<f64>, y: Label) -> Self {
        Self { t, x, y }
    }

    pub fn dims(&self) -> usize {
        self.x.len()
    }
}
