use serde::{Deserialize, Serialize};

use crate::stream::DriftKind;
use crate::{Error, Result};

/// Mean delay reported when a run has no true positive.
pub const NO_TP_DELAY: f64 = 1000.0;

/// Running prequential accuracy from a reference step.
///
/// `value` after the n-th bit is `value + (bit - value) / n`, which is the
/// arithmetic mean of the bits seen since `t_ref`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrequentialTracker {
    pub t_ref: usize,
    value: f64,
    count: usize,
}

impl PrequentialTracker {
    pub fn new(t_ref: usize) -> Self {
        Self { t_ref, value: 0.0, count: 0 }
    }

    pub fn push(&mut self, correct: bool) -> f64 {
        self.count += 1;
        let bit = if correct { 1.0 } else { 0.0 };
        self.value += (bit - self.value) / self.count as f64;
        self.value
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

/// Prequential accuracy of `bits[t_ref..]`.
pub fn prequential_accuracy(bits: &[bool], t_ref: usize) -> Result<f64> {
    if t_ref >= bits.len() {
        return Err(Error::ReferenceOutOfRange { t_ref, len: bits.len() });
    }
    let mut tracker = PrequentialTracker::new(t_ref);
    for &b in &bits[t_ref..] {
        tracker.push(b);
    }
    Ok(tracker.value())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionScore {
    pub tp: u64,
    pub fp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub mcc: f64,
    pub mu_d: f64,
    /// False when there was no detection, so precision was set to 0.
    pub precision_defined: bool,
    /// False when there was no true drift, so recall was set to 0.
    pub recall_defined: bool,
}

/// Steps after a drift within which a detection counts: 2% of the concept
/// size for abrupt drift, 10% for gradual.
pub fn acceptance_window(kind: DriftKind, concept_size: u64) -> u64 {
    match kind {
        DriftKind::Abrupt => concept_size * 2 / 100,
        DriftKind::Gradual => concept_size * 10 / 100,
    }
}

/// Matches detections to drifts chronologically.
///
/// A detection in `[d, d + window)` of a not yet matched drift `d` is a true
/// positive; every other detection is a false positive. Every evaluated step
/// is a potential detection point, so the remaining steps count as true
/// negatives.
pub fn score_detections(
    detections: &[u64],
    true_drifts: &[u64],
    kind: DriftKind,
    concept_size: u64,
    evaluated_steps: u64,
) -> DetectionScore {
    let window = acceptance_window(kind, concept_size);
    let mut matched = vec![false; true_drifts.len()];
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut delay_sum = 0u64;
    for &det in detections {
        let hit = true_drifts
            .iter()
            .enumerate()
            .find(|&(i, &d)| !matched[i] && d <= det && det < d + window);
        match hit {
            Some((i, &d)) => {
                matched[i] = true;
                tp += 1;
                delay_sum += det - d;
            }
            None => fp += 1,
        }
    }
    let fn_ = true_drifts.len() as u64 - tp;
    let tn = evaluated_steps.saturating_sub(tp + fp + fn_);
    let precision_defined = tp + fp > 0;
    let recall_defined = !true_drifts.is_empty();
    let precision = if precision_defined { tp as f64 / (tp + fp) as f64 } else { 0.0 };
    let recall = if recall_defined { tp as f64 / (tp + fn_) as f64 } else { 0.0 };
    let mu_d = if tp > 0 { delay_sum as f64 / tp as f64 } else { NO_TP_DELAY };
    DetectionScore { tp, fp, fn_, tn, precision, recall, mcc: mcc(tp, fp, fn_, tn), mu_d, precision_defined, recall_defined }
}

/// Matthews correlation coefficient; 0 when any marginal is empty.
pub fn mcc(tp: u64, fp: u64, fn_: u64, tn: u64) -> f64 {
    let [tp, fp, fn_, tn] = [tp, fp, fn_, tn].map(|v| v as f64);
    let factors = [tp + fp, tp + fn_, tn + fp, tn + fn_];
    if factors.contains(&0.0) {
        return 0.0;
    }
    let denom = factors.iter().map(|f| f.sqrt()).product::<f64>();
    ((tp * tn - fp * fn_) / denom).clamp(-1.0, 1.0)
}

/// Memory in use at some point of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceSample {
    pub step: u64,
    pub elapsed_secs: f64,
    pub bytes: u64,
}

const BYTES_PER_GB: f64 = 1024.0 * 1024.0 * 1024.0;

/// Trapezoidal integral of memory (GB) over elapsed time (hours).
pub fn ram_hours(samples: &[ResourceSample]) -> f64 {
    if samples.is_empty() {
        log::warn!("no resource samples, RAM-Hours reported as 0");
        return 0.0;
    }
    samples
        .windows(2)
        .map(|w| {
            let hours = (w[1].elapsed_secs - w[0].elapsed_secs) / 3600.0;
            let gb = (w[0].bytes + w[1].bytes) as f64 / 2.0 / BYTES_PER_GB;
            gb * hours
        })
        .sum()
}
