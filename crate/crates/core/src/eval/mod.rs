//! The test-then-train learning/detection loop and its measurements.

mod metrics;
mod stats;

use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use metrics::{
    acceptance_window, mcc, prequential_accuracy, ram_hours, score_detections, DetectionScore, PrequentialTracker,
    ResourceSample, NO_TP_DELAY,
};
pub use stats::{critical_difference, friedman_nemenyi, nemenyi_q, rank_with_ties, Direction, RankTable};

use crate::curie::{CurieConfig, CurieDetector};
use crate::detectors::{CurieParams, DetectorConfig, DriftDetector, SignalMapping};
use crate::grid::GridConfig;
use crate::learners::{Learner, LearnerConfig};
use crate::snapshot::Snapshot;
use crate::stream::{DriftKind, StreamSpec};
use crate::{Error, Instance, Result};

/// Bins per axis when neither the detector nor the stream names one.
pub const DEFAULT_GRID_BINS: usize = 10;

/// What the harness needs to know about a stream besides its instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamMeta {
    pub name: String,
    pub true_drifts: Vec<u64>,
    pub drift_kind: DriftKind,
    pub concept_size: u64,
    pub grid_bins: Option<usize>,
    pub seed: u64,
}

impl StreamMeta {
    pub fn of_spec(spec: &StreamSpec) -> Self {
        Self {
            name: spec.name.clone(),
            true_drifts: spec.positions.clone(),
            drift_kind: spec.drift,
            concept_size: spec.concept_size(),
            grid_bins: spec.grid_bins,
            seed: spec.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Preparatory instances, also the size of the retraining window.
    pub prep_size: usize,
    pub mapping: SignalMapping,
    /// Record a resource sample every this many steps.
    pub sample_every: u64,
    /// Snapshot CURIE every this many steps (and at each detection).
    pub snapshot_every: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { prep_size: 50, mapping: SignalMapping::default(), sample_every: 1000, snapshot_every: None }
    }
}

/// Outcome of one learner x detector x stream run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub scheme: String,
    pub learner: String,
    pub detector: String,
    pub stream: String,
    pub seed: u64,
    pub prep_size: usize,
    /// Prediction correctness for every step from `prep_size` on.
    pub correct: Vec<bool>,
    /// Stream time of each declared drift, increasing.
    pub detections: Vec<u64>,
    pub true_drifts: Vec<u64>,
    pub drift_kind: DriftKind,
    pub concept_size: u64,
    pub samples: Vec<ResourceSample>,
    pub wall_seconds: f64,
}

impl RunResult {
    pub fn evaluated_steps(&self) -> u64 {
        self.correct.len() as u64
    }

    pub fn pacc(&self) -> f64 {
        prequential_accuracy(&self.correct, 0).unwrap_or(0.0)
    }

    pub fn score(&self) -> DetectionScore {
        score_detections(&self.detections, &self.true_drifts, self.drift_kind, self.concept_size, self.evaluated_steps())
    }

    pub fn ram_hours(&self) -> f64 {
        ram_hours(&self.samples)
    }
}

pub fn scheme_id(learner: &str, detector: &str, stream: &str) -> String {
    format!("{learner}+{detector}@{stream}")
}

/// The detector side of a scheme.
pub enum SchemeDetector {
    /// Fed the mapped correctness signal of the learner.
    Signal { name: String, detector: Box<dyn DriftDetector>, mapping: SignalMapping },
    /// Trained directly on the labelled instances.
    Curie(Box<CurieDetector>),
}

impl SchemeDetector {
    pub fn build(config: &DetectorConfig, dims: usize, stream_bins: Option<usize>, opts: &RunOptions) -> Result<Self> {
        opts.mapping.validate()?;
        match config {
            DetectorConfig::Curie(p) => Ok(SchemeDetector::Curie(Box::new(build_curie(p, dims, stream_bins, opts.prep_size)?))),
            other => Ok(SchemeDetector::Signal {
                name: other.name().to_string(),
                detector: other.build_signal()?.expect("non-CURIE detectors take a signal"),
                mapping: opts.mapping,
            }),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            SchemeDetector::Signal { name, .. } => name,
            SchemeDetector::Curie(_) => "CURIE",
        }
    }

    fn footprint(&self) -> usize {
        match self {
            SchemeDetector::Signal { detector, .. } => detector.footprint(),
            SchemeDetector::Curie(c) => c.footprint(),
        }
    }
}

pub fn build_curie(p: &CurieParams, dims: usize, stream_bins: Option<usize>, prep_size: usize) -> Result<CurieDetector> {
    let bins = p.n_bins.or(stream_bins).unwrap_or(DEFAULT_GRID_BINS);
    let config = CurieConfig {
        grid: GridConfig::new(dims, bins, p.r, p.states.clone())?,
        radius_mut: p.r_mut,
        mutation_period: p.mutation_period,
        n_muts_allowed: p.num_mutants_neighbors,
        prep_size,
    };
    CurieDetector::new(config)
}

/// Runs a configured scheme over `stream`.
pub fn run_scheme(
    learner: &LearnerConfig,
    detector: &DetectorConfig,
    stream: &[Instance],
    meta: &StreamMeta,
    opts: &RunOptions,
) -> Result<RunResult> {
    let dims = stream.first().map_or(0, Instance::dims);
    let mut d = SchemeDetector::build(detector, dims, meta.grid_bins, opts)?;
    run_with(learner.name(), learner.build()?, &mut d, stream, meta, opts, &mut |_, _, _| Ok(()))
}

/// The learning/detection loop with explicit components.
///
/// The first `prep_size` instances fit the learner (and seed CURIE). From
/// then on each instance is predicted, learnt, and passed to the detector.
/// On a drift the detector starts over and the learner is refit on the
/// last `prep_size` instances. With `opts.snapshot_every` set,
/// `on_snapshot` receives CURIE snapshots with a flag telling whether the
/// snapshot was taken at a detection.
pub fn run_with(
    learner_name: &str,
    mut learner: Box<dyn Learner>,
    detector: &mut SchemeDetector,
    stream: &[Instance],
    meta: &StreamMeta,
    opts: &RunOptions,
    on_snapshot: &mut dyn FnMut(u64, &Snapshot, bool) -> Result<()>,
) -> Result<RunResult> {
    let p = opts.prep_size;
    if p == 0 {
        return Err(Error::InvalidConfig("prep_size must be positive".into()));
    }
    if stream.len() <= p {
        return Err(Error::InvalidConfig(format!("stream of {} instances is not longer than P = {p}", stream.len())));
    }
    let dims = stream[0].dims();
    if let Some(bad) = stream.iter().find(|i| i.dims() != dims) {
        return Err(Error::DimensionMismatch { expected: dims, actual: bad.dims() });
    }
    let started = Instant::now();
    let mut window = crate::curie::SlidingWindow::new(p);
    for inst in &stream[..p] {
        window.push(inst.clone());
        learner.partial_fit(&inst.x, inst.y)?;
    }
    if let SchemeDetector::Curie(c) = detector {
        c.prepare(&stream[..p])?;
        c.set_capture_detections(opts.snapshot_every.is_some());
    }

    let mut correct = Vec::with_capacity(stream.len() - p);
    let mut detections = Vec::new();
    let mut samples = Vec::new();
    let sample = |step: u64, learner: &dyn Learner, detector: &SchemeDetector| ResourceSample {
        step,
        elapsed_secs: started.elapsed().as_secs_f64(),
        bytes: (learner.footprint() + detector.footprint()) as u64,
    };
    samples.push(sample(stream[p - 1].t, learner.as_ref(), detector));

    for inst in &stream[p..] {
        window.push(inst.clone());
        let ok = learner.predict(&inst.x)? == inst.y;
        correct.push(ok);
        learner.partial_fit(&inst.x, inst.y)?;

        let drift = match detector {
            SchemeDetector::Signal { detector: det, mapping, .. } => {
                det.add_element(mapping.to_detector(SignalMapping::emit(ok)))?;
                det.detected_change()
            }
            SchemeDetector::Curie(c) => {
                c.update(&inst.x, inst.y)?;
                c.detected_change()
            }
        };
        if drift {
            detections.push(inst.t);
            match detector {
                SchemeDetector::Signal { detector: det, .. } => det.reset(),
                // CURIE already reseeded its grid from its own window
                SchemeDetector::Curie(c) => {
                    for snap in c.take_captured() {
                        on_snapshot(inst.t, &snap, true)?;
                    }
                }
            }
            learner.reset();
            for w in window.iter() {
                learner.partial_fit(&w.x, w.y)?;
            }
        }
        if let (Some(k), SchemeDetector::Curie(c)) = (opts.snapshot_every, &*detector) {
            if k > 0 && (inst.t + 1) % k == 0 {
                on_snapshot(inst.t, &c.snapshot(), false)?;
            }
        }
        if opts.sample_every > 0 && (inst.t + 1) % opts.sample_every == 0 {
            samples.push(sample(inst.t, learner.as_ref(), detector));
        }
    }
    samples.push(sample(stream[stream.len() - 1].t, learner.as_ref(), detector));

    Ok(RunResult {
        scheme: scheme_id(learner_name, detector.name(), &meta.name),
        learner: learner_name.to_string(),
        detector: detector.name().to_string(),
        stream: meta.name.clone(),
        seed: meta.seed,
        prep_size: p,
        correct,
        detections,
        true_drifts: meta.true_drifts.clone(),
        drift_kind: meta.drift_kind,
        concept_size: meta.concept_size,
        samples,
        wall_seconds: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::{Arc, Mutex};

    use super::*;
    use crate::stream::{generate, ConceptFunction, SineFunction};
    use crate::Verdict;

    struct Recording(Arc<Mutex<Vec<f64>>>);

    impl DriftDetector for Recording {
        fn add_element(&mut self, value: f64) -> Result<Verdict> {
            self.0.lock().unwrap().push(value);
            Ok(Verdict::NoChange)
        }
        fn detected_change(&mut self) -> bool {
            false
        }
        fn reset(&mut self) {}
    }

    fn sine_stream(length: u64, positions: Vec<u64>) -> (Vec<Instance>, StreamMeta) {
        let concepts = [false, true][..positions.len() + 1]
            .iter()
            .map(|&reversed| ConceptFunction::Sine { function: SineFunction::Sine1, reversed })
            .collect();
        let spec = StreamSpec {
            name: "sine".into(),
            concepts,
            drift: DriftKind::Abrupt,
            positions,
            width: 0,
            length,
            noise: 0.0,
            seed: 11,
            balance_classes: true,
            grid_bins: Some(20),
        };
        (generate(&spec).unwrap(), StreamMeta::of_spec(&spec))
    }

    #[test]
    fn signal_detector_sees_mapped_correctness() {
        let (stream, meta) = sine_stream(600, vec![300]);
        let seen = Arc::new(Mutex::new(Vec::new()));
        let mut det = SchemeDetector::Signal {
            name: "REC".into(),
            detector: Box::new(Recording(seen.clone())),
            mapping: SignalMapping::default(),
        };
        let opts = RunOptions::default();
        let r = run_with("NB", LearnerConfig::NaiveBayes.build().unwrap(), &mut det, &stream, &meta, &opts, &mut |_, _, _| Ok(()))
            .unwrap();
        assert_eq!(r.correct.len(), 550);
        let seen = seen.lock().unwrap();
        let expected: Vec<f64> = r.correct.iter().map(|&ok| if ok { 0.0 } else { 1.0 }).collect();
        assert_eq!(*seen, expected);
    }

    #[test]
    fn curie_detections_do_not_depend_on_learner() {
        let (stream, meta) = sine_stream(3000, vec![1500]);
        let opts = RunOptions::default();
        let curie = DetectorConfig::Curie(CurieParams::default());
        let a = run_scheme(&LearnerConfig::NaiveBayes, &curie, &stream, &meta, &opts).unwrap();
        let b = run_scheme(&LearnerConfig::knn_default(), &curie, &stream, &meta, &opts).unwrap();
        assert_eq!(a.detections, b.detections);
        assert_ne!(a.correct, b.correct);
    }

    #[test]
    fn stationary_stream_is_learnt() {
        let (stream, meta) = sine_stream(3000, vec![]);
        let r = run_scheme(&LearnerConfig::knn_default(), &DetectorConfig::Ddm(Default::default()), &stream, &meta, &RunOptions::default())
            .unwrap();
        assert!(r.pacc() > 0.85, "{}", r.pacc());
        assert!(r.detections.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn too_short_stream_rejected() {
        let (stream, meta) = sine_stream(50, vec![]);
        assert!(run_scheme(&LearnerConfig::NaiveBayes, &DetectorConfig::Curie(CurieParams::default()), &stream, &meta, &RunOptions::default()).is_err());
    }
}
