//! Synthetic drifting streams.
//!
//! A [`StreamSpec`] lists the concepts in order and where the stream moves
//! from one to the next. Abrupt specs switch at each position. Gradual specs
//! draw from the newer concept with probability
//! `1 / (1 + exp(-4 (t - center) / width))`, nesting one transition per drift.

mod concepts;
mod csv_io;
mod random_tree;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use concepts::{Concept, ConceptFunction, GeneratorKind, SineFunction, SEA_THRESHOLDS};
pub use csv_io::{export_csv, import_csv, read_csv, write_csv};
pub use random_tree::{RandomTreeModel, RandomTreeParams};

use crate::{Error, Instance, Label, Result};

/// Rejection-sampling attempts per instance when balancing classes.
pub const BALANCE_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriftKind {
    Abrupt,
    Gradual,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamSpec {
    pub name: String,
    pub concepts: Vec<ConceptFunction>,
    pub drift: DriftKind,
    pub positions: Vec<u64>,
    /// Transition width, used by gradual specs only.
    #[serde(default)]
    pub width: u64,
    pub length: u64,
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub seed: u64,
    /// Alternate the target class and resample features until the label
    /// matches, so both classes appear equally often.
    #[serde(default = "default_true")]
    pub balance_classes: bool,
    /// Bins per axis recommended for the CURIE grid on this stream.
    #[serde(default)]
    pub grid_bins: Option<usize>,
}

impl StreamSpec {
    pub fn kind(&self) -> Option<GeneratorKind> {
        self.concepts.first().map(ConceptFunction::kind)
    }

    pub fn n_features(&self) -> usize {
        self.kind().map_or(0, GeneratorKind::n_features)
    }

    /// Length of one concept segment, assuming uniform segments.
    pub fn concept_size(&self) -> u64 {
        self.length / (self.positions.len() as u64 + 1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(format!("stream {}: {m}", self.name)));
        let Some(kind) = self.kind() else {
            return bad("no concepts".into());
        };
        for c in &self.concepts {
            c.validate()?;
            if c.kind() != kind {
                return bad(format!("mixes {kind:?} and {:?} concepts", c.kind()));
            }
        }
        if self.concepts.len() != self.positions.len() + 1 {
            return bad(format!("{} concepts need {} positions", self.concepts.len(), self.concepts.len() - 1));
        }
        if self.positions.windows(2).any(|w| w[0] >= w[1]) {
            return bad("drift positions must be strictly increasing".into());
        }
        if self.positions.iter().any(|&p| p == 0 || p >= self.length) {
            return bad("drift positions must lie inside (0, length)".into());
        }
        if self.drift == DriftKind::Gradual && self.width == 0 {
            return bad("gradual drift needs a positive width".into());
        }
        if !(0.0..=1.0).contains(&self.noise) {
            return bad(format!("noise {} outside [0, 1]", self.noise));
        }
        Ok(())
    }

    /// Probability that step `t` is drawn from the concept after drift `k`
    /// rather than from the ones before it.
    pub fn transition_probability(&self, k: usize, t: u64) -> f64 {
        let center = self.positions[k] as f64;
        match self.drift {
            DriftKind::Abrupt => {
                if t >= self.positions[k] {
                    1.0
                } else {
                    0.0
                }
            }
            DriftKind::Gradual => 1.0 / (1.0 + (-4.0 * (t as f64 - center) / self.width as f64).exp()),
        }
    }
}

/// One generated step with its provenance, for tests and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedStep {
    pub instance: Instance,
    /// Index into the spec's concept list.
    pub concept: usize,
    /// Whether noise flipped the concept's label.
    pub flipped: bool,
}

/// Lazily yields the instances of a spec.
pub struct StreamGenerator {
    spec: StreamSpec,
    concepts: Vec<Concept>,
    rng: ChaCha8Rng,
    t: u64,
    next_class: Label,
}

impl StreamGenerator {
    pub fn new(spec: StreamSpec) -> Result<Self> {
        spec.validate()?;
        let concepts = spec.concepts.iter().cloned().map(Concept::new).collect::<Result<_>>()?;
        let rng = ChaCha8Rng::seed_from_u64(spec.seed);
        Ok(Self { spec, concepts, rng, t: 0, next_class: 0 })
    }

    pub fn spec(&self) -> &StreamSpec {
        &self.spec
    }

    fn active_concept(&mut self, t: u64) -> usize {
        match self.spec.drift {
            DriftKind::Abrupt => self.spec.positions.partition_point(|&p| p <= t),
            DriftKind::Gradual => {
                for k in (0..self.spec.positions.len()).rev() {
                    let p = self.spec.transition_probability(k, t);
                    if self.rng.random::<f64>() < p {
                        return k + 1;
                    }
                }
                0
            }
        }
    }
}

impl Iterator for StreamGenerator {
    type Item = GeneratedStep;

    fn next(&mut self) -> Option<GeneratedStep> {
        if self.t >= self.spec.length {
            return None;
        }
        let t = self.t;
        let idx = self.active_concept(t);
        let concept = &self.concepts[idx];
        let mut x = concept.sample_x(&mut self.rng);
        let mut y = concept.label_of(&x).expect("sampled point lies in the domain");
        if self.spec.balance_classes {
            let want = self.next_class;
            let mut tries = 1;
            while y != want && tries < BALANCE_ATTEMPTS {
                x = concept.sample_x(&mut self.rng);
                y = concept.label_of(&x).expect("sampled point lies in the domain");
                tries += 1;
            }
            self.next_class = 1 - want;
        }
        let flipped = self.spec.noise > 0.0 && self.rng.random::<f64>() < self.spec.noise;
        if flipped {
            y = 1 - y;
        }
        self.t += 1;
        Some(GeneratedStep { instance: Instance::new(t, x, y), concept: idx, flipped })
    }
}

/// Generates the full stream described by `spec`.
pub fn generate(spec: &StreamSpec) -> Result<Vec<Instance>> {
    Ok(StreamGenerator::new(spec.clone())?.map(|s| s.instance).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine_spec(drift: DriftKind, length: u64, positions: Vec<u64>) -> StreamSpec {
        let n = positions.len() + 1;
        let all = [
            ConceptFunction::Sine { function: SineFunction::Sine1, reversed: false },
            ConceptFunction::Sine { function: SineFunction::Sine1, reversed: true },
            ConceptFunction::Sine { function: SineFunction::Sine2, reversed: false },
            ConceptFunction::Sine { function: SineFunction::Sine2, reversed: true },
        ];
        StreamSpec {
            name: "sine".into(),
            concepts: all[..n].to_vec(),
            drift,
            positions,
            width: 1000,
            length,
            noise: 0.0,
            seed: 3,
            balance_classes: true,
            grid_bins: Some(20),
        }
    }

    #[test]
    fn validation_catches_bad_positions() {
        let mut s = sine_spec(DriftKind::Abrupt, 100, vec![50]);
        assert!(s.validate().is_ok());
        s.positions = vec![100];
        assert!(s.validate().is_err());
        s.positions = vec![0];
        assert!(s.validate().is_err());
        let mut s = sine_spec(DriftKind::Abrupt, 100, vec![30, 60]);
        s.positions = vec![60, 30];
        assert!(s.validate().is_err());
    }

    #[test]
    fn sigmoid_midpoint_is_half() {
        let s = sine_spec(DriftKind::Gradual, 40000, vec![9500]);
        assert_eq!(s.transition_probability(0, 9500), 0.5);
        assert!(s.transition_probability(0, 8500) < 0.02);
        assert!(s.transition_probability(0, 10500) > 0.98);
    }

    #[test]
    fn length_and_time_indices() {
        let s = sine_spec(DriftKind::Abrupt, 500, vec![250]);
        let v = generate(&s).unwrap();
        assert_eq!(v.len(), 500);
        assert!(v.iter().enumerate().all(|(i, inst)| inst.t == i as u64 && inst.dims() == 2));
    }

    #[test]
    fn balancing_alternates_classes() {
        let mut s = sine_spec(DriftKind::Abrupt, 200, vec![100]);
        s.concepts = vec![ConceptFunction::Stagger { function: 0 }, ConceptFunction::Stagger { function: 1 }];
        let v = generate(&s).unwrap();
        assert!(v.iter().enumerate().all(|(i, inst)| inst.y == (i % 2) as Label));
    }
}
