//! Labelling functions of the synthetic generators.
//!
//! | generator   | features                                  | functions |
//! |-------------|-------------------------------------------|-----------|
//! | sine        | 2 uniform on [0, 1]                        | SINE1, SINE2, optionally reversed |
//! | sea         | 3 uniform on [0, 10]                       | thresholds 8, 9, 7, 9.5 |
//! | stagger     | size, colour, shape each in {0, 1, 2}      | 0, 1, 2 |
//! | mixed       | 2 booleans then 2 uniform on [0, 1]        | 0, 1 |
//! | random_tree | 2 uniform on [0, 1]                        | tree seed |
//!
//! STAGGER encodes size as small/medium/large = 0/1/2, colour as
//! red/green/blue = 0/1/2 and shape as circle/square/triangle = 0/1/2.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::random_tree::{RandomTreeModel, RandomTreeParams};
use crate::{Error, Label, Result};

pub const SEA_THRESHOLDS: [f64; 4] = [8.0, 9.0, 7.0, 9.5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Sine,
    RandomTree,
    Mixed,
    Sea,
    Stagger,
}

impl GeneratorKind {
    pub fn n_features(self) -> usize {
        match self {
            GeneratorKind::Sine | GeneratorKind::RandomTree => 2,
            GeneratorKind::Sea | GeneratorKind::Stagger => 3,
            GeneratorKind::Mixed => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SineFunction {
    Sine1,
    Sine2,
}

/// One labelling function of a generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum ConceptFunction {
    Sine {
        function: SineFunction,
        #[serde(default)]
        reversed: bool,
    },
    RandomTree {
        seed: u64,
    },
    Mixed {
        function: u8,
    },
    Sea {
        function: u8,
    },
    Stagger {
        function: u8,
    },
}

impl ConceptFunction {
    pub fn kind(&self) -> GeneratorKind {
        match self {
            ConceptFunction::Sine { .. } => GeneratorKind::Sine,
            ConceptFunction::RandomTree { .. } => GeneratorKind::RandomTree,
            ConceptFunction::Mixed { .. } => GeneratorKind::Mixed,
            ConceptFunction::Sea { .. } => GeneratorKind::Sea,
            ConceptFunction::Stagger { .. } => GeneratorKind::Stagger,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ConceptFunction::Sine { .. } | ConceptFunction::RandomTree { .. } => true,
            ConceptFunction::Mixed { function } => function < 2,
            ConceptFunction::Sea { function } => function < 4,
            ConceptFunction::Stagger { function } => function < 3,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(format!("unknown function in {self}")))
        }
    }

    /// Label of `x` under this function. Builds the tree for random-tree
    /// concepts; use [`Concept`] when labelling many points.
    pub fn label_of(&self, x: &[f64]) -> Result<Label> {
        Concept::new(self.clone())?.label_of(x)
    }
}

impl std::fmt::Display for ConceptFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConceptFunction::Sine { function, reversed } => {
                let name = match function {
                    SineFunction::Sine1 => "SINE1",
                    SineFunction::Sine2 => "SINE2",
                };
                if *reversed {
                    write!(f, "reversed {name}")
                } else {
                    f.write_str(name)
                }
            }
            ConceptFunction::RandomTree { seed } => write!(f, "random_tree({seed})"),
            ConceptFunction::Mixed { function } => write!(f, "mixed({function})"),
            ConceptFunction::Sea { function } => write!(f, "sea({function})"),
            ConceptFunction::Stagger { function } => write!(f, "stagger({function})"),
        }
    }
}

fn sine2_boundary(x: f64) -> f64 {
    0.5 + 0.3 * (3.0 * PI * x).sin()
}

/// A concept ready for sampling and labelling.
#[derive(Debug, Clone)]
pub struct Concept {
    function: ConceptFunction,
    tree: Option<RandomTreeModel>,
}

impl Concept {
    pub fn new(function: ConceptFunction) -> Result<Self> {
        function.validate()?;
        let tree = match function {
            ConceptFunction::RandomTree { seed } => Some(RandomTreeModel::new(RandomTreeParams::default(), seed)),
            _ => None,
        };
        Ok(Self { function, tree })
    }

    pub fn function(&self) -> &ConceptFunction {
        &self.function
    }

    fn domain_error(&self, x: &[f64]) -> Error {
        Error::DomainViolation { concept: self.function.to_string(), value: format!("{x:?}") }
    }

    fn check_domain(&self, x: &[f64]) -> Result<()> {
        let kind = self.function.kind();
        if x.len() != kind.n_features() {
            return Err(Error::DimensionMismatch { expected: kind.n_features(), actual: x.len() });
        }
        let unit = |v: &f64| (0.0..=1.0).contains(v);
        let ok = match kind {
            GeneratorKind::Sine | GeneratorKind::RandomTree => x.iter().all(unit),
            GeneratorKind::Sea => x.iter().all(|v| (0.0..=10.0).contains(v)),
            GeneratorKind::Stagger => x.iter().all(|&v| v == 0.0 || v == 1.0 || v == 2.0),
            GeneratorKind::Mixed => {
                x[..2].iter().all(|&v| v == 0.0 || v == 1.0) && x[2..].iter().all(unit)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(self.domain_error(x))
        }
    }

    pub fn label_of(&self, x: &[f64]) -> Result<Label> {
        self.check_domain(x)?;
        let positive = match self.function {
            ConceptFunction::Sine { function, reversed } => {
                let inside = match function {
                    SineFunction::Sine1 => x[1] < x[0].sin(),
                    SineFunction::Sine2 => x[1] < sine2_boundary(x[0]),
                };
                inside != reversed
            }
            ConceptFunction::Sea { function } => x[0] + x[1] <= SEA_THRESHOLDS[function as usize],
            ConceptFunction::Stagger { function } => {
                let (size, color, shape) = (x[0], x[1], x[2]);
                match function {
                    0 => size == 0.0 && color == 0.0,
                    1 => color == 1.0 || shape == 0.0,
                    _ => size == 1.0 || size == 2.0,
                }
            }
            ConceptFunction::Mixed { function } => {
                let votes = u8::from(x[0] == 1.0) + u8::from(x[1] == 1.0) + u8::from(x[3] < sine2_boundary(x[2]));
                (votes >= 2) != (function == 1)
            }
            ConceptFunction::RandomTree { .. } => {
                return Ok(self.tree.as_ref().expect("tree built for random tree concept").classify(x))
            }
        };
        Ok(Label::from(positive))
    }

    /// Draws a feature vector from the concept's domain.
    pub fn sample_x<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        match self.function.kind() {
            GeneratorKind::Sine | GeneratorKind::RandomTree => vec![rng.random(), rng.random()],
            GeneratorKind::Sea => (0..3).map(|_| 10.0 * rng.random::<f64>()).collect(),
            GeneratorKind::Stagger => (0..3).map(|_| f64::from(rng.random_range(0u8..3))).collect(),
            GeneratorKind::Mixed => vec![
                f64::from(u8::from(rng.random::<bool>())),
                f64::from(u8::from(rng.random::<bool>())),
                rng.random(),
                rng.random(),
            ],
        }
    }
}
