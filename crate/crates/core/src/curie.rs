//! Drift detection from neighbourhood mutations on a cellular automaton.
//!
//! The detector keeps one class label per grid cell. Each labelled instance
//! overwrites the state of the cell that encloses it; when the label differs
//! from the previous state the cell has *mutated*. A drift is declared when
//! the mutating cell has at least `n_muts_allowed` neighbours (Manhattan
//! radius `radius_mut`) whose latest mutation happened less than
//! `mutation_period` steps ago. After a drift the grid is rebuilt from the
//! sliding window of the last `prep_size` instances.
//!
//! Detection only looks at `(x, y)` pairs, never at a base learner's output.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::grid::{von_neumann_offsets, Coords, Grid, GridConfig};
use crate::snapshot::Snapshot;
use crate::{Error, Instance, Label, Result, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurieConfig {
    pub grid: GridConfig,
    /// Manhattan radius scanned for mutant neighbours.
    pub radius_mut: usize,
    /// Look-back horizon, in steps, for counting a neighbour as mutant.
    pub mutation_period: u64,
    /// Mutant neighbours needed to declare a drift.
    pub n_muts_allowed: usize,
    /// Preparatory instance count, also the sliding window size.
    pub prep_size: usize,
}

impl CurieConfig {
    /// Default parameters: r = r_mut = 2, mutation_period = 10,
    /// two mutant neighbours, 50 preparatory instances, binary labels.
    pub fn with_defaults(dims: usize, bins_per_dim: usize) -> Result<Self> {
        let config = Self {
            grid: GridConfig::new(dims, bins_per_dim, 2, vec![0, 1])?,
            radius_mut: 2,
            mutation_period: 10,
            n_muts_allowed: 2,
            prep_size: 50,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.radius_mut < 1 {
            return Err(Error::InvalidConfig("radius_mut must be at least 1".into()));
        }
        if self.mutation_period < 1 {
            return Err(Error::InvalidConfig("mutation_period must be at least 1".into()));
        }
        if self.n_muts_allowed < 1 {
            return Err(Error::InvalidConfig("n_muts_allowed must be at least 1".into()));
        }
        if self.prep_size < 1 {
            return Err(Error::InvalidConfig("prep_size must be at least 1".into()));
        }
        Ok(())
    }
}

/// FIFO buffer of the most recent instances.
#[derive(Debug, Clone, PartialEq)]
pub struct SlidingWindow {
    capacity: usize,
    buffer: VecDeque<Instance>,
}

impl SlidingWindow {
    pub fn new(capacity: usize) -> Self {
        Self { capacity, buffer: VecDeque::with_capacity(capacity) }
    }

    pub fn push(&mut self, instance: Instance) {
        if self.buffer.len() == self.capacity {
            self.buffer.pop_front();
        }
        self.buffer.push_back(instance);
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn clear(&mut self) {
        self.buffer.clear();
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &Instance> {
        self.buffer.iter()
    }

    pub fn to_vec(&self) -> Vec<Instance> {
        self.buffer.iter().cloned().collect()
    }
}

/// The mutation that triggered a drift and the neighbours it counted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionEvent {
    pub time: u64,
    pub cell: Coords,
    /// Counted neighbours with their latest mutation time.
    pub mutant_neighbors: Vec<(Coords, u64)>,
}

#[derive(Debug, Clone)]
pub struct CurieDetector {
    config: CurieConfig,
    grid: Grid,
    window: SlidingWindow,
    clock: u64,
    prepared: bool,
    mut_offsets: Vec<Vec<isize>>,
    change_flag: bool,
    last_detection: Option<DetectionEvent>,
    capture_detections: bool,
    captured: Vec<Snapshot>,
}

impl CurieDetector {
    pub fn new(config: CurieConfig) -> Result<Self> {
        config.validate()?;
        Ok(Self {
            grid: Grid::new(config.grid.clone())?,
            window: SlidingWindow::new(config.prep_size),
            clock: 0,
            prepared: false,
            mut_offsets: von_neumann_offsets(config.grid.dims, config.radius_mut),
            change_flag: false,
            last_detection: None,
            capture_detections: false,
            captured: Vec::new(),
            config,
        })
    }

    pub fn config(&self) -> &CurieConfig {
        &self.config
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn window(&self) -> &SlidingWindow {
        &self.window
    }

    /// Time step the next instance will be processed at.
    pub fn clock(&self) -> u64 {
        self.clock
    }

    pub fn is_prepared(&self) -> bool {
        self.prepared
    }

    pub fn last_detection(&self) -> Option<&DetectionEvent> {
        self.last_detection.as_ref()
    }

    /// When enabled, the pre-reset state is snapshotted at every drift.
    pub fn set_capture_detections(&mut self, on: bool) {
        self.capture_detections = on;
    }

    pub fn take_captured(&mut self) -> Vec<Snapshot> {
        std::mem::take(&mut self.captured)
    }

    /// Seeds the grid from the preparatory instances and primes the window.
    /// The clock moves past the last preparatory time step.
    pub fn prepare(&mut self, instances: &[Instance]) -> Result<()> {
        let last = instances.last().ok_or(Error::EmptyPreparatorySet)?;
        self.seed(instances)?;
        self.window.clear();
        for inst in instances {
            self.window.push(inst.clone());
        }
        self.clock = self.clock.max(last.t + 1);
        self.prepared = true;
        Ok(())
    }

    fn seed(&mut self, instances: &[Instance]) -> Result<()> {
        if instances.is_empty() {
            return Err(Error::EmptyPreparatorySet);
        }
        for inst in instances {
            if self.config.grid.label_index(inst.y).is_none() {
                return Err(Error::UnknownLabel(inst.y));
            }
        }
        self.grid.clear();
        // the whole preparatory set is buffered, so limits are settled
        // before any instance is binned
        for inst in instances {
            self.grid.expand_limits(&inst.x)?;
        }
        for inst in instances {
            let c = self.grid.locate_cell(&inst.x)?;
            self.grid.record_hit(&c, inst.y)?;
        }
        self.grid.resolve_states();
        self.grid.evolve_until_full()?;
        self.grid.resolve_states();
        Ok(())
    }

    /// State of the cell enclosing `x`.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        if !self.prepared {
            return Err(Error::NotPrepared);
        }
        let i = self.grid.locate_index(x)?;
        Ok(self.grid.cell_at(i).state.expect("prepared grid is fully assigned"))
    }

    /// Trains on one labelled instance and runs the mutation test.
    pub fn update(&mut self, x: &[f64], y: Label) -> Result<Verdict> {
        if !self.prepared {
            return Err(Error::NotPrepared);
        }
        if self.config.grid.label_index(y).is_none() {
            return Err(Error::UnknownLabel(y));
        }
        if x.len() != self.config.grid.dims {
            return Err(Error::DimensionMismatch { expected: self.config.grid.dims, actual: x.len() });
        }
        let now = self.clock;
        self.window.push(Instance::new(now, x.to_vec(), y));
        self.grid.expand_limits(x)?;
        let idx = self.grid.locate_index(x)?;

        let cell = self.grid.cell_at_mut(idx);
        let previous = cell.state.replace(y);
        let mut verdict = Verdict::NoChange;
        self.change_flag = false;

        if previous != Some(y) {
            let horizon = self.config.mutation_period;
            cell.mutation_times.retain(|&t| t + horizon > now);
            cell.mutation_times.push(now);

            let counted: Vec<usize> = self
                .grid
                .neighbor_indices(idx, &self.mut_offsets)
                .filter(|&j| {
                    self.grid
                        .cell_at(j)
                        .last_mutation()
                        .is_some_and(|t| t < now && t + horizon > now)
                })
                .collect();

            if counted.len() >= self.config.n_muts_allowed {
                let event = DetectionEvent {
                    time: now,
                    cell: self.grid.coords_of(idx),
                    mutant_neighbors: counted
                        .iter()
                        .map(|&j| {
                            (self.grid.coords_of(j), self.grid.cell_at(j).last_mutation().unwrap())
                        })
                        .collect(),
                };
                self.last_detection = Some(event);
                if self.capture_detections {
                    self.captured.push(self.snapshot());
                }
                self.reset_and_reseed()?;
                verdict = Verdict::Drift;
                self.change_flag = true;
            }
        }
        self.clock += 1;
        Ok(verdict)
    }

    /// Clears the grid and rebuilds it from the sliding window. The clock
    /// keeps running.
    pub fn reset_and_reseed(&mut self) -> Result<()> {
        let window = self.window.to_vec();
        self.seed(&window)
    }

    /// True iff the latest update declared a drift. Reading clears it.
    pub fn detected_change(&mut self) -> bool {
        std::mem::take(&mut self.change_flag)
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot::of_detector(self)
    }

    /// Rough heap footprint in bytes.
    pub fn footprint(&self) -> usize {
        let per_cell = std::mem::size_of::<crate::grid::Cell>();
        let hist: usize = self
            .grid
            .iter()
            .map(|(_, c)| c.hit_history.capacity() * 4 + c.mutation_times.capacity() * 8)
            .sum();
        let window: usize = self.window.iter().map(|i| i.x.len() * 8 + 24).sum();
        self.grid.len() * per_cell + hist + window
    }
}
