//! Early Drift Detection Method: watches the distance (in steps) between
//! consecutive errors. With `m` the mean distance and `σ` its standard
//! deviation, the ratio `(m + 2σ) / max(m + 2σ)` falling below
//! `out_control_level` signals drift, below `warning_level` a warning.

use serde::{Deserialize, Serialize};

use super::{binary, DriftDetector};
use crate::{Error, Result, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EddmConfig {
    pub min_num_instances: u64,
    pub warning_level: f64,
    pub out_control_level: f64,
    /// Errors required before the ratio test runs.
    pub min_num_errors: u64,
}

impl Default for EddmConfig {
    fn default() -> Self {
        Self { min_num_instances: 30, warning_level: 0.95, out_control_level: 0.9, min_num_errors: 30 }
    }
}

#[derive(Debug, Clone)]
pub struct Eddm {
    config: EddmConfig,
    n: u64,
    num_errors: u64,
    last_error_at: Option<u64>,
    distances: u64,
    mean: f64,
    m2: f64,
    max_m2s: f64,
    change: bool,
}

impl Eddm {
    pub fn new(config: EddmConfig) -> Result<Self> {
        if !(0.0..=1.0).contains(&config.warning_level) || !(0.0..=1.0).contains(&config.out_control_level) {
            return Err(Error::InvalidConfig("EDDM levels must lie in [0, 1]".into()));
        }
        Ok(Self {
            config,
            n: 0,
            num_errors: 0,
            last_error_at: None,
            distances: 0,
            mean: 0.0,
            m2: 0.0,
            max_m2s: 0.0,
            change: false,
        })
    }

    pub fn config(&self) -> &EddmConfig {
        &self.config
    }

    pub fn mean_distance(&self) -> f64 {
        self.mean
    }

    pub fn num_errors(&self) -> u64 {
        self.num_errors
    }
}

impl DriftDetector for Eddm {
    fn add_element(&mut self, value: f64) -> Result<Verdict> {
        let err = binary(value)?;
        self.change = false;
        self.n += 1;
        if !err {
            return Ok(Verdict::NoChange);
        }
        self.num_errors += 1;
        let Some(prev) = self.last_error_at.replace(self.n) else {
            return Ok(Verdict::NoChange);
        };
        let distance = (self.n - prev) as f64;
        self.distances += 1;
        let old_mean = self.mean;
        self.mean += (distance - self.mean) / self.distances as f64;
        self.m2 += (distance - old_mean) * (distance - self.mean);
        let std = (self.m2 / self.distances as f64).sqrt();
        let m2s = self.mean + 2.0 * std;

        if self.n < self.config.min_num_instances {
            return Ok(Verdict::NoChange);
        }
        if m2s > self.max_m2s {
            self.max_m2s = m2s;
            return Ok(Verdict::NoChange);
        }
        if self.num_errors < self.config.min_num_errors {
            return Ok(Verdict::NoChange);
        }
        let ratio = m2s / self.max_m2s;
        if ratio < self.config.out_control_level {
            self.change = true;
            Ok(Verdict::Drift)
        } else if ratio < self.config.warning_level {
            Ok(Verdict::Warning)
        } else {
            Ok(Verdict::NoChange)
        }
    }

    fn detected_change(&mut self) -> bool {
        std::mem::take(&mut self.change)
    }

    fn reset(&mut self) {
        *self = Self {
            config: self.config.clone(),
            n: 0,
            num_errors: 0,
            last_error_at: None,
            distances: 0,
            mean: 0.0,
            m2: 0.0,
            max_m2s: 0.0,
            change: false,
        };
    }
}
