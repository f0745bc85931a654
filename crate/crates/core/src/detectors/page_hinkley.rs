//! Page-Hinkley test for an upward shift in the mean of a signal.
//!
//! `m_t = alpha * m_{t-1} + (x_t - mean_t - delta)` and `M_t = min_s m_s`;
//! drift when `m_t - M_t > threshold` once `min_instances` have been seen.

use serde::{Deserialize, Serialize};

use super::DriftDetector;
use crate::{Error, Result, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PageHinkleyConfig {
    pub min_instances: u64,
    /// Magnitude of changes tolerated.
    pub delta: f64,
    /// Lambda.
    pub threshold: f64,
    /// Forgetting factor on the cumulative deviation.
    pub alpha: f64,
}

impl Default for PageHinkleyConfig {
    fn default() -> Self {
        Self { min_instances: 30, delta: 0.005, threshold: 50.0, alpha: 0.9999 }
    }
}

#[derive(Debug, Clone)]
pub struct PageHinkley {
    config: PageHinkleyConfig,
    n: u64,
    mean: f64,
    cumulative: f64,
    minimum: f64,
    change: bool,
}

impl PageHinkley {
    pub fn new(config: PageHinkleyConfig) -> Result<Self> {
        if config.threshold <= 0.0 || config.delta < 0.0 || !(0.0..=1.0).contains(&config.alpha) {
            return Err(Error::InvalidConfig("invalid Page-Hinkley parameters".into()));
        }
        Ok(Self { config, n: 0, mean: 0.0, cumulative: 0.0, minimum: 0.0, change: false })
    }

    /// `m_t - M_t`.
    pub fn statistic(&self) -> f64 {
        self.cumulative - self.minimum
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }
}

impl DriftDetector for PageHinkley {
    fn add_element(&mut self, value: f64) -> Result<Verdict> {
        if !value.is_finite() {
            return Err(Error::InvalidConfig(format!("Page-Hinkley input {value} is not finite")));
        }
        self.change = false;
        self.n += 1;
        self.mean += (value - self.mean) / self.n as f64;
        self.cumulative = self.config.alpha * self.cumulative + (value - self.mean - self.config.delta);
        if self.n == 1 || self.cumulative < self.minimum {
            self.minimum = self.cumulative;
        }
        if self.n < self.config.min_instances {
            return Ok(Verdict::NoChange);
        }
        if self.statistic() > self.config.threshold {
            self.change = true;
            return Ok(Verdict::Drift);
        }
        Ok(Verdict::NoChange)
    }

    fn detected_change(&mut self) -> bool {
        std::mem::take(&mut self.change)
    }

    fn reset(&mut self) {
        self.n = 0;
        self.mean = 0.0;
        self.cumulative = 0.0;
        self.minimum = 0.0;
        self.change = false;
    }
}
