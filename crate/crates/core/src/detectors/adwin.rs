//! ADWIN: an adaptive window summarised by an exponential histogram.
//!
//! Buckets on level `i` hold `2^i` elements with their sum and variance; each
//! level keeps at most `max_buckets` buckets, and the two oldest buckets of a
//! full level merge into one bucket on the next level. After every element
//! each split point between buckets is tested; if the means of the older and
//! newer parts differ by more than the cut threshold, the oldest bucket is
//! dropped and the test repeats.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::DriftDetector;
use crate::{Error, Result, Verdict};

/// Windows at or below this width are never tested.
const MIN_WINDOW: u64 = 10;
/// Smallest sub-window on either side of a split.
const MIN_SUB_WINDOW: u64 = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdwinConfig {
    pub delta: f64,
    /// Buckets kept per level before merging.
    pub max_buckets: usize,
}

impl Default for AdwinConfig {
    fn default() -> Self {
        Self { delta: 0.002, max_buckets: 5 }
    }
}

#[derive(Debug, Clone, Copy)]
struct Bucket {
    total: f64,
    variance: f64,
    count: u64,
}

#[derive(Debug, Clone)]
pub struct Adwin {
    config: AdwinConfig,
    /// `levels[i]` holds buckets of `2^i` elements, oldest first.
    levels: Vec<VecDeque<Bucket>>,
    width: u64,
    total: f64,
    variance: f64,
    change: bool,
}

impl Adwin {
    pub fn new(config: AdwinConfig) -> Result<Self> {
        if !(config.delta > 0.0 && config.delta < 1.0) {
            return Err(Error::InvalidConfig("ADWIN delta must lie in (0, 1)".into()));
        }
        if config.max_buckets < 2 {
            return Err(Error::InvalidConfig("ADWIN needs at least two buckets per level".into()));
        }
        Ok(Self { config, levels: Vec::new(), width: 0, total: 0.0, variance: 0.0, change: false })
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn mean(&self) -> f64 {
        if self.width == 0 {
            0.0
        } else {
            self.total / self.width as f64
        }
    }

    pub fn variance(&self) -> f64 {
        if self.width == 0 {
            0.0
        } else {
            self.variance / self.width as f64
        }
    }

    /// Bucket counts per level, lowest level first.
    pub fn level_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(VecDeque::len).collect()
    }

    fn insert(&mut self, value: f64) {
        self.width += 1;
        if self.width > 1 {
            let w = self.width as f64;
            let prev_mean = self.total / (w - 1.0);
            self.variance += (w - 1.0) * (value - prev_mean).powi(2) / w;
        }
        self.total += value;
        if self.levels.is_empty() {
            self.levels.push(VecDeque::new());
        }
        self.levels[0].push_back(Bucket { total: value, variance: 0.0, count: 1 });
        self.compress();
    }

    fn compress(&mut self) {
        let mut i = 0;
        while i < self.levels.len() && self.levels[i].len() > self.config.max_buckets {
            let a = self.levels[i].pop_front().expect("full level");
            let b = self.levels[i].pop_front().expect("full level");
            let (na, nb) = (a.count as f64, b.count as f64);
            let diff = a.total / na - b.total / nb;
            let merged = Bucket {
                total: a.total + b.total,
                variance: a.variance + b.variance + na * nb * diff * diff / (na + nb),
                count: a.count + b.count,
            };
            if i + 1 == self.levels.len() {
                self.levels.push(VecDeque::new());
            }
            self.levels[i + 1].push_back(merged);
            i += 1;
        }
    }

    fn drop_oldest(&mut self) {
        let Some(top) = self.levels.last_mut() else { return };
        let b = top.pop_front().expect("levels hold no empty tail");
        if top.is_empty() {
            self.levels.pop();
        }
        self.width -= b.count;
        self.total -= b.total;
        if self.width == 0 {
            self.total = 0.0;
            self.variance = 0.0;
            return;
        }
        let (n1, w) = (b.count as f64, self.width as f64);
        let diff = b.total / n1 - self.total / w;
        self.variance -= b.variance + n1 * w * diff * diff / (n1 + w);
        self.variance = self.variance.max(0.0);
    }

    fn cut(&self, n0: u64, n1: u64, u0: f64, u1: f64) -> bool {
        let n = self.width as f64;
        let v = self.variance / n;
        let dd = (2.0 * n.ln() / self.config.delta).ln();
        let m = 1.0 / (n0 - MIN_SUB_WINDOW + 1) as f64 + 1.0 / (n1 - MIN_SUB_WINDOW + 1) as f64;
        let eps = (2.0 * m * v * dd).sqrt() + 2.0 / 3.0 * dd * m;
        (u0 / n0 as f64 - u1 / n1 as f64).abs() > eps
    }

    /// Scans split points from the oldest bucket forward.
    fn find_cut(&self) -> bool {
        let (mut n0, mut n1) = (0u64, self.width);
        let (mut u0, mut u1) = (0.0, self.total);
        for (i, level) in self.levels.iter().enumerate().rev() {
            for (k, b) in level.iter().enumerate() {
                n0 += b.count;
                n1 -= b.count;
                u0 += b.total;
                u1 -= b.total;
                if i == 0 && k + 1 == level.len() {
                    return false;
                }
                if n0 >= MIN_SUB_WINDOW && n1 >= MIN_SUB_WINDOW && self.cut(n0, n1, u0, u1) {
                    return true;
                }
            }
        }
        false
    }
}

impl DriftDetector for Adwin {
    fn add_element(&mut self, value: f64) -> Result<Verdict> {
        if !value.is_finite() {
            return Err(Error::InvalidConfig(format!("ADWIN input {value} is not finite")));
        }
        self.insert(value);
        self.change = false;
        if self.width > MIN_WINDOW {
            while self.find_cut() {
                self.change = true;
                self.drop_oldest();
            }
        }
        Ok(if self.change { Verdict::Drift } else { Verdict::NoChange })
    }

    fn detected_change(&mut self) -> bool {
        std::mem::take(&mut self.change)
    }

    fn reset(&mut self) {
        self.levels.clear();
        self.width = 0;
        self.total = 0.0;
        self.variance = 0.0;
        self.change = false;
    }

    fn footprint(&self) -> usize {
        std::mem::size_of::<Self>()
            + self.levels.iter().map(|l| l.capacity() * std::mem::size_of::<Bucket>()).sum::<usize>()
    }
}
