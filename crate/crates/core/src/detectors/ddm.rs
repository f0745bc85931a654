//! Drift Detection Method: tracks the running error rate `p` and its
//! standard deviation `s = sqrt(p(1-p)/n)`, remembering the pair with the
//! smallest `p + s`. Warning when `p + s >= p_min + warning_level * s_min`,
//! drift when `p + s >= p_min + out_control_level * s_min`.

use serde::{Deserialize, Serialize};

use super::{binary, DriftDetector};
use crate::{Error, Result, Verdict};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DdmConfig {
    pub min_num_instances: u64,
    pub warning_level: f64,
    /// Drift multiplier on `s_min`.
    pub out_control_level: f64,
}

impl Default for DdmConfig {
    fn default() -> Self {
        Self { min_num_instances: 30, warning_level: 2.0, out_control_level: 3.0 }
    }
}

#[derive(Debug, Clone)]
pub struct Ddm {
    config: DdmConfig,
    n: u64,
    p: f64,
    s: f64,
    p_min: f64,
    s_min: f64,
    ps_min: f64,
    change: bool,
}

impl Ddm {
    pub fn new(config: DdmConfig) -> Result<Self> {
        if config.warning_level <= 0.0 || config.out_control_level <= 0.0 {
            return Err(Error::InvalidConfig("DDM levels must be positive".into()));
        }
        if config.out_control_level < config.warning_level {
            log::warn!("DDM out_control_level below warning_level; warnings will never be raised");
        }
        let mut d = Self {
            config,
            n: 0,
            p: 0.0,
            s: 0.0,
            p_min: f64::INFINITY,
            s_min: f64::INFINITY,
            ps_min: f64::INFINITY,
            change: false,
        };
        d.reset();
        Ok(d)
    }

    pub fn config(&self) -> &DdmConfig {
        &self.config
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn error_rate(&self) -> f64 {
        self.p
    }

    pub fn std_dev(&self) -> f64 {
        self.s
    }

    /// `(p_min, s_min)`, `None` before the warm-up ends.
    pub fn minimum(&self) -> Option<(f64, f64)> {
        self.p_min.is_finite().then_some((self.p_min, self.s_min))
    }
}

impl DriftDetector for Ddm {
    fn add_element(&mut self, value: f64) -> Result<Verdict> {
        let err = binary(value)?;
        self.change = false;
        self.n += 1;
        let n = self.n as f64;
        self.p += (f64::from(u8::from(err)) - self.p) / n;
        self.s = (self.p * (1.0 - self.p) / n).sqrt();

        if self.n < self.config.min_num_instances {
            return Ok(Verdict::NoChange);
        }
        if self.p + self.s <= self.ps_min {
            self.p_min = self.p;
            self.s_min = self.s;
            self.ps_min = self.p + self.s;
        }
        let level = self.p + self.s;
        if level > self.p_min + self.config.out_control_level * self.s_min {
            self.change = true;
            Ok(Verdict::Drift)
        } else if level > self.p_min + self.config.warning_level * self.s_min {
            Ok(Verdict::Warning)
        } else {
            Ok(Verdict::NoChange)
        }
    }

    fn detected_change(&mut self) -> bool {
        std::mem::take(&mut self.change)
    }

    fn reset(&mut self) {
        self.n = 0;
        self.p = 0.0;
        self.s = 0.0;
        self.p_min = f64::INFINITY;
        self.s_min = f64::INFINITY;
        self.ps_min = f64::INFINITY;
        self.change = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_correct_never_changes() {
        let mut d = Ddm::new(DdmConfig::default()).unwrap();
        for _ in 0..1000 {
            assert_eq!(d.add_element(0.0).unwrap(), Verdict::NoChange);
        }
    }

    #[test]
    fn rejects_non_binary() {
        let mut d = Ddm::new(DdmConfig::default()).unwrap();
        assert!(matches!(d.add_element(0.5), Err(Error::NonBinarySignal(_))));
    }

    #[test]
    fn reset_clears_statistics() {
        let mut d = Ddm::new(DdmConfig::default()).unwrap();
        for i in 0..500 {
            d.add_element(f64::from(u8::from(i % 7 == 0))).unwrap();
        }
        assert!(d.minimum().is_some());
        d.reset();
        assert_eq!(d.n(), 0);
        assert!(d.minimum().is_none());
        assert!(!d.detected_change());
    }

    #[test]
    fn error_burst_fires_and_flag_is_edge_triggered() {
        let mut d = Ddm::new(DdmConfig::default()).unwrap();
        for i in 0..300 {
            d.add_element(f64::from(u8::from(i % 10 == 0))).unwrap();
        }
        let mut fired = None;
        for i in 0..300 {
            if d.add_element(1.0).unwrap() == Verdict::Drift {
                fired = Some(i);
                break;
            }
        }
        assert!(fired.is_some());
        assert!(d.detected_change());
        assert!(!d.detected_change());
    }
}
