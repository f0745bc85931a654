use super::{check_features, Learner};
use crate::{Error, Label, Result};

/// Added to every per-feature variance before evaluating densities.
pub const VAR_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
struct ClassStats {
    label: Label,
    count: u64,
    mean: Vec<f64>,
    /// Sum of squared deviations (Welford).
    m2: Vec<f64>,
}

/// Gaussian Naive Bayes with one-pass per-class mean/variance updates.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GaussianNb {
    classes: Vec<ClassStats>,
    dims: Option<usize>,
    total: u64,
}

impl GaussianNb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn class_count(&self, label: Label) -> u64 {
        self.stats(label).map_or(0, |c| c.count)
    }

    pub fn prior(&self, label: Label) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.class_count(label) as f64 / self.total as f64
        }
    }

    pub fn mean(&self, label: Label) -> Option<&[f64]> {
        self.stats(label).map(|c| c.mean.as_slice())
    }

    /// Population variance per feature, without the floor.
    pub fn variance(&self, label: Label) -> Option<Vec<f64>> {
        self.stats(label).map(|c| c.m2.iter().map(|m| m / c.count as f64).collect())
    }

    pub fn labels(&self) -> Vec<Label> {
        self.classes.iter().map(|c| c.label).collect()
    }

    fn stats(&self, label: Label) -> Option<&ClassStats> {
        self.classes.iter().find(|c| c.label == label)
    }

    fn log_joint(&self, c: &ClassStats, x: &[f64]) -> f64 {
        let n = c.count as f64;
        let mut lp = (n / self.total as f64).ln();
        for ((&v, &mu), &m2) in x.iter().zip(&c.mean).zip(&c.m2) {
            let var = m2 / n + VAR_FLOOR;
            lp -= 0.5 * ((2.0 * std::f64::consts::PI * var).ln() + (v - mu).powi(2) / var);
        }
        lp
    }
}

impl Learner for GaussianNb {
    fn partial_fit(&mut self, x: &[f64], y: Label) -> Result<()> {
        check_features(x, self.dims)?;
        self.dims = Some(x.len());
        let pos = match self.classes.iter().position(|c| c.label == y) {
            Some(p) => p,
            None => {
                self.classes.push(ClassStats {
                    label: y,
                    count: 0,
                    mean: vec![0.0; x.len()],
                    m2: vec![0.0; x.len()],
                });
                // keep classes sorted so ties resolve to the lowest label
                self.classes.sort_by_key(|c| c.label);
                self.classes.iter().position(|c| c.label == y).unwrap()
            }
        };
        let c = &mut self.classes[pos];
        c.count += 1;
        let n = c.count as f64;
        for ((&v, mu), m2) in x.iter().zip(c.mean.iter_mut()).zip(c.m2.iter_mut()) {
            let delta = v - *mu;
            *mu += delta / n;
            *m2 += delta * (v - *mu);
        }
        self.total += 1;
        Ok(())
    }

    fn predict(&self, x: &[f64]) -> Result<Label> {
        if self.total == 0 {
            return Err(Error::EmptyModel);
        }
        check_features(x, self.dims)?;
        let mut best: Option<(Label, f64)> = None;
        for c in &self.classes {
            let lp = self.log_joint(c, x);
            if best.is_none_or(|(_, b)| lp > b) {
                best = Some((c.label, lp));
            }
        }
        Ok(best.expect("at least one class").0)
    }

    fn reset(&mut self) {
        *self = Self::default();
    }

    fn footprint(&self) -> usize {
        std::mem::size_of::<Self>()
            + self.classes.iter().map(|c| std::mem::size_of::<ClassStats>() + 16 * c.mean.len()).sum::<usize>()
    }
}
