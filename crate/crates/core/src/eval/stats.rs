use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, FisherSnedecor, Normal};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    HigherIsBetter,
    LowerIsBetter,
}

/// Ranks `values` with 1 = best, averaging ranks over ties.
pub fn rank_with_ties(values: &[f64], direction: Direction) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let o = values[a].total_cmp(&values[b]);
        match direction {
            Direction::HigherIsBetter => o.reverse(),
            Direction::LowerIsBetter => o,
        }
    });
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i + 1;
        while j < order.len() && values[order[j]] == values[order[i]] {
            j += 1;
        }
        // positions i..j share the mean of ranks i+1..=j
        let avg = (i + 1 + j) as f64 / 2.0;
        for &o in &order[i..j] {
            ranks[o] = avg;
        }
        i = j;
    }
    ranks
}

fn range_cdf(q: f64, k: usize, normal: &Normal) -> f64 {
    // P(max - min <= q) for k standard normals, by Simpson's rule on [-12, 12]
    const STEPS: usize = 4000;
    let (a, b) = (-12.0, 12.0);
    let h = (b - a) / STEPS as f64;
    let f = |z: f64| {
        let inner = normal.cdf(z + q) - normal.cdf(z);
        (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt() * inner.powi(k as i32 - 1)
    };
    let mut sum = f(a) + f(b);
    for i in 1..STEPS {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    k as f64 * sum * h / 3.0
}

/// Critical value of the Nemenyi test: the `1 - alpha` quantile of the
/// studentized range of `k` means with infinite degrees of freedom,
/// divided by sqrt(2).
pub fn nemenyi_q(k: usize, alpha: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidConfig("Nemenyi needs at least two detectors".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidConfig(format!("alpha {alpha} outside (0, 1)")));
    }
    let normal = Normal::standard();
    let target = 1.0 - alpha;
    let (mut lo, mut hi) = (0.0, 20.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if range_cdf(mid, k, &normal) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(0.5 * (lo + hi) / std::f64::consts::SQRT_2)
}

/// Nemenyi critical difference of mean ranks for `k` methods on `n` datasets.
pub fn critical_difference(k: usize, n: usize, alpha: f64) -> Result<f64> {
    let q = nemenyi_q(k, alpha)?;
    Ok(q * ((k * (k + 1)) as f64 / (6.0 * n as f64)).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankTable {
    pub metric: String,
    pub direction: Direction,
    pub detectors: Vec<String>,
    pub datasets: Vec<String>,
    /// `scores[i][j]`: detector `i` on dataset `j`.
    pub scores: Vec<Vec<f64>>,
    /// Ranks laid out like `scores`.
    pub ranks: Vec<Vec<f64>>,
    pub mean_ranks: Vec<f64>,
    pub chi_square: f64,
    pub chi_square_p: f64,
    pub f_statistic: f64,
    pub f_p: f64,
    pub alpha: f64,
    pub q_alpha: f64,
    pub critical_difference: f64,
}

impl RankTable {
    pub fn rejects_null(&self) -> bool {
        self.f_p < self.alpha
    }

    /// Mean-rank listing sorted best first, then the statistics.
    pub fn to_text(&self) -> String {
        let mut order: Vec<usize> = (0..self.detectors.len()).collect();
        order.sort_by(|&a, &b| self.mean_ranks[a].total_cmp(&self.mean_ranks[b]));
        let mut out = format!(
            "metric {} ({}), {} detectors on {} datasets\n",
            self.metric,
            match self.direction {
                Direction::HigherIsBetter => "higher is better",
                Direction::LowerIsBetter => "lower is better",
            },
            self.detectors.len(),
            self.datasets.len()
        );
        for i in order {
            out.push_str(&format!("{:>8.4}  {}\n", self.mean_ranks[i], self.detectors[i]));
        }
        out.push_str(&format!("friedman chi2 = {:.6} (p = {:.6})\n", self.chi_square, self.chi_square_p));
        out.push_str(&format!("iman-davenport F = {:.6} (p = {:.6})\n", self.f_statistic, self.f_p));
        out.push_str(&format!("nemenyi q_{} = {:.6}, CD = {:.6}\n", self.alpha, self.q_alpha, self.critical_difference));
        out
    }

    /// `detector,mean_rank` rows followed by a `CD` row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("detector,mean_rank\n");
        for (d, r) in self.detectors.iter().zip(&self.mean_ranks) {
            out.push_str(&format!("{d},{r}\n"));
        }
        out.push_str(&format!("CD,{}\n", self.critical_difference));
        out
    }
}

/// Friedman test over a detectors-by-datasets score matrix and the Nemenyi
/// critical difference.
pub fn friedman_nemenyi(
    metric: &str,
    detectors: &[String],
    datasets: &[String],
    scores: &[Vec<f64>],
    direction: Direction,
    alpha: f64,
) -> Result<RankTable> {
    let k = detectors.len();
    let n = datasets.len();
    if k < 2 || n < 2 {
        return Err(Error::InvalidConfig(format!("Friedman test needs k >= 2 and N >= 2, got k={k}, N={n}")));
    }
    if scores.len() != k || scores.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidConfig("score matrix does not match detectors x datasets".into()));
    }
    if scores.iter().flatten().any(|v| v.is_nan()) {
        return Err(Error::InvalidConfig("score matrix has missing values".into()));
    }
    let mut ranks = vec![vec![0.0; n]; k];
    for j in 0..n {
        let column: Vec<f64> = scores.iter().map(|row| row[j]).collect();
        for (i, r) in rank_with_ties(&column, direction).into_iter().enumerate() {
            ranks[i][j] = r;
        }
    }
    let mean_ranks: Vec<f64> = ranks.iter().map(|row| row.iter().sum::<f64>() / n as f64).collect();
    let (kf, nf) = (k as f64, n as f64);
    let sum_sq: f64 = mean_ranks.iter().map(|r| r * r).sum();
    let chi_square = 12.0 * nf / (kf * (kf + 1.0)) * (sum_sq - kf * (kf + 1.0).powi(2) / 4.0);
    let chi_square = chi_square.max(0.0);
    let chi = ChiSquared::new(kf - 1.0).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let chi_square_p = chi.sf(chi_square);
    let f_den = nf * (kf - 1.0) - chi_square;
    let (f_statistic, f_p) = if f_den > 0.0 {
        let f = (nf - 1.0) * chi_square / f_den;
        let dist = FisherSnedecor::new(kf - 1.0, (kf - 1.0) * (nf - 1.0)).map_err(|e| Error::InvalidConfig(e.to_string()))?;
        (f, dist.sf(f))
    } else {
        (f64::INFINITY, 0.0)
    };
    let q_alpha = nemenyi_q(k, alpha)?;
    let critical_difference = q_alpha * (kf * (kf + 1.0) / (6.0 * nf)).sqrt();
    if f_p < alpha {
        log::info!("{metric}: Friedman test rejects equal ranks (p = {f_p:.4})");
    } else {
        log::info!("{metric}: Friedman test does not reject equal ranks (p = {f_p:.4})");
    }
    Ok(RankTable {
        metric: metric.to_string(),
        direction,
        detectors: detectors.to_vec(),
        datasets: datasets.to_vec(),
        scores: scores.to_vec(),
        ranks,
        mean_ranks,
        chi_square,
        chi_square_p,
        f_statistic,
        f_p,
        alpha,
        q_alpha,
        critical_difference,
    })
}
