use std::collections::VecDeque;

use super::{check_features, Learner};
use crate::{Error, Label, Result};

/// K nearest neighbours over a FIFO window of the latest labelled instances.
///
/// Distance ties go to the element that entered the window first; vote ties
/// go to the lowest label.
#[derive(Debug, Clone, PartialEq)]
pub struct Knn {
    k: usize,
    max_window_size: usize,
    window: VecDeque<(Vec<f64>, Label)>,
}

impl Knn {
    pub fn new(k: usize, max_window_size: usize) -> Result<Self> {
        if k == 0 || max_window_size == 0 {
            return Err(Error::InvalidConfig("KNN needs k >= 1 and max_window_size >= 1".into()));
        }
        Ok(Self { k, max_window_size, window: VecDeque::with_capacity(max_window_size) })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_window_size(&self) -> usize {
        self.max_window_size
    }

    pub fn window(&self) -> impl ExactSizeIterator<Item = &(Vec<f64>, Label)> {
        self.window.iter()
    }
}

impl Learner for Knn {
    fn partial_fit(&mut self, x: &[f64], y: Label) -> Result<()> {
        check_features(x, self.window.front().map(|(v, _)| v.len()))?;
        if self.window.len() == self.max_window_size {
            self.window.pop_front();
        }
        self.window.push_back((x.to_vec(), y));
        Ok(())
    }

    fn predict(&self, x: &[f64]) -> Result<Label> {
        if self.window.is_empty() {
            return Err(Error::EmptyModel);
        }
        check_features(x, self.window.front().map(|(v, _)| v.len()))?;
        let mut dist: Vec<(f64, usize)> = self
            .window
            .iter()
            .enumerate()
            .map(|(i, (p, _))| (p.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>(), i))
            .collect();
        // stable: equal distances keep window order
        dist.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut votes: Vec<(Label, usize)> = Vec::new();
        for &(_, i) in dist.iter().take(self.k) {
            let label = self.window[i].1;
            match votes.iter_mut().find(|v| v.0 == label) {
                Some(v) => v.1 += 1,
                None => votes.push((label, 1)),
            }
        }
        votes.sort_by_key(|&(l, _)| l);
        let best = votes.iter().map(|v| v.1).max().unwrap();
        Ok(votes.iter().find(|v| v.1 == best).unwrap().0)
    }

    fn reset(&mut self) {
        self.window.clear();
    }

    fn footprint(&self) -> usize {
        std::mem::size_of::<Self>() + self.window.iter().map(|(x, _)| 32 + 8 * x.len()).sum::<usize>()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_keeps_latest() {
        let mut knn = Knn::new(1, 3).unwrap();
        for i in 0..4 {
            knn.partial_fit(&[i as f64], 0).unwrap();
        }
        let xs: Vec<f64> = knn.window().map(|(x, _)| x[0]).collect();
        assert_eq!(xs, vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn three_point_vote() {
        let mut knn = Knn::new(3, 50).unwrap();
        knn.partial_fit(&[0.0, 0.0], 0).unwrap();
        knn.partial_fit(&[1.0, 1.0], 1).unwrap();
        knn.partial_fit(&[0.9, 1.0], 1).unwrap();
        assert_eq!(knn.predict(&[1.0, 1.0]).unwrap(), 1);
    }

    #[test]
    fn exact_match_with_k1() {
        let mut knn = Knn::new(1, 50).unwrap();
        knn.partial_fit(&[0.3, 0.3], 1).unwrap();
        knn.partial_fit(&[0.7, 0.7], 0).unwrap();
        assert_eq!(knn.predict(&[0.7, 0.7]).unwrap(), 0);
    }

    #[test]
    fn ties() {
        // equidistant neighbours: earlier window entry wins with k = 1
        let mut knn = Knn::new(1, 10).unwrap();
        knn.partial_fit(&[1.0], 1).unwrap();
        knn.partial_fit(&[-1.0], 0).unwrap();
        assert_eq!(knn.predict(&[0.0]).unwrap(), 1);
        // 1-1 vote: lowest label
        let mut knn = Knn::new(2, 10).unwrap();
        knn.partial_fit(&[1.0], 1).unwrap();
        knn.partial_fit(&[-1.0], 0).unwrap();
        assert_eq!(knn.predict(&[0.0]).unwrap(), 0);
    }

    #[test]
    fn reset_keeps_parameters() {
        let mut knn = Knn::new(4, 7).unwrap();
        knn.partial_fit(&[1.0], 1).unwrap();
        knn.reset();
        assert_eq!(knn.window().len(), 0);
        assert_eq!((knn.k(), knn.max_window_size()), (4, 7));
        assert!(matches!(knn.predict(&[0.0]), Err(Error::EmptyModel)));
    }
}
