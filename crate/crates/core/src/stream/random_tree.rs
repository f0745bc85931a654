use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomTreeParams {
    pub n_features: usize,
    pub n_classes: u32,
    pub max_tree_depth: usize,
    pub min_leaf_depth: usize,
    /// Probability that a node at an eligible depth becomes a leaf.
    pub fraction_leaves_per_level: f64,
}

impl Default for RandomTreeParams {
    fn default() -> Self {
        Self { n_features: 2, n_classes: 2, max_tree_depth: 6, min_leaf_depth: 3, fraction_leaves_per_level: 0.15 }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Leaf(Label),
    Split { feature: usize, threshold: f64, left: Box<Node>, right: Box<Node> },
}

/// A random decision tree over features uniform on `[0, 1]`.
///
/// Split thresholds are drawn uniformly inside the sub-range the path has
/// left for that feature, so every leaf region is non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomTreeModel {
    params: RandomTreeParams,
    seed: u64,
    root: Node,
}

impl RandomTreeModel {
    pub fn new(params: RandomTreeParams, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut lo = vec![0.0; params.n_features];
        let mut hi = vec![1.0; params.n_features];
        let root = Self::grow(&params, &mut rng, 0, &mut lo, &mut hi);
        Self { params, seed, root }
    }

    fn grow(p: &RandomTreeParams, rng: &mut ChaCha8Rng, depth: usize, lo: &mut [f64], hi: &mut [f64]) -> Node {
        let leaf_here = depth >= p.max_tree_depth
            || (depth >= p.min_leaf_depth && rng.random::<f64>() < p.fraction_leaves_per_level);
        if leaf_here {
            return Node::Leaf(rng.random_range(0..p.n_classes));
        }
        let feature = rng.random_range(0..p.n_features);
        let (a, b) = (lo[feature], hi[feature]);
        let threshold = a + (b - a) * rng.random::<f64>();
        hi[feature] = threshold;
        let left = Self::grow(p, rng, depth + 1, lo, hi);
        hi[feature] = b;
        lo[feature] = threshold;
        let right = Self::grow(p, rng, depth + 1, lo, hi);
        lo[feature] = a;
        Node::Split { feature, threshold, left: Box::new(left), right: Box::new(right) }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn params(&self) -> &RandomTreeParams {
        &self.params
    }

    pub fn classify(&self, x: &[f64]) -> Label {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(l) => return *l,
                Node::Split { feature, threshold, left, right } => {
                    node = if x[*feature] <= *threshold { left } else { right };
                }
            }
        }
    }

    /// Depths of all leaves, left to right.
    pub fn leaf_depths(&self) -> Vec<usize> {
        fn walk(n: &Node, d: usize, out: &mut Vec<usize>) {
            match n {
                Node::Leaf(_) => out.push(d),
                Node::Split { left, right, .. } => {
                    walk(left, d + 1, out);
                    walk(right, d + 1, out);
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, 0, &mut out);
        out
    }
}
