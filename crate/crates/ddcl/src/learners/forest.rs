//! Random forest of Gini-split decision trees.
//!
//! Each tree trains on a bootstrap sample drawn with seed-fixed replacement
//! from the training array as ordered, so a curriculum ordering determines
//! which rows the draws select. Splits consider a random feature subset per
//! node; leaves hold class distributions and the forest votes by majority.

use ndarray::{Array2, ArrayView1, ArrayView2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::derive_seed;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestSpec {
    pub n_estimators: usize,
    /// Features considered when splitting a node.
    pub max_split_features: usize,
    pub bootstrap: bool,
    pub min_samples_split: usize,
    pub seed: u64,
}

impl ForestSpec {
    pub fn new(seed: u64) -> Self {
        ForestSpec {
            n_estimators: 100,
            max_split_features: 2,
            bootstrap: true,
            min_samples_split: 2,
            seed,
        }
    }

    pub fn validate(&self, n_features: usize) -> Result<()> {
        if self.n_estimators == 0 {
            return Err(Error::Config("forest needs at least one estimator".into()));
        }
        if self.max_split_features == 0 || self.max_split_features > n_features {
            return Err(Error::Config(format!(
                "max_split_features must be in 1..={n_features}, got {}",
                self.max_split_features
            )));
        }
        if self.min_samples_split < 2 {
            return Err(Error::Config("min_samples_split must be at least 2".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Leaf {
        /// Class distribution of the training rows that reached this leaf.
        distribution: Vec<f64>,
    },
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
}

impl TreeNode {
    fn leaf_for(&self, row: ArrayView1<f64>) -> &Vec<f64> {
        match self {
            TreeNode::Leaf { distribution } => distribution,
            TreeNode::Split {
                feature,
                threshold,
                left,
                right,
            } => {
                if row[*feature] < *threshold {
                    left.leaf_for(row)
                } else {
                    right.leaf_for(row)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub root: TreeNode,
    pub n_classes: usize,
}

impl DecisionTree {
    pub fn predict(&self, row: ArrayView1<f64>) -> usize {
        let dist = self.root.leaf_for(row);
        argmax(dist)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub format_version: u32,
    pub spec: ForestSpec,
    pub n_classes: usize,
    pub trees: Vec<DecisionTree>,
}

impl ForestModel {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Data(format!("model serialization: {e}")))
    }

    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Data(format!("model deserialization: {e}")))
    }
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn gini(counts: &[usize], total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    1.0 - counts
        .iter()
        .map(|&c| {
            let p = c as f64 / t;
            p * p
        })
        .sum::<f64>()
}

struct TreeBuilder<'a> {
    features: ArrayView2<'a, f64>,
    labels: &'a [usize],
    n_classes: usize,
    max_split_features: usize,
    min_samples_split: usize,
}

impl TreeBuilder<'_> {
    fn class_counts(&self, indices: &[usize]) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes];
        for &i in indices {
            counts[self.labels[i]] += 1;
        }
        counts
    }

    fn leaf(&self, counts: &[usize], total: usize) -> TreeNode {
        TreeNode::Leaf {
            distribution: counts.iter().map(|&c| c as f64 / total as f64).collect(),
        }
    }

    fn build(&self, indices: &mut Vec<usize>, rng: &mut ChaCha8Rng) -> TreeNode {
        let total = indices.len();
        let counts = self.class_counts(indices);
        let parent_gini = gini(&counts, total);
        if total < self.min_samples_split || parent_gini == 0.0 {
            return self.leaf(&counts, total);
        }

        // random feature subset, drawn per node
        let d = self.features.ncols();
        let mut feats: Vec<usize> = (0..d).collect();
        for i in 0..self.max_split_features.min(d) {
            let j = i + rng.gen_range(0..d - i);
            feats.swap(i, j);
        }
        feats.truncate(self.max_split_features.min(d));

        let mut best: Option<(f64, usize, f64)> = None; // (weighted gini, feature, threshold)
        for &feat in &feats {
            let mut values: Vec<(f64, usize)> = indices
                .iter()
                .map(|&i| (self.features[(i, feat)], self.labels[i]))
                .collect();
            values.sort_by(|a, b| a.0.total_cmp(&b.0));

            let mut left_counts = vec![0usize; self.n_classes];
            let mut right_counts = counts.clone();
            for m in 0..total - 1 {
                left_counts[values[m].1] += 1;
                right_counts[values[m].1] -= 1;
                let (lo, hi) = (values[m].0, values[m + 1].0);
                if lo == hi {
                    continue;
                }
                let threshold = 0.5 * (lo + hi);
                // guard against midpoint rounding onto a boundary value
                if !(lo < threshold && threshold <= hi) {
                    continue;
                }
                let n_left = m + 1;
                let n_right = total - n_left;
                let weighted = (n_left as f64 * gini(&left_counts, n_left)
                    + n_right as f64 * gini(&right_counts, n_right))
                    / total as f64;
                if best.map_or(weighted < parent_gini - 1e-12, |(w, _, _)| weighted < w - 1e-12) {
                    best = Some((weighted, feat, threshold));
                }
            }
        }

        let Some((_, feature, threshold)) = best else {
            return self.leaf(&counts, total);
        };

        let mut left_idx = Vec::new();
        let mut right_idx = Vec::new();
        for &i in indices.iter() {
            if self.features[(i, feature)] < threshold {
                left_idx.push(i);
            } else {
                right_idx.push(i);
            }
        }
        if left_idx.is_empty() || right_idx.is_empty() {
            return self.leaf(&counts, total);
        }
        let left = self.build(&mut left_idx, rng);
        let right = self.build(&mut right_idx, rng);
        TreeNode::Split {
            feature,
            threshold,
            left: Box::new(left),
            right: Box::new(right),
        }
    }
}

/// Trains `spec.n_estimators` trees; tree `t` owns the RNG stream derived
/// from `(spec.seed, t)`.
pub fn train_forest(
    features: ArrayView2<f64>,
    labels: &[usize],
    n_classes: usize,
    spec: &ForestSpec,
) -> Result<ForestModel> {
    spec.validate(features.ncols())?;
    if features.nrows() == 0 {
        return Err(Error::Data("cannot train on an empty set".into()));
    }
    if features.nrows() != labels.len() {
        return Err(Error::Data("feature rows and labels disagree".into()));
    }

    let n = features.nrows();
    let builder = TreeBuilder {
        features,
        labels,
        n_classes,
        max_split_features: spec.max_split_features,
        min_samples_split: spec.min_samples_split,
    };

    let trees = (0..spec.n_estimators)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(spec.seed, t as u64));
            let mut indices: Vec<usize> = if spec.bootstrap {
                (0..n).map(|_| rng.gen_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            DecisionTree {
                root: builder.build(&mut indices, &mut rng),
                n_classes,
            }
        })
        .collect();

    Ok(ForestModel {
        format_version: super::mlp::MODEL_FORMAT_VERSION,
        spec: spec.clone(),
        n_classes,
        trees,
    })
}

/// Predicted class ids plus per-class vote fractions.
pub fn predict_forest(model: &ForestModel, features: ArrayView2<f64>) -> Result<(Vec<usize>, Array2<f64>)> {
    let n = features.nrows();
    let mut scores = Array2::zeros((n, model.n_classes));
    let mut preds = Vec::with_capacity(n);
    let n_trees = model.trees.len() as f64;
    for (i, row) in features.rows().into_iter().enumerate() {
        let mut votes = vec![0usize; model.n_classes];
        for tree in &model.trees {
            votes[tree.predict(row)] += 1;
        }
        for (class, &v) in votes.iter().enumerate() {
            scores[(i, class)] = v as f64 / n_trees;
        }
        preds.push(argmax(&scores.row(i).to_vec()));
    }
    Ok((preds, scores))
}
