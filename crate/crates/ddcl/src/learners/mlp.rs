//! Order-sensitive multilayer perceptron.
//!
//! Sigmoid hidden layers; sigmoid output with binary cross-entropy for
//! two-class problems, softmax with cross-entropy otherwise. Training walks
//! the sample sequence exactly as given — no shuffling between or within
//! epochs — so a curriculum ordering is honored verbatim. In minibatch mode
//! batches are consecutive slices of that sequence; full-batch mode is
//! mathematically order-free and is computed over a canonical row order so
//! permuted inputs produce bit-identical trajectories.

use std::time::Instant;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::TrainLog;

/// How parameter updates consume the training sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BatchMode {
    /// One update per epoch over all samples; order-invariant.
    Full,
    /// One update per consecutive slice of the given order.
    Minibatch(usize),
}

/// Network architecture and training hyperparameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpSpec {
    /// Input size, hidden sizes, output size.
    pub layer_sizes: Vec<usize>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_mode: BatchMode,
    pub seed: u64,
}

impl MlpSpec {
    /// Output layer width: one sigmoid unit for binary problems, one softmax
    /// unit per class otherwise.
    pub fn output_size(n_classes: usize) -> usize {
        if n_classes == 2 {
            1
        } else {
            n_classes
        }
    }

    pub fn for_problem(n_features: usize, n_classes: usize, hidden: &[usize], seed: u64) -> Self {
        let mut layer_sizes = Vec::with_capacity(hidden.len() + 2);
        layer_sizes.push(n_features);
        layer_sizes.extend_from_slice(hidden);
        layer_sizes.push(Self::output_size(n_classes));
        MlpSpec {
            layer_sizes,
            learning_rate: 0.1,
            epochs: 200,
            batch_mode: BatchMode::Minibatch(32),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.layer_sizes.len() < 2 {
            return Err(Error::Config("an MLP needs at least input and output layers".into()));
        }
        if self.layer_sizes.iter().any(|&s| s == 0) {
            return Err(Error::Config("layer sizes must be at least 1".into()));
        }
        if self.learning_rate <= 0.0 || !self.learning_rate.is_finite() {
            return Err(Error::Config(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::Config("epoch count must be at least 1".into()));
        }
        if let BatchMode::Minibatch(0) = self.batch_mode {
            return Err(Error::Config("minibatch size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Trained weights; shapes chain input through output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub format_version: u32,
    pub spec: MlpSpec,
    pub n_classes: usize,
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

/// Gradients of the mean cross-entropy for every parameter.
#[derive(Debug, Clone)]
pub struct MlpGradients {
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
    pub loss: f64,
}

pub(crate) const MODEL_FORMAT_VERSION: u32 = 1;

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl MlpModel {
    /// Weights uniform in `±1/sqrt(fan_in)` from the spec seed, filled layer
    /// by layer in row-major order; biases start at zero.
    pub fn init(spec: &MlpSpec, n_classes: usize) -> Result<Self> {
        spec.validate()?;
        if MlpSpec::output_size(n_classes) != *spec.layer_sizes.last().unwrap() {
            return Err(Error::Config(format!(
                "output layer size {} does not match {} classes",
                spec.layer_sizes.last().unwrap(),
                n_classes
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for w in spec.layer_sizes.windows(2) {
            let (fan_in, fan_out) = (w[0], w[1]);
            let bound = 1.0 / (fan_in as f64).sqrt();
            weights.push(Array2::from_shape_fn((fan_in, fan_out), |_| {
                (rng.gen::<f64>() * 2.0 - 1.0) * bound
            }));
            biases.push(Array1::zeros(fan_out));
        }
        Ok(MlpModel {
            format_version: MODEL_FORMAT_VERSION,
            spec: spec.clone(),
            n_classes,
            weights,
            biases,
        })
    }

    fn is_binary(&self) -> bool {
        *self.spec.layer_sizes.last().unwrap() == 1
    }

    /// Activations of every layer for a batch; the last entry holds output
    /// probabilities.
    fn forward(&self, x: ArrayView2<f64>) -> Vec<Array2<f64>> {
        let n_layers = self.weights.len();
        let mut activations = Vec::with_capacity(n_layers);
        let mut current = x.to_owned();
        for (l, (w, b)) in self.weights.iter().zip(self.biases.iter()).enumerate() {
            let mut z = current.dot(w);
            for mut row in z.rows_mut() {
                row += b;
            }
            let is_output = l == n_layers - 1;
            if is_output && !self.is_binary() {
                for mut row in z.rows_mut() {
                    let max = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    row.mapv_inplace(|v| (v - max).exp());
                    let sum = row.sum();
                    row.mapv_inplace(|v| v / sum);
                }
            } else {
                z.mapv_inplace(sigmoid);
            }
            activations.push(z.clone());
            current = z;
        }
        activations
    }

    /// Class probabilities for a batch, one column per class.
    pub fn probabilities(&self, x: ArrayView2<f64>) -> Array2<f64> {
        let output = self.forward(x).pop().unwrap();
        if self.is_binary() {
            let n = output.nrows();
            let mut probs = Array2::zeros((n, 2));
            for i in 0..n {
                probs[(i, 1)] = output[(i, 0)];
                probs[(i, 0)] = 1.0 - output[(i, 0)];
            }
            probs
        } else {
            output
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Data(format!("model serialization: {e}")))
    }

    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Data(format!("model deserialization: {e}")))
    }
}

fn mean_cross_entropy(output: &Array2<f64>, labels: &[usize], binary: bool) -> f64 {
    let n = output.nrows() as f64;
    let mut total = 0.0;
    for (i, &y) in labels.iter().enumerate() {
        if binary {
            let p = output[(i, 0)];
            let target = if y == 1 { p } else { 1.0 - p };
            total -= target.max(1e-12).ln();
        } else {
            total -= output[(i, y)].max(1e-12).ln();
        }
    }
    total / n
}

/// Backpropagation: gradients of the mean cross-entropy over `batch`.
pub fn mlp_gradients(model: &MlpModel, batch: ArrayView2<f64>, labels: &[usize]) -> Result<MlpGradients> {
    if batch.nrows() == 0 {
        return Err(Error::Data("gradient of an empty batch".into()));
    }
    if batch.nrows() != labels.len() {
        return Err(Error::Data("batch rows and labels disagree".into()));
    }
    let binary = model.is_binary();
    let n = batch.nrows();
    let activations = model.forward(batch);
    let output = activations.last().unwrap();
    let loss = mean_cross_entropy(output, labels, binary);

    // output delta: (p - y) / n for both sigmoid-BCE and softmax-CE
    let mut delta = output.clone();
    for (i, &y) in labels.iter().enumerate() {
        if binary {
            delta[(i, 0)] -= if y == 1 { 1.0 } else { 0.0 };
        } else {
            delta[(i, y)] -= 1.0;
        }
    }
    delta.mapv_inplace(|v| v / n as f64);

    let n_layers = model.weights.len();
    let mut grad_w = vec![Array2::zeros((0, 0)); n_layers];
    let mut grad_b = vec![Array1::zeros(0); n_layers];

    for l in (0..n_layers).rev() {
        let input = if l == 0 {
            batch.to_owned()
        } else {
            activations[l - 1].clone()
        };
        grad_w[l] = input.t().dot(&delta);
        grad_b[l] = delta.sum_axis(Axis(0));
        if l > 0 {
            let mut upstream = delta.dot(&model.weights[l].t());
            upstream.zip_mut_with(&activations[l - 1], |u, &a| *u *= a * (1.0 - a));
            delta = upstream;
        }
    }

    Ok(MlpGradients {
        weights: grad_w,
        biases: grad_b,
        loss,
    })
}

fn apply_update(model: &mut MlpModel, grads: &MlpGradients, lr: f64) {
    for (w, gw) in model.weights.iter_mut().zip(grads.weights.iter()) {
        w.zip_mut_with(gw, |p, &g| *p -= lr * g);
    }
    for (b, gb) in model.biases.iter_mut().zip(grads.biases.iter()) {
        b.zip_mut_with(gb, |p, &g| *p -= lr * g);
    }
}

/// Canonical row order for full-batch training: rows sorted by content, so
/// any permutation of the same multiset yields the same addend sequence.
fn canonical_order(x: ArrayView2<f64>, labels: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.nrows()).collect();
    order.sort_by(|&a, &b| {
        for j in 0..x.ncols() {
            let cmp = x[(a, j)].total_cmp(&x[(b, j)]);
            if cmp != std::cmp::Ordering::Equal {
                return cmp;
            }
        }
        labels[a].cmp(&labels[b])
    });
    order
}

/// Trains on the sample sequence exactly as ordered.
pub fn train_mlp(
    features: ArrayView2<f64>,
    labels: &[usize],
    n_classes: usize,
    spec: &MlpSpec,
) -> Result<(MlpModel, TrainLog)> {
    spec.validate()?;
    if features.nrows() == 0 {
        return Err(Error::Data("cannot train on an empty set".into()));
    }
    if features.nrows() != labels.len() {
        return Err(Error::Data("feature rows and labels disagree".into()));
    }
    if features.ncols() != spec.layer_sizes[0] {
        return Err(Error::Config(format!(
            "input layer expects {} features, data has {}",
            spec.layer_sizes[0],
            features.ncols()
        )));
    }

    let mut model = MlpModel::init(spec, n_classes)?;
    let n = features.nrows();
    let mut log = TrainLog::default();

    // full-batch gradients do not depend on sample order; fix a canonical
    // order so the invariance holds bit-for-bit
    let (x, y): (Array2<f64>, Vec<usize>) = match spec.batch_mode {
        BatchMode::Full => {
            let order = canonical_order(features, labels);
            let mut x = Array2::zeros((n, features.ncols()));
            let mut y = Vec::with_capacity(n);
            for (r, &i) in order.iter().enumerate() {
                x.row_mut(r).assign(&features.row(i));
                y.push(labels[i]);
            }
            (x, y)
        }
        BatchMode::Minibatch(_) => (features.to_owned(), labels.to_vec()),
    };

    for epoch in 0..spec.epochs {
        let start = Instant::now();
        let epoch_loss = match spec.batch_mode {
            BatchMode::Full => {
                let grads = mlp_gradients(&model, x.view(), &y)?;
                let loss = grads.loss;
                apply_update(&mut model, &grads, spec.learning_rate);
                loss
            }
            BatchMode::Minibatch(size) => {
                let mut weighted = 0.0;
                let mut offset = 0;
                while offset < n {
                    let end = (offset + size).min(n);
                    let batch = x.slice(ndarray::s![offset..end, ..]);
                    let grads = mlp_gradients(&model, batch, &y[offset..end])?;
                    weighted += grads.loss * (end - offset) as f64;
                    apply_update(&mut model, &grads, spec.learning_rate);
                    offset = end;
                }
                weighted / n as f64
            }
        };
        if !epoch_loss.is_finite() {
            return Err(Error::Train(format!("non-finite training loss at epoch {epoch}")));
        }
        log.epoch_loss.push(epoch_loss);
        log.epoch_secs.push(start.elapsed().as_secs_f64());
    }

    Ok((model, log))
}

/// Predicted class ids plus per-class scores (softmax probabilities, or the
/// two-column sigmoid complement for binary outputs). Score ties resolve to
/// the lowest class id.
pub fn predict_mlp(model: &MlpModel, features: ArrayView2<f64>) -> Result<(Vec<usize>, Array2<f64>)> {
    if features.ncols() != model.spec.layer_sizes[0] {
        return Err(Error::Data(format!(
            "model expects {} features, data has {}",
            model.spec.layer_sizes[0],
            features.ncols()
        )));
    }
    let scores = model.probabilities(features);
    let preds = argmax_rows(&scores);
    Ok((preds, scores))
}

pub(crate) fn argmax_rows(scores: &Array2<f64>) -> Vec<usize> {
    scores
        .rows()
        .into_iter()
        .map(|row| {
            let mut best = 0;
            for (j, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Picks the hidden-layer layout with the best validation accuracy.
///
/// The search strategy is a budgeted random draw over the candidate space;
/// with a budget covering the whole space every candidate is evaluated.
/// Ties keep the earlier candidate, so the search is deterministic in the
/// RNG stream.
#[allow(clippy::too_many_arguments)]
pub fn tune_hidden_layers(
    train_x: ArrayView2<f64>,
    train_y: &[usize],
    val_x: ArrayView2<f64>,
    val_y: &[usize],
    n_classes: usize,
    search_space: &[Vec<usize>],
    budget: usize,
    base: &MlpSpec,
    rng: &mut ChaCha8Rng,
) -> Result<MlpSpec> {
    if search_space.is_empty() {
        return Err(Error::Config("hidden-layer search space is empty".into()));
    }
    if val_x.nrows() == 0 {
        return Err(Error::Data("hidden-layer tuning needs a validation split".into()));
    }

    let candidates: Vec<usize> = if budget >= search_space.len() {
        (0..search_space.len()).collect()
    } else {
        let mut idx: Vec<usize> = (0..search_space.len()).collect();
        for i in 0..budget {
            let j = i + rng.gen_range(0..idx.len() - i);
            idx.swap(i, j);
        }
        idx.truncate(budget);
        idx
    };

    let mut best: Option<(f64, MlpSpec)> = None;
    for ci in candidates {
        let hidden = &search_space[ci];
        let mut spec = MlpSpec::for_problem(train_x.ncols(), n_classes, hidden, base.seed);
        spec.learning_rate = base.learning_rate;
        spec.epochs = base.epochs;
        spec.batch_mode = base.batch_mode;
        let (model, _) = train_mlp(train_x, train_y, n_classes, &spec)?;
        let (preds, _) = predict_mlp(&model, val_x)?;
        let acc = preds.iter().zip(val_y.iter()).filter(|(p, y)| p == y).count() as f64
            / val_y.len() as f64;
        match &best {
            Some((best_acc, _)) if acc <= *best_acc => {}
            _ => best = Some((acc, spec)),
        }
    }
    Ok(best.unwrap().1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn xor_data() -> (Array2<f64>, Vec<usize>) {
        (
            array![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]],
            vec![0, 1, 1, 0],
        )
    }

    #[test]
    fn xor_reaches_perfect_training_accuracy() {
        let (x, y) = xor_data();
        let spec = MlpSpec {
            layer_sizes: vec![2, 4, 1],
            learning_rate: 2.0,
            epochs: 200,
            batch_mode: BatchMode::Minibatch(1),
            seed: 3,
        };
        let (model, log) = train_mlp(x.view(), &y, 2, &spec).unwrap();
        let (preds, _) = predict_mlp(&model, x.view()).unwrap();
        assert_eq!(preds, y, "losses: {:?}", &log.epoch_loss[190..]);
    }

    #[test]
    fn full_batch_losses_are_order_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let x = Array2::from_shape_fn((40, 3), |_| rng.gen::<f64>());
        let y: Vec<usize> = (0..40).map(|i| i % 2).collect();

        let spec = MlpSpec {
            layer_sizes: vec![3, 5, 1],
            learning_rate: 0.5,
            epochs: 50,
            batch_mode: BatchMode::Full,
            seed: 8,
        };
        let (_, log_a) = train_mlp(x.view(), &y, 2, &spec).unwrap();

        // reverse the sample order
        let mut xr = Array2::zeros((40, 3));
        let mut yr = Vec::new();
        for i in 0..40 {
            xr.row_mut(i).assign(&x.row(39 - i));
            yr.push(y[39 - i]);
        }
        let (_, log_b) = train_mlp(xr.view(), &yr, 2, &spec).unwrap();

        for (a, b) in log_a.epoch_loss.iter().zip(log_b.epoch_loss.iter()) {
            assert!((a - b).abs() <= 1e-9, "{a} vs {b}");
        }
    }

    #[test]
    fn minibatch_training_is_order_sensitive_but_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let x = Array2::from_shape_fn((30, 3), |_| rng.gen::<f64>());
        let y: Vec<usize> = (0..30).map(|i| usize::from(i % 3 == 0)).collect();
        let spec = MlpSpec {
            layer_sizes: vec![3, 4, 1],
            learning_rate: 0.5,
            epochs: 20,
            batch_mode: BatchMode::Minibatch(8),
            seed: 4,
        };
        let (m1, l1) = train_mlp(x.view(), &y, 2, &spec).unwrap();
        let (m2, l2) = train_mlp(x.view(), &y, 2, &spec).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(l1.epoch_loss, l2.epoch_loss);
    }

    #[test]
    fn zero_weight_bias_gradient_is_mean_residual() {
        let spec = MlpSpec {
            layer_sizes: vec![2, 3],
            learning_rate: 0.1,
            epochs: 1,
            batch_mode: BatchMode::Full,
            seed: 0,
        };
        let mut model = MlpModel::init(&spec, 3).unwrap();
        for w in &mut model.weights {
            w.fill(0.0);
        }
        let x = array![[0.5, 0.5], [0.2, 0.8]];
        let y = vec![0usize, 1];
        let grads = mlp_gradients(&model, x.view(), &y).unwrap();
        // uniform softmax: p = 1/3; mean one-hot = (0.5, 0.5, 0)
        let expect = [1.0 / 3.0 - 0.5, 1.0 / 3.0 - 0.5, 1.0 / 3.0];
        for (g, e) in grads.biases[0].iter().zip(expect.iter()) {
            assert!((g - e).abs() < 1e-12);
        }
    }

    #[test]
    fn duplicated_batch_rows_leave_mean_gradient_unchanged() {
        let spec = MlpSpec {
            layer_sizes: vec![2, 4, 3],
            learning_rate: 0.1,
            epochs: 1,
            batch_mode: BatchMode::Full,
            seed: 5,
        };
        let model = MlpModel::init(&spec, 3).unwrap();
        let x = array![[0.1, 0.9], [0.8, 0.2]];
        let y = vec![0usize, 2];
        let x_dup = array![[0.1, 0.9], [0.8, 0.2], [0.1, 0.9], [0.8, 0.2]];
        let y_dup = vec![0usize, 2, 0, 2];
        let g1 = mlp_gradients(&model, x.view(), &y).unwrap();
        let g2 = mlp_gradients(&model, x_dup.view(), &y_dup).unwrap();
        for (a, b) in g1.weights.iter().zip(g2.weights.iter()) {
            for (u, v) in a.iter().zip(b.iter()) {
                assert!((u - v).abs() < 1e-12);
            }
        }
        assert!((g1.loss - g2.loss).abs() < 1e-12);
    }

    fn finite_difference_check(layer_sizes: Vec<usize>, n_classes: usize, seed: u64) {
        let spec = MlpSpec {
            layer_sizes,
            learning_rate: 0.1,
            epochs: 1,
            batch_mode: BatchMode::Full,
            seed,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let d = spec.layer_sizes[0];
        let x = Array2::from_shape_fn((6, d), |_| rng.gen::<f64>());
        let y: Vec<usize> = (0..6).map(|i| i % n_classes).collect();
        let model = MlpModel::init(&spec, n_classes).unwrap();
        let grads = mlp_gradients(&model, x.view(), &y).unwrap();

        let step = 1e-5;
        let binary = n_classes == 2;
        let loss_of = |m: &MlpModel| {
            let out = m.forward(x.view()).pop().unwrap();
            mean_cross_entropy(&out, &y, binary)
        };

        let mut analytic = Vec::new();
        let mut numeric = Vec::new();
        for l in 0..model.weights.len() {
            for idx in 0..model.weights[l].len() {
                let (r, c) = (idx / model.weights[l].ncols(), idx % model.weights[l].ncols());
                let mut plus = model.clone();
                plus.weights[l][(r, c)] += step;
                let mut minus = model.clone();
                minus.weights[l][(r, c)] -= step;
                numeric.push((loss_of(&plus) - loss_of(&minus)) / (2.0 * step));
                analytic.push(grads.weights[l][(r, c)]);
            }
            for j in 0..model.biases[l].len() {
                let mut plus = model.clone();
                plus.biases[l][j] += step;
                let mut minus = model.clone();
                minus.biases[l][j] -= step;
                numeric.push((loss_of(&plus) - loss_of(&minus)) / (2.0 * step));
                analytic.push(grads.biases[l][j]);
            }
        }
        let diff: f64 = analytic
            .iter()
            .zip(numeric.iter())
            .map(|(a, n)| (a - n).powi(2))
            .sum::<f64>()
            .sqrt();
        let scale: f64 = (analytic.iter().map(|a| a * a).sum::<f64>().sqrt()
            + numeric.iter().map(|n| n * n).sum::<f64>().sqrt())
        .max(1e-12);
        assert!(diff / scale < 1e-4, "relative error {}", diff / scale);
    }

    #[test]
    fn gradients_match_finite_differences() {
        finite_difference_check(vec![3, 5, 1], 2, 42);
        finite_difference_check(vec![4, 6, 3], 3, 43);
        finite_difference_check(vec![2, 4, 4, 1], 2, 44);
    }

    #[test]
    fn zero_weight_predictions_tie_break_to_class_zero() {
        let spec = MlpSpec {
            layer_sizes: vec![2, 3],
            learning_rate: 0.1,
            epochs: 1,
            batch_mode: BatchMode::Full,
            seed: 0,
        };
        let mut model = MlpModel::init(&spec, 3).unwrap();
        for w in &mut model.weights {
            w.fill(0.0);
        }
        let x = array![[0.4, 0.6]];
        let (preds, scores) = predict_mlp(&model, x.view()).unwrap();
        assert_eq!(preds, vec![0]);
        for &s in scores.row(0) {
            assert!((s - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn softmax_scores_sum_to_one() {
        let spec = MlpSpec {
            layer_sizes: vec![3, 4, 5],
            learning_rate: 0.1,
            epochs: 1,
            batch_mode: BatchMode::Full,
            seed: 77,
        };
        let model = MlpModel::init(&spec, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = Array2::from_shape_fn((10, 3), |_| rng.gen::<f64>());
        let (_, scores) = predict_mlp(&model, x.view()).unwrap();
        for row in scores.rows() {
            assert!((row.sum() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn tuning_picks_the_better_candidate() {
        // a separable toy problem where a real hidden layer beats a
        // bottleneck of one unit
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 60;
        let mut x = Array2::zeros((n, 2));
        let mut y = Vec::new();
        for i in 0..n {
            let class = i % 2;
            x[(i, 0)] = class as f64 + 0.2 * rng.gen::<f64>();
            x[(i, 1)] = class as f64 + 0.2 * rng.gen::<f64>();
            y.push(class);
        }
        let base = MlpSpec {
            layer_sizes: vec![2, 1, 1],
            learning_rate: 0.5,
            epochs: 60,
            batch_mode: BatchMode::Minibatch(8),
            seed: 9,
        };
        let space = vec![vec![8], vec![1]];
        let mut rng2 = ChaCha8Rng::seed_from_u64(0);
        let spec = tune_hidden_layers(
            x.view(),
            &y,
            x.view(),
            &y,
            2,
            &space,
            2,
            &base,
            &mut rng2,
        )
        .unwrap();
        assert_eq!(spec.layer_sizes, vec![2, 8, 1]);
    }

    #[test]
    fn tuning_single_candidate_returns_it() {
        let (x, y) = xor_data();
        let base = MlpSpec {
            layer_sizes: vec![2, 2, 1],
            learning_rate: 0.5,
            epochs: 5,
            batch_mode: BatchMode::Full,
            seed: 1,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let spec =
            tune_hidden_layers(x.view(), &y, x.view(), &y, 2, &[vec![7]], 4, &base, &mut rng)
                .unwrap();
        assert_eq!(spec.layer_sizes, vec![2, 7, 1]);
    }

    #[test]
    fn tuning_rejects_empty_space() {
        let (x, y) = xor_data();
        let base = MlpSpec::for_problem(2, 2, &[4], 0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(
            tune_hidden_layers(x.view(), &y, x.view(), &y, 2, &[], 4, &base, &mut rng).is_err()
        );
    }

    #[test]
    fn model_json_round_trip_is_exact() {
        let spec = MlpSpec::for_problem(3, 2, &[4], 123);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = Array2::from_shape_fn((12, 3), |_| rng.gen::<f64>());
        let y: Vec<usize> = (0..12).map(|i| i % 2).collect();
        let mut small = spec.clone();
        small.epochs = 3;
        let (model, _) = train_mlp(x.view(), &y, 2, &small).unwrap();
        let json = model.to_json().unwrap();
        let back = MlpModel::from_json(&json).unwrap();
        assert_eq!(model, back);
    }

    #[test]
    fn training_rejects_dimension_mismatch() {
        let (x, y) = xor_data();
        let spec = MlpSpec::for_problem(5, 2, &[4], 0);
        assert!(train_mlp(x.view(), &y, 2, &spec).is_err());
    }
}
