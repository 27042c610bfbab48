//! Soft-margin SVM with an RBF kernel, trained by sequential minimal
//! optimization.
//!
//! The solver is fully deterministic: the second working variable is chosen
//! by the largest error difference with index-order fallbacks, never by
//! randomness. Multi-class problems train one-vs-rest machines.

use ndarray::{Array2, ArrayView1, ArrayView2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// RBF kernel `exp(-gamma * ||x - y||^2)`.
pub fn rbf_kernel(x: ArrayView1<f64>, y: ArrayView1<f64>, gamma: f64) -> f64 {
    let sq: f64 = x.iter().zip(y.iter()).map(|(a, b)| (a - b) * (a - b)).sum();
    (-gamma * sq).exp()
}

/// How the kernel width is resolved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaRule {
    /// `1 / (d * mean per-feature variance)` of the training features.
    Scale,
    Fixed(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmSpec {
    pub c: f64,
    pub gamma_rule: GammaRule,
    pub tolerance: f64,
    /// Cap on optimization sweeps over the training set.
    pub max_passes: usize,
}

impl Default for SvmSpec {
    fn default() -> Self {
        SvmSpec {
            c: 1.0,
            gamma_rule: GammaRule::Scale,
            tolerance: 1e-3,
            max_passes: 1000,
        }
    }
}

impl SvmSpec {
    pub fn validate(&self) -> Result<()> {
        if self.c <= 0.0 || !self.c.is_finite() {
            return Err(Error::Config(format!("C must be positive, got {}", self.c)));
        }
        if self.tolerance <= 0.0 {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        if let GammaRule::Fixed(g) = self.gamma_rule {
            if g <= 0.0 || !g.is_finite() {
                return Err(Error::Config(format!("gamma must be positive, got {g}")));
            }
        }
        Ok(())
    }
}

/// One binary machine: dual coefficients over its training set plus the
/// support-vector expansion used for prediction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinarySvm {
    /// Dual variable per training row (kept for diagnostics; prediction uses
    /// the support expansion below).
    pub alpha: Vec<f64>,
    /// Training targets in `{-1, +1}`.
    pub targets: Vec<f64>,
    pub bias: f64,
    pub support_rows: Vec<usize>,
    pub support_vectors: Array2<f64>,
    /// `alpha_i * y_i` per support vector.
    pub support_alpha_y: Vec<f64>,
}

impl BinarySvm {
    /// Decision value `sum_i alpha_i y_i K(x_i, x) + b`.
    pub fn decision(&self, x: ArrayView1<f64>, gamma: f64) -> f64 {
        self.support_alpha_y
            .iter()
            .zip(self.support_vectors.rows())
            .map(|(&ay, sv)| ay * rbf_kernel(sv, x, gamma))
            .sum::<f64>()
            + self.bias
    }

    /// Largest KKT violation over the machine's own training rows.
    pub fn max_kkt_violation(&self, features: ArrayView2<f64>, gamma: f64, c: f64) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, row) in features.rows().into_iter().enumerate() {
            let margin = self.targets[k] * self.decision(row, gamma);
            let a = self.alpha[k];
            let v = if a <= 0.0 {
                1.0 - margin // alpha = 0 requires margin >= 1
            } else if a >= c {
                margin - 1.0 // alpha = C requires margin <= 1
            } else {
                (margin - 1.0).abs() // free vectors sit on the margin
            };
            worst = worst.max(v);
        }
        worst
    }
}

/// A trained SVM: a single machine for binary labels, one-vs-rest machines
/// otherwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub format_version: u32,
    pub spec: SvmSpec,
    pub gamma: f64,
    pub n_classes: usize,
    pub machines: Vec<BinarySvm>,
}

impl SvmModel {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Data(format!("model serialization: {e}")))
    }

    pub fn from_json(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Data(format!("model deserialization: {e}")))
    }
}

/// Resolves the `scale` gamma: `1 / (d * mean per-feature variance)`.
pub fn resolve_gamma(features: ArrayView2<f64>, rule: GammaRule) -> f64 {
    match rule {
        GammaRule::Fixed(g) => g,
        GammaRule::Scale => {
            let (n, d) = (features.nrows() as f64, features.ncols());
            let mut mean_var = 0.0;
            for col in features.columns() {
                let mean = col.sum() / n;
                mean_var += col.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
            }
            mean_var /= d as f64;
            if mean_var > 0.0 {
                1.0 / (d as f64 * mean_var)
            } else {
                1.0 / d as f64
            }
        }
    }
}

struct SmoProblem<'a> {
    kernel: &'a Array2<f64>,
    targets: &'a [f64],
    c: f64,
    tol: f64,
    alpha: Vec<f64>,
    bias: f64,
    /// Decision values without the bias term, maintained incrementally.
    f_nob: Vec<f64>,
}

impl<'a> SmoProblem<'a> {
    fn error(&self, k: usize) -> f64 {
        self.f_nob[k] + self.bias - self.targets[k]
    }

    fn is_free(&self, k: usize) -> bool {
        self.alpha[k] > 0.0 && self.alpha[k] < self.c
    }

    fn take_step(&mut self, i: usize, j: usize) -> bool {
        if i == j {
            return false;
        }
        let (yi, yj) = (self.targets[i], self.targets[j]);
        let (ai, aj) = (self.alpha[i], self.alpha[j]);
        let (ei, ej) = (self.error(i), self.error(j));
        let s = yi * yj;

        let (low, high) = if s < 0.0 {
            ((aj - ai).max(0.0), (self.c + aj - ai).min(self.c))
        } else {
            ((ai + aj - self.c).max(0.0), (ai + aj).min(self.c))
        };
        if low >= high {
            return false;
        }

        let k = self.kernel;
        let eta = k[(i, i)] + k[(j, j)] - 2.0 * k[(i, j)];
        if eta <= 0.0 {
            // coincident points in feature space; no progress possible
            return false;
        }

        let mut aj_new = aj + yj * (ei - ej) / eta;
        aj_new = aj_new.clamp(low, high);
        if (aj_new - aj).abs() < 1e-10 * (aj_new + aj + 1e-10) {
            return false;
        }
        let ai_new = (ai + s * (aj - aj_new)).clamp(0.0, self.c);

        let (di, dj) = (ai_new - ai, aj_new - aj);
        let b1 = self.bias - ei - yi * di * k[(i, i)] - yj * dj * k[(i, j)];
        let b2 = self.bias - ej - yi * di * k[(i, j)] - yj * dj * k[(j, j)];
        self.bias = if ai_new > 0.0 && ai_new < self.c {
            b1
        } else if aj_new > 0.0 && aj_new < self.c {
            b2
        } else {
            0.5 * (b1 + b2)
        };

        for m in 0..self.f_nob.len() {
            self.f_nob[m] += yi * di * k[(i, m)] + yj * dj * k[(j, m)];
        }
        self.alpha[i] = ai_new;
        self.alpha[j] = aj_new;
        true
    }

    fn examine(&mut self, i: usize) -> bool {
        let ei = self.error(i);
        let r = ei * self.targets[i];
        let violates = (r < -self.tol && self.alpha[i] < self.c) || (r > self.tol && self.alpha[i] > 0.0);
        if !violates {
            return false;
        }
        let n = self.targets.len();

        // largest |E_i - E_j| over free variables, ties to the lowest index
        let mut best: Option<(f64, usize)> = None;
        for j in 0..n {
            if !self.is_free(j) {
                continue;
            }
            let gap = (ei - self.error(j)).abs();
            if best.map_or(true, |(g, _)| gap > g) {
                best = Some((gap, j));
            }
        }
        if let Some((_, j)) = best {
            if self.take_step(i, j) {
                return true;
            }
        }
        // deterministic fallbacks: free variables, then everything
        for off in 0..n {
            let j = (i + 1 + off) % n;
            if self.is_free(j) && self.take_step(i, j) {
                return true;
            }
        }
        for off in 0..n {
            let j = (i + 1 + off) % n;
            if self.take_step(i, j) {
                return true;
            }
        }
        false
    }

    fn solve(&mut self, max_passes: usize) {
        let n = self.targets.len();
        let mut examine_all = true;
        let mut sweeps = 0;
        loop {
            let mut changed = 0usize;
            for i in 0..n {
                if examine_all || self.is_free(i) {
                    changed += usize::from(self.examine(i));
                }
            }
            sweeps += 1;
            if examine_all {
                if changed == 0 {
                    break; // every point satisfies KKT within tolerance
                }
                examine_all = false;
            } else if changed == 0 {
                examine_all = true;
            }
            if sweeps >= max_passes {
                break;
            }
        }
    }
}

fn train_binary(
    features: ArrayView2<f64>,
    kernel: &Array2<f64>,
    targets: Vec<f64>,
    spec: &SvmSpec,
) -> BinarySvm {
    let mut problem = SmoProblem {
        kernel,
        targets: &targets,
        c: spec.c,
        tol: spec.tolerance,
        alpha: vec![0.0; targets.len()],
        bias: 0.0,
        f_nob: vec![0.0; targets.len()],
    };
    problem.solve(spec.max_passes);
    let alpha = std::mem::take(&mut problem.alpha);
    let bias = problem.bias;

    let support_rows: Vec<usize> = (0..targets.len()).filter(|&i| alpha[i] > 0.0).collect();
    let mut support_vectors = Array2::zeros((support_rows.len(), features.ncols()));
    let mut support_alpha_y = Vec::with_capacity(support_rows.len());
    for (m, &i) in support_rows.iter().enumerate() {
        support_vectors.row_mut(m).assign(&features.row(i));
        support_alpha_y.push(alpha[i] * targets[i]);
    }
    BinarySvm {
        alpha,
        targets,
        bias,
        support_rows,
        support_vectors,
        support_alpha_y,
    }
}

/// Trains on features and labels in the given order; curriculum orderings
/// influence the training set through any synthetic rows they append.
pub fn train_svm(
    features: ArrayView2<f64>,
    labels: &[usize],
    n_classes: usize,
    spec: &SvmSpec,
) -> Result<SvmModel> {
    spec.validate()?;
    if features.nrows() != labels.len() {
        return Err(Error::Data("feature rows and labels disagree".into()));
    }
    let mut present = vec![false; n_classes];
    for &l in labels {
        present[l] = true;
    }
    if present.iter().filter(|&&p| p).count() < 2 {
        return Err(Error::Data("SVM training needs at least two classes present".into()));
    }

    let gamma = resolve_gamma(features, spec.gamma_rule);
    let n = features.nrows();
    let mut kernel = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..=i {
            let k = rbf_kernel(features.row(i), features.row(j), gamma);
            kernel[(i, j)] = k;
            kernel[(j, i)] = k;
        }
    }

    let machines = if n_classes == 2 {
        let targets: Vec<f64> = labels.iter().map(|&l| if l == 1 { 1.0 } else { -1.0 }).collect();
        vec![train_binary(features, &kernel, targets, spec)]
    } else {
        (0..n_classes)
            .map(|class| {
                let targets: Vec<f64> =
                    labels.iter().map(|&l| if l == class { 1.0 } else { -1.0 }).collect();
                train_binary(features, &kernel, targets, spec)
            })
            .collect()
    };

    Ok(SvmModel {
        format_version: super::mlp::MODEL_FORMAT_VERSION,
        spec: spec.clone(),
        gamma,
        n_classes,
        machines,
    })
}

/// Predicted class ids plus per-class scores (decision values; for binary
/// models the positive-class value and its negation).
pub fn predict_svm(model: &SvmModel, features: ArrayView2<f64>) -> Result<(Vec<usize>, Array2<f64>)> {
    let d = model.machines[0].support_vectors.ncols();
    if features.ncols() != d {
        return Err(Error::Data(format!(
            "model expects {d} features, data has {}",
            features.ncols()
        )));
    }
    let n = features.nrows();
    let mut scores = Array2::zeros((n, model.n_classes));
    let mut preds = Vec::with_capacity(n);
    for (i, row) in features.rows().into_iter().enumerate() {
        if model.n_classes == 2 {
            let f = model.machines[0].decision(row, model.gamma);
            scores[(i, 0)] = -f;
            scores[(i, 1)] = f;
            preds.push(usize::from(f > 0.0));
        } else {
            let mut best = 0;
            for (class, machine) in model.machines.iter().enumerate() {
                let f = machine.decision(row, model.gamma);
                scores[(i, class)] = f;
                if f > scores[(i, best)] {
                    best = class;
                }
            }
            preds.push(best);
        }
    }
    Ok((preds, scores))
}
