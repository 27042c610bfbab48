//! SMOTE synthetic sample generation.
//!
//! New samples are linear interpolations between a pool member and one of
//! its k nearest same-pool neighbors; parents and the interpolation factor
//! are recorded so downstream consumers can audit every synthetic point.

use ndarray::ArrayView2;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A generated sample: `coords = a + lambda * (b - a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSample {
    pub coords: Vec<f64>,
    /// Index of the first parent (interpretation is up to the caller:
    /// pool-local from [`smote`], training-row after curriculum mapping).
    pub parent_a: usize,
    pub parent_b: usize,
    pub lambda: f64,
    pub class_id: usize,
}

fn sq_dist(a: ndarray::ArrayView1<f64>, b: ndarray::ArrayView1<f64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Indices of the k nearest pool rows to `query` (excluding itself),
/// Euclidean distance, ties broken by ascending index.
pub fn k_nearest(pool: ArrayView2<f64>, query: usize, k: usize) -> Result<Vec<usize>> {
    let n = pool.nrows();
    if query >= n {
        return Err(Error::Data(format!("query index {query} out of range for pool of {n}")));
    }
    if k > n - 1 {
        return Err(Error::Data(format!(
            "k = {k} exceeds pool size minus one ({})",
            n - 1
        )));
    }
    let q = pool.row(query);
    let mut candidates: Vec<(f64, usize)> = (0..n)
        .filter(|&i| i != query)
        .map(|i| (sq_dist(pool.row(i), q), i))
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(candidates.into_iter().take(k).map(|(_, i)| i).collect())
}

/// Draws `n_synthetic` samples: a uniform pool member, a uniform choice among
/// its k nearest neighbors, and a uniform interpolation factor in `[0, 1]`.
pub fn smote(
    pool: ArrayView2<f64>,
    class_id: usize,
    n_synthetic: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<SyntheticSample>> {
    let n = pool.nrows();
    if n < 2 {
        return Err(Error::Data(format!("SMOTE needs a pool of at least 2 samples, got {n}")));
    }
    if k < 1 {
        return Err(Error::Data("SMOTE neighbor count must be at least 1".into()));
    }
    let k = k.min(n - 1);

    let mut out = Vec::with_capacity(n_synthetic);
    for _ in 0..n_synthetic {
        let a = rng.gen_range(0..n);
        let neighbors = k_nearest(pool, a, k)?;
        let b = neighbors[rng.gen_range(0..k)];
        let lambda: f64 = rng.gen();
        let coords: Vec<f64> = pool
            .row(a)
            .iter()
            .zip(pool.row(b).iter())
            .map(|(&pa, &pb)| pa + lambda * (pb - pa))
            .collect();
        out.push(SyntheticSample {
            coords,
            parent_a: a,
            parent_b: b,
            lambda,
            class_id,
        });
    }
    Ok(out)
}
