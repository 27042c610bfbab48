//! Quantile partitioning of normalized distances and sparse-bin
//! oversampling.

use ndarray::ArrayView2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::curriculum::{CurriculumConfig, SampleSource};
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::smote::{smote, SyntheticSample};

/// One sample inside a quantile bin.
#[derive(Debug, Clone, PartialEq)]
pub struct BinMember {
    pub source: SampleSource,
    pub normalized_distance: f64,
}

/// K equal-width bins over `[0, 1]` for one class.
///
/// Bins are half-open `[e_i, e_{i+1})` with the final bin closed at 1, so
/// the edge value 1.0 lands in the last bin.
#[derive(Debug, Clone)]
pub struct QuantilePartition {
    pub class_id: usize,
    /// K + 1 ascending edges spanning `[0, 1]`.
    pub edges: Vec<f64>,
    pub bins: Vec<Vec<BinMember>>,
}

impl QuantilePartition {
    pub fn counts(&self) -> Vec<usize> {
        self.bins.iter().map(|b| b.len()).collect()
    }

    pub fn total(&self) -> usize {
        self.bins.iter().map(|b| b.len()).sum()
    }

    /// Bin index of a normalized distance under this partition's convention.
    pub fn bin_of(&self, normalized: f64, k: usize) -> usize {
        ((normalized * k as f64).floor() as usize).min(k - 1)
    }
}

/// Assigns each member to one of `k` equal-width bins over `[0, 1]`.
pub fn partition_quantiles(
    class_id: usize,
    sources: &[SampleSource],
    normalized: &[f64],
    k: usize,
) -> Result<QuantilePartition> {
    if k < 2 {
        return Err(Error::Config(format!("quantile count must be at least 2, got {k}")));
    }
    if sources.len() != normalized.len() {
        return Err(Error::Data("sources and distances length mismatch".into()));
    }
    let edges: Vec<f64> = (0..=k).map(|i| i as f64 / k as f64).collect();
    let mut bins: Vec<Vec<BinMember>> = vec![Vec::new(); k];
    for (source, &dist) in sources.iter().zip(normalized.iter()) {
        let bin = ((dist * k as f64).floor() as usize).min(k - 1);
        bins[bin].push(BinMember {
            source: source.clone(),
            normalized_distance: dist,
        });
    }
    Ok(QuantilePartition {
        class_id,
        edges,
        bins,
    })
}

/// Grows every bin holding at least 2 but fewer than `smote_min_size`
/// members up to `smote_min_size` via SMOTE; bins with fewer than 2 members
/// stay untouched (no pair to interpolate between).
///
/// Synthetic members get a post-hoc distance to the class centroid,
/// normalized with the class's raw min/max and clamped to `[0, 1]`; their
/// quantile assignment is the bin they were generated for. Parent indices
/// are rewritten from pool-local to training-row indices.
#[allow(clippy::too_many_arguments)]
pub fn oversample_sparse_quantiles(
    partition: &mut QuantilePartition,
    features: ArrayView2<f64>,
    centroids: &[Vec<f64>],
    raw_min: f64,
    raw_max: f64,
    cfg: &CurriculumConfig,
    class_seed: u64,
    synthetics: &mut Vec<SyntheticSample>,
) -> Result<()> {
    if !cfg.smote_enabled {
        return Ok(());
    }
    let d = features.ncols();
    for (bin_idx, bin) in partition.bins.iter_mut().enumerate() {
        let size = bin.len();
        if size < 2 || size >= cfg.smote_min_size {
            continue;
        }
        // pool: the bin's current (real) members
        let pool_rows: Vec<usize> = bin
            .iter()
            .map(|m| match m.source {
                SampleSource::Row(r) => Ok(r),
                SampleSource::Synthetic(_) => {
                    Err(Error::Data("oversampling applied twice to the same bin".into()))
                }
            })
            .collect::<Result<_>>()?;
        let mut pool = ndarray::Array2::zeros((size, d));
        for (p, &row) in pool_rows.iter().enumerate() {
            pool.row_mut(p).assign(&features.row(row));
        }

        let n_needed = cfg.smote_min_size - size;
        let k = 5.min(size - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(class_seed, bin_idx as u64));
        let generated = smote(pool.view(), partition.class_id, n_needed, k, &mut rng)?;

        for mut sample in generated {
            sample.parent_a = pool_rows[sample.parent_a];
            sample.parent_b = pool_rows[sample.parent_b];

            let raw = centroids
                .iter()
                .map(|c| {
                    c.iter()
                        .zip(sample.coords.iter())
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(f64::INFINITY, f64::min);
            let range = raw_max - raw_min;
            let normalized = if range > 0.0 {
                ((raw - raw_min) / range).clamp(0.0, 1.0)
            } else {
                0.0
            };

            let id = synthetics.len();
            synthetics.push(sample);
            bin.push(BinMember {
                source: SampleSource::Synthetic(id),
                normalized_distance: normalized,
            });
        }
    }
    Ok(())
}
