//! Gaussian kernel density estimation over normalized centroid distances.
//!
//! The estimate is a per-class diagnostic: it characterizes the distance
//! distribution that the quantile partition discretizes, and is exported for
//! plotting, but bin edges never depend on it.

use crate::error::{Error, Result};

/// Density estimate for one class: `values[i]` is the kernel sum at
/// `grid[i]`.
#[derive(Debug, Clone)]
pub struct DensityEstimate {
    pub class_id: usize,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub bandwidth: f64,
}

impl DensityEstimate {
    /// Trapezoidal integral over the grid; close to 1 on a grid that covers
    /// the kernel mass.
    pub fn integral(&self) -> f64 {
        let mut total = 0.0;
        for w in self.grid.windows(2).zip(self.values.windows(2)) {
            let (g, v) = w;
            total += 0.5 * (v[0] + v[1]) * (g[1] - g[0]);
        }
        total
    }
}

/// Bandwidth fallback when the data is degenerate (all values equal).
pub const DEGENERATE_BANDWIDTH: f64 = 1e-3;

fn sample_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    var.sqrt()
}

/// Nearest-rank quantile of a sorted slice.
fn nearest_rank_quantile(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let rank = (p * n as f64).ceil() as usize;
    sorted[rank.clamp(1, n) - 1]
}

/// Silverman's rule of thumb: `0.9 * min(std, IQR / 1.34) * n^(-1/5)`.
///
/// All-equal inputs collapse the rule to zero; [`DEGENERATE_BANDWIDTH`]
/// is returned instead so downstream kernels stay well defined.
pub fn silverman_bandwidth(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::Data(format!(
            "bandwidth estimation needs at least 2 values, got {}",
            values.len()
        )));
    }
    let std = sample_std(values);
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = nearest_rank_quantile(&sorted, 0.75) - nearest_rank_quantile(&sorted, 0.25);
    let spread = std.min(iqr / 1.34);
    let h = 0.9 * spread * (values.len() as f64).powf(-0.2);
    if h > 0.0 && h.is_finite() {
        Ok(h)
    } else {
        Ok(DEGENERATE_BANDWIDTH)
    }
}

const INV_SQRT_2PI: f64 = 0.3989422804014327;

/// Standard Gaussian kernel `K(u) = exp(-u^2 / 2) / sqrt(2 pi)`.
pub fn gaussian_kernel(u: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * u * u).exp()
}

/// Evaluation grid spanning `[-4h, 1 + 4h]`, wide enough for the kernel
/// mass of values inside `[0, 1]`.
pub fn default_grid(bandwidth: f64, points: usize) -> Vec<f64> {
    let lo = -4.0 * bandwidth;
    let hi = 1.0 + 4.0 * bandwidth;
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

/// Kernel density estimate of `values` at each grid point:
/// `D(y) = sum_i K((y - v_i) / h) / (n h)`.
pub fn estimate_density(
    class_id: usize,
    values: &[f64],
    bandwidth: f64,
    grid: &[f64],
) -> Result<DensityEstimate> {
    if bandwidth <= 0.0 || !bandwidth.is_finite() {
        return Err(Error::Config(format!("bandwidth must be positive, got {bandwidth}")));
    }
    if grid.is_empty() {
        return Err(Error::Config("density grid must be non-empty".into()));
    }
    let scale = 1.0 / (values.len() as f64 * bandwidth);
    let density = grid
        .iter()
        .map(|&y| {
            scale
                * values
                    .iter()
                    .map(|&v| gaussian_kernel((y - v) / bandwidth))
                    .sum::<f64>()
        })
        .collect();
    Ok(DensityEstimate {
        class_id,
        grid: grid.to_vec(),
        values: density,
        bandwidth,
    })
}
