//! Per-class kernel density estimates over normalized centroid distances:
//! the distribution the quantile partition discretizes.
//!
//! Usage: `cargo run -p ddcl --example kde_diagnostics [dataset]`

use ddcl::curriculum::{
    compute_centroid, compute_distances, group_by_class, normalize_distances,
    silverman_bandwidth, default_grid, estimate_density,
};
use ddcl::data::{apply_scaler, fit_scaler, split, SplitSpec};
use ddcl::seed::derive_seed;

fn main() -> ddcl::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "haberman".into());
    let ds = ddcl::datasets::load(&name)?;
    let seed = derive_seed(42, 0);
    let parts = split(&ds, &SplitSpec { train_frac: 0.7, val_frac: 0.0, test_frac: 0.3, stratified: true, seed })?;
    let scaler = fit_scaler(&ds, &parts.train_idx)?;
    let scaled = apply_scaler(&ds, &scaler);
    let (train_x, train_y) = scaled.subset(&parts.train_idx);

    for group in group_by_class(&train_y, ds.n_classes())? {
        let centroid = compute_centroid(train_x.view(), &group)?;
        let raw = compute_distances(train_x.view(), &group, &[centroid])?;
        let normalized = normalize_distances(&raw)?;
        let h = silverman_bandwidth(&normalized)?;
        let grid = default_grid(h, 256);
        let density = estimate_density(group.class_id, &normalized, h, &grid)?;

        // locate the mode of the estimate
        let (mode_idx, mode_val) = density
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        println!(
            "class {} ({}): {} members, bandwidth {:.4}, integral {:.4}, mode at d={:.3} (density {:.2})",
            group.class_id,
            ds.class_names()[group.class_id],
            group.member_rows.len(),
            h,
            density.integral(),
            density.grid[mode_idx],
            mode_val,
        );

        // coarse console sketch of the density over [0, 1]
        let mut sketch = String::new();
        for i in 0..40 {
            let y = i as f64 / 39.0;
            let nearest = density
                .grid
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - y).abs().total_cmp(&(b.1 - y).abs()))
                .unwrap()
                .0;
            let level = (density.values[nearest] / mode_val * 8.0).round() as usize;
            sketch.push(char::from_u32(0x2581 + level.min(7) as u32).unwrap());
        }
        println!("  density over [0,1]: {sketch}");
    }
    Ok(())
}
