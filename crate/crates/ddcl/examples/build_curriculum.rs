//! Builds Density- and Point-scored curricula for one dataset and prints
//! how each rearranges the training sequence.
//!
//! Usage: `cargo run -p ddcl --example build_curriculum [dataset]`

use ddcl::curriculum::{build_curriculum, CurriculumConfig, SampleSource, Scoring};
use ddcl::data::{apply_scaler, fit_scaler, split, SplitSpec};
use ddcl::seed::derive_seed;

fn main() -> ddcl::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "haberman".into());
    let ds = ddcl::datasets::load(&name)?;
    println!(
        "{name}: {} rows, {} features, {} classes",
        ds.n(),
        ds.n_features(),
        ds.n_classes()
    );

    let seed = derive_seed(42, 0);
    let parts = split(&ds, &SplitSpec { train_frac: 0.7, val_frac: 0.0, test_frac: 0.3, stratified: true, seed })?;
    let scaler = fit_scaler(&ds, &parts.train_idx)?;
    let scaled = apply_scaler(&ds, &scaler);
    let (train_x, train_y) = scaled.subset(&parts.train_idx);

    for scoring in [Scoring::Density, Scoring::Point] {
        let cfg = CurriculumConfig::new(scoring, derive_seed(seed, 0xC0));
        let cur = build_curriculum(train_x.view(), &train_y, ds.n_classes(), &cfg)?;
        println!("\n{scoring:?} scoring: {} entries ({} synthetic)", cur.ordering.len(), cur.synthetics.len());

        // per-class quantile occupancy
        for p in &cur.partitions {
            println!(
                "  class {} ({}) bin counts: {:?}",
                p.class_id,
                ds.class_names()[p.class_id],
                p.counts()
            );
        }

        let head: Vec<String> = cur.ordering.entries.iter().take(5).map(describe).collect();
        let tail: Vec<String> = cur.ordering.entries.iter().rev().take(5).rev().map(describe).collect();
        println!("  first: {}", head.join("  "));
        println!("  last:  {}", tail.join("  "));
    }
    Ok(())
}

fn describe(e: &ddcl::curriculum::OrderingEntry) -> String {
    let src = match e.source {
        SampleSource::Row(r) => format!("r{r}"),
        SampleSource::Synthetic(s) => format!("syn{s}"),
    };
    format!("[{src} c{} q{} d{:.2}]", e.class_id, e.quantile, e.normalized_distance)
}
