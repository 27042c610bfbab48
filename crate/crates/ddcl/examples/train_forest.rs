//! Trains the random forest on a curriculum ordering and shows how vote
//! fractions behave on held-out rows.
//!
//! Usage: `cargo run -p ddcl --example train_forest [dataset]`

use ddcl::curriculum::{build_curriculum, CurriculumConfig, Scoring};
use ddcl::data::{apply_scaler, fit_scaler, split, SplitSpec};
use ddcl::harness::materialize_ordering;
use ddcl::learners::{predict_forest, train_forest, ForestSpec};
use ddcl::metrics::accuracy;
use ddcl::seed::derive_seed;

fn main() -> ddcl::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "haberman".into());
    let ds = ddcl::datasets::load(&name)?;
    let seed = derive_seed(42, 0);
    let parts = split(&ds, &SplitSpec { train_frac: 0.7, val_frac: 0.0, test_frac: 0.3, stratified: true, seed })?;
    let scaler = fit_scaler(&ds, &parts.train_idx)?;
    let scaled = apply_scaler(&ds, &scaler);
    let (train_x, train_y) = scaled.subset(&parts.train_idx);
    let (test_x, test_y) = scaled.subset(&parts.test_idx);

    // density-ordered training stream feeds the bootstrap draws
    let cfg = CurriculumConfig::new(Scoring::Density, derive_seed(seed, 0xC0));
    let cur = build_curriculum(train_x.view(), &train_y, ds.n_classes(), &cfg)?;
    let (ox, oy) = materialize_ordering(train_x.view(), &train_y, &cur.ordering, &cur.synthetics);

    let mut spec = ForestSpec::new(derive_seed(seed, 0x7E));
    spec.max_split_features = spec.max_split_features.min(ds.n_features());
    let model = train_forest(ox.view(), &oy, ds.n_classes(), &spec)?;
    let (preds, scores) = predict_forest(&model, test_x.view())?;

    println!(
        "{name}: {} trees, {} split features, trained on {} ordered rows ({} synthetic)",
        spec.n_estimators,
        spec.max_split_features,
        ox.nrows(),
        cur.synthetics.len()
    );
    println!("test accuracy: {:.3}%", accuracy(&preds, &test_y)? * 100.0);

    println!("\nfirst eight test rows (vote fractions per class):");
    for t in 0..8.min(test_y.len()) {
        let votes: Vec<String> = (0..ds.n_classes())
            .map(|c| format!("{}={:.2}", ds.class_names()[c], scores[(t, c)]))
            .collect();
        println!(
            "  row {:>4}: {}  predicted {}, actual {}",
            parts.test_idx[t],
            votes.join(" "),
            ds.class_names()[preds[t]],
            ds.class_names()[test_y[t]]
        );
    }
    Ok(())
}
