//! Trains the RBF-kernel SVM on one split and inspects the solution: size
//! of the support set, KKT satisfaction, test accuracy.
//!
//! Usage: `cargo run -p ddcl --example train_svm [dataset]`

use ddcl::data::{apply_scaler, fit_scaler, split, SplitSpec};
use ddcl::learners::{predict_svm, train_svm, SvmSpec};
use ddcl::metrics::accuracy;
use ddcl::seed::derive_seed;

fn main() -> ddcl::Result<()> {
    let name = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "breast_cancer_diagnostic".into());
    let ds = ddcl::datasets::load(&name)?;
    let seed = derive_seed(42, 0);
    let parts = split(&ds, &SplitSpec { train_frac: 0.7, val_frac: 0.0, test_frac: 0.3, stratified: true, seed })?;
    let scaler = fit_scaler(&ds, &parts.train_idx)?;
    let scaled = apply_scaler(&ds, &scaler);
    let (train_x, train_y) = scaled.subset(&parts.train_idx);
    let (test_x, test_y) = scaled.subset(&parts.test_idx);

    let spec = SvmSpec::default();
    let model = train_svm(train_x.view(), &train_y, ds.n_classes(), &spec)?;
    println!(
        "{name}: C = {}, resolved gamma = {:.4}, {} one-vs-rest machine(s)",
        spec.c,
        model.gamma,
        model.machines.len()
    );
    for (i, machine) in model.machines.iter().enumerate() {
        let bound = machine.alpha.iter().filter(|&&a| a >= spec.c).count();
        println!(
            "machine {i}: {} support vectors ({} at the box bound), bias {:+.4}, max KKT violation {:.2e}",
            machine.support_rows.len(),
            bound,
            machine.bias,
            machine.max_kkt_violation(train_x.view(), model.gamma, spec.c),
        );
    }

    let (preds, _) = predict_svm(&model, test_x.view())?;
    println!(
        "test accuracy on {} held-out rows: {:.3}%",
        test_y.len(),
        accuracy(&preds, &test_y)? * 100.0
    );
    Ok(())
}
