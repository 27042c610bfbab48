//! Trains the neural net on curriculum-ordered data and compares early
//! convergence across the three scenarios.
//!
//! Usage: `cargo run -p ddcl --example train_mlp [dataset]`

use ddcl::harness::{run_experiment, ClassifierKind, ExperimentPlan, Scenario};

fn main() -> ddcl::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "cancer".into());
    let ds = ddcl::datasets::load(&name)?;
    println!("{name}: order-sensitive minibatch training, 200 epochs, hidden [16]");

    for scenario in Scenario::ALL {
        let plan = ExperimentPlan::new(&name, ClassifierKind::NeuralNet, scenario, 5, 42);
        let results = run_experiment(&ds, &plan)?;
        let stats = ddcl::harness::aggregate(&results)?;
        let log = results[0].train_log.as_ref().unwrap();
        let first5: Vec<String> = log.epoch_loss.iter().take(5).map(|l| format!("{l:.4}")).collect();
        println!(
            "{:<13} run-0 loss epochs 1-5: [{}]  final {:.4} | 5-run test accuracy {:.3} ±{:.3}",
            scenario.display(),
            first5.join(", "),
            log.epoch_loss.last().unwrap(),
            stats.average,
            stats.sigma,
        );
    }
    Ok(())
}
