//! Runs the repeated-run protocol for one dataset across all three
//! scenarios and classifiers, printing the aggregate table rows.
//!
//! Usage: `cargo run --release -p ddcl --example run_experiments [dataset] [runs]`

use ddcl::harness::{aggregate, run_experiment, ClassifierKind, ExperimentPlan, Scenario};

fn main() -> ddcl::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "liver_disorder".into());
    let runs: usize = std::env::args().nth(2).and_then(|r| r.parse().ok()).unwrap_or(10);
    let ds = ddcl::datasets::load(&name)?;
    println!("{name}: {runs} runs per scenario, master seed 42\n");
    println!("{:<16} {:<14} {:>8} {:>8} {:>16}", "Classifier", "Scenario", "Worst %", "Best %", "Average ±σ");

    for classifier in ClassifierKind::ALL {
        let mut baseline = None;
        for scenario in Scenario::ALL {
            let plan = ExperimentPlan::new(&name, classifier, scenario, runs, 42);
            let results = run_experiment(&ds, &plan)?;
            let stats = aggregate(&results)?;
            let delta = match baseline {
                None => {
                    baseline = Some(stats.average);
                    String::new()
                }
                Some(base) => format!("  ({:+.3} vs none)", stats.average - base),
            };
            println!(
                "{:<16} {:<14} {:>8.3} {:>8.3} {:>9.3} ±{:<6.3}{delta}",
                classifier.display(),
                scenario.display(),
                stats.worst,
                stats.best,
                stats.average,
                stats.sigma,
            );
        }
    }
    Ok(())
}
