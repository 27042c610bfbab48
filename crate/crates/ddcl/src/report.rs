//! Report rendering: the Worst/Best/Average tables plus PR-curve,
//! confusion-matrix and loss-per-epoch plots as standalone SVG files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::artifacts::{read_loss_csv, read_results_csv, LossRow, ResultRow};
use crate::datasets;
use crate::error::{Error, Result};
use crate::harness::{aggregate_accuracies, AggregateStats, ClassifierKind, Scenario};
use crate::svg::{heat_grid, line_chart, Series, PALETTE};

fn scenario_order(key: &str) -> usize {
    match key {
        "none" => 0,
        "density" => 1,
        _ => 2,
    }
}

fn display_dataset(name: &str) -> String {
    datasets::info(name)
        .map(|i| i.display.to_string())
        .unwrap_or_else(|_| name.to_string())
}

fn display_scenario(key: &str) -> String {
    Scenario::parse(key)
        .map(|s| s.display().to_string())
        .unwrap_or_else(|_| key.to_string())
}

fn display_classifier(key: &str) -> String {
    ClassifierKind::parse(key)
        .map(|c| c.display().to_string())
        .unwrap_or_else(|_| key.to_string())
}

type Grouped = BTreeMap<String, BTreeMap<String, BTreeMap<String, Vec<f64>>>>;

fn group_results(rows: &[ResultRow]) -> Grouped {
    let mut grouped: Grouped = BTreeMap::new();
    for row in rows {
        grouped
            .entry(row.classifier.clone())
            .or_default()
            .entry(row.dataset.clone())
            .or_default()
            .entry(row.scenario.clone())
            .or_default()
            .push(row.accuracy);
    }
    grouped
}

fn stats_table(dataset_stats: &BTreeMap<String, AggregateStats>, display: &str) -> String {
    let mut keys: Vec<&String> = dataset_stats.keys().collect();
    keys.sort_by_key(|k| scenario_order(k));
    let best_key: Option<String> = keys
        .iter()
        .max_by(|a, b| {
            dataset_stats[**a]
                .average
                .total_cmp(&dataset_stats[**b].average)
        })
        .map(|k| (*k).clone());

    let mut out = String::new();
    for key in &keys {
        let s = &dataset_stats[*key];
        let bold = best_key.as_deref() == Some(key.as_str());
        let wrap = |text: String| if bold { format!("**{text}**") } else { text };
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            display,
            wrap(display_scenario(key)),
            wrap(format!("{:.3}", s.worst)),
            wrap(format!("{:.3}", s.best)),
            wrap(format!("{:.3} ±{:.3}", s.average, s.sigma)),
        ));
    }
    out
}

/// Renders `report.md` and the SVG plots from a results directory.
pub fn render_report(results_dir: &Path, out_dir: &Path) -> Result<()> {
    let results_path = results_dir.join("results.csv");
    if !results_path.is_file() {
        return Err(Error::MissingInput(format!(
            "{} not found",
            results_path.display()
        )));
    }
    let rows = read_results_csv(&results_path)?;
    if rows.is_empty() {
        return Err(Error::MissingInput("results.csv holds no rows".into()));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let grouped = group_results(&rows);

    let mut md = String::from("# DDCL experiment report\n");
    md.push_str(
        "\nEach table reports test accuracy over the repeated runs of the three\n\
         scenarios; the scenario with the best average per dataset is bold.\n",
    );

    let classifier_keys = ["nn", "svm", "forest"];
    for ck in classifier_keys {
        let Some(by_dataset) = grouped.get(ck) else {
            continue;
        };
        md.push_str(&format!("\n## {}\n\n", display_classifier(ck)));
        md.push_str("| Dataset | Test Scenario | Worst % | Best % | Average ±σ |\n");
        md.push_str("|---|---|---|---|---|\n");
        let mut names: Vec<&String> = by_dataset.keys().collect();
        names.sort_by_key(|n| {
            datasets::DATASETS
                .iter()
                .position(|d| d.name == n.as_str())
                .unwrap_or(usize::MAX)
        });
        for name in names {
            let mut stats = BTreeMap::new();
            for (scenario, accs) in &by_dataset[name] {
                stats.insert(scenario.clone(), aggregate_accuracies(accs)?);
            }
            md.push_str(&stats_table(&stats, &display_dataset(name)));
        }
    }

    // loss-per-epoch plots, one per dataset with NN logs
    let loss_path = results_dir.join("loss_epoch.csv");
    if loss_path.is_file() {
        let loss_rows = read_loss_csv(&loss_path)?;
        let mut by_dataset: BTreeMap<String, Vec<&LossRow>> = BTreeMap::new();
        for row in &loss_rows {
            by_dataset.entry(row.dataset.clone()).or_default().push(row);
        }
        md.push_str("\n## Convergence plots\n\n");
        for (dataset, rows) in &by_dataset {
            for (suffix, max_epoch, title) in [
                ("", usize::MAX, "error loss per epoch"),
                ("_first5", 5, "error loss, first five epochs"),
            ] {
                let mut series = Vec::new();
                for (i, scenario) in ["none", "density", "point"].iter().enumerate() {
                    // mean loss per epoch across runs
                    let mut per_epoch: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
                    for row in rows.iter().filter(|r| r.scenario == *scenario) {
                        if row.epoch < max_epoch {
                            let slot = per_epoch.entry(row.epoch).or_insert((0.0, 0));
                            slot.0 += row.loss;
                            slot.1 += 1;
                        }
                    }
                    if per_epoch.is_empty() {
                        continue;
                    }
                    series.push(Series {
                        label: display_scenario(scenario),
                        points: per_epoch
                            .iter()
                            .map(|(&e, &(sum, n))| (e as f64, sum / n as f64))
                            .collect(),
                        color: PALETTE[i].to_string(),
                    });
                }
                if series.is_empty() {
                    continue;
                }
                let svg = line_chart(
                    &format!("{} — {}", display_dataset(dataset), title),
                    "epoch",
                    "mean training loss",
                    &series,
                );
                let file = format!("loss{suffix}_{dataset}.svg");
                fs::write(out_dir.join(&file), svg).map_err(|e| Error::io(out_dir.join(&file), e))?;
                md.push_str(&format!("- [{file}]({file})\n"));
            }
        }
    }

    // PR curves per binary dataset
    let pr_dir = results_dir.join("pr_curve");
    if pr_dir.is_dir() {
        let mut by_dataset: BTreeMap<String, Vec<(String, Vec<(f64, f64)>)>> = BTreeMap::new();
        let mut entries: Vec<_> = fs::read_dir(&pr_dir)
            .map_err(|e| Error::io(&pr_dir, e))?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .collect();
        entries.sort();
        for path in entries {
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let Some((dataset, scenario)) = stem.split_once("__") else {
                continue;
            };
            let points = crate::artifacts::read_pr_curve_csv(&path)?;
            by_dataset
                .entry(dataset.to_string())
                .or_default()
                .push((scenario.to_string(), points));
        }
        if !by_dataset.is_empty() {
            md.push_str("\n## Precision-recall curves (best neural-net run)\n\n");
        }
        for (dataset, mut curves) in by_dataset {
            curves.sort_by_key(|(s, _)| scenario_order(s));
            let series: Vec<Series> = curves
                .iter()
                .enumerate()
                .map(|(i, (scenario, points))| Series {
                    label: display_scenario(scenario),
                    points: points.clone(),
                    color: PALETTE[i % PALETTE.len()].to_string(),
                })
                .collect();
            let svg = line_chart(
                &format!("{} — precision-recall", display_dataset(&dataset)),
                "recall",
                "precision",
                &series,
            );
            let file = format!("pr_{dataset}.svg");
            fs::write(out_dir.join(&file), svg).map_err(|e| Error::io(out_dir.join(&file), e))?;
            md.push_str(&format!("- [{file}]({file})\n"));
        }
    }

    // confusion heat grids per multi-class dataset
    let confusion_dir = results_dir.join("confusion");
    if confusion_dir.is_dir() {
        let mut entries: Vec<_> = fs::read_dir(&confusion_dir)
            .map_err(|e| Error::io(&confusion_dir, e))?
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .collect();
        entries.sort();
        if !entries.is_empty() {
            md.push_str("\n## Confusion matrices (best neural-net run)\n\n");
        }
        for path in entries {
            let Some(stem) = path.file_stem().and_then(|s| s.to_str()) else {
                continue;
            };
            let Some((dataset, scenario)) = stem.split_once("__") else {
                continue;
            };
            let (names, counts) = crate::artifacts::read_confusion_csv(&path)?;
            let svg = heat_grid(
                &format!(
                    "{} — {}",
                    display_dataset(dataset),
                    display_scenario(scenario)
                ),
                &names,
                &counts,
            );
            let file = format!("confusion_{dataset}__{scenario}.svg");
            fs::write(out_dir.join(&file), svg).map_err(|e| Error::io(out_dir.join(&file), e))?;
            md.push_str(&format!("- [{file}]({file})\n"));
        }
    }

    fs::write(out_dir.join("report.md"), md).map_err(|e| Error::io(out_dir.join("report.md"), e))?;
    Ok(())
}
