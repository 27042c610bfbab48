//! Implementations behind the `ddcl` subcommands: ingest, curriculum, run
//! and report.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::artifacts::{
    write_aggregate_json, write_confusion_csv, write_density_csv, write_loss_csv,
    write_ordering_csv, write_pr_curve_csv, write_results_csv, AggregateMap, LossRow, ResultRow,
};
use crate::curriculum::{build_curriculum, CurriculumConfig, Scoring};
use crate::data::{apply_scaler, fit_scaler, load_csv, split, ColumnSelector, Dataset, SplitSpec};
use crate::datasets;
use crate::error::{Error, Result};
use crate::harness::{
    aggregate, run_experiment, ClassifierKind, ExperimentPlan, MlpOptions, RunResult, Scenario,
};
use crate::learners::BatchMode;
use crate::metrics::{confusion_matrix, precision_recall_curve};
use crate::report::render_report;
use crate::seed::derive_seed;

/// Everything `ddcl run` needs; loadable from a JSON config file, with CLI
/// flags overriding file values overriding defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Registry names; empty means every non-gated dataset.
    pub datasets: Vec<String>,
    /// Any of "nn", "svm", "forest".
    pub classifiers: Vec<String>,
    /// Any of "none", "density", "point".
    pub scenarios: Vec<String>,
    pub runs: usize,
    pub master_seed: u64,
    pub quantiles: usize,
    pub smote_enabled: bool,
    pub smote_min_size: usize,
    pub hidden_layers: Vec<usize>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Full-batch gradient descent for the neural net (order-invariant).
    pub full_batch: bool,
    pub tune_hidden: bool,
    pub include_diabetes130: bool,
    /// Worker threads; 0 uses the rayon default.
    pub jobs: usize,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            datasets: Vec::new(),
            classifiers: vec!["nn".into(), "svm".into(), "forest".into()],
            scenarios: vec!["none".into(), "density".into(), "point".into()],
            runs: 30,
            master_seed: 42,
            quantiles: 6,
            smote_enabled: true,
            smote_min_size: 3,
            hidden_layers: vec![16],
            learning_rate: 0.1,
            epochs: 200,
            batch_size: 32,
            full_batch: false,
            tune_hidden: false,
            include_diabetes130: false,
            jobs: 0,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    fn resolved_datasets(&self) -> Result<Vec<String>> {
        let mut names = if self.datasets.is_empty() {
            datasets::default_names()
        } else {
            self.datasets.clone()
        };
        for name in &names {
            let info = datasets::info(name)?;
            if info.gated && !self.include_diabetes130 {
                return Err(Error::Config(format!(
                    "dataset {name:?} is gated; pass --include-diabetes130 to run it"
                )));
            }
        }
        if self.include_diabetes130 && !names.iter().any(|n| n == "diabetes130") {
            names.push("diabetes130".into());
        }
        Ok(names)
    }

    fn plan(&self, dataset: &str, classifier: ClassifierKind, scenario: Scenario) -> ExperimentPlan {
        let mut plan = ExperimentPlan::new(dataset, classifier, scenario, self.runs, self.master_seed);
        plan.curriculum.quantile_count = self.quantiles;
        plan.curriculum.smote_enabled = self.smote_enabled;
        plan.curriculum.smote_min_size = self.smote_min_size;
        plan.mlp = MlpOptions {
            hidden_layers: self.hidden_layers.clone(),
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            batch_mode: if self.full_batch {
                BatchMode::Full
            } else {
                BatchMode::Minibatch(self.batch_size)
            },
            tune_hidden: self.tune_hidden,
        };
        plan
    }
}

/// Summary printed by `ddcl ingest`.
#[derive(Debug, Clone, Serialize)]
pub struct IngestSummary {
    pub source: String,
    pub rows: usize,
    pub features: usize,
    pub classes: Vec<(String, usize)>,
}

impl IngestSummary {
    fn from_dataset(source: String, ds: &Dataset) -> Self {
        IngestSummary {
            source,
            rows: ds.n(),
            features: ds.n_features(),
            classes: ds
                .class_names()
                .iter()
                .cloned()
                .zip(ds.class_counts())
                .collect(),
        }
    }
}

/// Loads and validates a dataset by registry name or explicit CSV path.
pub fn cmd_ingest(
    dataset: Option<&str>,
    path: Option<&Path>,
    label_col: Option<&str>,
) -> Result<IngestSummary> {
    match (dataset, path) {
        (Some(name), None) => {
            let ds = datasets::load(name)?;
            Ok(IngestSummary::from_dataset(name.to_string(), &ds))
        }
        (None, Some(path)) => {
            let selector = match label_col {
                Some(l) => l.parse::<ColumnSelector>().unwrap(),
                None => {
                    // default to the last column
                    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Malformed {
                        path: path.to_path_buf(),
                        message: e.to_string(),
                    })?;
                    let headers = reader.headers().map_err(|e| Error::Malformed {
                        path: path.to_path_buf(),
                        message: e.to_string(),
                    })?;
                    ColumnSelector::Index(headers.len().saturating_sub(1))
                }
            };
            let raw = load_csv(path, &selector)?;
            let ds = crate::data::encode(&raw)?;
            Ok(IngestSummary::from_dataset(path.display().to_string(), &ds))
        }
        _ => Err(Error::Config("pass exactly one of --dataset or --path".into())),
    }
}

/// Options for `ddcl curriculum`.
#[derive(Debug, Clone)]
pub struct CurriculumDumpOptions {
    pub dataset: String,
    pub scoring: Scoring,
    pub quantiles: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

/// Builds the curriculum for run 0 of the given seed on the 70/30 split and
/// writes `ordering.csv` plus one `density_class<k>.csv` per class.
pub fn cmd_curriculum(opts: &CurriculumDumpOptions) -> Result<PathBuf> {
    let mut cfg = CurriculumConfig::new(opts.scoring, 0);
    cfg.quantile_count = opts.quantiles;
    cfg.validate()?;

    let ds = datasets::load(&opts.dataset)?;
    let run_seed = derive_seed(opts.seed, 0);
    let split_spec = SplitSpec {
        train_frac: 0.7,
        val_frac: 0.0,
        test_frac: 0.3,
        stratified: true,
        seed: run_seed,
    };
    let parts = split(&ds, &split_spec)?;
    let scaler = fit_scaler(&ds, &parts.train_idx)?;
    let scaled = apply_scaler(&ds, &scaler);
    let (train_x, train_y) = scaled.subset(&parts.train_idx);

    cfg.seed = derive_seed(run_seed, 0xC0);
    let curriculum = build_curriculum(train_x.view(), &train_y, ds.n_classes(), &cfg)?;

    fs::create_dir_all(&opts.out_dir).map_err(|e| Error::io(&opts.out_dir, e))?;
    let ordering_path = opts.out_dir.join("ordering.csv");
    write_ordering_csv(&ordering_path, &curriculum, &parts.train_idx)?;
    for density in &curriculum.densities {
        let path = opts.out_dir.join(format!("density_class{}.csv", density.class_id));
        write_density_csv(&path, density)?;
    }
    Ok(ordering_path)
}

/// Identifier of one plan in manifests and progress output.
fn plan_id(dataset: &str, classifier: ClassifierKind, scenario: Scenario) -> String {
    format!("{dataset}/{}/{}", classifier.key(), scenario.key())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub completed: Vec<String>,
    pub failed: Vec<(String, String)>,
}

/// Executes the full protocol described by a [`RunConfig`] and writes
/// `results.csv`, `aggregate.json`, `loss_epoch.csv`, per-dataset PR and
/// confusion files, and a manifest. Partial results are preserved when a
/// plan fails.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunManifest> {
    if cfg.runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    let classifier_kinds: Vec<ClassifierKind> = cfg
        .classifiers
        .iter()
        .map(|c| ClassifierKind::parse(c))
        .collect::<Result<_>>()?;
    let scenario_kinds: Vec<Scenario> = cfg
        .scenarios
        .iter()
        .map(|s| Scenario::parse(s))
        .collect::<Result<_>>()?;
    let names = cfg.resolved_datasets()?;

    let pool = if cfg.jobs > 0 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.jobs)
                .build()
                .map_err(|e| Error::Config(format!("cannot build a {}-thread pool: {e}", cfg.jobs)))?,
        )
    } else {
        None
    };
    let execute = |ds: &Dataset, plan: &ExperimentPlan| -> Result<Vec<RunResult>> {
        match &pool {
            Some(p) => p.install(|| run_experiment(ds, plan)),
            None => run_experiment(ds, plan),
        }
    };

    fs::create_dir_all(&cfg.out_dir).map_err(|e| Error::io(&cfg.out_dir, e))?;
    let mut result_rows: Vec<ResultRow> = Vec::new();
    let mut loss_rows: Vec<LossRow> = Vec::new();
    let mut aggregate_map = AggregateMap::new();
    let mut manifest = RunManifest {
        completed: Vec::new(),
        failed: Vec::new(),
    };

    for name in &names {
        let info = datasets::info(name)?;
        let ds = match datasets::load(name) {
            Ok(ds) => ds,
            Err(e) => {
                for &classifier in &classifier_kinds {
                    for &scenario in &scenario_kinds {
                        manifest
                            .failed
                            .push((plan_id(name, classifier, scenario), e.to_string()));
                    }
                }
                continue;
            }
        };

        for &classifier in &classifier_kinds {
            for &scenario in &scenario_kinds {
                let plan = cfg.plan(name, classifier, scenario);
                let id = plan_id(name, classifier, scenario);
                let results = match execute(&ds, &plan) {
                    Ok(r) => r,
                    Err(e) => {
                        manifest.failed.push((id, e.to_string()));
                        continue;
                    }
                };

                for r in &results {
                    result_rows.push(ResultRow {
                        dataset: name.clone(),
                        classifier: classifier.key().into(),
                        scenario: scenario.key().into(),
                        run: r.run,
                        seed: r.seed,
                        accuracy: r.accuracy,
                    });
                }
                let stats = aggregate(&results)?;
                println!(
                    "{id}: worst {:.3} best {:.3} average {:.3} ±{:.3}",
                    stats.worst, stats.best, stats.average, stats.sigma
                );
                aggregate_map
                    .entry(name.clone())
                    .or_default()
                    .entry(classifier.key().to_string())
                    .or_default()
                    .insert(scenario.key().to_string(), stats);

                if classifier == ClassifierKind::NeuralNet {
                    for (scen, run, epoch, loss) in
                        crate::harness::export_loss_curves(scenario, &results)
                    {
                        loss_rows.push(LossRow {
                            dataset: name.clone(),
                            scenario: scen,
                            run,
                            epoch,
                            loss,
                        });
                    }
                    write_best_run_diagnostics(cfg, name, info, &ds, scenario, &results)?;
                }
                manifest.completed.push(id);
            }
        }
    }

    write_results_csv(&cfg.out_dir.join("results.csv"), &result_rows)?;
    write_aggregate_json(&cfg.out_dir.join("aggregate.json"), &aggregate_map)?;
    if !loss_rows.is_empty() {
        write_loss_csv(&cfg.out_dir.join("loss_epoch.csv"), &loss_rows)?;
    }
    let manifest_json = serde_json::to_string_pretty(&manifest)
        .map_err(|e| Error::Data(format!("manifest serialization: {e}")))?;
    fs::write(cfg.out_dir.join("manifest.json"), manifest_json)
        .map_err(|e| Error::io(cfg.out_dir.join("manifest.json"), e))?;

    if manifest.failed.is_empty() {
        Ok(manifest)
    } else {
        Err(Error::Run {
            run: 0,
            source: Box::new(Error::Data(format!(
                "{} plan(s) failed; see manifest.json under {}",
                manifest.failed.len(),
                cfg.out_dir.display()
            ))),
        })
    }
}

/// PR curve for binary datasets, confusion matrix for multi-class ones,
/// taken from the best run of each scenario.
fn write_best_run_diagnostics(
    cfg: &RunConfig,
    name: &str,
    info: &datasets::DatasetInfo,
    ds: &Dataset,
    scenario: Scenario,
    results: &[RunResult],
) -> Result<()> {
    let best = results
        .iter()
        .max_by(|a, b| a.accuracy.total_cmp(&b.accuracy).then(b.run.cmp(&a.run)))
        .expect("plans hold at least one run");

    if ds.n_classes() == 2 {
        let Some(positive_name) = info.positive_class else {
            return Ok(());
        };
        let Some(positive) = ds.class_names().iter().position(|c| c == positive_name) else {
            return Ok(());
        };
        let scores: Vec<f64> = best.scores.column(positive).to_vec();
        let curve = precision_recall_curve(&scores, &best.test_labels, positive)?;
        let dir = cfg.out_dir.join("pr_curve");
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        write_pr_curve_csv(&dir.join(format!("{name}__{}.csv", scenario.key())), &curve)?;
    } else {
        let matrix = confusion_matrix(&best.predictions, &best.test_labels, ds.n_classes())?;
        let dir = cfg.out_dir.join("confusion");
        fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        write_confusion_csv(
            &dir.join(format!("{name}__{}.csv", scenario.key())),
            &matrix,
            ds.class_names(),
        )?;
    }
    Ok(())
}

/// Renders `report.md` and the SVG plots from a results directory.
pub fn cmd_report(results_dir: &Path, out_dir: &Path) -> Result<()> {
    render_report(results_dir, out_dir)
}

/// Maps an error to the subcommand's documented exit code.
pub fn exit_code(command: &str, err: &Error) -> u8 {
    match command {
        "ingest" => 2,
        "curriculum" => match err {
            Error::Config(_) => 3,
            _ => 2,
        },
        "run" => match err {
            Error::Config(_) => 3,
            _ => 4,
        },
        "report" => 5,
        _ => 1,
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ScoringArg(pub Scoring);

impl std::str::FromStr for ScoringArg {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "density" => Ok(ScoringArg(Scoring::Density)),
            "point" => Ok(ScoringArg(Scoring::Point)),
            other => Err(Error::Config(format!(
                "scoring must be density or point, got {other:?}"
            ))),
        }
    }
}

/// Scenario filter used by `ddcl run --scoring`.
pub fn scenarios_for_filter(filter: &str) -> Result<Vec<String>> {
    match filter {
        "none" | "density" | "point" => Ok(vec![filter.to_string()]),
        "all" => Ok(vec!["none".into(), "density".into(), "point".into()]),
        other => Err(Error::Config(format!(
            "scoring filter must be none, density, point or all, got {other:?}"
        ))),
    }
}
