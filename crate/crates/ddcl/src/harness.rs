//! The experiment protocol: scenarios x classifiers x repeated seeded runs.
//!
//! Each run re-splits the dataset with a seed derived from `(master_seed,
//! run)`, scales features on the training split, builds the scenario's
//! ordering, trains and evaluates on the held-out test split. Runs are
//! independent; aggregation folds them in run order so output never depends
//! on scheduling.

use ndarray::{Array2, ArrayView2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curriculum::{
    build_curriculum, CurriculumConfig, CurriculumOrdering, SampleSource, Scoring,
};
use crate::data::{apply_scaler, fit_scaler, split, Dataset, SplitSpec};
use crate::error::{Error, Result};
use crate::learners::{
    predict_forest, predict_mlp, predict_svm, train_forest, train_mlp, train_svm, BatchMode,
    ForestSpec, MlpSpec, SvmSpec, TrainLog,
};
use crate::metrics::accuracy;
use crate::seed::derive_seed;

/// The three test conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scenario {
    /// Training data in as-loaded order, no curriculum processing at all.
    NoCurriculum,
    DdclDensity,
    DdclPoint,
}

impl Scenario {
    pub fn scoring(self) -> Option<Scoring> {
        match self {
            Scenario::NoCurriculum => None,
            Scenario::DdclDensity => Some(Scoring::Density),
            Scenario::DdclPoint => Some(Scoring::Point),
        }
    }

    /// Identifier used in CSV output.
    pub fn key(self) -> &'static str {
        match self {
            Scenario::NoCurriculum => "none",
            Scenario::DdclDensity => "density",
            Scenario::DdclPoint => "point",
        }
    }

    /// Name used in report tables.
    pub fn display(self) -> &'static str {
        match self {
            Scenario::NoCurriculum => "No Curriculum",
            Scenario::DdclDensity => "DDCL-Density",
            Scenario::DdclPoint => "DDCL-Point",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "none" | "no-curriculum" => Ok(Scenario::NoCurriculum),
            "density" => Ok(Scenario::DdclDensity),
            "point" => Ok(Scenario::DdclPoint),
            other => Err(Error::Config(format!("unknown scenario {other:?}"))),
        }
    }

    pub const ALL: [Scenario; 3] = [Scenario::NoCurriculum, Scenario::DdclDensity, Scenario::DdclPoint];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassifierKind {
    NeuralNet,
    Svm,
    Forest,
}

impl ClassifierKind {
    pub fn key(self) -> &'static str {
        match self {
            ClassifierKind::NeuralNet => "nn",
            ClassifierKind::Svm => "svm",
            ClassifierKind::Forest => "forest",
        }
    }

    pub fn display(self) -> &'static str {
        match self {
            ClassifierKind::NeuralNet => "Neural Network",
            ClassifierKind::Svm => "SVM",
            ClassifierKind::Forest => "Random Forest",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "nn" | "neural-net" | "mlp" => Ok(ClassifierKind::NeuralNet),
            "svm" => Ok(ClassifierKind::Svm),
            "forest" | "rf" => Ok(ClassifierKind::Forest),
            other => Err(Error::Config(format!("unknown classifier {other:?}"))),
        }
    }

    /// Split fractions used by this classifier family: the neural net keeps
    /// a validation subset, the others train on 70% and test on 30%.
    pub fn split_fractions(self) -> (f64, f64, f64) {
        match self {
            ClassifierKind::NeuralNet => (0.7, 0.2, 0.1),
            ClassifierKind::Svm | ClassifierKind::Forest => (0.7, 0.0, 0.3),
        }
    }

    pub const ALL: [ClassifierKind; 3] =
        [ClassifierKind::NeuralNet, ClassifierKind::Svm, ClassifierKind::Forest];
}

/// Neural-net options carried by a plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpOptions {
    pub hidden_layers: Vec<usize>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_mode: BatchMode,
    /// When set, a budgeted hidden-layer search runs per run on the
    /// validation split before the final fit.
    pub tune_hidden: bool,
}

impl Default for MlpOptions {
    fn default() -> Self {
        MlpOptions {
            hidden_layers: vec![16],
            learning_rate: 0.1,
            epochs: 200,
            batch_mode: BatchMode::Minibatch(32),
            tune_hidden: false,
        }
    }
}

/// One dataset x classifier x scenario cell of the protocol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub dataset: String,
    pub classifier: ClassifierKind,
    pub scenario: Scenario,
    pub n_runs: usize,
    pub master_seed: u64,
    pub curriculum: CurriculumConfig,
    pub mlp: MlpOptions,
    pub svm: SvmSpec,
    pub forest: ForestSpec,
}

impl ExperimentPlan {
    pub fn new(
        dataset: impl Into<String>,
        classifier: ClassifierKind,
        scenario: Scenario,
        n_runs: usize,
        master_seed: u64,
    ) -> Self {
        ExperimentPlan {
            dataset: dataset.into(),
            classifier,
            scenario,
            n_runs,
            master_seed,
            curriculum: CurriculumConfig::new(
                scenario.scoring().unwrap_or(Scoring::Density),
                0, // per-run seed fills this in
            ),
            mlp: MlpOptions::default(),
            svm: SvmSpec::default(),
            forest: ForestSpec::new(0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_runs == 0 {
            return Err(Error::Config("a plan needs at least one run".into()));
        }
        self.curriculum.validate()
    }
}

/// Outcome of a single run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub run: usize,
    pub seed: u64,
    /// Exact correct/total on the test split.
    pub accuracy: f64,
    pub predictions: Vec<usize>,
    /// Per-class scores for the test rows.
    pub scores: Array2<f64>,
    pub test_labels: Vec<usize>,
    pub test_idx: Vec<usize>,
    /// Present for neural-net runs.
    pub train_log: Option<TrainLog>,
}

/// Worst/best/average/sigma accuracy over repeated runs, in percent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub worst: f64,
    pub best: f64,
    pub average: f64,
    /// Population standard deviation, percentage points.
    pub sigma: f64,
}

/// min/max/mean/population-sigma of run accuracies, scaled to percent.
pub fn aggregate(results: &[RunResult]) -> Result<AggregateStats> {
    let accs: Vec<f64> = results.iter().map(|r| r.accuracy).collect();
    aggregate_accuracies(&accs)
}

pub fn aggregate_accuracies(accs: &[f64]) -> Result<AggregateStats> {
    if accs.is_empty() {
        return Err(Error::Data("cannot aggregate zero runs".into()));
    }
    let n = accs.len() as f64;
    let worst = accs.iter().cloned().fold(f64::INFINITY, f64::min);
    let best = accs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mean = accs.iter().sum::<f64>() / n;
    let var = accs.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    Ok(AggregateStats {
        worst: worst * 100.0,
        best: best * 100.0,
        average: mean * 100.0,
        sigma: var.sqrt() * 100.0,
    })
}

/// Materializes an ordering into a training matrix: real rows are copied
/// from the (scaled) training view, synthetic rows use their stored
/// coordinates. Row order is the curriculum order.
pub fn materialize_ordering(
    train_features: ArrayView2<f64>,
    train_labels: &[usize],
    ordering: &CurriculumOrdering,
    synthetics: &[crate::smote::SyntheticSample],
) -> (Array2<f64>, Vec<usize>) {
    let d = train_features.ncols();
    let mut x = Array2::zeros((ordering.len(), d));
    let mut y = Vec::with_capacity(ordering.len());
    for (r, entry) in ordering.entries.iter().enumerate() {
        match entry.source {
            SampleSource::Row(row) => {
                x.row_mut(r).assign(&train_features.row(row));
                y.push(train_labels[row]);
            }
            SampleSource::Synthetic(s) => {
                for (j, &v) in synthetics[s].coords.iter().enumerate() {
                    x[(r, j)] = v;
                }
                y.push(synthetics[s].class_id);
            }
        }
    }
    (x, y)
}

/// Executes one run of a plan.
pub fn run_once(ds: &Dataset, plan: &ExperimentPlan, run: usize) -> Result<RunResult> {
    let seed = derive_seed(plan.master_seed, run as u64);
    let (train_frac, val_frac, test_frac) = plan.classifier.split_fractions();
    let split_spec = SplitSpec {
        train_frac,
        val_frac,
        test_frac,
        stratified: true,
        seed,
    };
    let parts = split(ds, &split_spec)?;
    let scaler = fit_scaler(ds, &parts.train_idx)?;
    let scaled = apply_scaler(ds, &scaler);

    let (train_x, train_y) = scaled.subset(&parts.train_idx);
    let (test_x, test_y) = scaled.subset(&parts.test_idx);

    // synthetic samples exist only inside the training sequence; test rows
    // always come from the untouched test split
    let (ordered_x, ordered_y) = match plan.scenario.scoring() {
        None => (train_x.clone(), train_y.clone()),
        Some(scoring) => {
            let mut cfg = plan.curriculum.clone();
            cfg.scoring = scoring;
            cfg.seed = derive_seed(seed, 0xC0);
            let curriculum = build_curriculum(train_x.view(), &train_y, ds.n_classes(), &cfg)?;
            materialize_ordering(train_x.view(), &train_y, &curriculum.ordering, &curriculum.synthetics)
        }
    };

    let train_seed = derive_seed(seed, 0x7E);
    let (predictions, scores, train_log) = match plan.classifier {
        ClassifierKind::NeuralNet => {
            let mut spec = MlpSpec::for_problem(
                ds.n_features(),
                ds.n_classes(),
                &plan.mlp.hidden_layers,
                train_seed,
            );
            spec.learning_rate = plan.mlp.learning_rate;
            spec.epochs = plan.mlp.epochs;
            spec.batch_mode = plan.mlp.batch_mode;
            if plan.mlp.tune_hidden && !parts.val_idx.is_empty() {
                let (val_x, val_y) = scaled.subset(&parts.val_idx);
                let space: Vec<Vec<usize>> =
                    vec![vec![8], vec![16], vec![32], vec![16, 8], vec![8, 8], vec![24]];
                let mut rng = rand::SeedableRng::seed_from_u64(derive_seed(seed, 0x7D));
                spec = crate::learners::tune_hidden_layers(
                    ordered_x.view(),
                    &ordered_y,
                    val_x.view(),
                    &val_y,
                    ds.n_classes(),
                    &space,
                    space.len(),
                    &spec,
                    &mut rng,
                )?;
            }
            let (model, log) = train_mlp(ordered_x.view(), &ordered_y, ds.n_classes(), &spec)?;
            let (preds, scores) = predict_mlp(&model, test_x.view())?;
            (preds, scores, Some(log))
        }
        ClassifierKind::Svm => {
            let model = train_svm(ordered_x.view(), &ordered_y, ds.n_classes(), &plan.svm)?;
            let (preds, scores) = predict_svm(&model, test_x.view())?;
            (preds, scores, None)
        }
        ClassifierKind::Forest => {
            let mut spec = plan.forest.clone();
            spec.seed = train_seed;
            spec.max_split_features = spec.max_split_features.min(ds.n_features());
            let model = train_forest(ordered_x.view(), &ordered_y, ds.n_classes(), &spec)?;
            let (preds, scores) = predict_forest(&model, test_x.view())?;
            (preds, scores, None)
        }
    };

    let acc = accuracy(&predictions, &test_y)?;
    Ok(RunResult {
        run,
        seed,
        accuracy: acc,
        predictions,
        scores,
        test_labels: test_y,
        test_idx: parts.test_idx,
        train_log,
    })
}

/// Executes every run of a plan; runs are independent and execute in
/// parallel, results come back in run order.
pub fn run_experiment(ds: &Dataset, plan: &ExperimentPlan) -> Result<Vec<RunResult>> {
    plan.validate()?;
    (0..plan.n_runs)
        .into_par_iter()
        .map(|run| {
            run_once(ds, plan, run).map_err(|e| Error::Run {
                run,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Rows for `loss_epoch.csv`: `(scenario, run, epoch, loss)` per epoch of
/// every neural-net run.
pub fn export_loss_curves(scenario: Scenario, results: &[RunResult]) -> Vec<(String, usize, usize, f64)> {
    let mut rows = Vec::new();
    for r in results {
        if let Some(log) = &r.train_log {
            for (epoch, &loss) in log.epoch_loss.iter().enumerate() {
                rows.push((scenario.key().to_string(), r.run, epoch, loss));
            }
        }
    }
    rows
}
