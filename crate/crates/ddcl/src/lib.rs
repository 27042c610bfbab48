//! Data distribution-based curriculum learning for tabular classifiers.
//!
//! DDCL reorders training samples using the per-class distance structure of
//! the data: samples are grouped by class, measured against their class
//! centroid, partitioned into equal-width quantile bins over the normalized
//! distances, optionally oversampled where bins are sparse, and finally
//! rearranged simple-first by one of two scoring rules:
//!
//! - **Density** scoring orders whole quantile bins by how many samples they
//!   hold (densest regions first);
//! - **Point** scoring orders individual samples by their normalized
//!   centroid distance (closest first).
//!
//! The crate bundles the three reference classifiers the method is
//! evaluated with (an order-sensitive MLP, an RBF-kernel SVM and a random
//! forest), the repeated-run experiment harness behind the accuracy tables,
//! and report generation. Start with the runnable examples:
//!
//! ```text
//! cargo run --release -p ddcl --example build_curriculum
//! cargo run --release -p ddcl --example kde_diagnostics
//! cargo run --release -p ddcl --example smote_oversampling
//! cargo run --release -p ddcl --example train_mlp
//! cargo run --release -p ddcl --example train_svm
//! cargo run --release -p ddcl --example train_forest
//! cargo run --release -p ddcl --example run_experiments
//! cargo run --release -p ddcl --example generate_datasets
//! ```
//!
//! A thin `ddcl` binary exposes the same machinery as `ingest`,
//! `curriculum`, `run` and `report` subcommands.

pub mod artifacts;
pub mod commands;
pub mod curriculum;
pub mod data;
pub mod datasets;
pub mod error;
pub mod harness;
pub mod learners;
pub mod metrics;
pub mod report;
pub mod seed;
pub mod smote;
pub mod svg;

pub use curriculum::{
    build_curriculum, Curriculum, CurriculumConfig, CurriculumOrdering, Scoring,
};
pub use data::{apply_scaler, encode, fit_scaler, load_csv, split, DataSplit, Dataset, SplitSpec};
pub use error::{Error, Result};
pub use harness::{
    aggregate, run_experiment, AggregateStats, ClassifierKind, ExperimentPlan, RunResult, Scenario,
};
