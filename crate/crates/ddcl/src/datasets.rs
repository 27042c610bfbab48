//! Registry of the evaluation datasets and their CSV locations.
//!
//! Files live under the directory returned by [`crate::data::data_dir`]
//! (overridable through `DDCL_DATA_DIR`), one CSV per dataset.

use std::path::PathBuf;

use crate::data::{self, encode, load_csv, ColumnSelector, Dataset};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetInfo {
    /// Registry key and CSV stem.
    pub name: &'static str,
    /// Human-readable name used in reports.
    pub display: &'static str,
    pub label_col: &'static str,
    /// Class treated as positive in PR curves (binary datasets only).
    pub positive_class: Option<&'static str>,
    /// Gated datasets are skipped unless explicitly requested.
    pub gated: bool,
}

pub const DATASETS: &[DatasetInfo] = &[
    DatasetInfo {
        name: "breast_cancer_diagnostic",
        display: "Breast Cancer (Diagnostic)",
        label_col: "diagnosis",
        positive_class: Some("malignant"),
        gated: false,
    },
    DatasetInfo {
        name: "cancer",
        display: "Cancer",
        label_col: "class",
        positive_class: Some("malignant"),
        gated: false,
    },
    DatasetInfo {
        name: "haberman",
        display: "Haberman's Survival",
        label_col: "survival",
        positive_class: Some("died"),
        gated: false,
    },
    DatasetInfo {
        name: "liver_disorder",
        display: "Liver Disorder",
        label_col: "selector",
        positive_class: Some("2"),
        gated: false,
    },
    DatasetInfo {
        name: "pima_diabetes",
        display: "Pima Indians Diabetes",
        label_col: "outcome",
        positive_class: Some("positive"),
        gated: false,
    },
    DatasetInfo {
        name: "new_thyroid",
        display: "New-Thyroid",
        label_col: "class",
        positive_class: None,
        gated: false,
    },
    // medium-sized and slow; runs only behind --include-diabetes130, and a
    // pre-processed CSV must be supplied by the user
    DatasetInfo {
        name: "diabetes130",
        display: "Diabetes 130",
        label_col: "readmitted",
        positive_class: None,
        gated: true,
    },
];

pub fn info(name: &str) -> Result<&'static DatasetInfo> {
    DATASETS
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| Error::Config(format!("unknown dataset {name:?}")))
}

pub fn csv_path(name: &str) -> Result<PathBuf> {
    let info = info(name)?;
    Ok(data::data_dir().join(format!("{}.csv", info.name)))
}

/// Loads and encodes a registry dataset.
pub fn load(name: &str) -> Result<Dataset> {
    let info = info(name)?;
    let path = csv_path(name)?;
    if !path.is_file() {
        return Err(Error::MissingInput(format!(
            "dataset file {} not found (set DDCL_DATA_DIR or place the CSV there)",
            path.display()
        )));
    }
    let raw = load_csv(&path, &ColumnSelector::Name(info.label_col.to_string()))?;
    encode(&raw)
}

/// Registry names that run by default (everything not gated).
pub fn default_names() -> Vec<String> {
    DATASETS
        .iter()
        .filter(|d| !d.gated)
        .map(|d| d.name.to_string())
        .collect()
}
