//! Dataset ingestion: CSV loading, label encoding, min-max scaling and
//! stratified train/validation/test splits.
//!
//! Features are scaled per feature to `[0, 1]` with parameters fitted on the
//! training split only; splits are stratified per class so small datasets
//! keep every class in every subset.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use ndarray::{Array2, ArrayView2};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Selects the label column of a CSV file by header name or zero-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

impl FromStr for ColumnSelector {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnSelector::Index(i),
            Err(_) => ColumnSelector::Name(s.to_string()),
        })
    }
}

impl fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColumnSelector::Name(n) => write!(f, "{n}"),
            ColumnSelector::Index(i) => write!(f, "{i}"),
        }
    }
}

/// Parsed CSV contents before numeric encoding.
#[derive(Debug, Clone)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Index of the label column within `header`.
    pub label_col: usize,
}

impl RawTable {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }
}

/// Loads a comma-delimited, UTF-8, headered CSV file and identifies the
/// label column.
pub fn load_csv(path: impl AsRef<Path>, label: &ColumnSelector) -> Result<RawTable> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;

    let header: Vec<String> = reader
        .headers()
        .map_err(|e| csv_error(path, e))?
        .iter()
        .map(|h| h.to_string())
        .collect();

    let mut seen = std::collections::HashSet::new();
    for name in &header {
        if !seen.insert(name.as_str()) {
            return Err(Error::Malformed {
                path: path.to_path_buf(),
                message: format!("duplicate header column {name:?}"),
            });
        }
    }

    let label_col = match label {
        ColumnSelector::Name(name) => header.iter().position(|h| h == name).ok_or_else(|| {
            Error::UnknownLabelColumn {
                column: name.clone(),
                header: header.clone(),
            }
        })?,
        ColumnSelector::Index(i) => {
            if *i >= header.len() {
                return Err(Error::UnknownLabelColumn {
                    column: i.to_string(),
                    header,
                });
            }
            *i
        }
    };

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        rows.push(record.iter().map(|c| c.to_string()).collect());
    }

    Ok(RawTable {
        header,
        rows,
        label_col,
    })
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::UnequalLengths { pos, expected_len, len } => Error::RaggedRow {
            path: path.to_path_buf(),
            line: pos.as_ref().map(|p| p.line()).unwrap_or(0),
            expected: *expected_len as usize,
            found: *len as usize,
        },
        csv::ErrorKind::Io(_) => Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        },
        _ => Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        },
    }
}

/// Numeric feature matrix with encoded class labels.
///
/// Labels are mapped to `0..n_classes` in first-appearance order; the
/// original label text is kept in `class_names` so the encoding round-trips.
#[derive(Debug, Clone)]
pub struct Dataset {
    features: Array2<f64>,
    labels: Vec<usize>,
    feature_names: Vec<String>,
    class_names: Vec<String>,
}

impl Dataset {
    pub fn new(
        features: Array2<f64>,
        labels: Vec<usize>,
        feature_names: Vec<String>,
        class_names: Vec<String>,
    ) -> Result<Self> {
        if features.nrows() == 0 || features.ncols() == 0 {
            return Err(Error::Data("dataset must have at least one row and one feature".into()));
        }
        if features.nrows() != labels.len() {
            return Err(Error::Data(format!(
                "feature rows ({}) and labels ({}) disagree",
                features.nrows(),
                labels.len()
            )));
        }
        if features.ncols() != feature_names.len() {
            return Err(Error::Data("feature name count does not match feature columns".into()));
        }
        if features.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("features contain NaN or infinite values".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= class_names.len()) {
            return Err(Error::Data(format!(
                "label id {bad} out of range for {} classes",
                class_names.len()
            )));
        }
        Ok(Dataset {
            features,
            labels,
            feature_names,
            class_names,
        })
    }

    pub fn n(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn features(&self) -> ArrayView2<'_, f64> {
        self.features.view()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes()];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Features and labels for a subset of rows, preserving `idx` order.
    pub fn subset(&self, idx: &[usize]) -> (Array2<f64>, Vec<usize>) {
        let d = self.n_features();
        let mut out = Array2::zeros((idx.len(), d));
        let mut labels = Vec::with_capacity(idx.len());
        for (r, &i) in idx.iter().enumerate() {
            out.row_mut(r).assign(&self.features.row(i));
            labels.push(self.labels[i]);
        }
        (out, labels)
    }
}

/// Encodes a raw table: label column to class ids in first-appearance order,
/// every other column parsed as a real-valued feature.
pub fn encode(raw: &RawTable) -> Result<Dataset> {
    let n = raw.rows.len();
    if n == 0 {
        return Err(Error::Data("CSV file has a header but no data rows".into()));
    }
    let d = raw.header.len() - 1;
    if d == 0 {
        return Err(Error::Data("CSV file has no feature columns".into()));
    }

    let feature_names: Vec<String> = raw
        .header
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != raw.label_col)
        .map(|(_, h)| h.clone())
        .collect();

    let mut class_names: Vec<String> = Vec::new();
    let mut labels = Vec::with_capacity(n);
    let mut features = Array2::zeros((n, d));

    for (r, row) in raw.rows.iter().enumerate() {
        let mut f = 0;
        for (c, cell) in row.iter().enumerate() {
            if c == raw.label_col {
                if cell.is_empty() {
                    return Err(Error::MissingLabel { row: r });
                }
                let id = match class_names.iter().position(|k| k == cell) {
                    Some(id) => id,
                    None => {
                        class_names.push(cell.clone());
                        class_names.len() - 1
                    }
                };
                labels.push(id);
            } else {
                let value: f64 = cell.parse().map_err(|_| Error::BadCell {
                    row: r,
                    column: c,
                    name: raw.header[c].clone(),
                    value: cell.clone(),
                })?;
                if !value.is_finite() {
                    return Err(Error::BadCell {
                        row: r,
                        column: c,
                        name: raw.header[c].clone(),
                        value: cell.clone(),
                    });
                }
                features[(r, f)] = value;
                f += 1;
            }
        }
    }

    Dataset::new(features, labels, feature_names, class_names)
}

/// Fractions and seed controlling a train/validation/test split.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    pub train_frac: f64,
    pub val_frac: f64,
    pub test_frac: f64,
    pub stratified: bool,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train_frac: f64, val_frac: f64, test_frac: f64, seed: u64) -> Result<Self> {
        let spec = SplitSpec {
            train_frac,
            val_frac,
            test_frac,
            stratified: true,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let fracs = [self.train_frac, self.val_frac, self.test_frac];
        if fracs.iter().any(|&f| f < 0.0) {
            return Err(Error::Config("split fractions must be non-negative".into()));
        }
        let sum: f64 = fracs.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("split fractions must sum to 1, got {sum}")));
        }
        if self.train_frac == 0.0 {
            return Err(Error::Config("train fraction implies an empty training split".into()));
        }
        Ok(())
    }
}

/// Disjoint index lists into a parent [`Dataset`]; their union covers every
/// row exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataSplit {
    pub train_idx: Vec<usize>,
    pub val_idx: Vec<usize>,
    pub test_idx: Vec<usize>,
}

/// Round-half-down to the nearest integer; keeps per-class allocations
/// within half a sample of the exact fraction.
fn round_half_down(x: f64) -> usize {
    let r = (x - 0.5).ceil();
    if r <= 0.0 {
        0
    } else {
        r as usize
    }
}

/// Stratified (or plain shuffled) split, deterministic in `spec.seed`.
pub fn split(ds: &Dataset, spec: &SplitSpec) -> Result<DataSplit> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut train_idx = Vec::new();
    let mut val_idx = Vec::new();
    let mut test_idx = Vec::new();

    let mut assign = |indices: &mut Vec<usize>, rng: &mut ChaCha8Rng| {
        indices.shuffle(rng);
        let n = indices.len() as f64;
        let b1 = round_half_down(spec.train_frac * n);
        let b2 = round_half_down((spec.train_frac + spec.val_frac) * n).max(b1);
        train_idx.extend_from_slice(&indices[..b1]);
        val_idx.extend_from_slice(&indices[b1..b2]);
        test_idx.extend_from_slice(&indices[b2..]);
    };

    if spec.stratified {
        for class in 0..ds.n_classes() {
            let mut indices: Vec<usize> = (0..ds.n())
                .filter(|&i| ds.labels()[i] == class)
                .collect();
            if indices.is_empty() {
                return Err(Error::Data(format!("class {class} has no samples")));
            }
            assign(&mut indices, &mut rng);
        }
    } else {
        let mut indices: Vec<usize> = (0..ds.n()).collect();
        assign(&mut indices, &mut rng);
    }

    if train_idx.is_empty() {
        return Err(Error::Config("train fraction implies an empty training split".into()));
    }

    // as-loaded order within each subset
    train_idx.sort_unstable();
    val_idx.sort_unstable();
    test_idx.sort_unstable();

    Ok(DataSplit {
        train_idx,
        val_idx,
        test_idx,
    })
}

/// Per-feature min/max observed on the training split.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalerParams {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

/// Fits min-max parameters on the given training rows only.
pub fn fit_scaler(ds: &Dataset, train_idx: &[usize]) -> Result<ScalerParams> {
    if train_idx.is_empty() {
        return Err(Error::Data("cannot fit a scaler on an empty training split".into()));
    }
    let d = ds.n_features();
    let mut min = vec![f64::INFINITY; d];
    let mut max = vec![f64::NEG_INFINITY; d];
    for &i in train_idx {
        let row = ds.features().row(i).to_owned();
        for j in 0..d {
            min[j] = min[j].min(row[j]);
            max[j] = max[j].max(row[j]);
        }
    }
    Ok(ScalerParams { min, max })
}

/// Applies `(x - min) / (max - min)` per feature to every row.
///
/// Constant training features map to 0; values outside the training range
/// extend linearly (no clamping), so test rows may leave `[0, 1]`.
pub fn apply_scaler(ds: &Dataset, params: &ScalerParams) -> Dataset {
    let mut features = ds.features().to_owned();
    for mut row in features.rows_mut() {
        for j in 0..row.len() {
            let range = params.max[j] - params.min[j];
            row[j] = if range > 0.0 {
                (row[j] - params.min[j]) / range
            } else {
                0.0
            };
        }
    }
    Dataset {
        features,
        labels: ds.labels.clone(),
        feature_names: ds.feature_names.clone(),
        class_names: ds.class_names.clone(),
    }
}

/// Resolves the dataset directory: `DDCL_DATA_DIR`, then `./data`, then the
/// workspace-level `data/` next to this crate.
pub fn data_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("DDCL_DATA_DIR") {
        return PathBuf::from(dir);
    }
    let local = Path::new("data");
    if local.is_dir() {
        return local.to_path_buf();
    }
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data")
}
