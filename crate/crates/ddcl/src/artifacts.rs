//! File formats emitted by the harness and read back by the reporter.
//!
//! Every CSV written here round-trips through the readers in this module.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curriculum::{Curriculum, SampleSource};
use crate::error::{Error, Result};
use crate::harness::AggregateStats;
use crate::metrics::{ConfusionMatrix, PrCurve};

/// One row of `results.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    pub classifier: String,
    pub scenario: String,
    pub run: usize,
    pub seed: u64,
    pub accuracy: f64,
}

pub fn write_results_csv(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut out = String::from("dataset,classifier,scenario,run,seed,accuracy\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.dataset, r.classifier, r.scenario, r.run, r.seed, r.accuracy
        ));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_results_csv(path: &Path) -> Result<Vec<ResultRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        let row: ResultRow = record.map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// `aggregate.json`: dataset -> classifier -> scenario -> stats.
pub type AggregateMap = BTreeMap<String, BTreeMap<String, BTreeMap<String, AggregateStats>>>;

pub fn write_aggregate_json(path: &Path, map: &AggregateMap) -> Result<()> {
    let json = serde_json::to_string_pretty(map)
        .map_err(|e| Error::Data(format!("aggregate serialization: {e}")))?;
    fs::write(path, json).map_err(|e| Error::io(path, e))
}

pub fn read_aggregate_json(path: &Path) -> Result<AggregateMap> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

/// One row of `loss_epoch.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossRow {
    pub dataset: String,
    pub scenario: String,
    pub run: usize,
    pub epoch: usize,
    pub loss: f64,
}

pub fn write_loss_csv(path: &Path, rows: &[LossRow]) -> Result<()> {
    let mut out = String::from("dataset,scenario,run,epoch,loss\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.dataset, r.scenario, r.run, r.epoch, r.loss
        ));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_loss_csv(path: &Path) -> Result<Vec<LossRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        let row: LossRow = record.map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// `pr_curve.csv`: `recall,precision` over descending thresholds.
pub fn write_pr_curve_csv(path: &Path, curve: &PrCurve) -> Result<()> {
    let mut out = String::from("recall,precision\n");
    for (recall, precision) in &curve.points {
        out.push_str(&format!("{recall},{precision}\n"));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_pr_curve_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    let mut points = Vec::new();
    for record in reader.deserialize() {
        let point: (f64, f64) = record.map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        points.push(point);
    }
    Ok(points)
}

/// `confusion.csv`: S x S grid with class names on the header row and the
/// leading column.
pub fn write_confusion_csv(path: &Path, matrix: &ConfusionMatrix, class_names: &[String]) -> Result<()> {
    let mut out = String::from("true\\pred");
    for name in class_names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (t, row) in matrix.counts.iter().enumerate() {
        out.push_str(&class_names[t]);
        for &count in row {
            out.push_str(&format!(",{count}"));
        }
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_confusion_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<usize>>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Malformed {
        path: path.to_path_buf(),
        message: "empty confusion matrix file".into(),
    })?;
    let class_names: Vec<String> = header.split(',').skip(1).map(str::to_string).collect();
    let mut counts = Vec::new();
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let row: Vec<usize> = cells[1..]
            .iter()
            .map(|c| {
                c.parse().map_err(|_| Error::Malformed {
                    path: path.to_path_buf(),
                    message: format!("bad count {c:?}"),
                })
            })
            .collect::<Result<_>>()?;
        counts.push(row);
    }
    Ok((class_names, counts))
}

/// `ordering.csv`: the curriculum order with synthetic-sample records.
///
/// `source` holds the original dataset index for real rows and -1 for
/// synthetics; parent columns mirror that for real rows.
pub fn write_ordering_csv(path: &Path, curriculum: &Curriculum, train_idx: &[usize]) -> Result<()> {
    let mut out =
        String::from("rank,source,class_id,quantile,normalized_distance,synthetic,parent_a,parent_b,lambda\n");
    for entry in &curriculum.ordering.entries {
        match entry.source {
            SampleSource::Row(row) => {
                out.push_str(&format!(
                    "{},{},{},{},{},0,-1,-1,0\n",
                    entry.rank,
                    train_idx[row],
                    entry.class_id,
                    entry.quantile,
                    entry.normalized_distance
                ));
            }
            SampleSource::Synthetic(s) => {
                let syn = &curriculum.synthetics[s];
                out.push_str(&format!(
                    "{},-1,{},{},{},1,{},{},{}\n",
                    entry.rank,
                    entry.class_id,
                    entry.quantile,
                    entry.normalized_distance,
                    train_idx[syn.parent_a],
                    train_idx[syn.parent_b],
                    syn.lambda
                ));
            }
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

/// One row of `ordering.csv` read back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingRow {
    pub rank: usize,
    pub source: i64,
    pub class_id: usize,
    pub quantile: usize,
    pub normalized_distance: f64,
    pub synthetic: u8,
    pub parent_a: i64,
    pub parent_b: i64,
    pub lambda: f64,
}

pub fn read_ordering_csv(path: &Path) -> Result<Vec<OrderingRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        let row: OrderingRow = record.map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// `density_class<k>.csv`: the evaluation grid and KDE values of one class.
pub fn write_density_csv(path: &Path, density: &crate::curriculum::DensityEstimate) -> Result<()> {
    let mut out = String::from("y,density\n");
    for (y, v) in density.grid.iter().zip(density.values.iter()) {
        out.push_str(&format!("{y},{v}\n"));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn read_density_csv(path: &Path) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
    let mut rows = Vec::new();
    for record in reader.deserialize() {
        let row: (f64, f64) = record.map_err(|e| Error::Malformed {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}
