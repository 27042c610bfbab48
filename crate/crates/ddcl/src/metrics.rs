//! Evaluation metrics: accuracy, precision-recall curves and confusion
//! matrices.

use crate::error::{Error, Result};

/// Exact fraction of matching predictions.
pub fn accuracy(predictions: &[usize], labels: &[usize]) -> Result<f64> {
    if predictions.len() != labels.len() {
        return Err(Error::Data(format!(
            "predictions ({}) and labels ({}) disagree",
            predictions.len(),
            labels.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::Data("accuracy of an empty prediction set".into()));
    }
    let correct = predictions.iter().zip(labels.iter()).filter(|(p, y)| p == y).count();
    Ok(correct as f64 / labels.len() as f64)
}

/// Precision-recall pairs over descending score thresholds.
#[derive(Debug, Clone, PartialEq)]
pub struct PrCurve {
    pub positive_class: usize,
    /// `(recall, precision)` points; recall is non-decreasing.
    pub points: Vec<(f64, f64)>,
}

/// Sweeps the unique scores descending; at each threshold `t` every sample
/// with `score >= t` is predicted positive.
pub fn precision_recall_curve(
    scores: &[f64],
    labels: &[usize],
    positive_class: usize,
) -> Result<PrCurve> {
    if scores.len() != labels.len() {
        return Err(Error::Data("scores and labels disagree in length".into()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::Data("scores must be finite".into()));
    }
    let total_positive = labels.iter().filter(|&&y| y == positive_class).count();
    if total_positive == 0 {
        return Err(Error::Data("no positive examples for the PR curve".into()));
    }

    let mut thresholds: Vec<f64> = scores.to_vec();
    thresholds.sort_by(|a, b| b.total_cmp(a));
    thresholds.dedup();

    let mut points = Vec::with_capacity(thresholds.len());
    for &t in &thresholds {
        let mut tp = 0usize;
        let mut fp = 0usize;
        for (&s, &y) in scores.iter().zip(labels.iter()) {
            if s >= t {
                if y == positive_class {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
        let precision = tp as f64 / (tp + fp) as f64;
        let recall = tp as f64 / total_positive as f64;
        points.push((recall, precision));
    }

    Ok(PrCurve {
        positive_class,
        points,
    })
}

/// S x S counts; rows are true classes, columns predictions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    pub counts: Vec<Vec<usize>>,
}

impl ConfusionMatrix {
    pub fn n_classes(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|r| r.iter().sum::<usize>()).sum()
    }
}

pub fn confusion_matrix(
    predictions: &[usize],
    labels: &[usize],
    n_classes: usize,
) -> Result<ConfusionMatrix> {
    if predictions.len() != labels.len() {
        return Err(Error::Data("predictions and labels disagree in length".into()));
    }
    let mut counts = vec![vec![0usize; n_classes]; n_classes];
    for (&p, &y) in predictions.iter().zip(labels.iter()) {
        if p >= n_classes || y >= n_classes {
            return Err(Error::Data(format!(
                "class id out of range: prediction {p}, label {y}, n_classes {n_classes}"
            )));
        }
        counts[y][p] += 1;
    }
    Ok(ConfusionMatrix { counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_cases() {
        assert_eq!(accuracy(&[1, 0, 1], &[1, 0, 1]).unwrap(), 1.0);
        assert_eq!(accuracy(&[0, 1], &[1, 1]).unwrap(), 0.5);
        assert!(accuracy(&[0], &[0, 1]).is_err());
    }

    #[test]
    fn accuracy_matches_manual_tally() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let preds: Vec<usize> = (0..97).map(|_| rng.gen_range(0..3)).collect();
        let labels: Vec<usize> = (0..97).map(|_| rng.gen_range(0..3)).collect();
        let mut tally = 0usize;
        for i in 0..97 {
            if preds[i] == labels[i] {
                tally += 1;
            }
        }
        assert_eq!(accuracy(&preds, &labels).unwrap(), tally as f64 / 97.0);
    }

    #[test]
    fn pr_curve_perfect_separation_reaches_corner() {
        let scores = [0.9, 0.8, 0.2, 0.1];
        let labels = [1, 1, 0, 0];
        let curve = precision_recall_curve(&scores, &labels, 1).unwrap();
        assert!(curve.points.contains(&(1.0, 1.0)));
        // recall non-decreasing
        for w in curve.points.windows(2) {
            assert!(w[0].0 <= w[1].0);
        }
    }

    #[test]
    fn pr_curve_constant_scores_single_point() {
        let scores = [0.5, 0.5, 0.5, 0.5];
        let labels = [1, 0, 0, 0];
        let curve = precision_recall_curve(&scores, &labels, 1).unwrap();
        assert_eq!(curve.points, vec![(1.0, 0.25)]);
    }

    #[test]
    fn pr_curve_matches_threshold_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let scores: Vec<f64> = (0..60).map(|_| rng.gen::<f64>()).collect();
        let labels: Vec<usize> = (0..60).map(|_| rng.gen_range(0..2)).collect();
        if labels.iter().all(|&y| y == 0) {
            return;
        }
        let curve = precision_recall_curve(&scores, &labels, 1).unwrap();

        // brute force per-threshold counting
        let mut uniq: Vec<f64> = scores.clone();
        uniq.sort_by(|a, b| b.total_cmp(a));
        uniq.dedup();
        let pos = labels.iter().filter(|&&y| y == 1).count() as f64;
        for (i, &t) in uniq.iter().enumerate() {
            let tp = scores
                .iter()
                .zip(&labels)
                .filter(|&(&s, &y)| s >= t && y == 1)
                .count() as f64;
            let fp = scores
                .iter()
                .zip(&labels)
                .filter(|&(&s, &y)| s >= t && y != 1)
                .count() as f64;
            assert_eq!(curve.points[i], (tp / pos, tp / (tp + fp)));
        }
    }

    #[test]
    fn pr_curve_rejects_no_positives() {
        assert!(precision_recall_curve(&[0.1, 0.2], &[0, 0], 1).is_err());
    }

    #[test]
    fn confusion_matrix_cases() {
        let m = confusion_matrix(&[0, 1, 2], &[0, 1, 2], 3).unwrap();
        assert_eq!(m.counts, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);

        let m = confusion_matrix(&[1, 0], &[0, 0], 2).unwrap();
        assert_eq!(m.counts[0][1], 1);
        assert_eq!(m.counts[0][0], 1);
        assert_eq!(m.total(), 2);
    }

    #[test]
    fn confusion_matrix_matches_hand_tally() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let preds: Vec<usize> = (0..80).map(|_| rng.gen_range(0..4)).collect();
        let labels: Vec<usize> = (0..80).map(|_| rng.gen_range(0..4)).collect();
        let m = confusion_matrix(&preds, &labels, 4).unwrap();
        for t in 0..4 {
            for p in 0..4 {
                let expect = preds
                    .iter()
                    .zip(&labels)
                    .filter(|&(&pp, &yy)| pp == p && yy == t)
                    .count();
                assert_eq!(m.counts[t][p], expect);
            }
        }
    }

    #[test]
    fn confusion_matrix_rejects_out_of_range() {
        assert!(confusion_matrix(&[5], &[0], 2).is_err());
    }
}
