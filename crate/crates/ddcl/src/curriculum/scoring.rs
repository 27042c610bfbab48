//! Density and Point scoring: turning per-class quantile partitions into a
//! single training order.
//!
//! Both scorers pool across classes and order simple-first. Density scoring
//! ranks whole quantile bins by how many samples they hold; Point scoring
//! ranks individual samples by their normalized centroid distance,
//! disregarding quantile membership.

use crate::curriculum::quantile::QuantilePartition;
use crate::curriculum::SampleSource;

/// One slot of the final training order.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderingEntry {
    pub source: SampleSource,
    pub class_id: usize,
    pub quantile: usize,
    pub normalized_distance: f64,
    /// Position in the final order, `0..len`.
    pub rank: usize,
}

/// The rearranged training sequence.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurriculumOrdering {
    pub entries: Vec<OrderingEntry>,
}

impl CurriculumOrdering {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Training-row indices of the non-synthetic entries, in order.
    pub fn original_rows(&self) -> Vec<usize> {
        self.entries
            .iter()
            .filter_map(|e| match e.source {
                SampleSource::Row(r) => Some(r),
                SampleSource::Synthetic(_) => None,
            })
            .collect()
    }

    /// The as-loaded order: row i of the training view at rank i.
    pub fn identity(labels: &[usize]) -> Self {
        CurriculumOrdering {
            entries: labels
                .iter()
                .enumerate()
                .map(|(i, &class_id)| OrderingEntry {
                    source: SampleSource::Row(i),
                    class_id,
                    quantile: 0,
                    normalized_distance: 0.0,
                    rank: i,
                })
                .collect(),
        }
    }
}

/// Deterministic order of members inside one bin: ascending distance, real
/// rows before synthetics on ties, then by index.
fn member_key(source: &SampleSource) -> (u8, usize) {
    match source {
        SampleSource::Row(r) => (0, *r),
        SampleSource::Synthetic(s) => (1, *s),
    }
}

/// Density scoring: all (class, quantile) bins pooled and ordered by
/// cardinality, largest (simplest) first; ties fall back to class id, then
/// quantile index. Members keep ascending-distance order inside each bin.
pub fn score_density(partitions: &[QuantilePartition]) -> CurriculumOrdering {
    struct Bin<'a> {
        count: usize,
        class_id: usize,
        quantile: usize,
        members: &'a [super::quantile::BinMember],
    }

    let mut bins: Vec<Bin> = Vec::new();
    for p in partitions {
        for (q, members) in p.bins.iter().enumerate() {
            if members.is_empty() {
                continue;
            }
            bins.push(Bin {
                count: members.len(),
                class_id: p.class_id,
                quantile: q,
                members,
            });
        }
    }
    bins.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then(a.class_id.cmp(&b.class_id))
            .then(a.quantile.cmp(&b.quantile))
    });

    let mut entries = Vec::new();
    for bin in bins {
        let mut members: Vec<_> = bin.members.iter().collect();
        members.sort_by(|a, b| {
            a.normalized_distance
                .total_cmp(&b.normalized_distance)
                .then(member_key(&a.source).cmp(&member_key(&b.source)))
        });
        for m in members {
            entries.push(OrderingEntry {
                source: m.source.clone(),
                class_id: bin.class_id,
                quantile: bin.quantile,
                normalized_distance: m.normalized_distance,
                rank: entries.len(),
            });
        }
    }
    CurriculumOrdering { entries }
}

/// Point scoring: one global sort of every sample (all classes pooled) by
/// normalized distance ascending; ties fall back to class id, then sample
/// index. Quantile labels are carried along as metadata only.
pub fn score_point(partitions: &[QuantilePartition]) -> CurriculumOrdering {
    let mut pooled: Vec<OrderingEntry> = Vec::new();
    for p in partitions {
        for (q, members) in p.bins.iter().enumerate() {
            for m in members {
                pooled.push(OrderingEntry {
                    source: m.source.clone(),
                    class_id: p.class_id,
                    quantile: q,
                    normalized_distance: m.normalized_distance,
                    rank: 0,
                });
            }
        }
    }
    pooled.sort_by(|a, b| {
        a.normalized_distance
            .total_cmp(&b.normalized_distance)
            .then(a.class_id.cmp(&b.class_id))
            .then(member_key(&a.source).cmp(&member_key(&b.source)))
    });
    for (rank, e) in pooled.iter_mut().enumerate() {
        e.rank = rank;
    }
    CurriculumOrdering { entries: pooled }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curriculum::partition_quantiles;

    fn partition_with(class_id: usize, bins: &[&[(usize, f64)]]) -> QuantilePartition {
        let k = bins.len();
        let mut sources = Vec::new();
        let mut distances = Vec::new();
        for (q, members) in bins.iter().enumerate() {
            for &(row, offset) in *members {
                sources.push(SampleSource::Row(row));
                // place inside bin q
                distances.push((q as f64 + offset) / k as f64);
            }
        }
        partition_quantiles(class_id, &sources, &distances, k).unwrap()
    }

    #[test]
    fn density_sorts_by_count_descending() {
        // one class, counts Q1=2, Q2=9, Q3=5 -> bin order Q2, Q3, Q1
        let p = partition_with(
            0,
            &[
                &[(0, 0.1), (1, 0.2)],
                &[(2, 0.0), (3, 0.1), (4, 0.2), (5, 0.3), (6, 0.4), (7, 0.5), (8, 0.6), (9, 0.7), (10, 0.8)],
                &[(11, 0.0), (12, 0.2), (13, 0.4), (14, 0.6), (15, 0.8)],
            ],
        );
        let ordering = score_density(&[p]);
        let quantiles: Vec<usize> = ordering.entries.iter().map(|e| e.quantile).collect();
        let mut expect = vec![1; 9];
        expect.extend(vec![2; 5]);
        expect.extend(vec![0; 2]);
        assert_eq!(quantiles, expect);
    }

    #[test]
    fn density_tie_breaks_by_quantile_index() {
        let p = partition_with(0, &[&[(0, 0.1), (1, 0.2)], &[(2, 0.1), (3, 0.2)]]);
        let ordering = score_density(&[p]);
        let quantiles: Vec<usize> = ordering.entries.iter().map(|e| e.quantile).collect();
        assert_eq!(quantiles, vec![0, 0, 1, 1]);
    }

    #[test]
    fn density_pools_across_classes() {
        // A: {3, 1}, B: {5, 2} -> B1(5), A1(3), B2(2), A2(1)
        let a = partition_with(0, &[&[(0, 0.1), (1, 0.2), (2, 0.3)], &[(3, 0.5)]]);
        let b = partition_with(1, &[&[(10, 0.0), (11, 0.2), (12, 0.4), (13, 0.6), (14, 0.8)], &[(15, 0.1), (16, 0.2)]]);
        let ordering = score_density(&[a, b]);

        let blocks: Vec<(usize, usize)> = ordering
            .entries
            .iter()
            .map(|e| (e.class_id, e.quantile))
            .collect();
        let mut expect = vec![(1, 0); 5];
        expect.extend(vec![(0, 0); 3]);
        expect.extend(vec![(1, 1); 2]);
        expect.extend(vec![(0, 1); 1]);
        assert_eq!(blocks, expect);

        // brute-force oracle over (count, class, bin) tuples
        let mut tuples = vec![(3usize, 0usize, 0usize), (1, 0, 1), (5, 1, 0), (2, 1, 1)];
        tuples.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
        let mut oracle = Vec::new();
        for (count, class, bin) in tuples {
            oracle.extend(std::iter::repeat((class, bin)).take(count));
        }
        assert_eq!(blocks, oracle);
    }

    #[test]
    fn point_sorts_globally_ascending() {
        let sources: Vec<SampleSource> = (0..3).map(SampleSource::Row).collect();
        let p = partition_quantiles(0, &sources, &[0.9, 0.1, 0.5], 2).unwrap();
        let ordering = score_point(&[p]);
        let rows: Vec<usize> = ordering
            .entries
            .iter()
            .map(|e| match e.source {
                SampleSource::Row(r) => r,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(rows, vec![1, 2, 0]);
        let ranks: Vec<usize> = ordering.entries.iter().map(|e| e.rank).collect();
        assert_eq!(ranks, vec![0, 1, 2]);
    }

    #[test]
    fn point_tie_break_is_stable_on_index() {
        let sources: Vec<SampleSource> = (0..4).map(SampleSource::Row).collect();
        let p = partition_quantiles(0, &sources, &[0.3, 0.3, 0.3, 0.3], 2).unwrap();
        let ordering = score_point(&[p]);
        let rows: Vec<usize> = ordering
            .entries
            .iter()
            .map(|e| match e.source {
                SampleSource::Row(r) => r,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(rows, vec![0, 1, 2, 3]);
    }

    #[test]
    fn point_interleaves_classes_like_pooled_sort() {
        let a_sources: Vec<SampleSource> = vec![SampleSource::Row(0), SampleSource::Row(1)];
        let b_sources: Vec<SampleSource> = vec![SampleSource::Row(2), SampleSource::Row(3)];
        let a = partition_quantiles(0, &a_sources, &[0.1, 0.7], 2).unwrap();
        let b = partition_quantiles(1, &b_sources, &[0.4, 0.9], 2).unwrap();
        let ordering = score_point(&[a, b]);

        // brute-force pooled sort oracle
        let mut oracle = vec![(0.1, 0usize, 0usize), (0.7, 0, 1), (0.4, 1, 2), (0.9, 1, 3)];
        oracle.sort_by(|x: &(f64, usize, usize), y: &(f64, usize, usize)| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        let expect: Vec<usize> = oracle.iter().map(|&(_, _, r)| r).collect();

        let rows: Vec<usize> = ordering
            .entries
            .iter()
            .map(|e| match e.source {
                SampleSource::Row(r) => r,
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(rows, expect);
        let classes: Vec<usize> = ordering.entries.iter().map(|e| e.class_id).collect();
        assert_eq!(classes, vec![0, 1, 0, 1]);
    }

    #[test]
    fn identity_ordering_matches_input() {
        let ordering = CurriculumOrdering::identity(&[0, 1, 1, 0]);
        assert_eq!(ordering.len(), 4);
        for (i, e) in ordering.entries.iter().enumerate() {
            assert_eq!(e.rank, i);
            assert_eq!(e.source, SampleSource::Row(i));
        }
        assert_eq!(ordering.original_rows(), vec![0, 1, 2, 3]);
    }
}
