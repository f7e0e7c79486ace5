//! Occurrence frequency and Jaccard closeness computed from an observed
//! dataset. The closeness matrix is the input to clustering; its universe is
//! the set of nodes that occur in at least one basket.

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Per-node occurrence counts: how many baskets contain each node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: Vec<u32>,
    dataset_size: usize,
}

impl FrequencyTable {
    /// Builds a table directly from counts indexed by node id.
    pub fn from_counts(counts: Vec<u32>, dataset_size: usize) -> FrequencyTable {
        FrequencyTable {
            counts,
            dataset_size,
        }
    }

    pub fn count(&self, node: u32) -> u32 {
        self.counts.get(node as usize).copied().unwrap_or(0)
    }

    pub fn dataset_size(&self) -> usize {
        self.dataset_size
    }
}

/// Counts, for every node in the universe, the number of baskets containing
/// it. A node appearing in a basket counts once per basket regardless of how
/// it got there (members are sets).
pub fn frequency(d: &Dataset) -> FrequencyTable {
    let mut counts = vec![0u32; d.node_universe as usize];
    for b in &d.baskets {
        for &m in &b.members {
            counts[m as usize] += 1;
        }
    }
    FrequencyTable {
        counts,
        dataset_size: d.baskets.len(),
    }
}

/// Jaccard coefficient of a node pair: baskets containing both over baskets
/// containing either. Defined as 0 when neither node occurs anywhere.
pub fn jaccard(d: &Dataset, i: u32, j: u32) -> f64 {
    let mut both = 0u32;
    let mut either = 0u32;
    for b in &d.baskets {
        let has_i = b.members.contains(&i);
        let has_j = b.members.contains(&j);
        if has_i && has_j {
            both += 1;
        }
        if has_i || has_j {
            either += 1;
        }
    }
    if either == 0 {
        0.0
    } else {
        both as f64 / either as f64
    }
}

/// Dense symmetric matrix of Jaccard coefficients over the nodes that occur
/// in the dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosenessMatrix {
    node_ids: Vec<u32>,       // ascending; row/column i belongs to node_ids[i]
    index_of: Vec<usize>,     // node id -> row, usize::MAX when absent
    entries: Vec<f64>,        // row-major, dimension x dimension
}

impl ClosenessMatrix {
    pub fn dimension(&self) -> usize {
        self.node_ids.len()
    }

    /// Nodes in the matrix universe, ascending.
    pub fn node_ids(&self) -> &[u32] {
        &self.node_ids
    }

    pub fn node_at(&self, row: usize) -> u32 {
        self.node_ids[row]
    }

    pub fn row_of(&self, node: u32) -> Option<usize> {
        match self.index_of.get(node as usize) {
            Some(&r) if r != usize::MAX => Some(r),
            _ => None,
        }
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.node_ids.len() + col]
    }

    /// Closeness between two node ids; 0 for nodes outside the universe.
    pub fn closeness(&self, i: u32, j: u32) -> f64 {
        match (self.row_of(i), self.row_of(j)) {
            (Some(a), Some(b)) => self.get(a, b),
            _ => 0.0,
        }
    }

    /// Builds a matrix from raw parts; rows must match `node_ids` ascending.
    pub fn from_parts(node_ids: Vec<u32>, entries: Vec<f64>) -> Result<ClosenessMatrix> {
        let m = node_ids.len();
        if entries.len() != m * m {
            return Err(Error::structural(format!(
                "matrix entries length {} does not match dimension {m}",
                entries.len()
            )));
        }
        if node_ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::structural("matrix node ids must be strictly ascending"));
        }
        let max_id = node_ids.last().map_or(0, |&x| x as usize + 1);
        let mut index_of = vec![usize::MAX; max_id];
        for (row, &id) in node_ids.iter().enumerate() {
            index_of[id as usize] = row;
        }
        Ok(ClosenessMatrix {
            node_ids,
            index_of,
            entries,
        })
    }
}

/// Computes the Jaccard coefficient for every unordered pair of occurring
/// nodes, via per-basket pair counting.
pub fn closeness_matrix(d: &Dataset) -> Result<ClosenessMatrix> {
    let freq = frequency(d);
    let node_ids: Vec<u32> = (0..d.node_universe)
        .filter(|&i| freq.count(i) > 0)
        .collect();
    if node_ids.is_empty() {
        return Err(Error::structural(
            "closeness matrix needs at least one non-empty basket",
        ));
    }
    let m = node_ids.len();
    let mut index_of = vec![usize::MAX; d.node_universe as usize];
    for (row, &id) in node_ids.iter().enumerate() {
        index_of[id as usize] = row;
    }
    // Co-occurrence counts; only the upper triangle is accumulated.
    let mut both = vec![0u32; m * m];
    for b in &d.baskets {
        let rows: Vec<usize> = b.members.iter().map(|&id| index_of[id as usize]).collect();
        for (k, &r) in rows.iter().enumerate() {
            for &s in &rows[k + 1..] {
                let (lo, hi) = if r < s { (r, s) } else { (s, r) };
                both[lo * m + hi] += 1;
            }
        }
    }
    let mut entries = vec![0.0f64; m * m];
    for r in 0..m {
        entries[r * m + r] = 1.0;
        let fr = freq.count(node_ids[r]);
        for s in r + 1..m {
            let fs = freq.count(node_ids[s]);
            let b = both[r * m + s];
            let either = fr + fs - b;
            let j = if either == 0 {
                0.0
            } else {
                b as f64 / either as f64
            };
            entries[r * m + s] = j;
            entries[s * m + r] = j;
        }
    }
    ClosenessMatrix::from_parts(node_ids, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Basket;
    use std::collections::BTreeSet;

    pub(crate) fn dataset_from(baskets: &[&[u32]], universe: u32) -> Dataset {
        Dataset {
            baskets: baskets
                .iter()
                .enumerate()
                .map(|(index, ids)| Basket {
                    index,
                    members: ids.iter().copied().collect::<BTreeSet<u32>>(),
                })
                .collect(),
            node_universe: universe,
        }
    }

    #[test]
    fn frequency_counts_baskets_not_occurrences() {
        let d = dataset_from(&[&[0, 1], &[0, 2], &[1, 2]], 4);
        let f = frequency(&d);
        assert_eq!(f.count(0), 2);
        assert_eq!(f.count(1), 2);
        assert_eq!(f.count(2), 2);
        assert_eq!(f.count(3), 0, "absent node has zero frequency");
        assert_eq!(f.dataset_size(), 3);
    }

    #[test]
    fn node_in_every_basket_hits_the_upper_bound() {
        let d = dataset_from(&[&[0, 1], &[0], &[0, 2]], 3);
        assert_eq!(frequency(&d).count(0), 3);
    }

    #[test]
    fn jaccard_identity_and_disjoint() {
        let d = dataset_from(&[&[0, 1], &[2]], 3);
        assert_eq!(jaccard(&d, 0, 0), 1.0);
        assert_eq!(jaccard(&d, 0, 2), 0.0);
        assert_eq!(jaccard(&d, 3, 4), 0.0, "0/0 is defined as 0");
    }

    #[test]
    fn jaccard_triangle_example() {
        let d = dataset_from(&[&[0, 1], &[0, 2], &[1, 2]], 3);
        // 1 co-occurrence over 3 either-occurrences
        assert!((jaccard(&d, 0, 1) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_single_basket_is_all_ones() {
        let m = closeness_matrix(&dataset_from(&[&[3, 5]], 6)).unwrap();
        assert_eq!(m.dimension(), 2);
        assert_eq!(m.node_ids(), &[3, 5]);
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(m.get(r, c), 1.0);
            }
        }
    }

    #[test]
    fn matrix_matches_pairwise_jaccard_and_is_symmetric() {
        let d = dataset_from(&[&[0, 1], &[0, 2], &[1, 2], &[2, 4]], 5);
        let m = closeness_matrix(&d).unwrap();
        assert_eq!(m.dimension(), 4, "node 3 never occurs");
        for r in 0..m.dimension() {
            for c in 0..m.dimension() {
                let (i, j) = (m.node_at(r), m.node_at(c));
                assert_eq!(m.get(r, c), m.get(c, r));
                assert!((m.get(r, c) - jaccard(&d, i, j)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn matrix_rejects_all_empty_datasets() {
        let d = dataset_from(&[&[], &[]], 3);
        assert!(matches!(closeness_matrix(&d), Err(Error::Structural(_))));
    }
}
