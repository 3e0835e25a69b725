//! Core-cluster discovery on a data subset.
//!
//! The default finder is the distributional-kernel variant of point-set
//! kernel clustering ([`kpskc`]); k-means ([`kmeans_cores`]) and DBSCAN over
//! Isolation Kernel similarities ([`ik_dbscan_cores`]) are alternatives.

mod dbscan;
mod kmeans;
mod pskc;

pub use dbscan::ik_dbscan_cores;
pub use kmeans::{kmeans, kmeans_cores, KMeansFit};
pub use pskc::{kpskc, kpskc_traced, GrowthTrace};

use std::collections::HashSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};

/// Core clusters found on a subset, plus the subset points left as noise.
///
/// Cluster members and noise are rows of the full dataset; `subset_indices`
/// lists the rows that made up the subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoreClusterSet {
    pub clusters: Vec<Vec<usize>>,
    pub noise: Vec<usize>,
    pub subset_indices: Vec<usize>,
    /// Number of clusters asked for; `clusters.len()` may be smaller.
    pub requested_k: usize,
}

impl CoreClusterSet {
    pub fn k(&self) -> usize {
        self.clusters.len()
    }

    /// True when fewer clusters than requested were found.
    pub fn is_reduced(&self) -> bool {
        self.clusters.len() < self.requested_k
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(Vec::len).collect()
    }

    /// Checks disjointness, nonemptiness and coverage of the subset.
    pub fn validate(&self) -> Result<()> {
        if self.clusters.len() > self.requested_k {
            return Err(Error::InvalidState("more clusters than requested".into()));
        }
        let mut seen = HashSet::new();
        for c in &self.clusters {
            if c.is_empty() {
                return Err(Error::InvalidState("empty core cluster".into()));
            }
            for &i in c {
                if !seen.insert(i) {
                    return Err(Error::InvalidState(format!("point {i} appears twice")));
                }
            }
        }
        for &i in &self.noise {
            if !seen.insert(i) {
                return Err(Error::InvalidState(format!("point {i} appears twice")));
            }
        }
        let subset: HashSet<usize> = self.subset_indices.iter().copied().collect();
        if seen != subset {
            return Err(Error::InvalidState("clusters and noise do not cover the subset".into()));
        }
        Ok(())
    }
}

/// Uniform sample of `s` distinct rows out of `n`, returned in ascending
/// order. `s == n` returns every row.
pub fn select_subset(n: usize, s: usize, seed: u64) -> Result<Vec<usize>> {
    if s < 2 || s > n {
        return invalid_arg(format!("subset size must lie in [2, {n}], got {s}"));
    }
    if s == n {
        return Ok((0..n).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = rand::seq::index::sample(&mut rng, n, s).into_vec();
    rows.sort_unstable();
    Ok(rows)
}

/// Index of the first maximum.
pub(crate) fn argmax(values: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in values.iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_subset_is_identity() {
        assert_eq!(select_subset(5, 5, 9).unwrap(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn subset_is_deterministic_and_distinct() {
        let a = select_subset(100, 30, 4).unwrap();
        assert_eq!(a, select_subset(100, 30, 4).unwrap());
        assert_eq!(a.len(), 30);
        assert!(a.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn subset_out_of_range() {
        assert!(select_subset(10, 1, 0).is_err());
        assert!(select_subset(10, 11, 0).is_err());
    }

    #[test]
    fn argmax_prefers_first() {
        assert_eq!(argmax(&[0.1, 0.5, 0.5]), Some(1));
        assert_eq!(argmax(&[]), None);
    }

    #[test]
    fn validate_catches_overlap() {
        let set = CoreClusterSet {
            clusters: vec![vec![0, 1], vec![1]],
            noise: vec![],
            subset_indices: vec![0, 1],
            requested_k: 2,
        };
        assert!(set.validate().is_err());
    }
}
