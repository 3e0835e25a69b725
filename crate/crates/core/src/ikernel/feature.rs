use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};

/// Sparse Isolation Kernel feature vector of a single point.
///
/// Holds at most one active coordinate per partitioning block; each active
/// coordinate has value `1/sqrt(t)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureVector {
    dim: usize,
    t: usize,
    indices: Vec<u32>,
}

impl FeatureVector {
    pub(crate) fn from_sorted_indices(dim: usize, t: usize, indices: Vec<u32>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self { dim, t, indices }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t(&self) -> usize {
        self.t
    }

    /// Active coordinates, ascending.
    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    /// Value of every active coordinate.
    pub fn value(&self) -> f64 {
        1.0 / (self.t as f64).sqrt()
    }

    /// Number of partitionings covering the point divided by `t`.
    pub fn squared_norm(&self) -> f64 {
        self.indices.len() as f64 / self.t as f64
    }

    /// Count of partitionings in which both points share a cell.
    pub fn shared_cells(&self, other: &FeatureVector) -> usize {
        let (mut i, mut j, mut shared) = (0, 0, 0);
        let (a, b) = (&self.indices, &other.indices);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    shared += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        shared
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        let val = self.value();
        for &i in &self.indices {
            v[i as usize] = val;
        }
        v
    }
}

/// Kernel mean embedding of a finite point set, stored densely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionEmbedding {
    values: Vec<f64>,
    support_size: usize,
}

impl DistributionEmbedding {
    /// Componentwise mean of the given feature vectors.
    pub fn mean_of<'a>(dim: usize, features: impl IntoIterator<Item = &'a FeatureVector>) -> Result<Self> {
        let mut counts = vec![0u32; dim];
        let mut n = 0usize;
        let mut t = 0usize;
        for fv in features {
            if fv.dim != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: fv.dim,
                });
            }
            t = fv.t;
            for &i in &fv.indices {
                counts[i as usize] += 1;
            }
            n += 1;
        }
        if n == 0 {
            return invalid_arg("cannot embed an empty point set");
        }
        let scale = 1.0 / (n as f64 * (t as f64).sqrt());
        let values = counts.into_iter().map(|c| c as f64 * scale).collect();
        Ok(Self {
            values,
            support_size: n,
        })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn support_size(&self) -> usize {
        self.support_size
    }

    pub fn squared_norm(&self) -> f64 {
        dot(&self.values, &self.values)
    }

    pub fn norm(&self) -> f64 {
        self.squared_norm().sqrt()
    }

    /// Euclidean distance between two embeddings.
    pub fn distance(&self, other: &DistributionEmbedding) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Embedding of the union of two disjoint sets:
    /// `(n1 * a + n2 * b) / (n1 + n2)`.
    pub fn merged(&self, other: &DistributionEmbedding) -> Result<DistributionEmbedding> {
        check_dims(self.dim(), other.dim())?;
        let (n1, n2) = (self.support_size as f64, other.support_size as f64);
        let total = n1 + n2;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (n1 * a + n2 * b) / total)
            .collect();
        Ok(Self {
            values,
            support_size: self.support_size + other.support_size,
        })
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, got: b });
    }
    Ok(())
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Isolation Kernel between two points: fraction of partitionings in which
/// they share a cell.
pub fn kernel_point_point(a: &FeatureVector, b: &FeatureVector) -> Result<f64> {
    check_dims(a.dim, b.dim)?;
    Ok(a.shared_cells(b) as f64 / a.t as f64)
}

/// Distributional kernel between two embeddings (their inner product).
pub fn kernel_dist_dist(a: &DistributionEmbedding, b: &DistributionEmbedding) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    Ok(dot(&a.values, &b.values))
}

/// Distributional kernel between the Dirac measure at a point and an
/// embedding.
pub fn kernel_point_dist(x: &FeatureVector, emb: &DistributionEmbedding) -> Result<f64> {
    check_dims(x.dim, emb.dim())?;
    Ok(point_dot(x, emb))
}

#[inline]
pub(crate) fn point_dot(x: &FeatureVector, emb: &DistributionEmbedding) -> f64 {
    let s: f64 = x.indices.iter().map(|&i| emb.values[i as usize]).sum();
    s * x.value()
}
