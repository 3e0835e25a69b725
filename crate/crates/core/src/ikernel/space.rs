use rayon::prelude::*;

use super::feature::{point_dot, DistributionEmbedding, FeatureVector};
use super::gaussian::{check_bandwidth, rbf};
use super::model::PartitioningModel;
use crate::error::{invalid_arg, Result};
use crate::matrix::Matrix;

/// A distributional kernel bound to a fixed, indexed set of points.
///
/// Clusters are identified by the indices of their members; the kernel
/// decides how a member set is represented.
pub trait DistributionalKernel: Sync {
    type Embedding: Clone + Send + Sync;

    /// Number of indexed points.
    fn num_points(&self) -> usize;

    /// Mean embedding of a nonempty member set.
    fn embed(&self, members: &[usize]) -> Result<Self::Embedding>;

    /// `K(delta(x), P)` for the indexed point `x`.
    fn point_similarity(&self, point: usize, emb: &Self::Embedding) -> f64;

    /// `K(P_a, P_b)`.
    fn similarity(&self, a: &Self::Embedding, b: &Self::Embedding) -> f64;

    /// Point kernel between two indexed points.
    fn point_point(&self, a: usize, b: usize) -> f64;

    /// Human-readable kernel name.
    fn name(&self) -> &'static str;
}

/// Isolation Distributional Kernel over a dataset, with all point feature
/// vectors precomputed.
#[derive(Debug, Clone)]
pub struct IsolationSpace {
    model: PartitioningModel,
    features: Vec<FeatureVector>,
}

impl IsolationSpace {
    pub fn new(model: PartitioningModel, data: &Matrix) -> Result<Self> {
        let features = model.embed_points(data)?;
        Ok(Self { model, features })
    }

    pub fn model(&self) -> &PartitioningModel {
        &self.model
    }

    pub fn features(&self) -> &[FeatureVector] {
        &self.features
    }

    pub fn feature(&self, i: usize) -> &FeatureVector {
        &self.features[i]
    }
}

impl DistributionalKernel for IsolationSpace {
    type Embedding = DistributionEmbedding;

    fn num_points(&self) -> usize {
        self.features.len()
    }

    fn embed(&self, members: &[usize]) -> Result<DistributionEmbedding> {
        DistributionEmbedding::mean_of(self.model.feature_dim(), members.iter().map(|&i| &self.features[i]))
    }

    fn point_similarity(&self, point: usize, emb: &DistributionEmbedding) -> f64 {
        point_dot(&self.features[point], emb)
    }

    fn similarity(&self, a: &DistributionEmbedding, b: &DistributionEmbedding) -> f64 {
        a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum()
    }

    fn point_point(&self, a: usize, b: usize) -> f64 {
        self.features[a].shared_cells(&self.features[b]) as f64 / self.model.t as f64
    }

    fn name(&self) -> &'static str {
        "idk"
    }
}

/// Gaussian Distributional Kernel over a dataset, evaluated exactly.
#[derive(Debug, Clone)]
pub struct GaussianSpace {
    points: Matrix,
    bandwidth: f64,
}

/// Member list of a set under the Gaussian kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemberSet(pub Vec<usize>);

impl GaussianSpace {
    pub fn new(points: Matrix, bandwidth: f64) -> Result<Self> {
        check_bandwidth(bandwidth)?;
        Ok(Self { points, bandwidth })
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }
}

impl DistributionalKernel for GaussianSpace {
    type Embedding = MemberSet;

    fn num_points(&self) -> usize {
        self.points.nrows()
    }

    fn embed(&self, members: &[usize]) -> Result<MemberSet> {
        if members.is_empty() {
            return invalid_arg("cannot embed an empty point set");
        }
        Ok(MemberSet(members.to_vec()))
    }

    fn point_similarity(&self, point: usize, emb: &MemberSet) -> f64 {
        let x = self.points.row(point);
        let s: f64 = emb.0.iter().map(|&j| rbf(x, self.points.row(j), self.bandwidth)).sum();
        s / emb.0.len() as f64
    }

    fn similarity(&self, a: &MemberSet, b: &MemberSet) -> f64 {
        // Collected before summing so the result does not depend on scheduling.
        let parts: Vec<f64> = a.0.par_iter().map(|&i| self.point_similarity(i, b)).collect();
        parts.iter().sum::<f64>() / a.0.len() as f64
    }

    fn point_point(&self, a: usize, b: usize) -> f64 {
        rbf(self.points.row(a), self.points.row(b), self.bandwidth)
    }

    fn name(&self) -> &'static str {
        "gdk"
    }
}
