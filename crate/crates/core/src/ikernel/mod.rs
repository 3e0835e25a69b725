//! Isolation Kernel and the distributional kernels built on top of it.
//!
//! An isolation model is a collection of `t` random partitionings of the
//! input space. Each partitioning is defined by `psi` points drawn from the
//! data; every drawn point owns a hypersphere whose radius is the distance to
//! its nearest neighbour in the same draw. A point's feature vector records,
//! per partitioning, which hypersphere (if any) it falls into, scaled by
//! `1/sqrt(t)`. Averaging feature vectors over a point set gives the kernel
//! mean embedding of that set, and inner products of embeddings give the
//! Isolation Distributional Kernel (IDK).
//!
//! The Gaussian Distributional Kernel (GDK) is provided for comparison and is
//! evaluated exactly through the pairwise double sum.

mod feature;
mod gaussian;
mod model;
mod space;

pub use feature::{
    kernel_dist_dist, kernel_point_dist, kernel_point_point, DistributionEmbedding, FeatureVector,
};
pub use gaussian::{gdk_embed, gdk_kernel, median_bandwidth, rbf, GaussianEmbedding};
pub use model::{fit_isolation_model, Partitioning, PartitioningModel, MODEL_FORMAT_VERSION};
pub use space::{DistributionalKernel, GaussianSpace, IsolationSpace, MemberSet};
