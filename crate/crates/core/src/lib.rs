//! Hierarchical clustering driven by a distributional kernel.
//!
//! The pipeline ([`hkc::run_hkc`]) fits an Isolation Kernel, finds core
//! clusters on a subset, splits them top-down into a binary dendrogram and
//! attaches every point of the dataset to a leaf. Supporting modules cover
//! tree objectives and purity ([`dendro`]), a bisecting k-means baseline
//! ([`baseline`]) and data handling ([`data`]).

pub mod baseline;
pub mod corecluster;
pub mod data;
pub mod dendro;
pub mod error;
pub mod hkc;
pub mod ikernel;
pub mod matrix;

pub use baseline::{bisect_kmeans, BisectConfig, BisectResult};
pub use dendro::Dendrogram;
pub use error::{Error, Result};
pub use hkc::{run_hkc, HkcConfig, HkcResult};
pub use matrix::Matrix;
