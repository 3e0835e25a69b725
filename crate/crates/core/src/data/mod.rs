//! Datasets, synthetic mixtures, CSV I/O, flat clustering metrics and the
//! Weisfeiler-Lehman embedding for attributed graphs.

mod csvio;
mod metrics;
mod mixture;
mod wl;

pub use csvio::{load_assignments, load_csv, save_assignments, save_csv};
pub use metrics::{ari, nmi};
pub use mixture::{generate_mixture, paper_analog_spec, Component, MixtureSpec, PAPER_ANALOG_SEED, PAPER_ANALOG_VERSION};
pub use wl::{load_graph, wl_embed, AttributedGraph, WlEmbedding};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// An `n x d` point matrix with optional ground-truth class labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub points: Matrix,
    pub labels: Option<Vec<usize>>,
    pub name: String,
}

impl LabeledDataset {
    pub fn new(points: Matrix, labels: Option<Vec<usize>>, name: impl Into<String>) -> Result<Self> {
        if !points.is_finite() {
            return Err(Error::InvalidData("dataset contains non-finite values".into()));
        }
        if let Some(l) = &labels {
            if l.len() != points.nrows() {
                return Err(Error::DimensionMismatch {
                    expected: points.nrows(),
                    got: l.len(),
                });
            }
        }
        Ok(Self {
            points,
            labels,
            name: name.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.points.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.points.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.points.ncols()
    }

    /// Number of points per label, indexed by label value.
    pub fn label_counts(&self) -> Option<Vec<usize>> {
        let labels = self.labels.as_ref()?;
        let k = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut counts = vec![0; k];
        for &l in labels {
            counts[l] += 1;
        }
        Some(counts)
    }
}
