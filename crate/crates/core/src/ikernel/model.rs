use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::feature::{DistributionEmbedding, FeatureVector};
use crate::error::{invalid_arg, Error, Result};
use crate::matrix::{euclidean, squared_euclidean, Matrix};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// One random partitioning: `psi` centers sampled from the data and the
/// radius of the hypersphere around each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Partitioning {
    /// Rows of the fitting dataset used as centers.
    pub sample_rows: Vec<usize>,
    pub centers: Matrix,
    pub radii: Vec<f64>,
}

impl Partitioning {
    fn from_sample(data: &Matrix, sample_rows: Vec<usize>) -> Self {
        let centers = data.select_rows(&sample_rows);
        let radii = nearest_neighbor_radii(&centers);
        Self {
            sample_rows,
            centers,
            radii,
        }
    }

    /// Index of the center covering `x`, using the nearest-center rule.
    ///
    /// Ties between equidistant centers go to the smaller index.
    pub fn covering_cell(&self, x: &[f64]) -> Option<usize> {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for j in 0..self.centers.nrows() {
            let d = squared_euclidean(x, self.centers.row(j));
            if d < best_d {
                best_d = d;
                best = j;
            }
        }
        (best_d.sqrt() <= self.radii[best]).then_some(best)
    }
}

fn nearest_neighbor_radii(centers: &Matrix) -> Vec<f64> {
    let m = centers.nrows();
    (0..m)
        .map(|j| {
            let z = centers.row(j);
            (0..m)
                .filter(|&o| o != j)
                .map(|o| euclidean(z, centers.row(o)))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// The fitted Isolation Kernel: `t` hypersphere partitionings of `psi`
/// centers each.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitioningModel {
    pub format_version: u32,
    pub psi: usize,
    pub t: usize,
    pub dim: usize,
    pub seed: u64,
    pub partitions: Vec<Partitioning>,
}

/// Fits an isolation model: each partitioning draws `psi` distinct rows.
///
/// Partitioning `i` uses ChaCha stream `i` under `seed`, so the result does
/// not depend on how the work is scheduled across threads.
pub fn fit_isolation_model(data: &Matrix, psi: usize, t: usize, seed: u64) -> Result<PartitioningModel> {
    let n = data.nrows();
    if psi < 2 {
        return invalid_arg(format!("psi must be at least 2, got {psi}"));
    }
    if n < psi {
        return invalid_arg(format!("psi ({psi}) exceeds the number of points ({n})"));
    }
    if t == 0 {
        return invalid_arg("t must be at least 1");
    }
    if !data.is_finite() {
        return Err(Error::InvalidData("data contains non-finite values".into()));
    }

    let partitions = (0..t)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let rows = rand::seq::index::sample(&mut rng, n, psi).into_vec();
            Partitioning::from_sample(data, rows)
        })
        .collect();

    Ok(PartitioningModel {
        format_version: MODEL_FORMAT_VERSION,
        psi,
        t,
        dim: data.ncols(),
        seed,
        partitions,
    })
}

impl PartitioningModel {
    /// Dimension of the feature space, `t * psi`.
    pub fn feature_dim(&self) -> usize {
        self.t * self.psi
    }

    pub fn embed_point(&self, x: &[f64]) -> Result<FeatureVector> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let indices = self
            .partitions
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.covering_cell(x).map(|j| (i * self.psi + j) as u32))
            .collect();
        Ok(FeatureVector::from_sorted_indices(self.feature_dim(), self.t, indices))
    }

    /// Embeds every row of `data`, in parallel.
    pub fn embed_points(&self, data: &Matrix) -> Result<Vec<FeatureVector>> {
        if data.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: data.ncols(),
            });
        }
        (0..data.nrows())
            .into_par_iter()
            .map(|i| self.embed_point(data.row(i)))
            .collect()
    }

    /// Kernel mean embedding of a nonempty set of points.
    pub fn embed_distribution<R: AsRef<[f64]>>(&self, points: &[R]) -> Result<DistributionEmbedding> {
        if points.is_empty() {
            return invalid_arg("cannot embed an empty point set");
        }
        let features = points
            .iter()
            .map(|p| self.embed_point(p.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        DistributionEmbedding::mean_of(self.feature_dim(), features.iter())
    }

    /// Checks the structural invariants of a (possibly deserialized) model.
    pub fn validate(&self) -> Result<()> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::InvalidData(format!(
                "unsupported model format version {}",
                self.format_version
            )));
        }
        if self.partitions.len() != self.t {
            return Err(Error::InvalidData(format!(
                "expected {} partitionings, found {}",
                self.t,
                self.partitions.len()
            )));
        }
        for (i, p) in self.partitions.iter().enumerate() {
            if p.centers.nrows() != self.psi || p.radii.len() != self.psi || p.sample_rows.len() != self.psi {
                return Err(Error::InvalidData(format!("partitioning {i} does not hold psi centers")));
            }
            if p.centers.ncols() != self.dim {
                return Err(Error::InvalidData(format!("partitioning {i} has wrong center dimension")));
            }
            if nearest_neighbor_radii(&p.centers) != p.radii {
                return Err(Error::InvalidData(format!(
                    "partitioning {i} radii do not match nearest-neighbour distances"
                )));
            }
        }
        Ok(())
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let w = BufWriter::new(File::create(path)?);
        serde_json::to_writer(w, self)?;
        Ok(())
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        let r = BufReader::new(File::open(path)?);
        let model: Self = serde_json::from_reader(r)?;
        model.validate()?;
        Ok(model)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn random_data(n: usize, d: usize, seed: u64) -> Matrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..n * d).map(|_| rng.random_range(-1.0..1.0)).collect();
        Matrix::new(n, d, data).unwrap()
    }

    #[test]
    fn two_points_share_their_distance_as_radius() {
        let data = Matrix::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let model = fit_isolation_model(&data, 2, 1, 7).unwrap();
        assert_eq!(model.partitions[0].radii, vec![5.0, 5.0]);
    }

    #[test]
    fn rejects_bad_arguments() {
        let data = random_data(5, 2, 1);
        assert!(matches!(fit_isolation_model(&data, 6, 3, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(fit_isolation_model(&data, 1, 3, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(fit_isolation_model(&data, 2, 0, 0), Err(Error::InvalidArgument(_))));
        let bad = Matrix::from_rows(&[vec![0.0], vec![f64::NAN], vec![1.0]]).unwrap();
        assert!(matches!(fit_isolation_model(&bad, 2, 3, 0), Err(Error::InvalidData(_))));
    }

    #[test]
    fn structure_and_determinism() {
        let data = random_data(100, 3, 2);
        let a = fit_isolation_model(&data, 8, 20, 42).unwrap();
        let b = fit_isolation_model(&data, 8, 20, 42).unwrap();
        assert_eq!(a, b);
        a.validate().unwrap();
        for p in &a.partitions {
            let mut rows = p.sample_rows.clone();
            rows.sort_unstable();
            rows.dedup();
            assert_eq!(rows.len(), 8, "sampling must be without replacement");
            for (j, &r) in p.sample_rows.iter().enumerate() {
                assert_eq!(p.centers.row(j), data.row(r));
            }
        }
        let c = fit_isolation_model(&data, 8, 20, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn center_is_covered_by_its_own_cell() {
        let data = random_data(50, 2, 3);
        let model = fit_isolation_model(&data, 6, 10, 5).unwrap();
        for (i, p) in model.partitions.iter().enumerate() {
            for j in 0..model.psi {
                let fv = model.embed_point(p.centers.row(j)).unwrap();
                assert!(fv.indices().contains(&((i * model.psi + j) as u32)));
            }
        }
    }

    #[test]
    fn far_point_is_uncovered() {
        let data = random_data(50, 2, 4);
        let model = fit_isolation_model(&data, 6, 10, 5).unwrap();
        let fv = model.embed_point(&[100.0, 100.0]).unwrap();
        assert!(fv.indices().is_empty());
        assert_eq!(fv.squared_norm(), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let data = random_data(10, 2, 4);
        let model = fit_isolation_model(&data, 4, 2, 5).unwrap();
        assert!(matches!(model.embed_point(&[1.0]), Err(Error::DimensionMismatch { .. })));
        assert!(model.embed_distribution::<Vec<f64>>(&[]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let data = random_data(30, 2, 9);
        let model = fit_isolation_model(&data, 4, 5, 11).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        model.save_json(&path).unwrap();
        assert_eq!(PartitioningModel::load_json(&path).unwrap(), model);
    }
}
