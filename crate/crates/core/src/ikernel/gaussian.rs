use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid_arg, Error, Result};
use crate::matrix::{euclidean, squared_euclidean, Matrix};

/// Gaussian RBF point kernel `exp(-|a-b|^2 / (2 sigma^2))`.
#[inline]
pub fn rbf(a: &[f64], b: &[f64], bandwidth: f64) -> f64 {
    (-squared_euclidean(a, b) / (2.0 * bandwidth * bandwidth)).exp()
}

/// Gaussian kernel mean embedding of a sample. The RKHS is infinite
/// dimensional, so the sample itself is the representation.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianEmbedding {
    pub points: Matrix,
    pub bandwidth: f64,
}

pub fn gdk_embed(points: &Matrix, bandwidth: f64) -> Result<GaussianEmbedding> {
    check_bandwidth(bandwidth)?;
    if points.nrows() == 0 {
        return invalid_arg("cannot embed an empty point set");
    }
    Ok(GaussianEmbedding {
        points: points.clone(),
        bandwidth,
    })
}

/// Exact Gaussian Distributional Kernel between two samples: the mean of the
/// RBF kernel over all cross pairs.
pub fn gdk_kernel(x: &Matrix, y: &Matrix, bandwidth: f64) -> Result<f64> {
    check_bandwidth(bandwidth)?;
    if x.nrows() == 0 || y.nrows() == 0 {
        return invalid_arg("GDK requires nonempty point sets");
    }
    if x.ncols() != y.ncols() {
        return Err(Error::DimensionMismatch {
            expected: x.ncols(),
            got: y.ncols(),
        });
    }
    let total: f64 = x
        .rows_iter()
        .map(|a| y.rows_iter().map(|b| rbf(a, b, bandwidth)).sum::<f64>())
        .sum();
    Ok(total / (x.nrows() * y.nrows()) as f64)
}

pub(crate) fn check_bandwidth(bandwidth: f64) -> Result<()> {
    if !(bandwidth > 0.0 && bandwidth.is_finite()) {
        return invalid_arg(format!("bandwidth must be positive and finite, got {bandwidth}"));
    }
    Ok(())
}

/// Median pairwise Euclidean distance, computed on at most `max_sample`
/// rows drawn with the given seed.
pub fn median_bandwidth(points: &Matrix, max_sample: usize, seed: u64) -> Result<f64> {
    let n = points.nrows();
    if n < 2 {
        return invalid_arg("median heuristic needs at least two points");
    }
    let rows: Vec<usize> = if n <= max_sample {
        (0..n).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::index::sample(&mut rng, n, max_sample.max(2)).into_vec()
    };
    let mut dists = Vec::with_capacity(rows.len() * (rows.len() - 1) / 2);
    for (a, &i) in rows.iter().enumerate() {
        for &j in &rows[a + 1..] {
            dists.push(euclidean(points.row(i), points.row(j)));
        }
    }
    dists.sort_by(f64::total_cmp);
    let m = dists.len();
    let median = if m % 2 == 1 {
        dists[m / 2]
    } else {
        0.5 * (dists[m / 2 - 1] + dists[m / 2])
    };
    if median <= 0.0 {
        return Err(Error::InvalidData("all sampled points coincide; bandwidth would be zero".into()));
    }
    Ok(median)
}
