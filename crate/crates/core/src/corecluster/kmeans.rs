use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::CoreClusterSet;
use crate::error::{invalid_arg, Result};
use crate::matrix::{squared_euclidean, Matrix};

const MAX_LLOYD_ITERS: usize = 300;

/// Result of a k-means run.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansFit {
    pub labels: Vec<usize>,
    pub centroids: Matrix,
    /// Within-cluster sum of squared distances.
    pub sse: f64,
    /// SSE of every restart, in restart order.
    pub restart_sse: Vec<f64>,
}

/// Lloyd's algorithm, best of `restarts` runs by SSE. Each restart starts
/// from `k` distinct rows drawn with ChaCha stream `r` under `seed`.
pub fn kmeans(points: &Matrix, k: usize, restarts: usize, seed: u64) -> Result<KMeansFit> {
    let n = points.nrows();
    if k == 0 || k > n {
        return invalid_arg(format!("k must lie in [1, {n}], got {k}"));
    }
    if restarts == 0 {
        return invalid_arg("restarts must be at least 1");
    }
    let runs: Vec<(Vec<usize>, Matrix, f64)> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let init = rand::seq::index::sample(&mut rng, n, k).into_vec();
            lloyd(points, points.select_rows(&init))
        })
        .collect();
    let restart_sse: Vec<f64> = runs.iter().map(|r| r.2).collect();
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .2.total_cmp(&b.1 .2).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .expect("at least one restart");
    let (labels, centroids, sse) = runs.into_iter().nth(best).expect("index in range");
    Ok(KMeansFit {
        labels,
        centroids,
        sse,
        restart_sse,
    })
}

fn nearest(x: &[f64], centroids: &Matrix) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for j in 0..centroids.nrows() {
        let d = squared_euclidean(x, centroids.row(j));
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn lloyd(points: &Matrix, mut centroids: Matrix) -> (Vec<usize>, Matrix, f64) {
    let (n, d, k) = (points.nrows(), points.ncols(), centroids.nrows());
    let mut labels = vec![usize::MAX; n];
    for _ in 0..MAX_LLOYD_ITERS {
        let next: Vec<usize> = (0..n).map(|i| nearest(points.row(i), &centroids).0).collect();
        if next == labels {
            break;
        }
        labels = next;
        let mut sums = Matrix::zeros(k, d);
        let mut counts = vec![0usize; k];
        for (i, &l) in labels.iter().enumerate() {
            counts[l] += 1;
            for (s, x) in sums.row_mut(l).iter_mut().zip(points.row(i)) {
                *s += x;
            }
        }
        for j in 0..k {
            // An empty cluster keeps its previous centroid.
            if counts[j] > 0 {
                let c = counts[j] as f64;
                for (dst, s) in centroids.row_mut(j).iter_mut().zip(sums.row(j)) {
                    *dst = s / c;
                }
            }
        }
    }
    let sse = (0..n).map(|i| squared_euclidean(points.row(i), centroids.row(labels[i]))).sum();
    (labels, centroids, sse)
}

/// k-means over the subset rows of `data`; every subset point lands in a
/// cluster, so the noise set is empty.
pub fn kmeans_cores(data: &Matrix, subset: &[usize], k: usize, restarts: usize, seed: u64) -> Result<CoreClusterSet> {
    if k > subset.len() {
        return invalid_arg(format!("k ({k}) exceeds subset size ({})", subset.len()));
    }
    let mut rows = subset.to_vec();
    rows.sort_unstable();
    let fit = kmeans(&data.select_rows(&rows), k, restarts, seed)?;
    let mut clusters = vec![Vec::new(); k];
    for (pos, &l) in fit.labels.iter().enumerate() {
        clusters[l].push(rows[pos]);
    }
    clusters.retain(|c| !c.is_empty());
    Ok(CoreClusterSet {
        clusters,
        noise: Vec::new(),
        subset_indices: rows,
        requested_k: k,
    })
}
