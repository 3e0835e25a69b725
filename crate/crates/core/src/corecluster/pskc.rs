use rayon::prelude::*;

use super::{argmax, CoreClusterSet};
use crate::error::{invalid_arg, Result};
use crate::ikernel::DistributionalKernel;

/// Thresholds and sizes visited while growing one cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTrace {
    pub seed: usize,
    pub companion: usize,
    /// Threshold used at each growth step.
    pub gammas: Vec<f64>,
    /// Cluster size after each growth step.
    pub sizes: Vec<usize>,
}

/// Distributional-kernel point-set kernel clustering, capped at `k`
/// clusters.
///
/// `subset` holds dataset rows; leftovers are returned as noise.
pub fn kpskc<K: DistributionalKernel>(kernel: &K, subset: &[usize], k: usize, tau: f64, rho: f64) -> Result<CoreClusterSet> {
    kpskc_traced(kernel, subset, k, tau, rho).map(|(set, _)| set)
}

pub fn kpskc_traced<K: DistributionalKernel>(
    kernel: &K,
    subset: &[usize],
    k: usize,
    tau: f64,
    rho: f64,
) -> Result<(CoreClusterSet, Vec<GrowthTrace>)> {
    if subset.is_empty() {
        return invalid_arg("cannot cluster an empty subset");
    }
    if !(rho > 0.0 && rho < 1.0) {
        return invalid_arg(format!("growth rate must lie in (0, 1), got {rho}"));
    }
    if !(tau > 0.0) {
        return invalid_arg(format!("similarity threshold must be positive, got {tau}"));
    }
    if k == 0 {
        return invalid_arg("k must be at least 1");
    }

    let mut residual: Vec<usize> = subset.to_vec();
    residual.sort_unstable();
    let mut clusters = Vec::new();
    let mut traces = Vec::new();

    while residual.len() > 1 && clusters.len() < k {
        let whole = kernel.embed(&residual)?;
        let density: Vec<f64> = residual.par_iter().map(|&x| kernel.point_similarity(x, &whole)).collect();
        let p = residual[argmax(&density).expect("residual is nonempty")];

        let to_seed: Vec<f64> = residual
            .iter()
            .map(|&x| if x == p { f64::NEG_INFINITY } else { kernel.point_point(x, p) })
            .collect();
        let q = residual[argmax(&to_seed).expect("residual has two points")];

        let mut gamma = (1.0 - rho) * kernel.point_point(q, p);
        if gamma <= tau {
            break;
        }

        let mut trace = GrowthTrace {
            seed: p,
            companion: q,
            gammas: Vec::new(),
            sizes: Vec::new(),
        };
        let mut members = if p < q { vec![p, q] } else { vec![q, p] };
        while gamma > tau {
            let emb = kernel.embed(&members)?;
            let grown: Vec<usize> = residual
                .par_iter()
                .copied()
                .filter(|&x| kernel.point_similarity(x, &emb) > gamma)
                .collect();
            trace.gammas.push(gamma);
            trace.sizes.push(grown.len());
            gamma *= 1.0 - rho;
            if grown.is_empty() {
                // Nothing to grow from; keep the last nonempty set.
                break;
            }
            members = grown;
        }

        let taken: std::collections::HashSet<usize> = members.iter().copied().collect();
        residual.retain(|x| !taken.contains(x));
        clusters.push(members);
        traces.push(trace);
    }

    let mut subset_indices = subset.to_vec();
    subset_indices.sort_unstable();
    Ok((
        CoreClusterSet {
            clusters,
            noise: residual,
            subset_indices,
            requested_k: k,
        },
        traces,
    ))
}
