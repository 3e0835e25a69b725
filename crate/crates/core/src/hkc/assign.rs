use rayon::prelude::*;

use crate::ikernel::DistributionalKernel;

/// Point-to-cluster assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub labels: Vec<usize>,
    /// Points with zero similarity to every cluster; they go to cluster 0.
    pub orphans: usize,
}

fn best_cluster<K: DistributionalKernel>(kernel: &K, x: usize, embeddings: &[K::Embedding]) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (j, e) in embeddings.iter().enumerate() {
        let s = kernel.point_similarity(x, e);
        if s > best.1 {
            best = (j, s);
        }
    }
    best
}

/// Assigns every indexed point to the cluster maximizing
/// `K(delta(x), P_G)`; ties go to the smallest cluster index.
pub fn assign_points<K: DistributionalKernel>(kernel: &K, embeddings: &[K::Embedding]) -> Assignment {
    let best: Vec<(usize, f64)> = (0..kernel.num_points())
        .into_par_iter()
        .map(|x| best_cluster(kernel, x, embeddings))
        .collect();
    Assignment {
        orphans: best.iter().filter(|b| b.1 <= 0.0).count(),
        labels: best.into_iter().map(|b| b.0).collect(),
    }
}

/// One pass of the refinement loop.
#[derive(Debug, Clone, PartialEq)]
pub struct RefineStep {
    pub changes: usize,
    /// `sum_x K(delta(x), P_{A(x)})` with this pass's embeddings, before and
    /// after reassignment.
    pub objective_before: f64,
    pub objective_after: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefineOutcome {
    pub labels: Vec<usize>,
    pub iterations: usize,
    pub steps: Vec<RefineStep>,
    pub orphans: usize,
}

pub const MAX_REFINE_ITERATIONS: usize = 100;

/// Minimum change count that keeps refinement going: one percent of the
/// dataset, rounded down.
pub fn change_threshold(n: usize) -> usize {
    n / 100
}

/// Recomputes cluster embeddings from the current members and reassigns all
/// points, synchronously, until fewer than `delta` points move (or none
/// do), or 100 passes have run. A cluster that empties keeps its previous
/// embedding, starting from `initial`.
pub fn refine<K: DistributionalKernel>(
    kernel: &K,
    labels: Vec<usize>,
    initial: &[K::Embedding],
    delta: usize,
) -> crate::error::Result<RefineOutcome> {
    let k = initial.len();
    let mut embeddings = initial.to_vec();
    let mut labels = labels;
    let mut steps = Vec::new();
    let mut orphans = 0;
    for _ in 0..MAX_REFINE_ITERATIONS {
        let mut members = vec![Vec::new(); k];
        for (x, &l) in labels.iter().enumerate() {
            members[l].push(x);
        }
        for (j, m) in members.iter().enumerate() {
            if !m.is_empty() {
                embeddings[j] = kernel.embed(m)?;
            }
        }
        let current: Vec<f64> = (0..labels.len())
            .into_par_iter()
            .map(|x| kernel.point_similarity(x, &embeddings[labels[x]]))
            .collect();
        let best: Vec<(usize, f64)> = (0..labels.len())
            .into_par_iter()
            .map(|x| best_cluster(kernel, x, &embeddings))
            .collect();
        let changes = best.iter().zip(&labels).filter(|(b, &l)| b.0 != l).count();
        orphans = best.iter().filter(|b| b.1 <= 0.0).count();
        steps.push(RefineStep {
            changes,
            objective_before: current.iter().sum(),
            objective_after: best.iter().map(|b| b.1).sum(),
        });
        labels = best.into_iter().map(|b| b.0).collect();
        if changes < delta || changes == 0 {
            break;
        }
    }
    Ok(RefineOutcome {
        labels,
        iterations: steps.len(),
        steps,
        orphans,
    })
}
