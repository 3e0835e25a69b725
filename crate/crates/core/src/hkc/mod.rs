//! Divisive hierarchical clustering over core clusters.
//!
//! A run finds core clusters on a random subset, bisects the set of core
//! clusters around the two largest ones until every leaf holds one cluster,
//! assigns every point of the full dataset to its most similar core
//! cluster, optionally refines that assignment, and finally attaches the
//! assigned points to the tree's leaves.

mod assign;
mod build;
mod properties;

pub use assign::{assign_points, change_threshold, refine, Assignment, RefineOutcome, RefineStep, MAX_REFINE_ITERATIONS};
pub use build::{build_tree, build_tree_traced, Placement, SplitRecord};
pub use properties::{check_desired_properties, PropertyReport};

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::corecluster::{ik_dbscan_cores, kmeans_cores, kpskc, select_subset, CoreClusterSet};
use crate::dendro::{tsc_local, Dendrogram};
use crate::error::{invalid_arg, Error, Result};
use crate::ikernel::{fit_isolation_model, median_bandwidth, DistributionalKernel, GaussianSpace, IsolationSpace, PartitioningModel};
use crate::matrix::Matrix;

/// Algorithm used to find core clusters on the subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Clusterer {
    Kpskc,
    Kmeans { restarts: usize },
    IkDbscan { eps_sim: f64, min_pts: usize },
}

/// Distributional kernel driving the core clusters, the splits and the
/// point assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum KernelChoice {
    Idk,
    /// Gaussian kernel; `None` selects the median pairwise distance.
    Gdk { bandwidth: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HkcConfig {
    pub subset_size: usize,
    pub k: usize,
    pub psi: usize,
    pub t: usize,
    pub tau: f64,
    pub rho: f64,
    pub seed: u64,
    pub clusterer: Clusterer,
    pub kernel: KernelChoice,
    pub refine: bool,
}

impl HkcConfig {
    /// Defaults: `t = 200`, `rho = 0.1`, `tau = 0.01`, psKC cores, IDK,
    /// refinement on.
    pub fn new(subset_size: usize, k: usize, psi: usize) -> Self {
        Self {
            subset_size,
            k,
            psi,
            t: 200,
            tau: 0.01,
            rho: 0.1,
            seed: 0,
            clusterer: Clusterer::Kpskc,
            kernel: KernelChoice::Idk,
            refine: true,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.k < 2 {
            return invalid_arg(format!("k must be at least 2, got {}", self.k));
        }
        if self.subset_size > n {
            return invalid_arg(format!("subset size {} exceeds dataset size {n}", self.subset_size));
        }
        if let KernelChoice::Gdk { bandwidth: Some(b) } = self.kernel {
            if !(b > 0.0 && b.is_finite()) {
                return invalid_arg(format!("bandwidth must be positive, got {b}"));
            }
        }
        Ok(())
    }
}

/// Wall-clock seconds per stage.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageTimings {
    pub fit: f64,
    pub cores: f64,
    pub tree: f64,
    pub assign: f64,
    pub refine: f64,
}

impl StageTimings {
    pub fn total(&self) -> f64 {
        self.fit + self.cores + self.tree + self.assign + self.refine
    }
}

#[derive(Debug, Clone)]
pub struct HkcResult {
    /// Finalized tree; leaf `j` holds core cluster `j`.
    pub tree: Dendrogram,
    /// Core-cluster (and leaf) id of every point.
    pub assignments: Vec<usize>,
    pub cores: CoreClusterSet,
    pub splits: Vec<SplitRecord>,
    pub tsc_before_refine: f64,
    pub tsc_after_refine: f64,
    pub iterations: usize,
    pub refine_steps: Vec<RefineStep>,
    /// Points with zero similarity to every cluster after the last pass.
    pub orphans: usize,
    pub model: PartitioningModel,
    pub bandwidth: Option<f64>,
    pub warnings: Vec<String>,
    pub timings: StageTimings,
}

impl HkcResult {
    /// Number of leaves actually produced.
    pub fn k(&self) -> usize {
        self.cores.k()
    }
}

fn elapsed(since: Instant) -> f64 {
    since.elapsed().as_secs_f64()
}

/// Runs the full pipeline on `data`. Deterministic for a given config.
pub fn run_hkc(data: &Matrix, config: &HkcConfig) -> Result<HkcResult> {
    let n = data.nrows();
    config.validate(n)?;

    let start = Instant::now();
    let model = fit_isolation_model(data, config.psi, config.t, config.seed)?;
    let space = IsolationSpace::new(model, data)?;
    let fit_time = elapsed(start);

    match &config.kernel {
        KernelChoice::Idk => run_with_kernel(data, config, &space, &space, None, fit_time),
        KernelChoice::Gdk { bandwidth } => {
            let start = Instant::now();
            let bw = match bandwidth {
                Some(b) => *b,
                None => median_bandwidth(data, 1000, config.seed)?,
            };
            let gauss = GaussianSpace::new(data.clone(), bw)?;
            run_with_kernel(data, config, &gauss, &space, Some(bw), fit_time + elapsed(start))
        }
    }
}

fn find_cores<K: DistributionalKernel>(
    data: &Matrix,
    config: &HkcConfig,
    kernel: &K,
    space: &IsolationSpace,
    subset: &[usize],
) -> Result<CoreClusterSet> {
    match &config.clusterer {
        Clusterer::Kpskc => kpskc(kernel, subset, config.k, config.tau, config.rho),
        Clusterer::Kmeans { restarts } => kmeans_cores(data, subset, config.k, *restarts, config.seed),
        Clusterer::IkDbscan { eps_sim, min_pts } => ik_dbscan_cores(space, subset, *eps_sim, *min_pts, config.k),
    }
}

fn run_with_kernel<K: DistributionalKernel>(
    data: &Matrix,
    config: &HkcConfig,
    kernel: &K,
    space: &IsolationSpace,
    bandwidth: Option<f64>,
    fit_time: f64,
) -> Result<HkcResult> {
    let n = data.nrows();
    let mut timings = StageTimings {
        fit: fit_time,
        ..Default::default()
    };
    let mut warnings = Vec::new();

    let start = Instant::now();
    let subset = select_subset(n, config.subset_size, config.seed.wrapping_add(1))?;
    let cores = find_cores(data, config, kernel, space, &subset)?;
    cores.validate()?;
    timings.cores = elapsed(start);
    if cores.k() == 0 {
        return Err(Error::InvalidState("no core clusters were found".into()));
    }
    if cores.is_reduced() {
        warnings.push(format!("found {} core clusters, fewer than the requested {}", cores.k(), cores.requested_k));
    }

    let start = Instant::now();
    let (mut tree, splits) = if cores.k() >= 2 {
        build_tree_traced(&cores, kernel)?
    } else {
        (Dendrogram::new(1), Vec::new())
    };
    timings.tree = elapsed(start);

    let start = Instant::now();
    let core_embeddings = cores.clusters.iter().map(|c| kernel.embed(c)).collect::<Result<Vec<_>>>()?;
    let initial = assign_points(kernel, &core_embeddings);
    timings.assign = elapsed(start);

    let k = cores.k();
    let to_sets = |labels: &[usize]| {
        let mut sets = vec![Vec::new(); k];
        for (x, &l) in labels.iter().enumerate() {
            sets[l].push(x);
        }
        sets
    };

    let mut before_tree = tree.clone();
    before_tree.finalize(to_sets(&initial.labels), n)?;
    let tsc_before_refine = tsc_local(&before_tree, kernel)?;

    let start = Instant::now();
    let delta = change_threshold(n);
    // Points whose assigned cluster did not already hold them as core points.
    let moved = initial
        .labels
        .iter()
        .enumerate()
        .filter(|&(x, &l)| cores.clusters[l].binary_search(&x).is_err())
        .count();
    let (labels, iterations, refine_steps, orphans) = if config.refine && moved >= delta && moved > 0 {
        let out = refine(kernel, initial.labels, &core_embeddings, delta)?;
        (out.labels, out.iterations, out.steps, out.orphans)
    } else {
        (initial.labels, 0, Vec::new(), initial.orphans)
    };
    timings.refine = elapsed(start);
    if orphans > 0 {
        warnings.push(format!("{orphans} points had zero similarity to every cluster and went to cluster 0"));
    }

    tree.finalize(to_sets(&labels), n)?;
    let tsc_after_refine = tsc_local(&tree, kernel)?;

    Ok(HkcResult {
        tree,
        assignments: labels,
        cores,
        splits,
        tsc_before_refine,
        tsc_after_refine,
        iterations,
        refine_steps,
        orphans,
        model: space.model().clone(),
        bandwidth,
        warnings,
        timings,
    })
}
