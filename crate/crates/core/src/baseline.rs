//! Bisecting k-means, the divisive baseline.

use serde::{Deserialize, Serialize};

use crate::corecluster::kmeans;
use crate::dendro::{Dendrogram, NodeId};
use crate::error::{invalid_arg, Result};
use crate::matrix::{squared_euclidean, Matrix};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectConfig {
    pub k: usize,
    /// 2-means restarts per split; the lowest-SSE split wins.
    pub restarts: usize,
    pub seed: u64,
}

impl BisectConfig {
    pub fn new(k: usize) -> Self {
        Self { k, restarts: 10, seed: 0 }
    }
}

/// One bisection: the split point set and the SSE of every restart.
#[derive(Debug, Clone, PartialEq)]
pub struct BisectSplit {
    pub node: NodeId,
    pub size: usize,
    pub sse: f64,
    pub restart_sse: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct BisectResult {
    /// Finalized tree; each leaf holds one cluster id.
    pub tree: Dendrogram,
    /// Leaf cluster id of every point.
    pub assignments: Vec<usize>,
    pub splits: Vec<BisectSplit>,
    pub warnings: Vec<String>,
}

fn sse(data: &Matrix, rows: &[usize]) -> f64 {
    if rows.len() < 2 {
        return 0.0;
    }
    let d = data.ncols();
    let mut mean = vec![0.0; d];
    for &r in rows {
        for (m, v) in mean.iter_mut().zip(data.row(r)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= rows.len() as f64);
    rows.iter().map(|&r| squared_euclidean(data.row(r), &mean)).sum()
}

struct PointNode {
    rows: Vec<usize>,
    children: Option<[usize; 2]>,
}

/// Starts from one leaf holding every point and repeatedly bisects the leaf
/// with the largest SSE using 2-means until `k` leaves exist. Leaves that
/// cannot be split (a single point, or all points identical) are skipped;
/// if no leaf can be split the tree stops early with a warning.
pub fn bisect_kmeans(data: &Matrix, config: &BisectConfig) -> Result<BisectResult> {
    let n = data.nrows();
    if config.k < 2 {
        return invalid_arg(format!("k must be at least 2, got {}", config.k));
    }
    if config.restarts == 0 {
        return invalid_arg("restarts must be at least 1");
    }
    if n < config.k {
        return invalid_arg(format!("k = {} exceeds the number of points {n}", config.k));
    }

    let mut nodes = vec![PointNode {
        rows: (0..n).collect(),
        children: None,
    }];
    let mut leaf_sse = vec![sse(data, &nodes[0].rows)];
    let mut blocked = vec![false];
    let mut order = Vec::new();
    let mut splits = Vec::new();
    let mut warnings = Vec::new();
    let mut num_leaves = 1;

    while num_leaves < config.k {
        let candidate = (0..nodes.len())
            .filter(|&i| nodes[i].children.is_none() && !blocked[i] && nodes[i].rows.len() >= 2)
            .max_by(|&a, &b| leaf_sse[a].total_cmp(&leaf_sse[b]).then(b.cmp(&a)));
        let Some(leaf) = candidate else {
            warnings.push(format!("no splittable leaf left; stopped at {num_leaves} leaves"));
            break;
        };
        let rows = nodes[leaf].rows.clone();
        let seed = config.seed.wrapping_add(splits.len() as u64);
        let fit = kmeans(&data.select_rows(&rows), 2, config.restarts, seed)?;
        let mut sides: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (&r, &l) in rows.iter().zip(&fit.labels) {
            sides[l].push(r);
        }
        if sides[0].is_empty() || sides[1].is_empty() {
            blocked[leaf] = true;
            continue;
        }
        let base = nodes.len();
        for side in sides {
            leaf_sse.push(sse(data, &side));
            blocked.push(false);
            nodes.push(PointNode {
                rows: side,
                children: None,
            });
        }
        nodes[leaf].children = Some([base, base + 1]);
        order.push(leaf);
        splits.push(BisectSplit {
            node: leaf,
            size: rows.len(),
            sse: fit.sse,
            restart_sse: fit.restart_sse,
        });
        num_leaves += 1;
    }

    // Leaves get cluster ids in left-first pre-order.
    let mut leaf_id = vec![usize::MAX; nodes.len()];
    let mut cluster_points = Vec::with_capacity(num_leaves);
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        match nodes[i].children {
            Some([l, r]) => {
                stack.push(r);
                stack.push(l);
            }
            None => {
                leaf_id[i] = cluster_points.len();
                cluster_points.push(nodes[i].rows.clone());
            }
        }
    }
    let mut below: Vec<Vec<usize>> = vec![Vec::new(); nodes.len()];
    for i in (0..nodes.len()).rev() {
        below[i] = match nodes[i].children {
            Some([l, r]) => below[l].iter().chain(&below[r]).copied().collect(),
            None => vec![leaf_id[i]],
        };
    }

    let mut tree = Dendrogram::new(num_leaves);
    let mut tree_id = vec![usize::MAX; nodes.len()];
    tree_id[0] = Dendrogram::ROOT;
    for (s, &p) in order.iter().enumerate() {
        let [l, r] = nodes[p].children.expect("split node has children");
        let ids = tree.split(tree_id[p], below[l].clone(), below[r].clone())?;
        tree_id[l] = ids[0];
        tree_id[r] = ids[1];
        splits[s].node = tree_id[p];
    }

    let mut assignments = vec![0; n];
    for (c, pts) in cluster_points.iter().enumerate() {
        for &p in pts {
            assignments[p] = c;
        }
    }
    tree.finalize(cluster_points, n)?;
    Ok(BisectResult {
        tree,
        assignments,
        splits,
        warnings,
    })
}
