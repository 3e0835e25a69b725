use crate::corecluster::CoreClusterSet;
use crate::dendro::{Dendrogram, NodeId};
use crate::error::{invalid_arg, Result};
use crate::ikernel::DistributionalKernel;

/// How one core cluster was placed during a split.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    pub cluster: usize,
    /// 0 for the first anchor's side, 1 for the second.
    pub side: usize,
    pub to_first: f64,
    pub to_second: f64,
}

/// One split of the divisive build.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitRecord {
    pub node: NodeId,
    /// The two largest core clusters in the node; the first is larger (or
    /// has the smaller id on equal size).
    pub anchors: [usize; 2],
    pub placements: Vec<Placement>,
}

/// Divisive build over core clusters. See [`build_tree_traced`].
pub fn build_tree<K: DistributionalKernel>(cores: &CoreClusterSet, kernel: &K) -> Result<Dendrogram> {
    build_tree_traced(cores, kernel).map(|(t, _)| t)
}

/// Splits every leaf holding more than one core cluster around its two
/// largest clusters until each leaf holds one. Every other cluster joins the
/// anchor with the higher distributional-kernel similarity (the first anchor
/// on ties); anchors stay on their own side.
pub fn build_tree_traced<K: DistributionalKernel>(cores: &CoreClusterSet, kernel: &K) -> Result<(Dendrogram, Vec<SplitRecord>)> {
    let k = cores.k();
    if k < 2 {
        return invalid_arg("building a tree needs at least two core clusters");
    }
    let embeddings = cores.clusters.iter().map(|c| kernel.embed(c)).collect::<Result<Vec<_>>>()?;
    let sizes = cores.sizes();

    let mut tree = Dendrogram::new(k);
    let mut records = Vec::new();
    while tree.num_leaves() < k {
        for leaf in tree.leaves() {
            let members = tree.node(leaf).clusters.clone();
            if members.len() < 2 {
                continue;
            }
            let mut by_size = members.clone();
            by_size.sort_by(|&a, &b| sizes[b].cmp(&sizes[a]).then(a.cmp(&b)));
            let anchors = [by_size[0], by_size[1]];

            let mut sides: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
            let mut placements = Vec::with_capacity(members.len());
            for &g in &members {
                let to_first = kernel.similarity(&embeddings[g], &embeddings[anchors[0]]);
                let to_second = kernel.similarity(&embeddings[g], &embeddings[anchors[1]]);
                let side = if g == anchors[0] {
                    0
                } else if g == anchors[1] {
                    1
                } else {
                    usize::from(to_second > to_first)
                };
                sides[side].push(g);
                placements.push(Placement {
                    cluster: g,
                    side,
                    to_first,
                    to_second,
                });
            }
            let [left, right] = sides;
            tree.split(leaf, left, right)?;
            records.push(SplitRecord {
                node: leaf,
                anchors,
                placements,
            });
        }
    }
    Ok((tree, records))
}
