//! Binary dendrograms over core-cluster ids.
//!
//! Nodes live in an arena and keep stable ids through contraction, so a
//! contraction sequence can be replayed against the original tree. Every
//! node records the core clusters below it; once finalized, each core
//! cluster id maps to a set of dataset rows.

mod ahc;
mod export;
mod purity;
mod tsc;

pub use ahc::{ahc_build, ahc_from_similarity};
pub use export::{DendrogramDocument, NodeRecord, TREE_FORMAT_VERSION};
pub use purity::dendrogram_purity;
pub use tsc::{contraction_trace, tsc, tsc_global_p, tsc_local, ContractionStep, ContractionTrace};

use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    /// Sorted core-cluster ids below this node.
    pub clusters: Vec<usize>,
    pub parent: Option<NodeId>,
    pub children: Option<[NodeId; 2]>,
    /// Rank of this node's split in construction order.
    pub split_order: Option<usize>,
    /// False once the node has been removed by a contraction.
    pub attached: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dendrogram {
    nodes: Vec<Node>,
    num_clusters: usize,
    splits: usize,
    cluster_points: Option<Vec<Vec<usize>>>,
    num_points: usize,
}

impl Dendrogram {
    /// Single-node tree whose root holds core clusters `0..num_clusters`.
    pub fn new(num_clusters: usize) -> Self {
        Self {
            nodes: vec![Node {
                clusters: (0..num_clusters).collect(),
                parent: None,
                children: None,
                split_order: None,
                attached: true,
            }],
            num_clusters,
            splits: 0,
            cluster_points: None,
            num_points: 0,
        }
    }

    pub const ROOT: NodeId = 0;

    pub fn num_clusters(&self) -> usize {
        self.num_clusters
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id].children.is_none()
    }

    /// Splits leaf `node` into two children holding `left` and `right`.
    pub fn split(&mut self, node: NodeId, left: Vec<usize>, right: Vec<usize>) -> Result<[NodeId; 2]> {
        if node >= self.nodes.len() || !self.nodes[node].attached {
            return invalid_arg(format!("node {node} is not part of the tree"));
        }
        if !self.is_leaf(node) {
            return invalid_arg(format!("node {node} is already split"));
        }
        if left.is_empty() || right.is_empty() {
            return invalid_arg("both sides of a split must be nonempty");
        }
        let mut l = left;
        let mut r = right;
        l.sort_unstable();
        r.sort_unstable();
        let mut union: Vec<usize> = l.iter().chain(&r).copied().collect();
        union.sort_unstable();
        if union != self.nodes[node].clusters {
            return invalid_arg("split sides must partition the node's clusters");
        }
        let ids = [self.nodes.len(), self.nodes.len() + 1];
        for side in [l, r] {
            self.nodes.push(Node {
                clusters: side,
                parent: Some(node),
                children: None,
                split_order: None,
                attached: true,
            });
        }
        self.nodes[node].children = Some(ids);
        self.nodes[node].split_order = Some(self.splits);
        self.splits += 1;
        Ok(ids)
    }

    /// Attached nodes in pre-order, left child first.
    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![Self::ROOT];
        while let Some(id) = stack.pop() {
            out.push(id);
            if let Some([l, r]) = self.nodes[id].children {
                stack.push(r);
                stack.push(l);
            }
        }
        out
    }

    /// Leaves, left to right.
    pub fn leaves(&self) -> Vec<NodeId> {
        self.preorder().into_iter().filter(|&id| self.is_leaf(id)).collect()
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves().len()
    }

    /// Internal nodes ordered by when they were split.
    pub fn splits_in_order(&self) -> Vec<NodeId> {
        let mut internal: Vec<NodeId> = self.preorder().into_iter().filter(|&id| !self.is_leaf(id)).collect();
        internal.sort_by_key(|&id| self.nodes[id].split_order);
        internal
    }

    pub fn depth(&self, mut id: NodeId) -> usize {
        let mut d = 0;
        while let Some(p) = self.nodes[id].parent {
            d += 1;
            id = p;
        }
        d
    }

    /// Cluster-id sets of all attached nodes; two trees over the same
    /// clusters have the same topology exactly when these sets agree.
    pub fn clades(&self) -> BTreeSet<Vec<usize>> {
        self.preorder().into_iter().map(|id| self.nodes[id].clusters.clone()).collect()
    }

    pub fn same_topology(&self, other: &Dendrogram) -> bool {
        self.clades() == other.clades()
    }

    /// Merges sibling leaves `a` and `b` back into their parent, which
    /// becomes a leaf.
    pub fn contract(&self, a: NodeId, b: NodeId) -> Result<Dendrogram> {
        let n = self.nodes.len();
        if a >= n || b >= n || !self.nodes[a].attached || !self.nodes[b].attached {
            return invalid_arg("contraction arguments must be nodes of the tree");
        }
        let parent = match (self.nodes[a].parent, self.nodes[b].parent) {
            (Some(p), Some(q)) if p == q && a != b => p,
            _ => return invalid_arg(format!("nodes {a} and {b} are not siblings")),
        };
        if !self.is_leaf(a) || !self.is_leaf(b) {
            return invalid_arg(format!("nodes {a} and {b} must both be leaves"));
        }
        let mut out = self.clone();
        out.nodes[parent].children = None;
        out.nodes[parent].split_order = None;
        out.nodes[a].attached = false;
        out.nodes[b].attached = false;
        Ok(out)
    }

    /// Assigns dataset rows to core clusters; the per-cluster sets must
    /// partition `0..num_points`.
    pub fn finalize(&mut self, cluster_points: Vec<Vec<usize>>, num_points: usize) -> Result<()> {
        if cluster_points.len() != self.num_clusters {
            return invalid_arg(format!(
                "expected point sets for {} clusters, got {}",
                self.num_clusters,
                cluster_points.len()
            ));
        }
        let mut seen = vec![false; num_points];
        for pts in &cluster_points {
            for &p in pts {
                if p >= num_points || seen[p] {
                    return invalid_arg(format!("point {p} is out of range or assigned twice"));
                }
                seen[p] = true;
            }
        }
        if let Some(p) = seen.iter().position(|s| !s) {
            return invalid_arg(format!("point {p} is not assigned to any cluster"));
        }
        self.cluster_points = Some(cluster_points);
        self.num_points = num_points;
        Ok(())
    }

    pub fn is_finalized(&self) -> bool {
        self.cluster_points.is_some()
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    fn finalized_points(&self) -> Result<&Vec<Vec<usize>>> {
        self.cluster_points
            .as_ref()
            .ok_or_else(|| Error::InvalidState("dendrogram has not been finalized".into()))
    }

    pub fn cluster_points(&self, cluster: usize) -> Result<&[usize]> {
        Ok(&self.finalized_points()?[cluster])
    }

    /// Dataset rows under `node`, ascending.
    pub fn node_points(&self, node: NodeId) -> Result<Vec<usize>> {
        let cp = self.finalized_points()?;
        let mut pts: Vec<usize> = self.nodes[node].clusters.iter().flat_map(|&c| cp[c].iter().copied()).collect();
        pts.sort_unstable();
        Ok(pts)
    }

    /// Leaf index (position in [`leaves`](Self::leaves)) of every point.
    pub fn leaf_assignment(&self) -> Result<Vec<usize>> {
        let cp = self.finalized_points()?;
        let mut out = vec![usize::MAX; self.num_points];
        for (li, leaf) in self.leaves().into_iter().enumerate() {
            for &c in &self.nodes[leaf].clusters {
                for &p in &cp[c] {
                    out[p] = li;
                }
            }
        }
        Ok(out)
    }

    /// Checks the structural invariants of the attached tree.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidState(m));
        let root = &self.nodes[Self::ROOT];
        if root.clusters != (0..self.num_clusters).collect::<Vec<_>>() {
            return bad("root must hold every cluster".into());
        }
        let mut leaf_clusters = HashSet::new();
        for id in self.preorder() {
            let node = &self.nodes[id];
            match node.children {
                Some([l, r]) => {
                    let mut u: Vec<usize> = self.nodes[l].clusters.iter().chain(&self.nodes[r].clusters).copied().collect();
                    u.sort_unstable();
                    if u != node.clusters || self.nodes[l].clusters.is_empty() || self.nodes[r].clusters.is_empty() {
                        return bad(format!("node {id} is not the disjoint union of its children"));
                    }
                }
                None => {
                    if node.clusters.is_empty() {
                        return bad(format!("leaf {id} holds no cluster"));
                    }
                    for &c in &node.clusters {
                        if !leaf_clusters.insert(c) {
                            return bad(format!("cluster {c} appears in two leaves"));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
