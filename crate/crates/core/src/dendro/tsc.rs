use std::collections::HashMap;

use super::{Dendrogram, NodeId};
use crate::error::{invalid_arg, Error, Result};
use crate::ikernel::{DistributionEmbedding, DistributionalKernel, IsolationSpace};

/// Total similarity of clusters: the sum over leaves `C` and points `x` in
/// `C` of `K(delta(x), P_C)`. Empty leaves contribute nothing.
pub fn tsc<K: DistributionalKernel>(tree: &Dendrogram, kernel: &K) -> Result<f64> {
    if !tree.is_finalized() {
        return Err(Error::InvalidState("TSC needs a finalized dendrogram".into()));
    }
    let mut total = 0.0;
    for leaf in tree.leaves() {
        let pts = tree.node_points(leaf)?;
        if pts.is_empty() {
            continue;
        }
        let emb = kernel.embed(&pts)?;
        total += pts.iter().map(|&x| kernel.point_similarity(x, &emb)).sum::<f64>();
    }
    Ok(total)
}

/// [`tsc`] divided by the number of points.
pub fn tsc_local<K: DistributionalKernel>(tree: &Dendrogram, kernel: &K) -> Result<f64> {
    let total = tsc(tree, kernel)?;
    if tree.num_points() == 0 {
        return Err(Error::InvalidState("dendrogram holds no points".into()));
    }
    Ok(total / tree.num_points() as f64)
}

/// One contraction of two sibling leaves.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionStep {
    /// Parent that becomes a leaf.
    pub node: NodeId,
    pub children: [NodeId; 2],
    /// Distance between the two leaves' mean embeddings.
    pub alpha: f64,
    pub tsc_local_before: f64,
    pub tsc_local_after: f64,
}

/// Sub-dendrograms obtained by undoing splits, most recent first.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractionTrace {
    pub steps: Vec<ContractionStep>,
    /// `tsc_local_by_leaves[i]` belongs to the sub-dendrogram with
    /// `k - i` leaves.
    pub tsc_local_by_leaves: Vec<f64>,
}

impl ContractionTrace {
    pub fn alpha_max(&self) -> f64 {
        self.steps.iter().map(|s| s.alpha).fold(0.0, f64::max)
    }

    /// Alpha keyed by the split node it undoes.
    pub fn alphas(&self) -> HashMap<NodeId, f64> {
        self.steps.iter().map(|s| (s.node, s.alpha)).collect()
    }
}

// Mean embedding with its support size; `None` for an empty node.
#[derive(Clone)]
struct Cached(Option<DistributionEmbedding>);

impl Cached {
    fn merged(&self, other: &Cached) -> Result<Cached> {
        Ok(match (&self.0, &other.0) {
            (Some(a), Some(b)) => Cached(Some(a.merged(b)?)),
            (Some(a), None) | (None, Some(a)) => Cached(Some(a.clone())),
            (None, None) => Cached(None),
        })
    }

    fn distance(&self, other: &Cached) -> f64 {
        match (&self.0, &other.0) {
            (Some(a), Some(b)) => a.distance(b),
            (Some(a), None) | (None, Some(a)) => a.norm(),
            (None, None) => 0.0,
        }
    }
}

/// Undoes the splits of `tree` in reverse construction order, down to a
/// single leaf.
///
/// Leaf embeddings are cached and merged through the weighted-mean identity
/// `(n1 P1 + n2 P2) / (n1 + n2)`; TSC values are evaluated directly on each
/// sub-dendrogram.
pub fn contraction_trace(tree: &Dendrogram, space: &IsolationSpace) -> Result<ContractionTrace> {
    let mut cache: HashMap<NodeId, Cached> = HashMap::new();
    for leaf in tree.leaves() {
        let pts = tree.node_points(leaf)?;
        let emb = if pts.is_empty() { None } else { Some(space.embed(&pts)?) };
        cache.insert(leaf, Cached(emb));
    }
    let mut current = tree.clone();
    let mut before = tsc_local(&current, space)?;
    let mut tsc_local_by_leaves = vec![before];
    let mut steps = Vec::new();
    for node in tree.splits_in_order().into_iter().rev() {
        let children = tree.node(node).children.expect("split nodes have children");
        let (a, b) = (&cache[&children[0]], &cache[&children[1]]);
        let alpha = a.distance(b);
        let merged = a.merged(b)?;
        cache.insert(node, merged);
        current = current.contract(children[0], children[1])?;
        let after = tsc_local(&current, space)?;
        steps.push(ContractionStep {
            node,
            children,
            alpha,
            tsc_local_before: before,
            tsc_local_after: after,
        });
        tsc_local_by_leaves.push(after);
        before = after;
    }
    Ok(ContractionTrace {
        steps,
        tsc_local_by_leaves,
    })
}

/// Average of `tsc_local` over the sub-dendrograms with `p..=k` leaves
/// produced by [`contraction_trace`].
pub fn tsc_global_p(tree: &Dendrogram, p: usize, space: &IsolationSpace) -> Result<f64> {
    let k = tree.num_leaves();
    if p < 1 || p > k {
        return invalid_arg(format!("p must lie in [1, {k}], got {p}"));
    }
    let trace = contraction_trace(tree, space)?;
    let terms = &trace.tsc_local_by_leaves[..=k - p];
    Ok(terms.iter().sum::<f64>() / terms.len() as f64)
}
