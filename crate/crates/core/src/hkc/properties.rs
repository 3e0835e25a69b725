use std::collections::HashSet;

use super::HkcResult;
use crate::error::Result;

/// Violations of the three structural properties of an H-KC dendrogram.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PropertyReport {
    /// A core cluster's points reach both children of some internal node.
    pub split_clusters: Vec<String>,
    /// A non-anchor cluster sits with the anchor it is less similar to.
    pub misplaced_clusters: Vec<String>,
    /// The leaves do not partition the dataset.
    pub partition_errors: Vec<String>,
}

impl PropertyReport {
    pub fn is_clean(&self) -> bool {
        self.split_clusters.is_empty() && self.misplaced_clusters.is_empty() && self.partition_errors.is_empty()
    }

    pub fn violations(&self) -> usize {
        self.split_clusters.len() + self.misplaced_clusters.len() + self.partition_errors.len()
    }
}

pub fn check_desired_properties(result: &HkcResult) -> Result<PropertyReport> {
    let tree = &result.tree;
    let mut report = PropertyReport::default();

    for id in tree.preorder() {
        let Some([l, r]) = tree.node(id).children else { continue };
        let left: HashSet<usize> = tree.node_points(l)?.into_iter().collect();
        let right: HashSet<usize> = tree.node_points(r)?.into_iter().collect();
        for &c in &tree.node(id).clusters {
            let pts = tree.cluster_points(c)?;
            let in_left = pts.iter().any(|p| left.contains(p));
            let in_right = pts.iter().any(|p| right.contains(p));
            if in_left && in_right {
                report.split_clusters.push(format!("cluster {c} spans both children of node {id}"));
            }
        }
    }

    for split in &result.splits {
        for p in &split.placements {
            if split.anchors.contains(&p.cluster) {
                continue;
            }
            let (own, other) = if p.side == 0 { (p.to_first, p.to_second) } else { (p.to_second, p.to_first) };
            if own < other {
                report
                    .misplaced_clusters
                    .push(format!("cluster {} at node {} prefers the other anchor", p.cluster, split.node));
            }
        }
    }

    let n = tree.num_points();
    let mut seen = vec![0usize; n];
    for leaf in tree.leaves() {
        for p in tree.node_points(leaf)? {
            seen[p] += 1;
        }
    }
    for (p, &c) in seen.iter().enumerate() {
        if c != 1 {
            report.partition_errors.push(format!("point {p} appears in {c} leaves"));
        }
    }
    if result.assignments.len() != n {
        report.partition_errors.push("assignment length differs from dataset size".into());
    }
    Ok(report)
}
