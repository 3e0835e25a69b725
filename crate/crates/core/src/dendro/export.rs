use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Dendrogram, NodeId};
use crate::error::{Error, Result};

pub const TREE_FORMAT_VERSION: u32 = 1;

/// One node of an exported dendrogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeRecord {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub children: Option<[NodeId; 2]>,
    pub cluster_ids: Vec<usize>,
    pub split_order: Option<usize>,
    /// Embedding distance between the two children, when known.
    pub alpha: Option<f64>,
    pub point_count: Option<usize>,
    /// Dataset rows, leaves only.
    pub points: Option<Vec<usize>>,
}

/// JSON form of a dendrogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DendrogramDocument {
    pub format_version: u32,
    pub algorithm: String,
    pub num_clusters: usize,
    pub num_points: usize,
    pub nodes: Vec<NodeRecord>,
    pub cluster_points: Option<Vec<Vec<usize>>>,
}

impl DendrogramDocument {
    pub fn from_tree(tree: &Dendrogram, algorithm: &str, alphas: Option<&HashMap<NodeId, f64>>) -> Result<Self> {
        let finalized = tree.is_finalized();
        let mut nodes = Vec::new();
        for id in tree.preorder() {
            let n = tree.node(id);
            let (point_count, points) = if finalized {
                let pts = tree.node_points(id)?;
                let count = pts.len();
                (Some(count), n.children.is_none().then_some(pts))
            } else {
                (None, None)
            };
            nodes.push(NodeRecord {
                id,
                parent: n.parent,
                children: n.children,
                cluster_ids: n.clusters.clone(),
                split_order: n.split_order,
                alpha: alphas.and_then(|a| a.get(&id).copied()),
                point_count,
                points,
            });
        }
        Ok(Self {
            format_version: TREE_FORMAT_VERSION,
            algorithm: algorithm.to_string(),
            num_clusters: tree.num_clusters(),
            num_points: tree.num_points(),
            nodes,
            cluster_points: tree.cluster_points.clone(),
        })
    }

    /// Rebuilds the tree by replaying its splits in order.
    pub fn to_tree(&self) -> Result<Dendrogram> {
        if self.format_version != TREE_FORMAT_VERSION {
            return Err(Error::InvalidData(format!(
                "unsupported tree format version {}",
                self.format_version
            )));
        }
        let by_id: HashMap<NodeId, &NodeRecord> = self.nodes.iter().map(|n| (n.id, n)).collect();
        let root = self
            .nodes
            .iter()
            .find(|n| n.parent.is_none())
            .ok_or_else(|| Error::InvalidData("tree has no root".into()))?;
        let mut internal: Vec<&NodeRecord> = self.nodes.iter().filter(|n| n.children.is_some()).collect();
        internal.sort_by_key(|n| n.split_order);

        let mut tree = Dendrogram::new(self.num_clusters);
        let mut mapped: HashMap<NodeId, NodeId> = HashMap::from([(root.id, Dendrogram::ROOT)]);
        for rec in internal {
            let [l, r] = rec.children.expect("filtered");
            let target = *mapped
                .get(&rec.id)
                .ok_or_else(|| Error::InvalidData(format!("node {} split before its parent", rec.id)))?;
            let side = |id: NodeId| {
                by_id
                    .get(&id)
                    .map(|n| n.cluster_ids.clone())
                    .ok_or_else(|| Error::InvalidData(format!("missing node {id}")))
            };
            let [nl, nr] = tree.split(target, side(l)?, side(r)?)?;
            mapped.insert(l, nl);
            mapped.insert(r, nr);
        }
        if let Some(cp) = &self.cluster_points {
            tree.finalize(cp.clone(), self.num_points)?;
        }
        Ok(tree)
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        serde_json::to_writer_pretty(BufWriter::new(File::create(path)?), self)?;
        Ok(())
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }
}

impl Dendrogram {
    /// Newick string whose leaves are named by their cluster ids
    /// (`C0`, or `C1+C4` for a merged leaf) and, once finalized, their
    /// point counts (`C0_n120`).
    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        self.write_newick(Self::ROOT, &mut out);
        out.push(';');
        out
    }

    fn write_newick(&self, id: NodeId, out: &mut String) {
        let node = self.node(id);
        match node.children {
            Some([l, r]) => {
                out.push('(');
                self.write_newick(l, out);
                out.push(',');
                self.write_newick(r, out);
                out.push(')');
            }
            None => {
                let name: Vec<String> = node.clusters.iter().map(|c| format!("C{c}")).collect();
                out.push_str(&name.join("+"));
                if let Ok(pts) = self.node_points(id) {
                    let _ = write!(out, "_n{}", pts.len());
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Dendrogram {
        let mut t = Dendrogram::new(3);
        let [_, r] = t.split(0, vec![1], vec![0, 2]).unwrap();
        t.split(r, vec![0], vec![2]).unwrap();
        t
    }

    #[test]
    fn newick_names() {
        let mut t = sample();
        assert_eq!(t.to_newick(), "(C1,(C0,C2));");
        t.finalize(vec![vec![0], vec![1, 2], vec![3, 4, 5]], 6).unwrap();
        assert_eq!(t.to_newick(), "(C1_n2,(C0_n1,C2_n3));");
        let merged = t.contract(3, 4).unwrap();
        assert_eq!(merged.to_newick(), "(C1_n2,C0+C2_n4);");
    }

    #[test]
    fn document_rebuilds_tree() {
        let mut t = sample();
        t.finalize(vec![vec![0], vec![1, 2], vec![3, 4, 5]], 6).unwrap();
        let alphas = HashMap::from([(0, 0.5)]);
        let doc = DendrogramDocument::from_tree(&t, "test", Some(&alphas)).unwrap();
        assert_eq!(doc.nodes[0].alpha, Some(0.5));
        assert_eq!(doc.nodes.iter().filter(|n| n.points.is_some()).count(), 3);
        let back = doc.to_tree().unwrap();
        assert_eq!(back, t);
    }
}
