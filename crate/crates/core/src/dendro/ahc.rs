use super::Dendrogram;
use crate::corecluster::CoreClusterSet;
use crate::error::{invalid_arg, Result};
use crate::ikernel::DistributionalKernel;

/// Agglomerative tree over core clusters: repeatedly merge the two nodes
/// with the largest single linkage `f(X, Y) = max K(P_Ci, P_Cj)`.
pub fn ahc_build<K: DistributionalKernel>(cores: &CoreClusterSet, kernel: &K) -> Result<Dendrogram> {
    if cores.k() < 2 {
        return invalid_arg("agglomeration needs at least two core clusters");
    }
    let embeddings = cores.clusters.iter().map(|c| kernel.embed(c)).collect::<Result<Vec<_>>>()?;
    let k = embeddings.len();
    let mut sim = vec![vec![0.0; k]; k];
    for i in 0..k {
        for j in i..k {
            let v = kernel.similarity(&embeddings[i], &embeddings[j]);
            sim[i][j] = v;
            sim[j][i] = v;
        }
    }
    ahc_from_similarity(&sim)
}

/// Single-linkage agglomeration from a symmetric cluster similarity matrix.
///
/// Nodes are ordered by their smallest cluster id; ties in linkage go to
/// the lexicographically smallest pair in that order. The resulting tree
/// records the last merge as its first split.
pub fn ahc_from_similarity(sim: &[Vec<f64>]) -> Result<Dendrogram> {
    let k = sim.len();
    if k < 2 {
        return invalid_arg("agglomeration needs at least two clusters");
    }
    if sim.iter().any(|row| row.len() != k) {
        return invalid_arg("similarity matrix must be square");
    }
    let linkage = |x: &[usize], y: &[usize]| {
        x.iter()
            .flat_map(|&i| y.iter().map(move |&j| sim[i][j]))
            .fold(f64::NEG_INFINITY, f64::max)
    };

    let mut active: Vec<Vec<usize>> = (0..k).map(|c| vec![c]).collect();
    let mut merges: Vec<(Vec<usize>, Vec<usize>)> = Vec::with_capacity(k - 1);
    while active.len() > 1 {
        let mut best = (0, 1, f64::NEG_INFINITY);
        for i in 0..active.len() {
            for j in i + 1..active.len() {
                let f = linkage(&active[i], &active[j]);
                if f > best.2 {
                    best = (i, j, f);
                }
            }
        }
        let (i, j, _) = best;
        let right = active.remove(j);
        let left = active.remove(i);
        let mut union: Vec<usize> = left.iter().chain(&right).copied().collect();
        union.sort_unstable();
        merges.push((left, right));
        active.push(union);
        active.sort_by_key(|c| c[0]);
    }

    let mut tree = Dendrogram::new(k);
    for (left, right) in merges.into_iter().rev() {
        let mut union: Vec<usize> = left.iter().chain(&right).copied().collect();
        union.sort_unstable();
        let node = tree
            .leaves()
            .into_iter()
            .find(|&l| tree.node(l).clusters == union)
            .expect("every merge result is a leaf when its split is replayed");
        tree.split(node, left, right)?;
    }
    Ok(tree)
}
