use super::Dendrogram;
use crate::error::{invalid_arg, Error, Result};

/// Dendrogram purity: the average, over pairs of distinct points sharing a
/// label, of the fraction of that label among the points under the pair's
/// least common ancestor.
///
/// Pairs are grouped by their LCA: a leaf is the LCA of the pairs inside it,
/// and an internal node is the LCA of the pairs split across its children.
pub fn dendrogram_purity(tree: &Dendrogram, labels: &[usize]) -> Result<f64> {
    if !tree.is_finalized() {
        return Err(Error::InvalidState("purity needs a finalized dendrogram".into()));
    }
    if labels.len() != tree.num_points() {
        return invalid_arg(format!(
            "{} labels for {} points",
            labels.len(),
            tree.num_points()
        ));
    }
    let num_labels = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut totals = vec![0u64; num_labels];
    for &l in labels {
        totals[l] += 1;
    }
    let pair_count: u64 = totals.iter().map(|&c| c * c.saturating_sub(1) / 2).sum();
    if pair_count == 0 {
        return invalid_arg("no two points share a label");
    }

    let order = tree.preorder();
    let mut counts: Vec<Option<Vec<u64>>> = vec![None; tree.num_nodes()];
    let mut weighted = 0.0;
    for &id in order.iter().rev() {
        let (here, pairs): (Vec<u64>, Vec<u64>) = match tree.node(id).children {
            None => {
                let mut c = vec![0u64; num_labels];
                for p in tree.node_points(id)? {
                    c[labels[p]] += 1;
                }
                let pairs = c.iter().map(|&x| x * x.saturating_sub(1) / 2).collect();
                (c, pairs)
            }
            Some([l, r]) => {
                let lc = counts[l].take().expect("children visited first");
                let rc = counts[r].take().expect("children visited first");
                let pairs = lc.iter().zip(&rc).map(|(a, b)| a * b).collect();
                (lc.iter().zip(&rc).map(|(a, b)| a + b).collect(), pairs)
            }
        };
        let size: u64 = here.iter().sum();
        for (label, &n_pairs) in pairs.iter().enumerate() {
            if n_pairs > 0 {
                weighted += n_pairs as f64 * (here[label] as f64 / size as f64);
            }
        }
        counts[id] = Some(here);
    }
    Ok(weighted / pair_count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_leaves() {
        let mut t = Dendrogram::new(2);
        t.split(0, vec![0], vec![1]).unwrap();
        t.finalize(vec![vec![0, 1, 2], vec![3, 4]], 5).unwrap();
        assert_eq!(dendrogram_purity(&t, &[0, 0, 0, 1, 1]).unwrap(), 1.0);
    }

    #[test]
    fn single_leaf_two_balanced_classes() {
        let mut t = Dendrogram::new(1);
        t.finalize(vec![(0..6).collect()], 6).unwrap();
        assert_eq!(dendrogram_purity(&t, &[0, 0, 0, 1, 1, 1]).unwrap(), 0.5);
    }

    #[test]
    fn errors() {
        let mut t = Dendrogram::new(1);
        assert!(dendrogram_purity(&t, &[0]).is_err());
        t.finalize(vec![vec![0, 1]], 2).unwrap();
        assert!(dendrogram_purity(&t, &[0, 1]).is_err(), "all labels distinct");
        assert!(dendrogram_purity(&t, &[0]).is_err(), "length mismatch");
    }
}
