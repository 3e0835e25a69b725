use std::collections::BTreeSet;

use hkc::data::{generate_mixture, paper_analog_spec, PAPER_ANALOG_SEED};
use hkc::dendro::dendrogram_purity;
use hkc::matrix::squared_euclidean;
use hkc::{bisect_kmeans, BisectConfig, Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn group_sse(data: &Matrix, rows: &[usize]) -> f64 {
    let d = data.ncols();
    let mean: Vec<f64> = (0..d).map(|c| rows.iter().map(|&r| data.row(r)[c]).sum::<f64>() / rows.len() as f64).collect();
    rows.iter().map(|&r| squared_euclidean(data.row(r), &mean)).sum()
}

#[test]
fn two_blobs_match_exhaustive_split() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut rows = Vec::new();
    for i in 0..12 {
        let (cx, cy) = if i < 6 { (0.0, 4.0) } else { (4.0, 0.0) };
        rows.push(vec![cx + rng.random_range(-0.5..0.5), cy + rng.random_range(-0.5..0.5)]);
    }
    let data = Matrix::from_rows(&rows).unwrap();
    let result = bisect_kmeans(&data, &BisectConfig::new(2)).unwrap();

    let mut best = (f64::INFINITY, 0u32);
    for mask in 1u32..(1 << 11) {
        let a: Vec<usize> = (0..12).filter(|&i| mask >> i & 1 == 1).collect();
        let b: Vec<usize> = (0..12).filter(|&i| mask >> i & 1 == 0).collect();
        let s = group_sse(&data, &a) + group_sse(&data, &b);
        if s < best.0 {
            best = (s, mask);
        }
    }
    assert!((result.splits[0].sse - best.0).abs() < 1e-9);
    let side = |i: usize| best.1 >> i & 1;
    for i in 0..12 {
        for j in 0..12 {
            assert_eq!(result.assignments[i] == result.assignments[j], side(i) == side(j));
        }
    }
    assert_eq!(result.assignments[0..6].iter().collect::<BTreeSet<_>>().len(), 1);
}

#[test]
fn k_equal_n_gives_singleton_leaves() {
    let data = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![3.0], vec![7.0], vec![15.0]]).unwrap();
    let result = bisect_kmeans(&data, &BisectConfig::new(5)).unwrap();
    assert_eq!(result.tree.num_leaves(), 5);
    for leaf in result.tree.leaves() {
        assert_eq!(result.tree.node_points(leaf).unwrap().len(), 1);
    }
    assert!(result.warnings.is_empty());
    assert!(bisect_kmeans(&data, &BisectConfig::new(6)).is_err());
}

#[test]
fn chosen_split_is_best_restart_and_partitions_parent() {
    let ds = generate_mixture(&paper_analog_spec(), PAPER_ANALOG_SEED).unwrap();
    let result = bisect_kmeans(&ds.points, &BisectConfig::new(6)).unwrap();
    assert_eq!(result.splits.len(), 5);
    for s in &result.splits {
        assert_eq!(s.restart_sse.len(), 10);
        assert!(s.restart_sse.iter().all(|&r| s.sse <= r));
        let [l, r] = result.tree.node(s.node).children.unwrap();
        let lp = result.tree.node_points(l).unwrap();
        let rp = result.tree.node_points(r).unwrap();
        assert!(!lp.is_empty() && !rp.is_empty());
        assert_eq!(lp.len() + rp.len(), s.size);
        let mut joined: Vec<usize> = lp.into_iter().chain(rp).collect();
        joined.sort_unstable();
        assert_eq!(joined, result.tree.node_points(s.node).unwrap());
    }
    result.tree.validate().unwrap();
}

#[test]
fn l_shape_is_cut_on_the_paper_analog() {
    let ds = generate_mixture(&paper_analog_spec(), PAPER_ANALOG_SEED).unwrap();
    let labels = ds.labels.clone().unwrap();
    let result = bisect_kmeans(&ds.points, &BisectConfig::new(6)).unwrap();
    let tree = &result.tree;
    let l_label = 3;
    let l_points: BTreeSet<usize> = (0..ds.len()).filter(|&i| labels[i] == l_label).collect();

    // Some internal node sends L points to both children while also holding
    // points of other classes.
    let cut = tree.preorder().into_iter().any(|id| {
        let Some([a, b]) = tree.node(id).children else { return false };
        let pa = tree.node_points(a).unwrap();
        let pb = tree.node_points(b).unwrap();
        let mixed = pa.iter().chain(&pb).any(|p| !l_points.contains(p));
        pa.iter().any(|p| l_points.contains(p)) && pb.iter().any(|p| l_points.contains(p)) && mixed
    });
    assert!(cut);
    assert!(dendrogram_purity(tree, &labels).unwrap() <= 0.9);
}

#[test]
fn deterministic_given_seed() {
    let ds = generate_mixture(&paper_analog_spec(), 1).unwrap();
    let mut config = BisectConfig::new(4);
    config.seed = 5;
    let a = bisect_kmeans(&ds.points, &config).unwrap();
    let b = bisect_kmeans(&ds.points, &config).unwrap();
    assert_eq!(a.assignments, b.assignments);
    assert_eq!(a.tree, b.tree);
}
