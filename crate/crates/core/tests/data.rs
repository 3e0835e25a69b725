use std::fs;

use hkc::data::{
    ari, generate_mixture, load_assignments, load_csv, load_graph, nmi, paper_analog_spec, save_assignments, save_csv,
    wl_embed, AttributedGraph, Component, LabeledDataset, MixtureSpec, PAPER_ANALOG_SEED,
};
use hkc::{Error, Matrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn single_gaussian_has_one_label() {
    let spec = MixtureSpec {
        name: "g".into(),
        components: vec![Component::Gaussian {
            n: 50,
            mean: vec![1.0, 2.0, 3.0],
            std: vec![0.5, 0.5, 0.5],
        }],
    };
    let ds = generate_mixture(&spec, 0).unwrap();
    assert_eq!(ds.len(), 50);
    assert_eq!(ds.dim(), 3);
    assert!(ds.labels.unwrap().iter().all(|&l| l == 0));
    let bad = MixtureSpec {
        name: "bad".into(),
        components: vec![Component::Gaussian {
            n: 5,
            mean: vec![0.0],
            std: vec![-1.0],
        }],
    };
    assert!(matches!(generate_mixture(&bad, 0), Err(Error::InvalidArgument(_))));
}

#[test]
fn paper_analog_layout() {
    let spec = paper_analog_spec();
    let ds = generate_mixture(&spec, PAPER_ANALOG_SEED).unwrap();
    assert_eq!(ds.len(), 3000);
    assert_eq!(ds.label_counts().unwrap(), spec.components.iter().map(Component::size).collect::<Vec<_>>());
    assert_eq!(ds, generate_mixture(&spec, PAPER_ANALOG_SEED).unwrap());
    assert_ne!(ds.points, generate_mixture(&spec, PAPER_ANALOG_SEED + 1).unwrap().points);
    assert_eq!(spec.scaled(2).total_size(), 6000);
    // Gaussian spreads grow roughly 1:4:16 in variance.
    let stds: Vec<f64> = spec.components[..3]
        .iter()
        .map(|c| match c {
            Component::Gaussian { std, .. } => std[0],
            _ => panic!("expected gaussian"),
        })
        .collect();
    assert!((stds[1] / stds[0]).powi(2) >= 3.0 && (stds[2] / stds[1]).powi(2) >= 3.0);
}

#[test]
fn csv_round_trip_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let rows: Vec<Vec<f64>> = (0..40).map(|_| (0..3).map(|_| rng.random_range(-1e3..1e3) / 7.0).collect()).collect();
    let labels: Vec<usize> = (0..40).map(|i| i % 3).collect();
    let ds = LabeledDataset::new(Matrix::from_rows(&rows).unwrap(), Some(labels), "rt").unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rt.csv");
    save_csv(&path, &ds).unwrap();
    let back = load_csv(&path, Some("label")).unwrap();
    assert_eq!(back.points, ds.points);
    assert_eq!(back.labels, ds.labels);
    assert_eq!(back.name, "rt");
}

#[test]
fn csv_with_string_labels() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("iris.csv");
    let mut text = String::from("a,b,c,d,species\n");
    for i in 0..150 {
        let name = ["setosa", "versicolor", "virginica"][i / 50];
        text.push_str(&format!("{},{},{},{},{name}\n", i, i as f64 * 0.5, 1.0, -2.5));
    }
    fs::write(&path, text).unwrap();
    let ds = load_csv(&path, Some("species")).unwrap();
    assert_eq!((ds.len(), ds.dim()), (150, 4));
    assert_eq!(ds.label_counts().unwrap(), vec![50, 50, 50]);
    assert!(matches!(load_csv(&path, Some("class")), Err(Error::Parse { .. })));
    assert!(matches!(load_csv(&path, None), Err(Error::Parse { row: 2, column: 5, .. })));
}

#[test]
fn csv_errors() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    fs::write(&bad, "x,y\n1,2\n3,oops\n").unwrap();
    match load_csv(&bad, None) {
        Err(Error::Parse { row, column, .. }) => assert_eq!((row, column), (3, 2)),
        other => panic!("unexpected {other:?}"),
    }
    let empty = dir.path().join("empty.csv");
    fs::write(&empty, "").unwrap();
    assert!(load_csv(&empty, None).is_err());
    let header_only = dir.path().join("h.csv");
    fs::write(&header_only, "x,y\n").unwrap();
    assert!(load_csv(&header_only, None).is_err());
    assert!(load_csv(dir.path().join("missing.csv"), None).is_err());
}

#[test]
fn assignments_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let a = vec![Some(0), None, Some(3), Some(1)];
    save_assignments(&path, &a).unwrap();
    assert_eq!(load_assignments(&path).unwrap(), a);
}

#[test]
fn flat_metrics() {
    let labels = [0, 0, 1, 1, 2, 2];
    assert!((nmi(&labels, &labels).unwrap() - 1.0).abs() < 1e-12);
    assert!((ari(&labels, &labels).unwrap() - 1.0).abs() < 1e-12);
    let renamed = [5, 5, 3, 3, 9, 9];
    assert!((ari(&renamed, &labels).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(ari(&[0; 4], &[0, 0, 1, 1]).unwrap(), 0.0);
    assert!(nmi(&[0, 1], &[0]).is_err());
    assert!(ari(&[0, 1], &[0]).is_err());

    // Contingency [[3,1],[1,3]].
    let a = [0, 0, 0, 0, 1, 1, 1, 1];
    let b = [0, 0, 0, 1, 1, 1, 1, 0];
    // index 6, expected 144/28 = 36/7, max 12: ARI = (6 - 36/7) / (12 - 36/7) = 1/8.
    assert!((ari(&a, &b).unwrap() - 0.125).abs() < 1e-12);
    let h = std::f64::consts::LN_2;
    let mi = 0.75 * (1.5f64).ln() + 0.25 * (0.5f64).ln();
    assert!((nmi(&a, &b).unwrap() - mi / h).abs() < 1e-12);
}

fn random_graph(seed: u64, n: usize, m: usize) -> AttributedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..m).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    let mut g = AttributedGraph::new(Matrix::from_rows(&rows).unwrap());
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(0.4) {
                g.add_edge(u, v, Some(rng.random_range(0.5..2.0))).unwrap();
            }
        }
    }
    g
}

#[test]
fn wl_base_cases() {
    let g = random_graph(1, 5, 3);
    let e = wl_embed(&g, 0);
    assert_eq!(e.vertices, *g.attributes());

    let mut two = AttributedGraph::new(Matrix::from_rows(&[vec![1.0, 4.0], vec![3.0, -2.0]]).unwrap());
    two.add_edge(0, 1, None).unwrap();
    let e = wl_embed(&two, 1);
    assert_eq!(&e.vertices.row(0)[2..], &[2.0, 1.0]);
    assert_eq!(&e.vertices.row(1)[2..], &[2.0, 1.0]);
    assert_eq!(e.graph, vec![2.0, 1.0, 2.0, 1.0]);

    let lone = AttributedGraph::new(Matrix::from_rows(&[vec![7.0]]).unwrap());
    assert_eq!(wl_embed(&lone, 3).vertices.row(0), &[7.0; 4]);
    assert!(two.clone().add_edge(0, 2, None).is_err());
}

#[test]
fn wl_matches_dense_recursion() {
    let n = 6;
    let g = random_graph(2, n, 2);
    let mut w = vec![vec![0.0; n]; n];
    for (v, row) in w.iter_mut().enumerate() {
        for &(u, x) in g.neighbors(v) {
            row[u] = x;
        }
    }
    let mut a: Vec<Vec<f64>> = (0..n).map(|v| g.attributes().row(v).to_vec()).collect();
    let mut expected: Vec<Vec<f64>> = a.clone();
    for _ in 0..3 {
        let next: Vec<Vec<f64>> = (0..n)
            .map(|v| {
                let deg = w[v].iter().filter(|&&x| x != 0.0).count();
                (0..2)
                    .map(|c| {
                        let avg = if deg == 0 { a[v][c] } else { (0..n).map(|u| w[v][u] * a[u][c]).sum::<f64>() / deg as f64 };
                        0.5 * (a[v][c] + avg)
                    })
                    .collect()
            })
            .collect();
        for v in 0..n {
            expected[v].extend(&next[v]);
        }
        a = next;
    }
    let got = wl_embed(&g, 3);
    for v in 0..n {
        for (x, y) in got.vertices.row(v).iter().zip(&expected[v]) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn graph_files_load() {
    let dir = tempfile::tempdir().unwrap();
    let attrs = dir.path().join("a.csv");
    let edges = dir.path().join("e.txt");
    fs::write(&attrs, "f\n1\n2\n3\n").unwrap();
    fs::write(&edges, "# comment\n0 1\n1,2,0.5\n").unwrap();
    let g = load_graph(&attrs, &edges).unwrap();
    assert_eq!(g.num_vertices(), 3);
    assert_eq!(g.degree(1), 2);
    assert_eq!(g.neighbors(2), &[(1, 0.5)]);
    fs::write(&edges, "0 9\n").unwrap();
    assert!(load_graph(&attrs, &edges).is_err());
}

proptest! {
    #[test]
    fn wl_is_permutation_equivariant(seed in any::<u64>()) {
        let n = 6;
        let g = random_graph(seed, n, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, rng.random_range(0..=i));
        }
        let rows: Vec<Vec<f64>> = (0..n).map(|i| {
            let src = perm.iter().position(|&p| p == i).unwrap();
            g.attributes().row(src).to_vec()
        }).collect();
        let mut h = AttributedGraph::new(Matrix::from_rows(&rows).unwrap());
        for u in 0..n {
            for &(v, w) in g.neighbors(u) {
                if u < v {
                    h.add_edge(perm[u], perm[v], Some(w)).unwrap();
                }
            }
        }
        let eg = wl_embed(&g, 2);
        let eh = wl_embed(&h, 2);
        for v in 0..n {
            for (x, y) in eg.vertices.row(v).iter().zip(eh.vertices.row(perm[v])) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
        for (x, y) in eg.graph.iter().zip(&eh.graph) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }
}
