use hkc::ikernel::{
    fit_isolation_model, gdk_kernel, kernel_dist_dist, kernel_point_dist, kernel_point_point, median_bandwidth, rbf,
    DistributionalKernel, GaussianSpace, IsolationSpace, PartitioningModel,
};
use hkc::{Error, Matrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Matrix {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
    Matrix::from_rows(&rows).unwrap()
}

// Dense feature map by exhaustive scan over every center of every partitioning.
fn brute_feature(model: &PartitioningModel, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; model.t * model.psi];
    for (i, p) in model.partitions.iter().enumerate() {
        let dists: Vec<f64> = (0..model.psi)
            .map(|j| p.centers.row(j).iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
            .collect();
        let nearest = (0..model.psi).fold(0, |b, j| if dists[j] < dists[b] { j } else { b });
        if dists[nearest] <= p.radii[nearest] {
            out[i * model.psi + nearest] = 1.0 / (model.t as f64).sqrt();
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn model_structure_matches_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let data = random_matrix(&mut rng, 80, 3);
    let model = fit_isolation_model(&data, 16, 25, 9).unwrap();
    assert_eq!(model.partitions.len(), 25);
    for p in &model.partitions {
        assert_eq!(p.centers.nrows(), 16);
        let mut rows = p.sample_rows.clone();
        rows.sort_unstable();
        rows.dedup();
        assert_eq!(rows.len(), 16, "sampling is without replacement");
        for (j, &r) in p.sample_rows.iter().enumerate() {
            assert_eq!(p.centers.row(j), data.row(r));
            let nn = (0..16)
                .filter(|&o| o != j)
                .map(|o| p.centers.row(o).iter().zip(p.centers.row(j)).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt())
                .fold(f64::INFINITY, f64::min);
            assert!((nn - p.radii[j]).abs() <= 1e-15);
        }
    }
    model.validate().unwrap();
}

#[test]
fn fitting_is_bit_identical_for_a_seed() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let data = random_matrix(&mut rng, 60, 2);
    let a = fit_isolation_model(&data, 8, 40, 77).unwrap();
    let b = fit_isolation_model(&data, 8, 40, 77).unwrap();
    assert_eq!(a, b);
    let c = fit_isolation_model(&data, 8, 40, 78).unwrap();
    assert_ne!(a, c);
}

#[test]
fn fit_rejects_bad_input() {
    let data = Matrix::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
    assert!(matches!(fit_isolation_model(&data, 4, 10, 0), Err(Error::InvalidArgument(_))));
    assert!(matches!(fit_isolation_model(&data, 1, 10, 0), Err(Error::InvalidArgument(_))));
    assert!(matches!(fit_isolation_model(&data, 2, 0, 0), Err(Error::InvalidArgument(_))));
    let bad = Matrix::from_rows(&[vec![0.0], vec![f64::NAN]]).unwrap();
    assert!(matches!(fit_isolation_model(&bad, 2, 1, 0), Err(Error::InvalidData(_))));
}

#[test]
fn embed_point_matches_brute_force_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let d = rng.random_range(1..4);
        let data = random_matrix(&mut rng, 50, d);
        let model = fit_isolation_model(&data, rng.random_range(2..20), 30, rng.random()).unwrap();
        for _ in 0..10 {
            let x: Vec<f64> = (0..d).map(|_| rng.random_range(-1.5..1.5)).collect();
            let fv = model.embed_point(&x).unwrap();
            assert_eq!(fv.to_dense(), brute_feature(&model, &x));
            for block in 0..model.t {
                let in_block = fv.indices().iter().filter(|&&i| i as usize / model.psi == block).count();
                assert!(in_block <= 1);
            }
            assert!(fv.squared_norm() <= 1.0 + 1e-15);
        }
    }
}

#[test]
fn centers_are_covered_and_far_points_are_not() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let data = random_matrix(&mut rng, 30, 2);
    let model = fit_isolation_model(&data, 6, 10, 1).unwrap();
    let z = model.partitions[3].centers.row(2).to_vec();
    let fv = model.embed_point(&z).unwrap();
    assert!(fv.indices().contains(&((3 * 6 + 2) as u32)));
    let far = model.embed_point(&[50.0, 50.0]).unwrap();
    assert!(far.indices().is_empty());
    assert!(matches!(model.embed_point(&[0.0]), Err(Error::DimensionMismatch { expected: 2, got: 1 })));
}

#[test]
fn embed_distribution_is_the_mean_of_point_features() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let data = random_matrix(&mut rng, 40, 2);
    let model = fit_isolation_model(&data, 8, 20, 3).unwrap();
    let pts: Vec<Vec<f64>> = (0..10).map(|i| data.row(i * 3).to_vec()).collect();
    let emb = model.embed_distribution(&pts).unwrap();
    let mut mean = vec![0.0; model.feature_dim()];
    for p in &pts {
        for (m, v) in mean.iter_mut().zip(brute_feature(&model, p)) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= pts.len() as f64);
    assert_eq!(emb.values(), mean.as_slice());
    assert!(emb.norm() <= 1.0);

    let x = pts[0].clone();
    let single = model.embed_distribution(&[x.clone()]).unwrap();
    let double = model.embed_distribution(&[x.clone(), x.clone()]).unwrap();
    assert_eq!(single.values(), model.embed_point(&x).unwrap().to_dense().as_slice());
    assert_eq!(single.values(), double.values());
    let empty: Vec<Vec<f64>> = Vec::new();
    assert!(model.embed_distribution(&empty).is_err());
}

#[test]
fn point_to_distribution_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let data = random_matrix(&mut rng, 40, 2);
    let model = fit_isolation_model(&data, 8, 50, 3).unwrap();
    let x = data.row(0).to_vec();
    let fx = model.embed_point(&x).unwrap();
    let single = model.embed_distribution(&[x.clone()]).unwrap();
    assert!((kernel_point_dist(&fx, &single).unwrap() - fx.squared_norm()).abs() < 1e-15);

    let zero = model.embed_point(&[100.0, 100.0]).unwrap();
    let cluster = model.embed_distribution(&(0..10).map(|i| data.row(i).to_vec()).collect::<Vec<_>>()).unwrap();
    assert_eq!(kernel_point_dist(&zero, &cluster).unwrap(), 0.0);

    let members: Vec<Vec<f64>> = (5..15).map(|i| data.row(i).to_vec()).collect();
    let emb = model.embed_distribution(&members).unwrap();
    let brute: f64 =
        members.iter().map(|m| kernel_point_point(&fx, &model.embed_point(m).unwrap()).unwrap()).sum::<f64>() / 10.0;
    assert!((kernel_point_dist(&fx, &emb).unwrap() - brute).abs() < 1e-12);
}

#[test]
fn disjoint_supports_give_zero() {
    let data = Matrix::from_rows(&[vec![0.0], vec![0.1], vec![10.0], vec![10.1]]).unwrap();
    let model = fit_isolation_model(&data, 4, 20, 0).unwrap();
    let a = model.embed_distribution(&[vec![0.0], vec![0.1]]).unwrap();
    let b = model.embed_distribution(&[vec![10.0], vec![10.1]]).unwrap();
    assert_eq!(kernel_dist_dist(&a, &b).unwrap(), 0.0);
}

#[test]
fn space_agrees_with_model_embeddings() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let data = random_matrix(&mut rng, 50, 3);
    let model = fit_isolation_model(&data, 12, 30, 5).unwrap();
    let space = IsolationSpace::new(model.clone(), &data).unwrap();
    let members = [1, 4, 9, 16, 25];
    let emb = space.embed(&members).unwrap();
    let rows: Vec<Vec<f64>> = members.iter().map(|&i| data.row(i).to_vec()).collect();
    assert_eq!(&emb, &model.embed_distribution(&rows).unwrap());
    for x in 0..50 {
        let direct = kernel_point_dist(&model.embed_point(data.row(x)).unwrap(), &emb).unwrap();
        assert!((space.point_similarity(x, &emb) - direct).abs() < 1e-15);
    }
}

#[test]
fn gdk_matches_hand_rolled_double_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x = random_matrix(&mut rng, 5, 3);
    let y = random_matrix(&mut rng, 5, 3);
    let bw = 0.8;
    let mut s = 0.0;
    for i in 0..5 {
        for j in 0..5 {
            let d2: f64 = x.row(i).iter().zip(y.row(j)).map(|(a, b)| (a - b).powi(2)).sum();
            s += (-d2 / (2.0 * bw * bw)).exp();
        }
    }
    assert!((gdk_kernel(&x, &y, bw).unwrap() - s / 25.0).abs() < 1e-12);
    assert!(gdk_kernel(&x, &y, 0.0).is_err());
    assert!(gdk_kernel(&x, &y, -1.0).is_err());
    assert_eq!(rbf(x.row(0), x.row(0), bw), 1.0);

    let both = Matrix::from_rows(&(0..5).map(|i| x.row(i).to_vec()).chain((0..5).map(|i| y.row(i).to_vec())).collect::<Vec<_>>()).unwrap();
    let space = GaussianSpace::new(both, bw).unwrap();
    let a = space.embed(&[0, 1, 2, 3, 4]).unwrap();
    let b = space.embed(&[5, 6, 7, 8, 9]).unwrap();
    assert!((space.similarity(&a, &b) - s / 25.0).abs() < 1e-12);
}

#[test]
fn median_bandwidth_is_positive_and_seeded() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let x = random_matrix(&mut rng, 200, 2);
    let a = median_bandwidth(&x, 50, 1).unwrap();
    assert!(a > 0.0);
    assert_eq!(a, median_bandwidth(&x, 50, 1).unwrap());
}

#[test]
fn model_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let data = random_matrix(&mut rng, 30, 2);
    let model = fit_isolation_model(&data, 5, 7, 2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("model.json");
    model.save_json(&path).unwrap();
    assert_eq!(PartitioningModel::load_json(&path).unwrap(), model);
}

fn instance() -> impl Strategy<Value = (u64, usize, usize, usize, usize, usize)> {
    (any::<u64>(), 1usize..4, 0usize..7, prop::bool::ANY, 1usize..=30, 1usize..=30)
        .prop_map(|(seed, d, pi, big_t, nx, ny)| (seed, d, [4, 6, 8, 16, 24, 32, 48][pi], if big_t { 200 } else { 10 }, nx, ny))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn kme_identity_and_bounds((seed, d, psi, t, nx, ny) in instance()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = random_matrix(&mut rng, 60, d);
        let model = fit_isolation_model(&data, psi, t, seed).unwrap();
        let pick = |rng: &mut ChaCha8Rng, m: usize| -> Vec<Vec<f64>> {
            (0..m).map(|_| (0..d).map(|_| rng.random_range(-1.2..1.2)).collect()).collect()
        };
        let xs = pick(&mut rng, nx);
        let ys = pick(&mut rng, ny);
        let ex = model.embed_distribution(&xs).unwrap();
        let ey = model.embed_distribution(&ys).unwrap();
        let k = kernel_dist_dist(&ex, &ey).unwrap();
        let mut brute = 0.0;
        for x in &xs {
            let fx = brute_feature(&model, x);
            for y in &ys {
                brute += dot(&fx, &brute_feature(&model, y));
            }
        }
        brute /= (nx * ny) as f64;
        prop_assert!((k - brute).abs() <= 1e-12);
        prop_assert_eq!(k, kernel_dist_dist(&ey, &ex).unwrap());
        prop_assert!((0.0..=1.0 + 1e-15).contains(&k));
        prop_assert!(ex.norm() <= 1.0 + 1e-15);
        prop_assert!((kernel_dist_dist(&ex, &ex).unwrap() - ex.squared_norm()).abs() <= 1e-15);
    }
}
