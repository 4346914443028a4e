use std::f64::consts::FRAC_PI_2;

use proptest::prelude::*;
use qclass::dataprep::{
    build_data_circuit, encode, feature_angle, fit_norm, load_iris, load_mnist, pca_fit, Dataset,
    EncodeMode, Sample, Split,
};
use qclass::statevec::Statevector;
use qclass::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IRIS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/iris.csv");
const MNIST_IMAGES: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../data/mnist-10k-images-idx3-ubyte.gz"
);
const MNIST_LABELS: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../data/mnist-10k-labels-idx1-ubyte.gz"
);

/// Cyclic Jacobi eigenvalue iteration for a small symmetric matrix.
#[allow(clippy::needless_range_loop)]
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-26 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let (cs, sn) = (1.0 / (t * t + 1.0).sqrt(), t / (t * t + 1.0).sqrt());
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = cs * akp - sn * akq;
                    row[q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = cs * vp - sn * vq;
                    row[q] = sn * vp + cs * vq;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[i][i]).collect();
    let vecs = (0..n).map(|j| (0..n).map(|i| v[i][j]).collect()).collect();
    (vals, vecs)
}

fn random_dataset(n: usize, d: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mix: Vec<Vec<f64>> = (0..d)
        .map(|_| (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    let samples = (0..n)
        .map(|i| {
            let z: Vec<f64> = (0..d)
                .map(|k| rng.gen_range(-1.0..1.0) * (k + 1) as f64)
                .collect();
            Sample {
                features: (0..d)
                    .map(|r| (0..d).map(|k| mix[r][k] * z[k]).sum())
                    .collect(),
                label: i % 2,
            }
        })
        .collect();
    Dataset::new(samples, d, vec!["a".into(), "b".into()]).unwrap()
}

#[test]
fn pca_matches_jacobi_oracle() {
    for seed in 0..5 {
        let d = 8;
        let data = random_dataset(60, d, seed);
        let n = data.len() as f64;
        let mean: Vec<f64> = (0..d)
            .map(|j| data.samples().iter().map(|s| s.features[j]).sum::<f64>() / n)
            .collect();
        let cov: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        data.samples()
                            .iter()
                            .map(|s| (s.features[i] - mean[i]) * (s.features[j] - mean[j]))
                            .sum::<f64>()
                            / (n - 1.0)
                    })
                    .collect()
            })
            .collect();
        let (vals, vecs) = jacobi_eigen(cov);
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));

        let model = pca_fit(&data, 4).unwrap();
        for (k, &idx) in order.iter().take(4).enumerate() {
            assert!((model.eigenvalues()[k] - vals[idx]).abs() < 1e-9 * vals[idx].abs().max(1.0));
            let mut want = vecs[idx].clone();
            let pivot = want
                .iter()
                .copied()
                .fold(0.0f64, |b, x| if x.abs() > b.abs() { x } else { b });
            if pivot < 0.0 {
                want.iter_mut().for_each(|x| *x = -*x);
            }
            for (a, b) in model.components()[k].iter().zip(&want) {
                assert!((a - b).abs() < 1e-8, "seed {seed} component {k}");
            }
        }
    }
}

#[test]
fn pca_components_orthonormal_and_centred() {
    let data = random_dataset(40, 6, 9);
    let m = pca_fit(&data, 6).unwrap();
    for (i, a) in m.components().iter().enumerate() {
        for (j, b) in m.components().iter().enumerate() {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            assert!((dot - f64::from(u8::from(i == j))).abs() < 1e-10);
        }
    }
    let projected = m.transform(&data).unwrap();
    for k in 0..6 {
        let mean: f64 = projected
            .samples()
            .iter()
            .map(|s| s.features[k])
            .sum::<f64>()
            / 40.0;
        assert!(mean.abs() < 1e-10);
    }
    assert!(m.eigenvalues().windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn encoding_identity_on_random_vectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..1000 {
        let d = rng.gen_range(1..=8);
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(0.0..=1.0)).collect();
        for mode in [EncodeMode::TwoPerQubit, EncodeMode::OnePerQubit] {
            let e = encode(&x, 0, mode).unwrap();
            let psi = Statevector::zero(e.n_qubits())
                .unwrap()
                .run(&build_data_circuit(&e, 0))
                .unwrap();
            let stride = if mode == EncodeMode::TwoPerQubit {
                2
            } else {
                1
            };
            for q in 0..e.n_qubits() {
                assert!((psi.prob_of(q, 1).unwrap() - x[stride * q]).abs() < 1e-10);
            }
        }
    }
}

#[test]
#[allow(clippy::approx_constant)]
fn golden_angle() {
    let theta = feature_angle(0.5);
    assert!((theta - 1.5708).abs() < 5e-4);
    assert_eq!((theta * 100.0).round() / 100.0, 1.57);
    assert!((theta - FRAC_PI_2).abs() < 1e-15);
    assert!(matches!(
        encode(&[1.2], 0, EncodeMode::TwoPerQubit),
        Err(Error::Domain(_))
    ));
}

proptest! {
    #[test]
    fn normalised_training_data_in_unit_box(seed in any::<u64>(), n in 2usize..30, d in 1usize..6) {
        let data = random_dataset(n, d, seed);
        let stats = fit_norm(&data).unwrap();
        for s in data.samples() {
            for v in stats.normalize_row(&s.features).unwrap() {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
    }

    #[test]
    fn split_is_stratified_partition(seed in any::<u64>(), frac in 0.1f64..0.9) {
        let data = random_dataset(50, 2, 3);
        let (tr, te) = data.stratified_split(Split::Fraction(frac), seed).unwrap();
        prop_assert_eq!(tr.len() + te.len(), data.len());
        for (c, total) in data.class_counts().into_iter().enumerate() {
            let want = (frac * total as f64).round() as usize;
            prop_assert_eq!(tr.class_counts()[c], want);
        }
    }
}

#[test]
fn bundled_iris() {
    let iris = load_iris(IRIS).unwrap();
    assert_eq!((iris.len(), iris.dim(), iris.class_count()), (150, 4, 3));
    assert_eq!(iris.class_counts(), vec![50, 50, 50]);
    assert_eq!(iris.class_names(), ["setosa", "versicolor", "virginica"]);
    let (tr, te) = iris.stratified_split(Split::Fraction(0.8), 0).unwrap();
    assert_eq!((tr.len(), te.len()), (120, 30));
}

#[test]
fn bundled_mnist() {
    let m = load_mnist(MNIST_IMAGES, MNIST_LABELS).unwrap();
    assert_eq!((m.len(), m.dim(), m.class_count()), (10_000, 784, 10));
    assert!(m
        .samples()
        .iter()
        .all(|s| s.features.iter().all(|v| (0.0..=1.0).contains(v))));
    let sub = m.filter_classes(&[3, 6]).unwrap();
    assert_eq!(sub.class_names(), ["3", "6"]);
    let (tr, te) = sub
        .stratified_split(
            Split::PerClass {
                train: 200,
                test: 100,
            },
            1,
        )
        .unwrap();
    assert_eq!(
        (tr.class_counts(), te.class_counts()),
        (vec![200, 200], vec![100, 100])
    );
}
