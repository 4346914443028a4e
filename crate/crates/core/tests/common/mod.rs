#![allow(dead_code)]

use num_complex::Complex64;
use qclass::fidelity::{build_swap_test, MATCH_OUTCOME};
use qclass::statevec::{CircuitSpec, Statevector};
use rand::Rng;

pub const IRIS: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/iris.csv");
pub const MNIST_IMAGES: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../data/mnist-10k-images-idx3-ubyte.gz"
);
pub const MNIST_LABELS: &str = concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/../../data/mnist-10k-labels-idx1-ubyte.gz"
);

pub fn random_amplitudes(n: usize, rng: &mut impl Rng) -> Vec<Complex64> {
    let mut amps: Vec<Complex64> = (0..1 << n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    amps
}

/// |⟨a|b⟩|² computed directly from the amplitude lists.
pub fn overlap_sqr(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.conj() * y)
        .sum::<Complex64>()
        .norm_sqr()
}

/// Runs the SWAP-test circuit (empty preparation halves) on
/// `|0⟩_anc ⊗ |φ⟩_data ⊗ |ω⟩_state` and returns P(ancilla = MATCH).
pub fn swap_test_on_states(phi: &[Complex64], omega: &[Complex64]) -> f64 {
    let dim = phi.len();
    let n = dim.trailing_zeros() as usize;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << (2 * n + 1)];
    for (d, a) in phi.iter().enumerate() {
        for (w, b) in omega.iter().enumerate() {
            amps[(d << 1) | (w << (n + 1))] = a * b;
        }
    }
    let test = build_swap_test(&CircuitSpec::new(n + 1), &CircuitSpec::new(2 * n + 1), n).unwrap();
    Statevector::from_amplitudes(amps)
        .unwrap()
        .run(test.circuit())
        .unwrap()
        .prob_of(0, MATCH_OUTCOME)
        .unwrap()
}

pub fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

pub fn mean_std(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
