mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::{overlap_sqr, random_amplitudes, swap_test_on_states};
use proptest::prelude::*;
use qclass::dataprep::{build_data_circuit, encode, EncodeMode};
use qclass::fidelity::{
    build_swap_test, estimate, estimate_registers, match_probability, FidelityMode,
};
use qclass::model::{ClassModel, LayerStack, Pairing};
use qclass::statevec::{CircuitSpec, GateOp, Statevector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn swap_test_recovers_overlap_for_arbitrary_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..300 {
        let n = rng.gen_range(1..=3);
        let (a, b) = (
            random_amplitudes(n, &mut rng),
            random_amplitudes(n, &mut rng),
        );
        let p = swap_test_on_states(&a, &b);
        assert!((2.0 * p - 1.0 - overlap_sqr(&a, &b)).abs() < 1e-9);
    }
}

#[test]
fn circuit_prepared_pairs_agree_with_register_route() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100 {
        let n = rng.gen_range(2..=3);
        let x: Vec<f64> = (0..2 * n).map(|_| rng.gen()).collect();
        let sample = encode(&x, 0, EncodeMode::TwoPerQubit).unwrap();
        let stack = LayerStack::parse("QC-SDE", n, Pairing::Chain).unwrap();
        let model = ClassModel::init(stack, 0, rng.gen());
        let test =
            build_swap_test(&build_data_circuit(&sample, 1), &model.circuit(1 + n), n).unwrap();

        let phi = Statevector::zero(n)
            .unwrap()
            .run(&build_data_circuit(&sample, 0))
            .unwrap();
        let omega = model.state().unwrap();
        let oracle = overlap_sqr(phi.amplitudes(), omega.amplitudes());
        let full = estimate(&test, FidelityMode::Exact).unwrap();
        let fast = estimate_registers(&phi, &omega, FidelityMode::Exact).unwrap();
        assert!((full.fidelity - oracle).abs() < 1e-10);
        assert!((fast.fidelity - oracle).abs() < 1e-12);
    }
}

#[test]
fn extremes() {
    let one = |ops: &[GateOp]| {
        let mut c = CircuitSpec::new(3);
        ops.iter().for_each(|o| c.push(*o).unwrap());
        c
    };
    let same =
        build_swap_test(&one(&[GateOp::ry(0.3, 1)]), &one(&[GateOp::ry(0.3, 2)]), 1).unwrap();
    assert!((match_probability(&same).unwrap() - 1.0).abs() < 1e-10);
    let orth = build_swap_test(
        &one(&[GateOp::ry(0.3, 1)]),
        &one(&[GateOp::ry(0.3 + PI, 2)]),
        1,
    )
    .unwrap();
    assert!((match_probability(&orth).unwrap() - 0.5).abs() < 1e-10);
    let half = build_swap_test(&one(&[]), &one(&[GateOp::ry(FRAC_PI_2, 2)]), 1).unwrap();
    let e = estimate(&half, FidelityMode::Exact).unwrap();
    assert!((e.p_match - 0.75).abs() < 1e-12 && (e.fidelity - 0.5).abs() < 1e-12);
}

#[test]
fn shot_estimates_are_seeded() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let (a, b) = (
        random_amplitudes(2, &mut rng),
        random_amplitudes(2, &mut rng),
    );
    let (a, b) = (
        Statevector::from_amplitudes(a).unwrap(),
        Statevector::from_amplitudes(b).unwrap(),
    );
    let mode = FidelityMode::Shots {
        shots: 500,
        seed: 4,
    };
    assert_eq!(
        estimate_registers(&a, &b, mode).unwrap(),
        estimate_registers(&a, &b, mode).unwrap()
    );
}

proptest! {
    #[test]
    fn fidelity_symmetric_and_bounded(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Statevector::from_amplitudes(random_amplitudes(n, &mut rng)).unwrap();
        let b = Statevector::from_amplitudes(random_amplitudes(n, &mut rng)).unwrap();
        let ab = estimate_registers(&a, &b, FidelityMode::Exact).unwrap();
        let ba = estimate_registers(&b, &a, FidelityMode::Exact).unwrap();
        prop_assert!((ab.fidelity - ba.fidelity).abs() < 1e-14);
        prop_assert!((0.0..=1.0).contains(&ab.fidelity));
        prop_assert!((0.5..=1.0 + 1e-15).contains(&ab.p_match));
    }

    #[test]
    fn shot_fidelity_in_unit_interval(seed in any::<u64>(), shots in 1u64..2000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Statevector::from_amplitudes(random_amplitudes(2, &mut rng)).unwrap();
        let b = Statevector::from_amplitudes(random_amplitudes(2, &mut rng)).unwrap();
        let e = estimate_registers(&a, &b, FidelityMode::Shots { shots, seed }).unwrap();
        prop_assert!((0.0..=1.0).contains(&e.fidelity));
    }
}
