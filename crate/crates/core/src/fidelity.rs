//! SWAP-test fidelity between the data register and a learned state.
//!
//! Layout: qubit 0 is the ancilla, qubits `1..=n` hold the data state and
//! `n+1..=2n` the learned state. The circuit is
//! `H(0) · data · model · Π_j CSWAP(0, 1+j, 1+n+j) · H(0)`.
//!
//! The ancilla's MATCH outcome is `|0⟩`, whose probability is `½ + ½F` with
//! `F = |⟨φ|ω⟩|²`. Fidelity is recovered as `clamp(2·p_match − 1, 0, 1)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevec::{CircuitSpec, GateOp, Statevector};

/// Ancilla outcome whose probability grows with fidelity.
pub const MATCH_OUTCOME: u8 = 0;

/// Fidelities are kept inside `[FIDELITY_CLIP, 1 - FIDELITY_CLIP]` before any
/// logarithm is taken.
pub const FIDELITY_CLIP: f64 = 1e-9;

/// Measurement budget used when shots are requested without a count.
pub const DEFAULT_SHOTS: u64 = 8000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FidelityMode {
    /// Probabilities read directly from the simulated state.
    Exact,
    /// Ancilla measured `shots` times with the given seed.
    Shots { shots: u64, seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FidelityEstimate {
    pub p_match: f64,
    pub fidelity: f64,
    pub mode: FidelityMode,
}

impl FidelityEstimate {
    pub fn from_match_probability(p_match: f64, mode: FidelityMode) -> Self {
        FidelityEstimate {
            p_match,
            fidelity: (2.0 * p_match - 1.0).clamp(0.0, 1.0),
            mode,
        }
    }

    /// Fidelity squeezed into `[FIDELITY_CLIP, 1 - FIDELITY_CLIP]`.
    pub fn clipped(&self) -> f64 {
        clip(self.fidelity)
    }
}

pub fn clip(fidelity: f64) -> f64 {
    fidelity.clamp(FIDELITY_CLIP, 1.0 - FIDELITY_CLIP)
}

/// A laid-out SWAP-test circuit together with its two state-preparation halves.
#[derive(Clone, Debug, PartialEq)]
pub struct SwapTest {
    circuit: CircuitSpec,
    n_pairs: usize,
    data_prep: CircuitSpec,
    model_prep: CircuitSpec,
}

/// Wraps a data-preparation circuit (on qubits `1..=n_pairs`) and a model
/// circuit (on `n_pairs+1..=2·n_pairs`) into a SWAP test with ancilla 0.
pub fn build_swap_test(
    data_circ: &CircuitSpec,
    model_circ: &CircuitSpec,
    n_pairs: usize,
) -> Result<SwapTest> {
    if n_pairs == 0 {
        return Err(Error::Layout(
            "SWAP test needs at least one qubit pair".into(),
        ));
    }
    let data_range = 1..=n_pairs;
    let state_range = n_pairs + 1..=2 * n_pairs;
    check_range(data_circ, &data_range, "data")?;
    check_range(model_circ, &state_range, "model")?;

    let total = 1 + 2 * n_pairs;
    let mut circuit = CircuitSpec::new(total);
    circuit.push(GateOp::h(0))?;
    for op in data_circ.ops().iter().chain(model_circ.ops()) {
        circuit.push(*op)?;
    }
    for j in 0..n_pairs {
        circuit.push(GateOp::cswap(0, 1 + j, 1 + n_pairs + j))?;
    }
    circuit.push(GateOp::h(0))?;

    Ok(SwapTest {
        circuit,
        n_pairs,
        data_prep: data_circ.relocated(-1, n_pairs)?,
        model_prep: model_circ.relocated(-(n_pairs as isize) - 1, n_pairs)?,
    })
}

fn check_range(c: &CircuitSpec, range: &std::ops::RangeInclusive<usize>, what: &str) -> Result<()> {
    for op in c.ops() {
        if let Some(q) = op.qubits().iter().find(|q| !range.contains(q)) {
            return Err(Error::Layout(format!(
                "{what} circuit touches qubit {q} outside its register {}..={}",
                range.start(),
                range.end()
            )));
        }
    }
    Ok(())
}

impl SwapTest {
    pub fn circuit(&self) -> &CircuitSpec {
        &self.circuit
    }

    pub fn n_pairs(&self) -> usize {
        self.n_pairs
    }

    pub fn total_qubits(&self) -> usize {
        self.circuit.n_qubits()
    }

    /// Data and learned states, each simulated on its own `n_pairs` register.
    pub fn register_states(&self) -> Result<(Statevector, Statevector)> {
        let zero = Statevector::zero(self.n_pairs)?;
        Ok((zero.run(&self.data_prep)?, zero.run(&self.model_prep)?))
    }

    /// Full state of the circuit applied to `|0…0⟩`, before measurement.
    pub fn final_state(&self) -> Result<Statevector> {
        Statevector::zero(self.total_qubits())?.run(&self.circuit)
    }
}

/// Probability that the ancilla of the simulated circuit reads MATCH.
pub fn match_probability(test: &SwapTest) -> Result<f64> {
    test.final_state()?.prob_of(0, MATCH_OUTCOME)
}

/// Fidelity from the full SWAP-test circuit, exact or shot-sampled.
pub fn estimate(test: &SwapTest, mode: FidelityMode) -> Result<FidelityEstimate> {
    let state = test.final_state()?;
    let p_match = match mode {
        FidelityMode::Exact => state.prob_of(0, MATCH_OUTCOME)?,
        FidelityMode::Shots { shots, seed } => {
            let ones = state.sample_outcome(0, shots, seed)?;
            matches_from_ones(ones, shots)
        }
    };
    Ok(FidelityEstimate::from_match_probability(p_match, mode))
}

/// Closed-form MATCH probability for product inputs: `½ + ½|⟨φ|ω⟩|²`.
pub fn analytic_match_probability(data: &Statevector, learned: &Statevector) -> Result<f64> {
    let overlap: Complex64 = data.inner_product(learned)?;
    Ok(0.5 + 0.5 * overlap.norm_sqr())
}

/// Same distribution as [`estimate`] but computed from the two register states
/// without building the `2n+1`-qubit vector. Shot sampling draws from the
/// ancilla's marginal with the MATCH probability above.
pub fn estimate_registers(
    data: &Statevector,
    learned: &Statevector,
    mode: FidelityMode,
) -> Result<FidelityEstimate> {
    let p = analytic_match_probability(data, learned)?;
    let p_match = match mode {
        FidelityMode::Exact => p,
        FidelityMode::Shots { shots, seed } => {
            // single qubit with P(|0⟩) = p
            let ancilla = Statevector::zero(1)?
                .apply(&GateOp::ry(2.0 * p.clamp(0.0, 1.0).sqrt().acos(), 0))?;
            matches_from_ones(ancilla.sample_outcome(0, shots, seed)?, shots)
        }
    };
    Ok(FidelityEstimate::from_match_probability(p_match, mode))
}

fn matches_from_ones(ones: u64, shots: u64) -> f64 {
    (shots - ones) as f64 / shots as f64
}
