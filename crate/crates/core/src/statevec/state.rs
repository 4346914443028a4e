use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::circuit::CircuitSpec;
use super::gate::{GateMatrix, GateOp};
use crate::error::{Error, Result};

/// Largest register the dense simulator will allocate.
pub const MAX_QUBITS: usize = 24;

const NORM_TOL: f64 = 1e-10;

/// Dense pure state over `n_qubits` qubits. Qubit 0 is the least-significant
/// bit of the basis index.
#[derive(Clone, Debug, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_capacity(n_qubits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Statevector { n_qubits, amps })
    }

    /// Wraps an explicit amplitude vector; it must be unit-norm and have a
    /// power-of-two length.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Shape(format!(
                "{len} amplitudes is not 2^n with n >= 1"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_capacity(n_qubits)?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Parameter(format!(
                "state norm² is {norm}, expected 1"
            )));
        }
        Ok(Statevector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&self, op: &GateOp) -> Result<Self> {
        let mut out = self.clone();
        out.apply_in_place(op)?;
        Ok(out)
    }

    /// Applies every op of `circuit` in order.
    pub fn run(&self, circuit: &CircuitSpec) -> Result<Self> {
        if circuit.n_qubits() > self.n_qubits {
            return Err(Error::Shape(format!(
                "circuit spans {} qubits, state has {}",
                circuit.n_qubits(),
                self.n_qubits
            )));
        }
        let mut out = self.clone();
        for op in circuit.ops() {
            out.apply_in_place(op)?;
        }
        Ok(out)
    }

    pub(crate) fn apply_in_place(&mut self, op: &GateOp) -> Result<()> {
        let qubits = op.qubits();
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(Error::Index(format!(
                    "{} targets qubit {q} on a {}-qubit state",
                    op.kind(),
                    self.n_qubits
                )));
            }
            if qubits[..i].contains(&q) {
                return Err(Error::Index(format!("{} repeats qubit {q}", op.kind())));
            }
        }
        let m = op.matrix();
        if qubits.len() == 1 {
            apply_single(&mut self.amps, qubits[0], &m);
        } else {
            apply_multi(&mut self.amps, qubits, &m);
        }
        Ok(())
    }

    /// Probability that measuring `qubit` in the Z basis yields `outcome`.
    pub fn prob_of(&self, qubit: usize, outcome: u8) -> Result<f64> {
        self.check_qubit(qubit)?;
        if outcome > 1 {
            return Err(Error::Parameter(format!(
                "outcome must be 0 or 1, got {outcome}"
            )));
        }
        let bit = 1usize << qubit;
        let want = if outcome == 1 { bit } else { 0 };
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(idx, _)| idx & bit == want)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Number of outcome-1 results in `shots` independent Z measurements of
    /// `qubit`. Deterministic for a given seed.
    pub fn sample_outcome(&self, qubit: usize, shots: u64, seed: u64) -> Result<u64> {
        if shots == 0 {
            return Err(Error::Parameter("shots must be at least 1".into()));
        }
        let p = self.prob_of(qubit, 1)?.clamp(0.0, 1.0);
        let dist = Binomial::new(shots, p).map_err(|e| Error::Parameter(e.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(dist.sample(&mut rng))
    }

    /// `⟨self|other⟩`.
    pub fn inner_product(&self, other: &Statevector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Shape(format!(
                "inner product of {}- and {}-qubit states",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::Index(format!(
                "qubit {qubit} on a {}-qubit state",
                self.n_qubits
            )));
        }
        Ok(())
    }
}

fn check_capacity(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{n_qubits} qubits requested, supported range is 1..={MAX_QUBITS}"
        )));
    }
    Ok(())
}

fn apply_single(amps: &mut [Complex64], qubit: usize, m: &GateMatrix) {
    let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let stride = 1usize << qubit;
    for block in amps.chunks_exact_mut(stride << 1) {
        let (lo, hi) = block.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m00 * x + m01 * y;
            *b = m10 * x + m11 * y;
        }
    }
}

fn apply_multi(amps: &mut [Complex64], qubits: &[usize], m: &GateMatrix) {
    let dim = m.dim();
    let mut offsets = [0usize; 8];
    for (local, off) in offsets.iter_mut().enumerate().take(dim) {
        *off = qubits
            .iter()
            .enumerate()
            .filter(|(b, _)| local >> b & 1 == 1)
            .map(|(_, q)| 1usize << q)
            .sum();
    }
    let mask: usize = qubits.iter().map(|q| 1usize << q).sum();
    let mut buf = [Complex64::new(0.0, 0.0); 8];
    let entries = m.as_slice();
    for base in (0..amps.len()).filter(|i| i & mask == 0) {
        for k in 0..dim {
            buf[k] = amps[base + offsets[k]];
        }
        for r in 0..dim {
            let row = &entries[r * dim..(r + 1) * dim];
            amps[base + offsets[r]] = row.iter().zip(&buf[..dim]).map(|(a, b)| a * b).sum();
        }
    }
}
