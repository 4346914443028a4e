//! Trainable state-preparation circuits.
//!
//! A [`LayerStack`] is an ordered list of layer kinds over the state register.
//! Parameters are consumed layer-major, then qubit/pair-minor, RY-angle before
//! RZ-angle:
//!
//! | layer | per unit        | gates                                   | params |
//! |-------|-----------------|-----------------------------------------|--------|
//! | S     | qubit `j`       | `RY(a) j`, `RZ(b) j`                    | 2      |
//! | D     | pair `(j, k)`   | `RY(a) j`, `RY(a) k`, `RZ(b) j`, `RZ(b) k` | 2   |
//! | E     | pair `(j, k)`   | `CRY(a) j→k`, `CRZ(b) j→k`              | 2      |

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dataprep::EncodeMode;
use crate::error::{Error, Result};
use crate::statevec::{CircuitSpec, GateOp, Statevector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LayerKind {
    #[serde(rename = "S")]
    SingleQubitUnitary,
    #[serde(rename = "D")]
    DualQubitUnitary,
    #[serde(rename = "E")]
    Entanglement,
}

impl LayerKind {
    fn letter(self) -> char {
        match self {
            LayerKind::SingleQubitUnitary => 'S',
            LayerKind::DualQubitUnitary => 'D',
            LayerKind::Entanglement => 'E',
        }
    }
}

/// Which qubit pairs D and E layers act on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pairing {
    /// `(j, j+1)` for `j = 0..n-1`.
    #[default]
    Chain,
    /// Every `(j, k)` with `j < k`, lexicographic.
    All,
}

impl FromStr for Pairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chain" => Ok(Pairing::Chain),
            "all" => Ok(Pairing::All),
            _ => Err(Error::Config(format!("unknown pairing `{s}` (chain|all)"))),
        }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pairing::Chain => "chain",
            Pairing::All => "all",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerStack {
    layers: Vec<LayerKind>,
    n_state_qubits: usize,
    #[serde(default)]
    pairing: Pairing,
}

impl LayerStack {
    pub fn new(layers: Vec<LayerKind>, n_state_qubits: usize, pairing: Pairing) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Config("layer stack is empty".into()));
        }
        if n_state_qubits == 0 {
            return Err(Error::Config(
                "state register needs at least one qubit".into(),
            ));
        }
        if n_state_qubits < 2 && layers.iter().any(|l| *l != LayerKind::SingleQubitUnitary) {
            return Err(Error::Config(
                "dual and entanglement layers need at least two state qubits".into(),
            ));
        }
        Ok(LayerStack {
            layers,
            n_state_qubits,
            pairing,
        })
    }

    /// Parses `QC-S`, `QC-D`, `QC-E`, `QC-SD`, `QC-SDE` or a comma list such as
    /// `S,D,E,S`.
    pub fn parse(spec: &str, n_state_qubits: usize, pairing: Pairing) -> Result<Self> {
        LayerStack::new(parse_layers(spec)?, n_state_qubits, pairing)
    }

    pub fn layers(&self) -> &[LayerKind] {
        &self.layers
    }

    pub fn n_state_qubits(&self) -> usize {
        self.n_state_qubits
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n_state_qubits;
        match self.pairing {
            Pairing::Chain => (0..n.saturating_sub(1)).map(|j| (j, j + 1)).collect(),
            Pairing::All => (0..n)
                .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
                .collect(),
        }
    }

    pub fn param_count(&self) -> usize {
        let pairs = self.pairs().len();
        self.layers
            .iter()
            .map(|l| match l {
                LayerKind::SingleQubitUnitary => 2 * self.n_state_qubits,
                LayerKind::DualQubitUnitary | LayerKind::Entanglement => 2 * pairs,
            })
            .sum()
    }

    /// Comma-list form, e.g. `S,D,E`.
    pub fn layer_string(&self) -> String {
        self.layers
            .iter()
            .map(|l| l.letter().to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn parse_layers(spec: &str) -> Result<Vec<LayerKind>> {
    let letter = |c: char| match c.to_ascii_uppercase() {
        'S' => Ok(LayerKind::SingleQubitUnitary),
        'D' => Ok(LayerKind::DualQubitUnitary),
        'E' => Ok(LayerKind::Entanglement),
        _ => Err(Error::Config(format!(
            "unknown layer `{c}` in stack `{spec}`"
        ))),
    };
    let spec = spec.trim();
    if let Some(named) = spec.strip_prefix("QC-") {
        return match named {
            "S" | "D" | "E" | "SD" | "SDE" => named.chars().map(letter).collect(),
            _ => Err(Error::Config(format!("unknown stack name `{spec}`"))),
        };
    }
    spec.split(',')
        .map(|tok| {
            let mut chars = tok.trim().chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => letter(c),
                _ => Err(Error::Config(format!("unknown stack `{spec}`"))),
            }
        })
        .collect()
}

pub fn param_count(stack: &LayerStack) -> usize {
    stack.param_count()
}

/// One class's trainable state: a stack plus its flat angle vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassModel {
    stack: LayerStack,
    theta: Vec<f64>,
    class_id: usize,
}

impl ClassModel {
    pub fn new(stack: LayerStack, theta: Vec<f64>, class_id: usize) -> Result<Self> {
        if theta.len() != stack.param_count() {
            return Err(Error::Shape(format!(
                "stack needs {} parameters, got {}",
                stack.param_count(),
                theta.len()
            )));
        }
        Ok(ClassModel {
            stack,
            theta,
            class_id,
        })
    }

    /// Angles drawn uniformly from `[0, π)`.
    pub fn init(stack: LayerStack, class_id: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let theta = (0..stack.param_count())
            .map(|_| rng.gen_range(0.0..std::f64::consts::PI))
            .collect();
        ClassModel {
            stack,
            theta,
            class_id,
        }
    }

    pub fn stack(&self) -> &LayerStack {
        &self.stack
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn class_id(&self) -> usize {
        self.class_id
    }

    pub fn set_param(&mut self, index: usize, value: f64) {
        self.theta[index] = value;
    }

    /// Copy with parameter `index` moved by `delta`.
    pub fn shifted(&self, index: usize, delta: f64) -> Self {
        let mut out = self.clone();
        out.theta[index] += delta;
        out
    }

    pub fn circuit(&self, qubit_offset: usize) -> CircuitSpec {
        let n = self.stack.n_state_qubits;
        let mut c = CircuitSpec::new(qubit_offset + n);
        let mut theta = self.theta.iter().copied();
        let mut next = || theta.next().expect("theta length matches param_count");
        let mut push = |op: GateOp| c.push(op).expect("qubit within register");
        let pairs = self.stack.pairs();
        for layer in &self.stack.layers {
            match layer {
                LayerKind::SingleQubitUnitary => {
                    for j in 0..n {
                        let q = qubit_offset + j;
                        push(GateOp::ry(next(), q));
                        push(GateOp::rz(next(), q));
                    }
                }
                LayerKind::DualQubitUnitary => {
                    for &(j, k) in &pairs {
                        let (a, b) = (next(), next());
                        let (qj, qk) = (qubit_offset + j, qubit_offset + k);
                        push(GateOp::ry(a, qj));
                        push(GateOp::ry(a, qk));
                        push(GateOp::rz(b, qj));
                        push(GateOp::rz(b, qk));
                    }
                }
                LayerKind::Entanglement => {
                    for &(j, k) in &pairs {
                        let (a, b) = (next(), next());
                        let (qj, qk) = (qubit_offset + j, qubit_offset + k);
                        push(GateOp::cry(a, qj, qk));
                        push(GateOp::crz(b, qj, qk));
                    }
                }
            }
        }
        c
    }

    /// Learned state on its own register.
    pub fn state(&self) -> Result<Statevector> {
        Statevector::zero(self.stack.n_state_qubits)?.run(&self.circuit(0))
    }
}

pub fn init_params(stack: &LayerStack, seed: u64) -> ClassModel {
    ClassModel::init(stack.clone(), 0, seed)
}

pub fn build_model_circuit(model: &ClassModel, qubit_offset: usize) -> CircuitSpec {
    model.circuit(qubit_offset)
}

/// Ancilla + data register + state register for `d` features, two per qubit.
pub fn total_qubits(d: usize) -> usize {
    total_qubits_for(d, EncodeMode::TwoPerQubit)
}

pub fn total_qubits_for(d: usize, mode: EncodeMode) -> usize {
    1 + 2 * mode.data_qubits(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::GateKind;
    use std::f64::consts::PI;

    fn stack(spec: &str, n: usize) -> LayerStack {
        LayerStack::parse(spec, n, Pairing::Chain).unwrap()
    }

    #[test]
    fn counts() {
        assert_eq!(stack("QC-S", 2).param_count(), 4);
        assert_eq!(3 * stack("QC-S", 2).param_count(), 12);
        assert_eq!(2 * stack("QC-S", 8).param_count(), 32);
        assert_eq!(stack("QC-SDE", 2).param_count(), 8);
        assert_eq!(stack("S,D,E,S", 3).param_count(), 6 + 4 + 4 + 6);
        let all = LayerStack::parse("QC-E", 4, Pairing::All).unwrap();
        assert_eq!(all.param_count(), 12);
    }

    #[test]
    fn qubit_totals() {
        assert_eq!(total_qubits(4), 5);
        assert_eq!(total_qubits(16), 17);
        assert_eq!(total_qubits(1), 3);
        assert_eq!(total_qubits_for(4, EncodeMode::OnePerQubit), 9);
    }

    #[test]
    fn stack_names() {
        assert_eq!(stack("QC-SD", 2).layer_string(), "S,D");
        assert_eq!(stack("s, d", 2).layer_string(), "S,D");
        assert!(LayerStack::parse("QC-X", 2, Pairing::Chain).is_err());
        assert!(LayerStack::parse("S,DD", 2, Pairing::Chain).is_err());
        assert!(LayerStack::parse("QC-D", 1, Pairing::Chain).is_err());
        assert!(LayerStack::parse("QC-S", 0, Pairing::Chain).is_err());
    }

    #[test]
    fn init_range_and_determinism() {
        let s = stack("QC-SDE", 4);
        let a = ClassModel::init(s.clone(), 0, 11);
        assert!(a.theta().iter().all(|t| (0.0..PI).contains(t)));
        assert_eq!(a, ClassModel::init(s.clone(), 0, 11));
        assert_ne!(a.theta(), ClassModel::init(s, 0, 12).theta());
    }

    #[test]
    fn single_layer_flips_qubit() {
        let m = ClassModel::new(stack("QC-S", 1), vec![PI, 0.0], 0).unwrap();
        let s = m.state().unwrap();
        assert!((s.prob_of(0, 1).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dual_layer_shares_angles() {
        let m = ClassModel::new(stack("QC-D", 2), vec![0.3, 0.7], 0).unwrap();
        let c = m.circuit(0);
        let want = [
            GateOp::ry(0.3, 0),
            GateOp::ry(0.3, 1),
            GateOp::rz(0.7, 0),
            GateOp::rz(0.7, 1),
        ];
        assert_eq!(c.ops(), &want);
    }

    #[test]
    fn entanglement_identity_at_zero() {
        let m = ClassModel::new(stack("QC-E", 2), vec![0.0, 0.0], 0).unwrap();
        let c = m.circuit(0);
        assert_eq!(c.ops()[0].kind(), GateKind::CRY);
        assert_eq!(c.ops()[0].qubits(), &[0, 1]);
        let s = m.state().unwrap();
        assert!((s.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wrong_theta_length() {
        assert!(matches!(
            ClassModel::new(stack("QC-S", 2), vec![0.0; 3], 0),
            Err(Error::Shape(_))
        ));
    }
}
