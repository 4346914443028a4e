use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{CircuitSpec, GateOp};

/// How many normalised features each data qubit carries.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncodeMode {
    /// Feature `2j` on RY and feature `2j+1` on RZ of qubit `j`.
    #[default]
    #[serde(rename = "2per")]
    TwoPerQubit,
    /// One feature per qubit on RY; RZ angle fixed at 0.
    #[serde(rename = "1per")]
    OnePerQubit,
}

impl EncodeMode {
    /// Data qubits needed for `d` features.
    pub fn data_qubits(self, d: usize) -> usize {
        match self {
            EncodeMode::TwoPerQubit => d.div_ceil(2),
            EncodeMode::OnePerQubit => d,
        }
    }
}

impl fmt::Display for EncodeMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EncodeMode::TwoPerQubit => "2per",
            EncodeMode::OnePerQubit => "1per",
        })
    }
}

impl FromStr for EncodeMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2per" => Ok(EncodeMode::TwoPerQubit),
            "1per" => Ok(EncodeMode::OnePerQubit),
            _ => Err(Error::Config(format!(
                "unknown encode mode `{s}` (2per|1per)"
            ))),
        }
    }
}

/// Rotation angles for one data point: `(ry, rz)` per data qubit.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedSample {
    pub angles: Vec<(f64, f64)>,
    pub label: usize,
}

impl EncodedSample {
    pub fn n_qubits(&self) -> usize {
        self.angles.len()
    }
}

/// `2·asin(√x)`: the RY angle whose |1⟩ probability is `x`.
pub fn feature_angle(x: f64) -> f64 {
    2.0 * x.sqrt().asin()
}

pub fn encode(x: &[f64], label: usize, mode: EncodeMode) -> Result<EncodedSample> {
    if x.is_empty() {
        return Err(Error::Dimension(
            "cannot encode an empty feature vector".into(),
        ));
    }
    if let Some((i, v)) = x
        .iter()
        .enumerate()
        .find(|(_, v)| !(0.0..=1.0).contains(*v))
    {
        return Err(Error::Domain(format!(
            "feature {i} = {v} is outside [0, 1]"
        )));
    }
    let angles = match mode {
        EncodeMode::TwoPerQubit => x
            .chunks(2)
            .map(|pair| {
                (
                    feature_angle(pair[0]),
                    pair.get(1).map_or(0.0, |&v| feature_angle(v)),
                )
            })
            .collect(),
        EncodeMode::OnePerQubit => x.iter().map(|&v| (feature_angle(v), 0.0)).collect(),
    };
    Ok(EncodedSample { angles, label })
}

/// RY then RZ on each data qubit, starting at `qubit_offset`.
pub fn build_data_circuit(sample: &EncodedSample, qubit_offset: usize) -> CircuitSpec {
    let mut circuit = CircuitSpec::new(qubit_offset + sample.n_qubits());
    for (j, &(ry, rz)) in sample.angles.iter().enumerate() {
        let q = qubit_offset + j;
        circuit.push(GateOp::ry(ry, q)).expect("qubit within width");
        circuit.push(GateOp::rz(rz, q)).expect("qubit within width");
    }
    circuit
}
