//! Dense statevector simulator.
//!
//! Basis index bit `k` holds qubit `k`. Every public operation returns a new
//! [`Statevector`]; nothing is shared between values, so distinct states can be
//! evolved on different threads.

mod circuit;
mod gate;
mod state;

pub use circuit::CircuitSpec;
pub use gate::{GateKind, GateMatrix, GateOp};
pub use state::{Statevector, MAX_QUBITS};
