//! Fidelity-based variational quantum classifier.
//!
//! Classical feature vectors are angle-encoded onto a data register, each class
//! owns a trainable state-preparation circuit on a second register, and a SWAP
//! test against an ancilla measures how closely the two states overlap. Training
//! minimises the cross-entropy of that fidelity with an epoch-shrinking shift
//! gradient; inference softmaxes the per-class fidelities.
//!
//! Everything runs on the dense statevector simulator in [`statevec`].
//!
//! ```
//! use qclass::statevec::{GateOp, Statevector};
//!
//! let psi = Statevector::zero(1).unwrap().apply(&GateOp::h(0)).unwrap();
//! assert!((psi.prob_of(0, 1).unwrap() - 0.5).abs() < 1e-12);
//! ```

pub mod checkpoint;
pub mod dataprep;
pub mod error;
pub mod fidelity;
pub mod model;
pub mod statevec;
pub mod trainer;

pub use error::{Error, Result};
