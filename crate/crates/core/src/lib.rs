//! Pauli-string algebra, conjugation by Clifford and local linear gates, spin-chain
//! Hamiltonians and their dualities, and generalized stabilizer states.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod circuits;
pub mod dense;
pub mod error;
pub mod gen_stabilizer;
pub mod local_ops;
mod math;
pub mod models;
pub mod pauli;
pub mod scan;

pub use circuits::{conjugate, Boundary, Circuit, Gate, GateKind};
pub use dense::{DenseBackend, DenseOperator, DenseState, SpectrumResult};
pub use error::{Error, Result};
pub use gen_stabilizer::{fixed_state, GeneratorSet, Lemma1Params, Lemma1Report};
pub use local_ops::{LocalOp, OperatorString};
pub use models::{build, DualityReport, Family, ModelSpec};
pub use num_complex::Complex64;
pub use pauli::{PauliOp, PauliString, PauliSum, Phase};
