//! Bosonic-to-qubit encodings and the variational machinery built on them.

pub mod encodings;
pub mod error;
pub mod fixtures;
pub mod hamiltonian;
pub mod modal;
pub mod pauli;
pub mod sim;
pub mod ucc;
pub mod vqe;

pub use error::{Error, Result};
