//! Schrödinger-Heisenberg variational quantum eigensolving.
//!
//! The observable side: exact symbolic algebra of signed Pauli operators
//! ([`pauli`]), classical conjugation by Clifford circuits ([`clifford`])
//! and by a parametrized single-qubit layer ([`layer`]), which together
//! compute the transformed Hamiltonian H_T = T†HT that a shallow circuit
//! is measured against.
//!
//! The state side: a dense statevector engine ([`statevector`]), the
//! hardware-efficient ansatz and the stochastic graph-architecture
//! distribution ([`ansatz`]), and an adam-SPSA optimizer ([`optimizer`])
//! covering plain VQE, frozen-pattern SH-VQE and joint architecture search.
//!
//! Around these sit model Hamiltonians and exact-diagonalization oracles
//! ([`hamiltonians`]), t-design expressivity benchmarking ([`expressivity`])
//! and measurement-cost analysis ([`measurement`]).
//!
//! Everything randomized is seeded through counter-based per-index RNG
//! streams ([`rng`]), so results are identical under any parallel schedule;
//! the `parallel` feature (on by default) switches the Monte Carlo loops to
//! rayon.

pub mod ansatz;
pub mod clifford;
pub mod dense;
pub mod error;
pub mod expressivity;
pub mod hamiltonians;
pub mod layer;
pub mod measurement;
pub mod optimizer;
pub mod parallel;
pub mod pauli;
pub mod rng;
pub mod statevector;

pub use error::{Error, Result};
pub use pauli::{PauliString, PauliSum};
