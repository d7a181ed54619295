//! MaxCut ground-state search on an exact statevector simulator.
//!
//! The library implements a family of optimizers over Pauli-string ansatz
//! circuits: plain gradient VQE, quantum imaginary time evolution (QITE),
//! its compressed single-circuit form (cQITE), the QITE-initialized VQE
//! switch (QIV), and the adaptive weighted blend of gradient and
//! imaginary-time updates (AWQV). The classical Goemans-Williamson baseline
//! and the evaluation metrics used to compare all of them live here too.
//! Everything is deterministic under explicit seeds.
//!
//! Module map:
//! - [`problem`]: MaxCut instances, random graph generators, diagonal
//!   Hamiltonians, brute-force spectra.
//! - [`pauli`] / [`statevec`]: bitmask Pauli strings and the dense simulator.
//! - [`ansatz`]: Pauli-set circuits (P1A, P2A, P2A-ZY, P2A-XY), round-robin
//!   scheduling, exact gradients.
//! - [`qite`]: the S phi = b linear system, its solver, and the evolution
//!   loops.
//! - [`optimize`]: GD and Adam, the VQE loop.
//! - [`awqv`]: the adaptive weighting scheme and the QIV ablation.
//! - [`metrics`]: ground-state probability, approximation ratios, failure
//!   predicates.
//! - [`gw`]: the Goemans-Williamson relaxation and hyperplane rounding.

pub mod ansatz;
pub mod awqv;
pub mod error;
pub mod gw;
pub mod metrics;
pub mod optimize;
pub mod pauli;
pub mod problem;
pub mod qite;
pub mod statevec;
pub mod trace;

pub use error::{Error, Result};
