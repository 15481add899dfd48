//! Core algebra and kernels for higher-order QAOA on graph coloring.
//!
//! Everything in this crate is allocation-only (`no_std` + `alloc`):
//!
//! - [`poly`]: exact multilinear polynomials over ±1 spins, QUBO/Ising
//!   changes of variable and diagonal energy tables.
//! - [`coloring`]: graph coloring instances and brute-force oracles.
//! - [`encode`]: binary (higher-order), unary (one-hot) and order-reduced
//!   Ising encodings, plus closed-form gate-count predictions.
//! - [`gadget`]: CX/Rz ladder compilation of `exp(-iγH)`, term ordering and
//!   peephole CX cancellation.
//! - [`qaoa`]: statevector QAOA on diagonal Hamiltonians and its metrics.
//!
//! IO, parallel search and the command line live in the `hoq` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod coloring;
pub mod encode;
pub mod error;
pub mod gadget;
pub mod poly;
pub mod qaoa;

pub use coloring::{Coloring, ColoringProblem};
pub use encode::{IsingProgram, QubitLabel, ReductionCertificate, Scheme};
pub use error::{Error, Result};
pub use gadget::{Gate, GateCircuit};
pub use poly::{Coeff, EnergyTable, QuboPolynomial, SpinAssignment, SpinPolynomial};
pub use qaoa::{QaoaParams, QaoaProblem, RunResult, StateVector};
