//! Teleportation with arbitrary (possibly non-maximally entangled) resource
//! states.
//!
//! The crate is organised bottom-up:
//!
//! - [`operator_space`]: the Hilbert–Schmidt space of `n×n` matrices, its
//!   vectorizations into `Cⁿ⊗Cⁿ` and superoperator representations.
//! - [`channels`]: completely positive maps in canonical (weighted Kraus) form,
//!   their duals and the PSD inverse square root used for normalization.
//! - [`resource`]: entangled resource states, projector families and
//!   entanglement diagnostics.
//! - [`teleport`]: the teleportation maps, normalized channels, unitary keys
//!   and full protocol runs.
//! - [`qubit_examples`]: qubit bases built from spin matrices and rotations.
//! - [`cli`]: JSON configs, experiment execution and reports.
//!
//! Tensor products use the convention that the first factor is the slow index:
//! `e_i ⊗ e_j` lives at position `i·n + j`.

pub mod channels;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod operator_space;
pub mod par;
pub mod qubit_examples;
pub mod random;
pub mod resource;
pub mod teleport;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Structural tolerance (orthonormality, hermiticity, projector axioms).
pub const STRUCTURAL_TOL: f64 = 1e-10;
/// Tolerance for pure-arithmetic round trips.
pub const ROUNDTRIP_TOL: f64 = 1e-12;
/// Tolerance used for unitarity of keys and recovery checks.
pub const KEY_TOL: f64 = 1e-9;
