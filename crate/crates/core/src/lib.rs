//! Singlet-triplet qubit simulator with leakage to the polarized triplets.
//!
//! The crate models two electrons in a double quantum dot in the basis
//! (S, T₀, T₊, T₋). It provides exact propagation, second-order perturbation
//! theory for leakage-shifted energies, an effective two-level Hamiltonian,
//! a truncated Dyson expansion and rotation diagnostics.

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod hamiltonian;
pub mod matrix;
pub mod physics;
pub mod rotations;
pub mod symmetry;
pub mod weakfield;

pub use error::{Error, Result};
pub use matrix::{eigh, expm_unitary, matnorm_max, ComplexMatrix, SpectralDecomposition};
pub use physics::{
    default_params, validate, BasisLabel, DeviceParams, FieldConfig, WeakFieldReport,
};
