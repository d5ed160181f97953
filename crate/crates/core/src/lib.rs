//! Permutation-group purification of noisy quantum states.
//!
//! The crate simulates post-selection of `M` noisy copies onto the symmetric
//! subspace of a register-permutation group (symmetric, cyclic, parallel-SWAP)
//! with dense complex matrices, and evaluates the matching closed forms for
//! depolarised inputs, first-order perturbations and general stochastic noise.

// Comparisons are written as `!(x > tol)` so that NaN falls on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod densmat;
pub mod error;
pub mod gadgets;
pub mod noise;
pub mod permgroup;
pub mod zeno;

pub use analytic::{DepolarisedRate, DepolarisedSpec, Dimension};
pub use densmat::{CMatrix, DenseCap, DenseOperator, DensityMatrix, HermitianOperator, MultiRegisterState};
pub use error::{Error, Result};
pub use gadgets::{GadgetKind, GadgetOutcome};
pub use permgroup::{GroupLabel, Permutation, PermutationGroup};
pub use num_complex::Complex64;
