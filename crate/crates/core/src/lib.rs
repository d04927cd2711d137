//! Spectra of PT-symmetric particle-in-a-box Hamiltonians
//! `H = pₓ² + p_y² + g·xᵖ yᑫ` with `g = i·a`.
//!
//! The crate assembles the Hamiltonian on the box eigenbasis, splits it into
//! point-group blocks, diagonalizes the (non-Hermitian) blocks, and follows the
//! eigenvalues through coupling sweeps to locate exceptional points. Degenerate
//! first-order perturbation theory explains which levels turn complex
//! immediately (`V = ixy`) and which stay real in a window (`V = ixy²`).

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod assembler;
pub mod assignment;
pub mod boxbasis;
pub mod check;
pub mod cli;
pub mod csv;
pub mod error;
pub mod figures;
pub mod matelem;
pub mod perturbation;
pub mod pointgroup;
pub mod spectral;
pub mod sweep;

pub use assembler::{assemble_block, assemble_full, HamiltonianBlock, Model, PotentialSpec};
pub use boxbasis::{BasisSpec, DegenerateGroup, Mode};
pub use error::{PtError, Result};
pub use pointgroup::{Irrep, IrrepLabel, PointGroup, SymFunction};
pub use spectral::{eigen, Spectrum};
