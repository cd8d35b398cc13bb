//! Exact rational linear algebra for `H_M`.

mod hm;
mod inertia;
mod kernel;
mod matrix;

pub use hm::{block_decompose, build_hm, Block};
pub use inertia::{has_negative_eigenvalue, inertia, Inertia};
pub use kernel::{kernel_basis, supersingular_witness, witness_from_basis};
pub use matrix::RationalMatrix;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("nonzero entry ({0}, {1}) joins distinct classes")]
    CrossBlockNonzero(usize, usize),
}
