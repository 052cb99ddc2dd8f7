//! Dense symmetric linear algebra: factorization, inversion, norms and
//! rank-1 inverse updates.

mod cholesky;
mod eigen;
mod sym;
mod update;

pub use cholesky::{cholesky, invert_spd, CholeskyFactor, PIVOT_TOLERANCE};
pub use eigen::{
    l1_operator_norm, max_eigenvalue, min_eigenvalue, spectral_norm, symmetric_eigenvalues,
};
pub use sym::{DataMatrix, SymMatrix};
pub use update::{inverse_append_trailing, inverse_delete_leading, UPDATE_TOLERANCE};
