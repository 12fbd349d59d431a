//! Dense complex linear algebra: matrices, Hermitian eigendecomposition,
//! Cholesky log-determinants, and the MIMO capacity with its gradient.

mod capacity;
mod eigen;
mod matrix;
pub mod random;

pub use capacity::{capacity, capacity_gradient, frobenius, Cholesky};
pub use eigen::{herm_eig, HermEigen, JACOBI_MAX_SWEEPS, JACOBI_TOL};
pub use matrix::{ComplexMatrix, HERMITIAN_TOL};

/// Eigenvalues at or above this (relative) floor count as non-negative when a
/// matrix is required to be positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;

/// Whether `a` is Hermitian with all eigenvalues at least `-PSD_TOL`.
pub fn is_psd(a: &ComplexMatrix) -> bool {
    if !a.is_square() || !a.is_hermitian() {
        return false;
    }
    match herm_eig(a) {
        Ok(e) => e.sigma.iter().all(|&s| s >= -PSD_TOL * a.max_abs().max(1.0)),
        Err(_) => false,
    }
}
