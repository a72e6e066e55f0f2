//! Dense complex linear algebra for Hermitian operators at desk scale.
//!
//! Everything here is deterministic: the eigensolver is a cyclic Jacobi sweep
//! with a fixed rotation order and a fixed eigenvector phase convention, so the
//! same input bytes always produce the same output bytes. That property is what
//! the rest of the workspace builds its reproducibility contract on.
//!
//! The main pieces:
//!
//! * [`ComplexMatrix`] — row-major dense storage over `Complex<f64>`, with the
//!   arithmetic, tensor product, block access, and JSON form used everywhere.
//! * [`hermitian_eig`] — cyclic Jacobi eigendecomposition (ascending
//!   eigenvalues, first significant eigenvector component real positive).
//! * [`apply_hermitian_function`] — spectral calculus (sqrt, pseudo-inverse,
//!   log2 on support, abs).
//! * [`matrix_norms`] — trace/operator/Frobenius norms via singular values.
//! * [`partial_trace`] / [`ComplexMatrix::tensor`] — multipartite plumbing.
//! * [`schur_psd_check`] — block PSD test via the Schur complement.
//! * [`DensityMatrix`] — validated Hermitian PSD unit-trace carrier.

pub mod density;
pub mod eigen;
pub mod json;
pub mod matrix;

pub use density::{
    check_density, partial_trace, partial_trace_matrix, CheckReport, DensityMatrix,
    DensityViolation,
};
pub use eigen::{
    apply_hermitian_function, hermitian_eig, hermitian_trace_norm, matrix_norms, schur_psd_check,
    HermitianEigen, Norms, SchurReport, SpectralFn,
};
pub use matrix::{Complex64, ComplexMatrix};

/// Errors surfaced by the linear-algebra layer.
#[derive(Debug, thiserror::Error)]
pub enum MatError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (residual {residual:.3e} > tolerance {tolerance:.3e})")]
    NotHermitian { residual: f64, tolerance: f64 },
    #[error("Jacobi sweep cap {sweeps} reached with off-diagonal norm {off:.3e}")]
    NoConvergence { sweeps: usize, off: f64 },
    #[error("eigenvalue {min:.3e} is too negative for a matrix square root")]
    NegativeEigenvalueForSqrt { min: f64 },
    #[error("not a density matrix: {0:?}")]
    NotDensity(Vec<DensityViolation>),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}
