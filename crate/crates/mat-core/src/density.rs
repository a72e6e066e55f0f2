//! Validated density matrices and partial traces.

use crate::eigen::hermitian_eig;
use crate::matrix::{Complex64, ComplexMatrix};
use crate::MatError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Default validation tolerance for density-matrix invariants.
pub const DENSITY_TOL: f64 = 1e-10;

/// One failed density-matrix invariant, with the measured residual and the
/// tolerance it was compared against.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum DensityViolation {
    NotHermitian { residual: f64, tolerance: f64 },
    NegativeEigenvalue { min_eigenvalue: f64, tolerance: f64 },
    TraceNotOne { trace: f64, tolerance: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub ok: bool,
    pub violations: Vec<DensityViolation>,
}

/// Evaluate the three density-matrix invariants at tolerance `tol`:
/// hermiticity (entrywise, relative to `max(1, operator norm)`), positive
/// semidefiniteness (`min eigenvalue >= -tol`), and unit trace.
pub fn check_density(a: &ComplexMatrix, tol: f64) -> CheckReport {
    let mut violations = Vec::new();
    if !a.is_square() || a.finite_check().is_err() {
        return CheckReport {
            ok: false,
            violations: vec![DensityViolation::NotHermitian {
                residual: f64::INFINITY,
                tolerance: tol,
            }],
        };
    }
    // Operator norm of the symmetrized part; the symmetrization cannot fail
    // the eigensolver's hermiticity gate.
    let n = a.rows();
    let sym = ComplexMatrix::from_fn(n, n, |r, c| (a[(r, c)] + a[(c, r)].conj()) * 0.5);
    let eig = hermitian_eig(&sym).expect("symmetrized matrix is Hermitian");
    let op_norm = eig.eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max);

    let herm_tol = tol * op_norm.max(1.0);
    let residual = a.hermitian_residual();
    if residual > herm_tol {
        violations.push(DensityViolation::NotHermitian {
            residual,
            tolerance: herm_tol,
        });
    }
    if eig.min() < -tol {
        violations.push(DensityViolation::NegativeEigenvalue {
            min_eigenvalue: eig.min(),
            tolerance: tol,
        });
    }
    let trace = a.trace();
    if (trace.re - 1.0).abs() > tol || trace.im.abs() > tol {
        violations.push(DensityViolation::TraceNotOne {
            trace: trace.re,
            tolerance: tol,
        });
    }
    CheckReport {
        ok: violations.is_empty(),
        violations,
    }
}

/// Hermitian, PSD, unit-trace complex matrix. Construction validates all three
/// invariants at [`DENSITY_TOL`]; the JSON form is the inner matrix and is
/// re-validated on parse.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self, MatError> {
        let report = check_density(&mat, DENSITY_TOL);
        if !report.ok {
            return Err(MatError::NotDensity(report.violations));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            mat: ComplexMatrix::identity(dim).scaled(1.0 / dim as f64),
        }
    }

    /// |i><i| on a `dim`-dimensional space.
    pub fn basis_state(dim: usize, i: usize) -> Self {
        assert!(i < dim);
        let mut m = ComplexMatrix::zeros(dim, dim);
        m[(i, i)] = Complex64::new(1.0, 0.0);
        DensityMatrix { mat: m }
    }

    /// Pure state from amplitudes (normalized here).
    pub fn pure_state(amplitudes: &[Complex64]) -> Self {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!(norm > 0.0, "zero state vector");
        let v: Vec<Complex64> = amplitudes.iter().map(|&z| z / norm).collect();
        DensityMatrix {
            mat: ComplexMatrix::outer(&v, &v),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.mat.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let mat = ComplexMatrix::deserialize(deserializer)?;
        DensityMatrix::new(mat).map_err(serde::de::Error::custom)
    }
}

/// Partial trace over the factors listed in `traced_indices`.
///
/// `factor_dims` lists the tensor factors most-significant first (matching
/// [`ComplexMatrix::tensor`]); their product must equal the matrix dimension.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    factor_dims: &[usize],
    traced_indices: &[usize],
) -> Result<ComplexMatrix, MatError> {
    if !m.is_square() {
        return Err(MatError::DimensionMismatch(
            "partial trace needs a square matrix".into(),
        ));
    }
    let total: usize = factor_dims.iter().product();
    if total != m.rows() {
        return Err(MatError::DimensionMismatch(format!(
            "factor dims product {} != matrix dim {}",
            total,
            m.rows()
        )));
    }
    let mut traced = vec![false; factor_dims.len()];
    for &t in traced_indices {
        if t >= factor_dims.len() {
            return Err(MatError::DimensionMismatch(format!(
                "traced factor {t} out of range"
            )));
        }
        traced[t] = true;
    }
    let kept: Vec<usize> = (0..factor_dims.len()).filter(|&i| !traced[i]).collect();
    let kept_dim: usize = kept.iter().map(|&i| factor_dims[i]).product::<usize>().max(1);

    let decompose = |mut idx: usize| -> Vec<usize> {
        let mut parts = vec![0usize; factor_dims.len()];
        for i in (0..factor_dims.len()).rev() {
            parts[i] = idx % factor_dims[i];
            idx /= factor_dims[i];
        }
        parts
    };
    let kept_index = |parts: &[usize]| -> usize {
        kept.iter().fold(0usize, |acc, &i| acc * factor_dims[i] + parts[i])
    };

    let mut out = ComplexMatrix::zeros(kept_dim, kept_dim);
    for row in 0..total {
        let rp = decompose(row);
        for col in 0..total {
            let cp = decompose(col);
            if (0..factor_dims.len()).all(|i| !traced[i] || rp[i] == cp[i]) {
                out[(kept_index(&rp), kept_index(&cp))] += m[(row, col)];
            }
        }
    }
    Ok(out)
}

/// Partial trace of a density matrix; the result is re-validated.
pub fn partial_trace(
    rho: &DensityMatrix,
    factor_dims: &[usize],
    traced_indices: &[usize],
) -> Result<DensityMatrix, MatError> {
    let reduced = partial_trace_matrix(rho.mat(), factor_dims, traced_indices)?;
    DensityMatrix::new(reduced)
}
