//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices, plus the
//! spectral calculus built on top of it.
//!
//! The solver visits off-diagonal positions (p, q), p < q, in row-major order
//! and annihilates each with a complex plane rotation; sweeps repeat until the
//! off-diagonal Frobenius norm drops below `1e-13 * ||A||_F`. No pivoting, no
//! thresholds that depend on runtime state — the operation sequence is a pure
//! function of the input, which makes results reproducible to the bit.
//!
//! Output conventions: eigenvalues ascending (ties broken by original diagonal
//! position), eigenvector columns normalized so the first component with
//! magnitude above 1e-12 is real and positive.

use crate::matrix::{Complex64, ComplexMatrix};
use crate::MatError;

const MAX_SWEEPS: usize = 64;
const OFF_DIAG_REL_TOL: f64 = 1e-13;
const HERMITIAN_REL_TOL: f64 = 1e-9;
const PSD_EIG_TOL: f64 = -1e-10;
const SUPPORT_REL_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// `V f(Λ) V†` for a real function of the spectrum.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let fk = f(self.eigenvalues[k]);
            if fk == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = v[(r, k)] * fk;
                for c in 0..n {
                    out[(r, c)] += vr * v[(c, k)].conj();
                }
            }
        }
        out
    }

    /// `V Λ V†`; used by tests to measure reconstruction residuals.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|x| x)
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen, MatError> {
    if !a.is_square() {
        return Err(MatError::DimensionMismatch(format!(
            "hermitian_eig needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    a.finite_check()?;
    let n = a.rows();
    let frob = a.frobenius_norm();
    let herm_tol = HERMITIAN_REL_TOL * frob.max(1.0);
    let residual = a.hermitian_residual();
    if residual > herm_tol {
        return Err(MatError::NotHermitian {
            residual,
            tolerance: herm_tol,
        });
    }

    // Work on the symmetrized copy so accumulated input roundoff cannot bias
    // the rotations.
    let mut b = ComplexMatrix::from_fn(n, n, |r, c| (a[(r, c)] + a[(c, r)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let target = OFF_DIAG_REL_TOL * frob;

    let off_norm = |m: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    s += m[(p, q)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut converged = n <= 1 || off_norm(&b) <= target;
    for _sweep in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = b[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                // Phase that makes the pivot real, then a real Jacobi rotation.
                let phase = apq / mag; // e^{i phi}
                let alpha = b[(p, p)].re;
                let gamma = b[(q, q)].re;
                let tau = (gamma - alpha) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let e = phase;
                let econj = phase.conj();

                // Column update: B <- B J, with J[p][p]=c, J[p][q]=s,
                // J[q][p]=-s e^{-i phi}, J[q][q]=c e^{-i phi}.
                for r in 0..n {
                    let bp = b[(r, p)];
                    let bq = b[(r, q)];
                    b[(r, p)] = bp * c - bq * (econj * s);
                    b[(r, q)] = bp * s + bq * (econj * c);
                }
                // Row update: B <- J† B.
                for col in 0..n {
                    let bp = b[(p, col)];
                    let bq = b[(q, col)];
                    b[(p, col)] = bp * c - bq * (e * s);
                    b[(q, col)] = bp * s + bq * (e * c);
                }
                // The pivot is annihilated by construction; pin it exactly.
                b[(p, q)] = Complex64::new(0.0, 0.0);
                b[(q, p)] = Complex64::new(0.0, 0.0);
                b[(p, p)] = Complex64::new(b[(p, p)].re, 0.0);
                b[(q, q)] = Complex64::new(b[(q, q)].re, 0.0);

                // Accumulate eigenvectors: V <- V J.
                for r in 0..n {
                    let vp = v[(r, p)];
                    let vq = v[(r, q)];
                    v[(r, p)] = vp * c - vq * (econj * s);
                    v[(r, q)] = vp * s + vq * (econj * c);
                }
            }
        }
        converged = off_norm(&b) <= target;
    }
    if !converged {
        return Err(MatError::NoConvergence {
            sweeps: MAX_SWEEPS,
            off: off_norm(&b),
        });
    }

    // Ascending order with a deterministic tie-break on the original position.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        b[(i, i)]
            .re
            .partial_cmp(&b[(j, j)].re)
            .unwrap()
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| b[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        // Phase convention: first component with magnitude > 1e-12 made real
        // positive. Columns of V are unit vectors, so one always exists.
        let mut phase = Complex64::new(1.0, 0.0);
        for r in 0..n {
            let z = v[(r, old_col)];
            if z.norm() > 1e-12 {
                phase = z.conj() / z.norm();
                break;
            }
        }
        for r in 0..n {
            vectors[(r, new_col)] = v[(r, old_col)] * phase;
        }
    }

    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: vectors,
    })
}

/// Trace norm of a Hermitian matrix = sum of |eigenvalues|.
pub fn hermitian_trace_norm(a: &ComplexMatrix) -> Result<f64, MatError> {
    let eig = hermitian_eig(a)?;
    Ok(eig.eigenvalues.iter().map(|l| l.abs()).sum())
}

/// Functions of the spectrum supported by [`apply_hermitian_function`].
///
/// `InvOnSupport` and `Log2OnSupport` act only on eigenvalues above
/// `1e-12 * max eigenvalue` and zero the kernel, which is exactly the
/// Moore-Penrose convention for the inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralFn {
    Sqrt,
    InvOnSupport,
    Log2OnSupport,
    Abs,
}

pub fn apply_hermitian_function(
    a: &ComplexMatrix,
    f: SpectralFn,
) -> Result<ComplexMatrix, MatError> {
    let eig = hermitian_eig(a)?;
    let scale = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let support_cut = SUPPORT_REL_TOL * scale;
    match f {
        SpectralFn::Sqrt => {
            if eig.min() < PSD_EIG_TOL {
                return Err(MatError::NegativeEigenvalueForSqrt { min: eig.min() });
            }
            Ok(eig.map(|l| l.max(0.0).sqrt()))
        }
        SpectralFn::InvOnSupport => Ok(eig.map(|l| if l > support_cut { 1.0 / l } else { 0.0 })),
        SpectralFn::Log2OnSupport => Ok(eig.map(|l| if l > support_cut { l.log2() } else { 0.0 })),
        SpectralFn::Abs => Ok(eig.map(f64::abs)),
    }
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct Norms {
    pub trace_norm: f64,
    pub operator_norm: f64,
    pub frobenius: f64,
}

/// Schatten norms via the singular values of `a` (eigenvalues of `a† a`).
pub fn matrix_norms(a: &ComplexMatrix) -> Result<Norms, MatError> {
    let gram = &a.dagger() * a;
    let eig = hermitian_eig(&gram)?;
    let singulars: Vec<f64> = eig.eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
    let norms = Norms {
        trace_norm: singulars.iter().sum(),
        operator_norm: singulars.iter().cloned().fold(0.0, f64::max),
        frobenius: a.frobenius_norm(),
    };
    // Schatten comparison: ||A||_1 <= sqrt(rank) ||A||_F.
    debug_assert!(
        norms.trace_norm
            <= (a.rows().min(a.cols()) as f64).sqrt() * norms.frobenius + 1e-9 * (1.0 + norms.frobenius)
    );
    Ok(norms)
}

#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SchurReport {
    pub is_psd: bool,
    /// Minimum eigenvalue of the Schur complement `D - C† B⁺ C`.
    pub schur_min_eigenvalue: f64,
}

/// PSD test for `[[B, C], [C†, D]]` without assembling it: `B ⪰ 0`, the range
/// condition `(I - B B⁺) C = 0`, and `D - C† B⁺ C ⪰ 0`. The range condition is
/// vacuous when `B` is strictly positive definite but is what keeps the test
/// equivalent to brute-force eigendecomposition once `B` is rank deficient.
pub fn schur_psd_check(
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    d: &ComplexMatrix,
) -> Result<SchurReport, MatError> {
    if !b.is_square() || !d.is_square() {
        return Err(MatError::DimensionMismatch(
            "schur_psd_check needs square diagonal blocks".into(),
        ));
    }
    if c.rows() != b.rows() || c.cols() != d.rows() {
        return Err(MatError::DimensionMismatch(format!(
            "off-diagonal block is {}x{}, expected {}x{}",
            c.rows(),
            c.cols(),
            b.rows(),
            d.rows()
        )));
    }
    let eig_b = hermitian_eig(b)?;
    let b_pinv = {
        let scale = eig_b.eigenvalues.iter().cloned().fold(0.0, f64::max);
        let cut = SUPPORT_REL_TOL * scale;
        eig_b.map(|l| if l > cut { 1.0 / l } else { 0.0 })
    };
    let projected = &(b * &b_pinv) * c;
    let range_residual = (&projected - c).max_abs_entry();
    let range_ok = range_residual <= 1e-9 * c.max_abs_entry().max(1.0);
    let correction = &c.dagger() * &(&b_pinv * c);
    let schur = d - &correction;
    let schur_sym = ComplexMatrix::from_fn(schur.rows(), schur.cols(), |r, q| {
        (schur[(r, q)] + schur[(q, r)].conj()) * 0.5
    });
    let min_schur = hermitian_eig(&schur_sym)?.min();
    Ok(SchurReport {
        is_psd: eig_b.min() >= PSD_EIG_TOL && range_ok && min_schur >= PSD_EIG_TOL,
        schur_min_eigenvalue: min_schur,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eigensystem() {
        let eig = hermitian_eig(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(eig.eigenvalues, vec![1.0; 4]);
        assert!(eig.eigenvectors.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-14);
    }

    #[test]
    fn known_2x2_hermitian() {
        // [[1, i], [-i, 1]] has eigenvalues {0, 2}.
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)], vec![c(0.0, -1.0), c(1.0, 0.0)]]);
        let eig = hermitian_eig(&a).unwrap();
        assert!((eig.eigenvalues[0] - 0.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] - 2.0).abs() < 1e-12);
        assert!(eig.reconstruct().max_abs_diff(&a) < 1e-12);
    }

    #[test]
    fn eigenvalues_sorted_ascending_with_deterministic_phase() {
        let a = ComplexMatrix::diag(&[3.0, -1.0, 2.0]);
        let eig = hermitian_eig(&a).unwrap();
        assert_eq!(eig.eigenvalues, vec![-1.0, 2.0, 3.0]);
        // Each eigenvector's first significant component is real positive.
        for k in 0..3 {
            let col: Vec<Complex64> = (0..3).map(|r| eig.eigenvectors[(r, k)]).collect();
            let first = col.iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(first.im.abs() < 1e-14 && first.re > 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]);
        match hermitian_eig(&a) {
            Err(MatError::NotHermitian { .. }) => {}
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn zero_matrix_converges_immediately() {
        let z = ComplexMatrix::zeros(3, 3);
        let eig = hermitian_eig(&z).unwrap();
        assert_eq!(eig.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn sqrt_squares_back() {
        let a = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(1.0, 1.0)], vec![c(1.0, -1.0), c(3.0, 0.0)]]);
        // a is Hermitian but maybe not PSD; square it to get PSD.
        let psd = &a * &a;
        let root = apply_hermitian_function(&psd, SpectralFn::Sqrt).unwrap();
        assert!((&root * &root).max_abs_diff(&psd) < 1e-10);
    }

    #[test]
    fn sqrt_rejects_truly_negative() {
        let a = ComplexMatrix::diag(&[1.0, -0.5]);
        match apply_hermitian_function(&a, SpectralFn::Sqrt) {
            Err(MatError::NegativeEigenvalueForSqrt { min }) => assert!((min + 0.5).abs() < 1e-12),
            other => panic!("expected NegativeEigenvalueForSqrt, got {other:?}"),
        }
    }

    #[test]
    fn inv_on_support_satisfies_penrose_on_rank_deficient() {
        // diag(2, 1, 0) pseudo-inverse is diag(0.5, 1, 0).
        let a = ComplexMatrix::diag(&[2.0, 1.0, 0.0]);
        let p = apply_hermitian_function(&a, SpectralFn::InvOnSupport).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::diag(&[0.5, 1.0, 0.0])) < 1e-12);
        let axa = &(&a * &p) * &a;
        assert!(axa.max_abs_diff(&a) < 1e-12);
        let xax = &(&p * &a) * &p;
        assert!(xax.max_abs_diff(&p) < 1e-12);
    }

    #[test]
    fn log2_on_support() {
        let a = ComplexMatrix::diag(&[4.0, 1.0, 0.0]);
        let l = apply_hermitian_function(&a, SpectralFn::Log2OnSupport).unwrap();
        assert!(l.max_abs_diff(&ComplexMatrix::diag(&[2.0, 0.0, 0.0])) < 1e-12);
    }

    #[test]
    fn norms_of_identity_4x4() {
        let n = matrix_norms(&ComplexMatrix::identity(4)).unwrap();
        assert!((n.trace_norm - 4.0).abs() < 1e-12);
        assert!((n.operator_norm - 1.0).abs() < 1e-12);
        assert!((n.frobenius - 2.0).abs() < 1e-12);
    }

    #[test]
    fn schur_block_diagonal_is_psd() {
        let b = ComplexMatrix::identity(2).scaled(0.25);
        let z = ComplexMatrix::zeros(2, 2);
        let rep = schur_psd_check(&b, &z, &b).unwrap();
        assert!(rep.is_psd);
        assert!((rep.schur_min_eigenvalue - 0.25).abs() < 1e-12);
    }

    #[test]
    fn schur_catches_range_violation() {
        // B = 0 forces C into the kernel; any nonzero C must fail even though
        // the Schur complement itself is PSD.
        let b = ComplexMatrix::zeros(2, 2);
        let c_ = ComplexMatrix::identity(2);
        let d = ComplexMatrix::identity(2);
        let rep = schur_psd_check(&b, &c_, &d).unwrap();
        assert!(!rep.is_psd);
    }
}
