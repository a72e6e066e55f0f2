//! Zero-padding isometry between message spaces.
//!
//! `V |ψ⟩ = |ψ⟩ ⊗ |0…0⟩` lifts a d2-qubit operator into d1 qubits. With the
//! most-significant-first index convention the embedded copy of basis state
//! `|m⟩` sits at index `m * 2^(d1-d2)`, so embedding writes a strided copy and
//! un-embedding reads the same strided principal submatrix (`V† · V`).

use crate::{qubits_for_dim, QopError};
use mat_core::{Complex64, ComplexMatrix};

/// `V a V†`: embed a 2^d2-dimensional operator into 2^d1 dimensions.
pub fn pad_embed(a: &ComplexMatrix, d1: u32) -> Result<ComplexMatrix, QopError> {
    if !a.is_square() {
        return Err(QopError::Dimension("pad_embed needs a square matrix".into()));
    }
    let d2 = qubits_for_dim(a.rows())?;
    if d2 > d1 {
        return Err(QopError::Dimension(format!(
            "cannot embed {d2} qubits into {d1}"
        )));
    }
    let stride = 1usize << (d1 - d2);
    let big = 1usize << d1;
    let mut out = ComplexMatrix::zeros(big, big);
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            out[(r * stride, c * stride)] = a[(r, c)];
        }
    }
    Ok(out)
}

/// `V† a V`: read back the embedded block. Inverse of [`pad_embed`] exactly;
/// on states with weight outside the embedded image this is a compression and
/// the result may have trace < 1.
pub fn pad_unembed(a: &ComplexMatrix, d2: u32) -> Result<ComplexMatrix, QopError> {
    if !a.is_square() {
        return Err(QopError::Dimension("pad_unembed needs a square matrix".into()));
    }
    let d1 = qubits_for_dim(a.rows())?;
    if d2 > d1 {
        return Err(QopError::Dimension(format!(
            "cannot extract {d2} qubits from {d1}"
        )));
    }
    let stride = 1usize << (d1 - d2);
    let small = 1usize << d2;
    Ok(ComplexMatrix::from_fn(small, small, |r, c| {
        a[(r * stride, c * stride)]
    }))
}

/// `Π_V = V V†`: projector onto the embedded image (diagonal, 1 at multiples
/// of the stride).
pub fn pad_projector(d1: u32, d2: u32) -> ComplexMatrix {
    assert!(d2 <= d1);
    let stride = 1usize << (d1 - d2);
    let big = 1usize << d1;
    let mut out = ComplexMatrix::zeros(big, big);
    for m in 0..(1usize << d2) {
        out[(m * stride, m * stride)] = Complex64::new(1.0, 0.0);
    }
    out
}
