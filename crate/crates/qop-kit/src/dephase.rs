//! Tunable dephasing of the control qubit.
//!
//! With the control as the most significant factor, a block-structured state
//! is `[[A, B], [B†, D]]` in quadrants. The channel scales the off-diagonal
//! quadrants by λ ∈ [-1, 1] and leaves the diagonal ones untouched:
//!
//! * λ = 1 is the identity,
//! * λ = 0 is the pinching `ρ ↦ Σ_b (|b⟩⟨b| ⊗ I) ρ (|b⟩⟨b| ⊗ I)`, the
//!   measure-and-forget channel on the control qubit,
//! * in general it is the convex mixture `(1+λ)/2 · ρ + (1-λ)/2 · ZρZ` on the
//!   control, hence completely positive for the whole λ range.

use crate::QopError;
use mat_core::DensityMatrix;

/// Scale the control-qubit coherences by λ.
pub fn dephase_control(rho: &DensityMatrix, lambda: f64) -> Result<DensityMatrix, QopError> {
    if !(-1.0..=1.0).contains(&lambda) || !lambda.is_finite() {
        return Err(QopError::LambdaOutOfRange(lambda));
    }
    let dim = rho.dim();
    if dim % 2 != 0 {
        return Err(QopError::Dimension(format!(
            "control dephasing needs an even dimension, got {dim}"
        )));
    }
    let half = dim / 2;
    let mut out = rho.mat().clone();
    for r in 0..dim {
        for c in 0..dim {
            if (r < half) != (c < half) {
                out[(r, c)] = out[(r, c)] * lambda;
            }
        }
    }
    Ok(DensityMatrix::new(out)?)
}
