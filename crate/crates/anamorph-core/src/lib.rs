//! Anamorphic symmetric-key encryption over density matrices.
//!
//! The scheme hides a covert message state inside the ciphertext of an
//! ordinary ("original") message state.  The joint key holds two one-time-pad
//! keys, a basis permutation of the doubled space, and a coupling strength
//! `eta`.  Three constructions of the same ciphertext are provided:
//!
//! * [`encrypt_direct`] — assemble the 2x2 block matrix explicitly;
//! * [`encrypt_original`] — the honest ciphertext carrying no covert block;
//! * [`encrypt_dilation`] — build a pure dilation on an ancilla register,
//!   trace it out, and partially dephase the control qubit.  Agrees with the
//!   direct construction to floating-point accuracy and exposes the
//!   intermediate contraction data in a [`DilationTrace`].
//!
//! Receivers run [`dom_decrypt`] (decrypt-original-message), which ignores the
//! covert block entirely, or [`dcm_exact`] (decrypt-covert-message), which
//! isolates the off-diagonal block by a Hadamard rotation of the control
//! qubit.  [`eoc_extract`] maps any anamorphic ciphertext onto the honest
//! ciphertext of the same original message without touching the keys' pads.

mod corpus;
mod decrypt;
mod encrypt;
mod eta;
mod key;

pub use corpus::{random_density, random_pure, random_strict_pd};
pub use decrypt::{dcm_exact, dom_decrypt, eoc_extract};
pub use encrypt::{encrypt_dilation, encrypt_direct, encrypt_original, Ciphertext, DilationTrace};
pub use eta::{select_eta, EtaMode};
pub use key::{keygen, AnamorphicKey, SecurityConfig};

pub use mat_core::{Complex64, ComplexMatrix, DensityMatrix};

use mat_core::MatError;
use qop_kit::QopError;

/// Errors produced by key generation, encryption and decryption.
#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    /// The recorded coupling `eta` violates the positivity condition for the
    /// message pair being encrypted.
    #[error("eta = {eta} infeasible: {detail}")]
    EtaInfeasible { eta: u64, detail: String },

    /// The dilation requires `eta >= 2 * kappa_max`; the recorded value is
    /// below that threshold.
    #[error("eta = {eta} too small for dilation; requires eta >= {required}")]
    EtaTooSmallForDilation { eta: u64, required: f64 },

    /// The encrypted original message must be strictly positive definite for
    /// the spectral manipulations to be well conditioned.
    #[error("matrix not strictly positive: min eigenvalue {min_eig} below floor {floor}")]
    NotStrictlyPositive { min_eig: f64, floor: f64 },

    /// Covert extraction found no usable signal (the ciphertext was produced
    /// without a covert block, or the block was destroyed).
    #[error("no covert signal: recovered block has trace {trace}")]
    NoCovertSignal { trace: f64 },

    /// Operand dimensions do not match the key.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error(transparent)]
    Qop(#[from] QopError),

    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Number of qubits for a dimension that must be a power of two.
pub(crate) fn qubits_for_dim(dim: usize) -> Result<u32, CoreError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(CoreError::Dimension(format!(
            "dimension {dim} is not a positive power of two"
        )));
    }
    Ok(dim.trailing_zeros())
}
