//! Qubit-register primitives shared by the encryption pipeline: Pauli strings
//! and their matrix realizations, the quantum one-time pad, the zero-padding
//! isometry between message spaces of different size, basis permutations with
//! Lehmer indexing, and the tunable control-qubit dephasing channel.
//!
//! Conventions, fixed once for the whole workspace:
//!
//! * Tensor factors are most-significant first; qubit 0 is the leftmost symbol
//!   in a Pauli string and selects the highest-order index bits.
//! * Pauli strings are indexed `X^x Z^z` per qubit with no phase factor. The
//!   phase-free realization is what the one-time pad conjugates by; the
//!   Hermitian realization (a factor `i` per `x=z=1` slot) is what gets
//!   measured, so expectation values are always real.
//! * The control register of a block-structured state is the most significant
//!   factor: quadrants of the matrix are the control-basis blocks.

pub mod dephase;
pub mod pad;
pub mod pauli;
pub mod perm;
pub mod qotp;

pub use dephase::dephase_control;
pub use pad::{pad_embed, pad_projector, pad_unembed};
pub use pauli::{hadamard, pauli_matrix, pauli_observable, phase_gate, PauliString};
pub use perm::{permutation_unitary, PermSpec};
pub use qotp::{qotp_decrypt, qotp_encrypt, qotp_key_average, qotp_unitary, QotpKey};

#[derive(Debug, thiserror::Error)]
pub enum QopError {
    #[error("key has {key_qubits} qubits but the state has {state_qubits}")]
    KeyLengthMismatch {
        key_qubits: usize,
        state_qubits: usize,
    },
    #[error("exhaustive key average limited to {limit} qubits, got {n}")]
    TooLarge { n: usize, limit: usize },
    #[error("not a permutation of 0..{size}: {reason}")]
    BadPermutation { size: usize, reason: String },
    #[error("dephasing amplitude {0} outside [-1, 1]")]
    LambdaOutOfRange(f64),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error(transparent)]
    Mat(#[from] mat_core::MatError),
}

/// `log2` for exact powers of two, used to infer qubit counts from dimensions.
pub fn qubits_for_dim(dim: usize) -> Result<u32, QopError> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(QopError::Dimension(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros())
}
