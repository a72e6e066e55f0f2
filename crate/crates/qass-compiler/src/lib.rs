//! Anamorphic secret sharing over the 2-of-3 threshold structure.
//!
//! The stego ciphertext is spread across three players with a `((3,1))_q`
//! polynomial erasure code (quantum Shamir at threshold 2), and the six
//! key-tuple components are Shamir-shared over per-component prime fields.
//! Any two players reconstruct both the carrier and the covert message; any
//! single player holds a maximally mixed quantum register and a perfectly
//! hiding classical share.

mod cgl;
mod compiler;
mod field;
mod shamir;
mod tuple;

pub use cgl::{cgl_decode, cgl_encode, EncodedQuantumState};
pub use compiler::{
    cheat_simulate, qass_reconstruct, qass_share, share_size_report, CheatReport, QassShares,
    Reconstructed, ShareSizeReport, COMPONENT_NAMES,
};
pub use field::{is_prime, smallest_prime_above, smallest_prime_at_least, FieldElement};
pub use shamir::{shamir_reconstruct, shamir_share};
pub use tuple::{ClassicalShare, EtaDomain, KeyTuple, ShareBundle};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum QassError {
    #[error("{p} is not prime")]
    NotPrime { p: u64 },
    #[error("field of size {p} too small, need at least {min}")]
    FieldTooSmall { p: u64, min: u64 },
    #[error("value {value} outside field of size {p}")]
    ValueOutOfField { value: u64, p: u64 },
    #[error("two distinct shares required for reconstruction")]
    ThresholdUnmet,
    #[error("shares evaluate the polynomial at duplicate points")]
    DuplicatePoints,
    #[error("register pair ({i}, {j}) is not two distinct members of {{1, 2, 3}}")]
    InvalidPair { i: usize, j: usize },
    #[error("covert components k4, k5, k6 were withheld from these bundles")]
    CovertUnavailable,
    #[error("component {0} missing from a bundle")]
    ComponentMissing(String),
    #[error("eta domain: {0}")]
    BadEtaDomain(String),
    #[error("no admissible eta in the domain at or above the required {required}")]
    NoFeasibleEta { required: u64 },
    #[error("sharing is implemented at desk scale (single-qubit spaces), got dimension {dim}")]
    UnsupportedScale { dim: usize },
    #[error("malformed share: {0}")]
    BadShare(String),
    #[error("core: {0}")]
    Core(#[from] anamorph_core::CoreError),
    #[error("matrix: {0}")]
    Mat(#[from] mat_core::MatError),
    #[error("pauli/permutation: {0}")]
    Qop(#[from] qop_kit::QopError),
}
