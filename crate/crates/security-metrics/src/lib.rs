//! Security quantities for the anamorphic encryption scheme, all in closed
//! form: trace distance and fidelity with the Fuchs-van de Graaf sandwich,
//! permutation-twirl expectations, von Neumann and relative entropies of the
//! carrier/stego pair, and the exact all-coins average of the encryption map
//! (which is a constant channel, the information-theoretic CPA argument).
//!
//! Everything here is deterministic; the only randomized entry point is the
//! Monte Carlo fallback of [`qcpa_average_sampled`] for dimensions where the
//! exact coin enumeration is out of reach.

mod distance;
mod entropy;
mod qcpa;
mod twirl;

pub use distance::{
    expected_state_distance, fidelity, indistinguishability_report, trace_distance,
    IndistinguishabilityReport,
};
pub use entropy::{entropy_report, EntropyReport};
pub use qcpa::{qcpa_average_exact, qcpa_average_sampled, QcpaReport};
pub use twirl::{twirl_expectation, TwirlReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("brute-force twirl over {n}! permutations refused (limit n <= 8)")]
    TooLargeForBruteForce { n: usize },
    #[error("carrier state is not strictly positive (min eigenvalue {min_eig:.3e})")]
    NotStrictlyPositive { min_eig: f64 },
    #[error("exact coin enumeration only covers single-qubit carrier and covert spaces, got {dim}-dimensional input")]
    UnsupportedDims { dim: usize },
    #[error("core: {0}")]
    Core(#[from] anamorph_core::CoreError),
    #[error("matrix: {0}")]
    Mat(#[from] mat_core::MatError),
    #[error("pauli/permutation: {0}")]
    Qop(#[from] qop_kit::QopError),
}
