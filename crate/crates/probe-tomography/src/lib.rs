//! Finite-shot covert extraction.
//!
//! The exact covert decryption reads the ciphertext matrix directly; this
//! crate replaces it with a measurement simulation.  A probe rotation on the
//! control qubit turns the covert block into the difference of two branch
//! blocks `D_0 - D_1`; each shot samples a branch, a Pauli observable, and a
//! +/-1 outcome, and a Horvitz-Thompson linear-inversion estimator rebuilds
//! the blocks from the shot record.  [`plan_shots`] sizes the experiment from
//! the sample-complexity bound, and [`dcm_finite`] runs the full loop.

mod estimate;
mod plan;
mod sample;

pub use estimate::{linear_inversion_estimate, reconstruct_covert, BlockEstimate};
pub use plan::{plan_shots, Design, TomographyPlan};
pub use sample::{probe_blocks, sample_shot, Probe, ProbeDistribution, ShotRecord};

use mat_core::MatError;
use qop_kit::QopError;

#[derive(Debug, thiserror::Error)]
pub enum TomoError {
    /// The frame design is only tabulated for a single qubit.
    #[error("design unsupported for dimension {d}: {detail}")]
    UnsupportedDesign { d: usize, detail: String },

    /// A branch probability underflowed; the conditional state is undefined.
    #[error("empty branch: p0 = {p0}, p1 = {p1}")]
    EmptyBranch { p0: f64, p1: f64 },

    /// The estimator needs at least one shot in the branch.
    #[error("no shots landed in branch {branch}")]
    NoShotsInBranch { branch: u8 },

    /// Plan parameters out of range or inconsistent with the operands.
    #[error("bad plan: {0}")]
    BadPlan(String),

    /// Numerical sanity violation (branch probabilities not summing to one).
    #[error("bad state: {0}")]
    BadState(String),

    #[error(transparent)]
    Core(#[from] anamorph_core::CoreError),

    #[error(transparent)]
    Qop(#[from] QopError),

    #[error(transparent)]
    Mat(#[from] MatError),
}

/// Run the full finite-data covert extraction.
///
/// Executes the plan's shot schedule (groups in design order, each group's
/// allocation consecutively) against the ciphertext, estimates both branch
/// blocks, and reconstructs the covert message from the quadrant difference.
/// Returns the report together with the shot log.
///
/// `b_error_l2` compares the estimated quadrant difference against the exact
/// one computed from the ciphertext and key, so the report always carries the
/// true estimator error; `b_error_trace_bound = eta * sqrt(d) * b_error_l2`
/// converts it to a trace-norm bound on the covert block.
pub fn dcm_finite(
    ct: &anamorph_core::Ciphertext,
    key: &anamorph_core::AnamorphicKey,
    plan: &TomographyPlan,
    rng: &mut impl seedstream::RandomSource,
) -> Result<(DcmFiniteReport, Vec<ShotRecord>), TomoError> {
    let d = 1usize << key.d1;
    if plan.d != d {
        return Err(TomoError::BadPlan(format!(
            "plan covers dimension {}, key expects {}",
            plan.d, d
        )));
    }

    let dist = ProbeDistribution::build(ct, &key.perm, Probe::X)?;
    let mut shots = Vec::with_capacity(plan.n_shots);
    for (group, &count) in plan.allocation.iter().enumerate() {
        for _ in 0..count {
            shots.push(dist.draw(group, rng)?);
        }
    }

    let est = linear_inversion_estimate(&shots, plan)?;
    if est.n0 == 0 {
        return Err(TomoError::NoShotsInBranch { branch: 0 });
    }
    if est.n1 == 0 {
        return Err(TomoError::NoShotsInBranch { branch: 1 });
    }

    let (d0_exact, d1_exact) = probe_blocks(ct, &key.perm, Probe::X)?;
    let target = (&d0_exact - &d1_exact).scaled(0.5);
    let estimated = (&est.d0_hat - &est.d1_hat).scaled(0.5);
    let b_error_l2 = (&estimated - &target).frobenius_norm();

    let mc_hat = reconstruct_covert(&est.d0_hat, &est.d1_hat, key)?;
    let report = DcmFiniteReport {
        mc_hat,
        b_error_l2,
        b_error_trace_bound: key.eta as f64 * (d as f64).sqrt() * b_error_l2,
    };
    Ok((report, shots))
}

/// Output of [`dcm_finite`].  `mc_hat` is the raw linear-inversion estimate:
/// Hermitian by construction but not projected to positive semidefinite.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DcmFiniteReport {
    pub mc_hat: mat_core::ComplexMatrix,
    pub b_error_l2: f64,
    pub b_error_trace_bound: f64,
}
