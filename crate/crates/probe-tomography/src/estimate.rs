//! Horvitz-Thompson linear inversion of the branch blocks.

use anamorph_core::AnamorphicKey;
use mat_core::ComplexMatrix;
use qop_kit::{pad_unembed, pauli_observable, qotp_unitary, PauliString};

use crate::plan::TomographyPlan;
use crate::sample::ShotRecord;
use crate::TomoError;

/// Estimated branch blocks with per-branch shot counts.  An empty branch
/// carries zero estimated mass (its weight `n(b)/N` vanishes).
#[derive(Debug, Clone)]
pub struct BlockEstimate {
    pub d0_hat: ComplexMatrix,
    pub d1_hat: ComplexMatrix,
    pub n0: usize,
    pub n1: usize,
}

/// Invert the shot record into branch-block estimates.
///
/// Per branch `b`: `mu_b(P) = (1/n(b)) * sum_{t in b} 1{P_t = P} m_t / pi(P)`
/// with `pi` the design's uniform inclusion probability, `mu_b(I) = 1` fixed
/// analytically; `rho_{M|b} = (1/d)(I + sum_P mu_b(P) P)`; and
/// `D_b = (n(b)/N) rho_{M|b}`.
pub fn linear_inversion_estimate(
    shots: &[ShotRecord],
    plan: &TomographyPlan,
) -> Result<BlockEstimate, TomoError> {
    if shots.is_empty() {
        return Err(TomoError::NoShotsInBranch { branch: 0 });
    }
    if !plan.d.is_power_of_two() || plan.d < 2 {
        return Err(TomoError::BadPlan(format!(
            "plan dimension {} is not a power of two",
            plan.d
        )));
    }
    let d1_qubits = plan.d.trailing_zeros() as usize;
    let groups = plan.group_count();
    let paulis = PauliString::enumerate_nonidentity(d1_qubits);
    debug_assert_eq!(paulis.len(), groups);

    let mut sums = [vec![0.0f64; groups], vec![0.0f64; groups]];
    let mut counts = [0usize; 2];
    for (t, shot) in shots.iter().enumerate() {
        if shot.branch > 1 {
            return Err(TomoError::BadPlan(format!(
                "shot {t}: branch {} out of range",
                shot.branch
            )));
        }
        if shot.pauli >= groups {
            return Err(TomoError::BadPlan(format!(
                "shot {t}: Pauli index {} out of range for {groups} groups",
                shot.pauli
            )));
        }
        if shot.outcome != 1 && shot.outcome != -1 {
            return Err(TomoError::BadPlan(format!(
                "shot {t}: outcome {} not in {{-1, +1}}",
                shot.outcome
            )));
        }
        sums[shot.branch as usize][shot.pauli] += shot.outcome as f64;
        counts[shot.branch as usize] += 1;
    }

    let n_total = shots.len() as f64;
    let pi = plan.pauli_probability();
    let mut blocks = Vec::with_capacity(2);
    for b in 0..2 {
        if counts[b] == 0 {
            blocks.push(ComplexMatrix::zeros(plan.d, plan.d));
            continue;
        }
        let n_b = counts[b] as f64;
        let mut rho = ComplexMatrix::identity(plan.d);
        for (p, pauli) in paulis.iter().enumerate() {
            let mu = sums[b][p] / n_b / pi;
            if mu == 0.0 {
                continue;
            }
            let term = pauli_observable(pauli).scaled(mu);
            rho = &rho + &term;
        }
        blocks.push(rho.scaled(n_b / n_total / plan.d as f64));
    }
    let d1_hat = blocks.pop().unwrap();
    let d0_hat = blocks.pop().unwrap();
    Ok(BlockEstimate {
        d0_hat,
        d1_hat,
        n0: counts[0],
        n1: counts[1],
    })
}

/// Rebuild the covert message from (estimated or exact) branch blocks:
/// symmetrize `B = eta (D_0 - D_1) / 2`, strip the pad embedding, undo the
/// covert one-time pad.  Returns the raw matrix without positivity
/// projection.
pub fn reconstruct_covert(
    d0: &ComplexMatrix,
    d1: &ComplexMatrix,
    key: &AnamorphicKey,
) -> Result<ComplexMatrix, TomoError> {
    let b_hat = (d0 - d1).scaled(key.eta as f64 / 2.0);
    let b_sym = (&b_hat + &b_hat.dagger()).scaled(0.5);
    let embedded = pad_unembed(&b_sym, key.d2)?;
    let u_pad = qotp_unitary(&key.k_prime);
    Ok(embedded.conjugate_by(&u_pad.dagger()))
}
