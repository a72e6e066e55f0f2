//! Selection of the covert coupling strength `eta`.

use mat_core::{hermitian_eig, ComplexMatrix};
use serde::{Deserialize, Serialize};

use crate::key::SecurityConfig;
use crate::CoreError;

/// Which positivity condition the coupling must satisfy.
///
/// `Strict` keeps the assembled block matrix positive semidefinite for the
/// exact message pair.  `Weak` uses the spectral bound
/// `2 * max_eig(covert) <= eta * min_eig(original)`, which implies the strict
/// condition and depends only on the spectra, so it is invariant under the
/// one-time pads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EtaMode {
    Strict,
    Weak,
}

/// Relative slack for the feasibility comparisons.  Boundary instances are
/// meant to pass exactly (e.g. a coupling equal to `2 * kappa_max`), but the
/// spectral quantities carry a few ulps of rounding, so `a <= b` is tested
/// with headroom proportional to the operands.
pub(crate) const REL_SLACK: f64 = 1e-9;

pub(crate) fn le_slack(a: f64, b: f64) -> bool {
    a <= b + REL_SLACK * a.abs().max(b.abs()).max(1.0)
}

/// Smallest integer coupling admissible for the (already padded and
/// encrypted) message pair.
///
/// Three floors are combined:
/// * the positivity condition selected by `mode`;
/// * hardness: `1/eta < 2^(-security_bits)`, i.e. `eta >= 2^security_bits + 1`;
/// * dilation feasibility: `eta >= 2 * kappa_max` where `kappa_max` is the
///   operator norm of the contraction seed, floored at 1.
pub fn select_eta(
    mo_enc: &ComplexMatrix,
    mc_padded: &ComplexMatrix,
    cfg: &SecurityConfig,
    mode: EtaMode,
) -> Result<u64, CoreError> {
    if mo_enc.rows() != mc_padded.rows() {
        return Err(CoreError::Dimension(format!(
            "original block is {}x{} but covert block is {}x{}",
            mo_enc.rows(),
            mo_enc.cols(),
            mc_padded.rows(),
            mc_padded.cols()
        )));
    }
    if cfg.security_bits > 62 {
        return Err(CoreError::Dimension(format!(
            "security_bits = {} exceeds supported maximum 62",
            cfg.security_bits
        )));
    }

    let eig_mo = hermitian_eig(mo_enc)?;
    let min_eig = eig_mo.min();
    if min_eig < cfg.min_eig_floor {
        return Err(CoreError::NotStrictlyPositive {
            min_eig,
            floor: cfg.min_eig_floor,
        });
    }

    let eta_security = (1u64 << cfg.security_bits) + 1;

    // contraction seed V0 = M_o^(-1/2) M_c M_o^(-1/2); Hermitian PSD
    let inv_sqrt = eig_mo.map(|l| 1.0 / l.sqrt());
    let v0 = &(&inv_sqrt * mc_padded) * &inv_sqrt;
    let kappa = hermitian_eig(&v0)?
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, &l| m.max(l.abs()));
    let kappa_max = kappa.max(1.0);
    let eta_dilation = smallest_satisfying(2.0 * kappa_max, |eta| le_slack(2.0 * kappa_max, eta));

    let eta_condition = match mode {
        EtaMode::Weak => {
            let max_covert = hermitian_eig(mc_padded)?.max();
            smallest_satisfying(2.0 * max_covert / min_eig, |eta| {
                le_slack(2.0 * max_covert, eta * min_eig)
            })
        }
        EtaMode::Strict => {
            let inv = &inv_sqrt * &inv_sqrt;
            let sandwich = &(mc_padded * &inv) * mc_padded;
            let x = hermitian_eig(&sandwich)?
                .eigenvalues
                .iter()
                .fold(0.0f64, |m, &l| m.max(l.abs()));
            smallest_satisfying((4.0 * x / min_eig).sqrt(), |eta| {
                le_slack(4.0 * x, eta * eta * min_eig)
            })
        }
    };

    Ok(eta_security.max(eta_dilation).max(eta_condition))
}

/// Strict positivity check for a concrete coupling: the assembled block
/// matrix stays positive semidefinite iff
/// `4 * ||M_c M_o^(-1) M_c|| <= eta^2 * min_eig(M_o)`.
pub(crate) fn strict_feasibility(
    mo_enc: &ComplexMatrix,
    mc_padded: &ComplexMatrix,
    eta: u64,
    floor: f64,
) -> Result<(), CoreError> {
    let eig_mo = hermitian_eig(mo_enc)?;
    let min_eig = eig_mo.min();
    if min_eig < floor {
        return Err(CoreError::NotStrictlyPositive {
            min_eig,
            floor,
        });
    }
    let inv = eig_mo.map(|l| 1.0 / l);
    let sandwich = &(mc_padded * &inv) * mc_padded;
    let x = hermitian_eig(&sandwich)?
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, &l| m.max(l.abs()));
    let eta_f = eta as f64;
    if !le_slack(4.0 * x, eta_f * eta_f * min_eig) {
        return Err(CoreError::EtaInfeasible {
            eta,
            detail: format!(
                "positivity needs 4 * {x:.6e} <= eta^2 * {min_eig:.6e}"
            ),
        });
    }
    Ok(())
}

/// Smallest integer >= 2 satisfying `pred`, starting from a float estimate.
///
/// The estimate is only a hint: the result is corrected in both directions so
/// that boundary cases like an exactly-integer bound do not pick up a stray
/// ulp from the float arithmetic.
fn smallest_satisfying(estimate: f64, pred: impl Fn(f64) -> bool) -> u64 {
    let mut eta = estimate.ceil().max(2.0) as u64;
    while eta > 2 && pred((eta - 1) as f64) {
        eta -= 1;
    }
    while !pred(eta as f64) {
        eta += 1;
    }
    eta
}
