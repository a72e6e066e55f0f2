//! Average of the stego encryption over all key coins.
//!
//! Over a uniformly random pad, permutation and covert pad the encryption map
//! sends *every* input pair to the same state: the permutation twirl of the
//! two-block matrix with `I/2^{d1+1}` on the diagonal and the padded
//! `I/(eta 2^{d2})` off the diagonal.  A chosen-plaintext adversary without
//! the key therefore sees a constant channel.  Single-qubit spaces are small
//! enough to enumerate the 4 * 4 * 24 coins exactly; larger spaces fall back
//! to Monte Carlo over sampled keys.

use anamorph_core::{encrypt_direct, AnamorphicKey};
use mat_core::{Complex64, ComplexMatrix, DensityMatrix};
use qop_kit::{pad_projector, PermSpec, QotpKey};
use seedstream::RandomSource;
use serde::Serialize;

use crate::distance::trace_distance;
use crate::twirl::twirl_expectation;
use crate::MetricsError;

#[derive(Debug, Clone, Serialize)]
pub struct QcpaReport {
    pub avg_state: DensityMatrix,
    pub xi_formula: DensityMatrix,
    pub distance: f64,
    /// Frobenius-norm standard error of the averaged state; Monte Carlo only.
    pub std_error: Option<f64>,
}

fn qubits_for(dim: usize) -> Result<u32, MetricsError> {
    if dim >= 2 && dim.is_power_of_two() {
        Ok(dim.trailing_zeros())
    } else {
        Err(MetricsError::UnsupportedDims { dim })
    }
}

/// The twirled theorem state `alpha I + beta J` for the given sizes.
fn lemma_average(d1: u32, d2: u32, eta: u64) -> Result<DensityMatrix, MetricsError> {
    let d = 1usize << d1;
    let projector = pad_projector(d1, d2);
    let diag = 0.5 / d as f64;
    let off = 1.0 / (eta as f64 * (1u64 << d2) as f64);
    let blocks = ComplexMatrix::from_fn(2 * d, 2 * d, |i, j| {
        if (i < d) == (j < d) {
            Complex64::new(if i % d == j % d { diag } else { 0.0 }, 0.0)
        } else {
            Complex64::new(off, 0.0) * projector[(i % d, j % d)]
        }
    });
    let twirled = twirl_expectation(&blocks, false)?.formula_state;
    Ok(DensityMatrix::new(twirled)?)
}

/// Exact all-coins average; only the single-qubit/single-qubit case keeps the
/// enumeration at 384 terms.
pub fn qcpa_average_exact(
    mo: &DensityMatrix,
    mc: &DensityMatrix,
    eta: u64,
) -> Result<QcpaReport, MetricsError> {
    if mo.dim() != 2 {
        return Err(MetricsError::UnsupportedDims { dim: mo.dim() });
    }
    if mc.dim() != 2 {
        return Err(MetricsError::UnsupportedDims { dim: mc.dim() });
    }

    let mut sum = ComplexMatrix::zeros(4, 4);
    let mut terms = 0u64;
    for k_index in 0..4u64 {
        for kp_index in 0..4u64 {
            for perm_index in 0..24u64 {
                let key = AnamorphicKey {
                    d1: 1,
                    d2: 1,
                    k: QotpKey::from_index(k_index, 1),
                    k_prime: QotpKey::from_index(kp_index, 1),
                    perm: PermSpec::from_lehmer(4, perm_index)?,
                    eta,
                };
                let ct = encrypt_direct(mo, mc, &key)?;
                sum = &sum + ct.dm.mat();
                terms += 1;
            }
        }
    }
    let avg_state = DensityMatrix::new(sum.scaled(1.0 / terms as f64))?;
    let xi_formula = lemma_average(1, 1, eta)?;
    let distance = trace_distance(&avg_state, &xi_formula)?;
    Ok(QcpaReport {
        avg_state,
        xi_formula,
        distance,
        std_error: None,
    })
}

/// Monte Carlo estimate of the same average for spaces too large to
/// enumerate.  Every sampled key must be feasible at the supplied eta.
pub fn qcpa_average_sampled(
    mo: &DensityMatrix,
    mc: &DensityMatrix,
    eta: u64,
    samples: usize,
    rng: &mut impl RandomSource,
) -> Result<QcpaReport, MetricsError> {
    let d1 = qubits_for(mo.dim())?;
    let d2 = qubits_for(mc.dim())?;
    if d2 > d1 || samples < 2 {
        return Err(MetricsError::UnsupportedDims { dim: mc.dim() });
    }
    let n = 2 * mo.dim();
    let mut sum = ComplexMatrix::zeros(n, n);
    let mut sum_sq = vec![0.0f64; n * n];
    for _ in 0..samples {
        let key = AnamorphicKey {
            d1,
            d2,
            k: QotpKey::sample(d1 as usize, rng),
            k_prime: QotpKey::sample(d2 as usize, rng),
            perm: PermSpec::sample(n, rng),
            eta,
        };
        let ct = encrypt_direct(mo, mc, &key)?;
        for (acc, z) in sum_sq.iter_mut().zip(ct.dm.mat().entries()) {
            *acc += z.norm_sqr();
        }
        sum = &sum + ct.dm.mat();
    }
    let scale = 1.0 / samples as f64;
    let mean = sum.scaled(scale);
    let mut variance = 0.0;
    for (acc, z) in sum_sq.iter().zip(mean.entries()) {
        variance += (acc * scale - z.norm_sqr()).max(0.0) / (samples as f64 - 1.0);
    }
    let std_error = (variance / samples as f64).sqrt();

    let avg_state = DensityMatrix::new(mean)?;
    let xi_formula = lemma_average(d1, d2, eta)?;
    let distance = trace_distance(&avg_state, &xi_formula)?;
    Ok(QcpaReport {
        avg_state,
        xi_formula,
        distance,
        std_error: Some(std_error),
    })
}
