//! Entropy bookkeeping for the honest/stego pair.
//!
//! The block-diagonal honest state always carries one extra bit over the
//! carrier.  When the encrypted carrier and the padded covert state commute,
//! the stego spectrum splits into pairs `lambda_i/2 +- mu_i/eta` and the
//! relative entropy to the honest state has the closed form
//! `sum_i lambda_i f(2 mu_i / (eta lambda_i))` with
//! `f(x) = ((1+x)log2(1+x) + (1-x)log2(1-x))/2`, bounded by
//! `(4/eta^2) sum_i mu_i^2 / lambda_i`.

use mat_core::{hermitian_eig, Complex64, ComplexMatrix, DensityMatrix};
use serde::Serialize;

use crate::MetricsError;

const STRICT_FLOOR: f64 = 1e-9;
const COMMUTE_REL_TOL: f64 = 1e-10;
const CLUSTER_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct EntropyReport {
    pub s_mf0: f64,
    pub s_mo_enc: f64,
    /// Stego-state entropy from the paired spectrum; only when the inputs
    /// commute.
    pub s_mf1_commuting: Option<f64>,
    /// Relative entropy of stego to honest; only when the inputs commute.
    pub rel_entropy: Option<f64>,
    /// `(4/eta^2) Tr(M_c M_o^{-1} M_c)`, the basis-free form of the paired
    /// bound; computed for every input.
    pub rel_entropy_bound: f64,
}

fn entropy_bits(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { -l * l.log2() } else { 0.0 })
        .sum()
}

/// `f(x)` above; `f(0) = 0`, `f(1) = 1`, and the stego spectrum keeps
/// `x <= 1` whenever eta is feasible.
fn pair_divergence(x: f64) -> f64 {
    let up = 1.0 + x;
    let down = (1.0 - x).max(0.0);
    let mut value = up * up.log2();
    if down > 0.0 {
        value += down * down.log2();
    }
    0.5 * value
}

/// Eigenvalues of the covert state resolved inside each eigenspace of the
/// carrier, paired with the carrier eigenvalue they sit next to.  Degenerate
/// carrier eigenvalues are clustered and the covert operator is
/// re-diagonalised inside the cluster, so the pairing is basis-independent.
fn paired_spectrum(
    eig_mo: &mat_core::HermitianEigen,
    mc: &ComplexMatrix,
) -> Result<Vec<(f64, f64)>, MetricsError> {
    let n = eig_mo.eigenvalues.len();
    let mut pairs = Vec::with_capacity(n);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && eig_mo.eigenvalues[end] - eig_mo.eigenvalues[end - 1] <= CLUSTER_GAP {
            end += 1;
        }
        let width = end - start;
        let basis = ComplexMatrix::from_fn(n, width, |i, c| eig_mo.eigenvectors[(i, start + c)]);
        let sub = &(&basis.dagger() * mc) * &basis;
        let sub = (&sub + &sub.dagger()).scaled(0.5);
        let sub_eig = hermitian_eig(&sub)?;
        for (offset, &mu) in sub_eig.eigenvalues.iter().enumerate() {
            pairs.push((eig_mo.eigenvalues[start + offset], mu.max(0.0)));
        }
        start = end;
    }
    Ok(pairs)
}

pub fn entropy_report(
    mo_enc: &DensityMatrix,
    mc_padded: &DensityMatrix,
    eta: u64,
) -> Result<EntropyReport, MetricsError> {
    if mo_enc.dim() != mc_padded.dim() {
        return Err(MetricsError::DimensionMismatch {
            left: mo_enc.dim(),
            right: mc_padded.dim(),
        });
    }
    let eig_mo = hermitian_eig(mo_enc.mat())?;
    if eig_mo.min() < STRICT_FLOOR {
        return Err(MetricsError::NotStrictlyPositive {
            min_eig: eig_mo.min(),
        });
    }
    let s_mo_enc = entropy_bits(&eig_mo.eigenvalues);

    // Honest state entropy from its literal block-diagonal spectrum, then the
    // one-extra-bit identity as a consistency assertion.
    let n = mo_enc.dim();
    let half = Complex64::new(0.5, 0.0);
    let mf0 = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
        if (i < n) == (j < n) {
            half * mo_enc.mat()[(i % n, j % n)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let s_mf0 = entropy_bits(&hermitian_eig(&mf0)?.eigenvalues);
    assert!(
        (s_mf0 - (s_mo_enc + 1.0)).abs() <= 1e-9,
        "block entropy {} drifted from carrier entropy {} + 1",
        s_mf0,
        s_mo_enc
    );

    let inv_mo = eig_mo.map(|l| 1.0 / l);
    let bound_trace = (&(mc_padded.mat() * &inv_mo) * mc_padded.mat()).trace().re;
    let eta_f = eta as f64;
    let rel_entropy_bound = 4.0 / (eta_f * eta_f) * bound_trace;

    let commutator = &(mo_enc.mat() * mc_padded.mat()) - &(mc_padded.mat() * mo_enc.mat());
    let commuting = commutator.frobenius_norm()
        <= COMMUTE_REL_TOL * mo_enc.mat().frobenius_norm() * mc_padded.mat().frobenius_norm();

    let (s_mf1_commuting, rel_entropy) = if commuting {
        let pairs = paired_spectrum(&eig_mo, mc_padded.mat())?;
        let mut stego_eigs = Vec::with_capacity(2 * pairs.len());
        let mut rel = 0.0;
        for &(lambda, mu) in &pairs {
            stego_eigs.push(0.5 * lambda + mu / eta_f);
            stego_eigs.push((0.5 * lambda - mu / eta_f).max(0.0));
            rel += lambda * pair_divergence(2.0 * mu / (eta_f * lambda));
        }
        (Some(entropy_bits(&stego_eigs)), Some(rel))
    } else {
        (None, None)
    };

    Ok(EntropyReport {
        s_mf0,
        s_mo_enc,
        s_mf1_commuting,
        rel_entropy,
        rel_entropy_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mat_core::{apply_hermitian_function, SpectralFn};
    use seedstream::Stream;

    /// Direct relative entropy oracle via matrix logarithms,
    /// `Tr[rho (log2 rho - log2 sigma)]`.
    fn rel_entropy_direct(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> f64 {
        let log_rho = apply_hermitian_function(rho, SpectralFn::Log2OnSupport).unwrap();
        let log_sigma = apply_hermitian_function(sigma, SpectralFn::Log2OnSupport).unwrap();
        let diff = &log_rho - &log_sigma;
        (&(rho * &diff)).trace().re
    }

    fn stego_state(mo: &ComplexMatrix, mc: &ComplexMatrix, eta: f64) -> ComplexMatrix {
        let n = mo.rows();
        ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if (i < n) == (j < n) {
                Complex64::new(0.5, 0.0) * mo[(i % n, j % n)]
            } else {
                Complex64::new(1.0 / eta, 0.0) * mc[(i % n, j % n)]
            }
        })
    }

    fn honest_state(mo: &ComplexMatrix) -> ComplexMatrix {
        let n = mo.rows();
        ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| {
            if (i < n) == (j < n) {
                Complex64::new(0.5, 0.0) * mo[(i % n, j % n)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    #[test]
    fn boundary_instance_saturates_the_bound() {
        let mo = DensityMatrix::maximally_mixed(2);
        let mc = DensityMatrix::basis_state(2, 0);
        let report = entropy_report(&mo, &mc, 4).unwrap();
        assert!((report.s_mo_enc - 1.0).abs() < 1e-12);
        assert!((report.s_mf0 - 2.0).abs() < 1e-12);
        assert!((report.rel_entropy.unwrap() - 0.5).abs() < 1e-12);
        assert!((report.rel_entropy_bound - 0.5).abs() < 1e-12);
        // Pairs (1/2, 0) and (1/2, 1): stego spectrum {1/4, 1/4, 1/2, 0}.
        assert!((report.s_mf1_commuting.unwrap() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn closed_forms_match_the_matrix_log_oracle() {
        let mo_mat = ComplexMatrix::diag(&[0.3, 0.7]);
        let mc_mat = ComplexMatrix::diag(&[0.9, 0.1]);
        let mo = DensityMatrix::new(mo_mat.clone()).unwrap();
        let mc = DensityMatrix::new(mc_mat.clone()).unwrap();
        let eta = 10u64;
        let report = entropy_report(&mo, &mc, eta).unwrap();

        let m1 = stego_state(&mo_mat, &mc_mat, eta as f64);
        let m0 = honest_state(&mo_mat);
        let direct = rel_entropy_direct(&m1, &m0);
        assert!(
            (report.rel_entropy.unwrap() - direct).abs() < 1e-10,
            "paired form {} vs matrix-log {}",
            report.rel_entropy.unwrap(),
            direct
        );
        assert!(report.rel_entropy.unwrap() <= report.rel_entropy_bound + 1e-9);

        let s_direct = entropy_bits(&hermitian_eig(&m1).unwrap().eigenvalues);
        assert!((report.s_mf1_commuting.unwrap() - s_direct).abs() < 1e-10);
    }

    #[test]
    fn degenerate_carrier_pairs_through_the_covert_eigenbasis() {
        // I/2 is degenerate, so the pairing must re-diagonalise the covert
        // state inside the full space; the matrix-log oracle keeps it honest.
        let mut rng = Stream::root(77).substream("degen", 0);
        let mc = anamorph_core::random_density(2, &mut rng);
        let mo = DensityMatrix::maximally_mixed(2);
        let eta = 6u64;
        let report = entropy_report(&mo, &mc, eta).unwrap();

        let m1 = stego_state(mo.mat(), mc.mat(), eta as f64);
        let m0 = honest_state(mo.mat());
        let direct = rel_entropy_direct(&m1, &m0);
        assert!((report.rel_entropy.unwrap() - direct).abs() < 1e-10);
    }

    #[test]
    fn doubling_eta_quarters_the_bound() {
        let mo = DensityMatrix::maximally_mixed(2);
        let mc = DensityMatrix::basis_state(2, 0);
        let coarse = entropy_report(&mo, &mc, 4).unwrap();
        let fine = entropy_report(&mo, &mc, 8).unwrap();
        assert!((coarse.rel_entropy_bound - 4.0 * fine.rel_entropy_bound).abs() < 1e-12);
    }

    #[test]
    fn non_commuting_inputs_skip_the_paired_fields() {
        let mo = DensityMatrix::new(ComplexMatrix::diag(&[0.3, 0.7])).unwrap();
        let plus = DensityMatrix::pure_state(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ]);
        let report = entropy_report(&mo, &plus, 8).unwrap();
        assert!(report.s_mf1_commuting.is_none());
        assert!(report.rel_entropy.is_none());
        assert!(report.rel_entropy_bound > 0.0);
        assert!((report.s_mf0 - (report.s_mo_enc + 1.0)).abs() < 1e-9);
    }

    #[test]
    fn rank_deficient_carrier_rejected() {
        let mo = DensityMatrix::basis_state(2, 0);
        let mc = DensityMatrix::maximally_mixed(2);
        assert!(matches!(
            entropy_report(&mo, &mc, 4),
            Err(MetricsError::NotStrictlyPositive { .. })
        ));
    }
}
