//! Average of a state over the full permutation group.
//!
//! Conjugating by a uniformly random basis permutation leaves only two
//! degrees of freedom: the trace `T` and the all-entries sum `S`.  The
//! average is `alpha I + beta J` (`J` the all-ones matrix) with
//! `alpha = (nT - S)/(n(n-1))` and `beta = (S - T)/(n(n-1))`.

use mat_core::{Complex64, ComplexMatrix};
use serde::Serialize;

use crate::MetricsError;

/// Twirl coefficients plus the closed-form state; `brute_force_state` is the
/// literal `n!`-term average when requested (refused for n > 8).
#[derive(Debug, Clone, Serialize)]
pub struct TwirlReport {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub t: f64,
    pub s: f64,
    pub formula_state: ComplexMatrix,
    pub brute_force_state: Option<ComplexMatrix>,
}

pub fn twirl_expectation(phi: &ComplexMatrix, brute_force: bool) -> Result<TwirlReport, MetricsError> {
    if !phi.is_square() {
        return Err(MetricsError::DimensionMismatch {
            left: phi.rows(),
            right: phi.cols(),
        });
    }
    let n = phi.rows();
    let t = phi.trace().re;
    let s: f64 = phi.entries().iter().map(|z| z.re).sum();

    let (alpha, beta) = if n < 2 {
        (t, 0.0)
    } else {
        let denom = (n * (n - 1)) as f64;
        ((n as f64 * t - s) / denom, (s - t) / denom)
    };
    let formula_state = ComplexMatrix::from_fn(n, n, |i, j| {
        Complex64::new(if i == j { alpha + beta } else { beta }, 0.0)
    });

    let brute_force_state = if brute_force {
        if n > 8 {
            return Err(MetricsError::TooLargeForBruteForce { n });
        }
        Some(brute_force_average(phi))
    } else {
        None
    };

    Ok(TwirlReport {
        n,
        alpha,
        beta,
        t,
        s,
        formula_state,
        brute_force_state,
    })
}

/// `(1/n!) sum_sigma U_sigma Phi U_sigma^dag`, enumerated lexicographically.
fn brute_force_average(phi: &ComplexMatrix) -> ComplexMatrix {
    let n = phi.rows();
    let mut acc = ComplexMatrix::zeros(n, n);
    let mut count = 0u64;
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        // (U Phi U^dag)[i][j] = Phi[inv(i)][inv(j)]; summed over the whole
        // group, enumerating sigma or its inverse is the same.
        for i in 0..n {
            for j in 0..n {
                let add = phi[(perm[i], perm[j])];
                acc[(i, j)] += add;
            }
        }
        count += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    acc.scaled(1.0 / count as f64)
}

/// Advance to the lexicographic successor in place; false after the last one.
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maximally_mixed_is_a_fixed_point() {
        let phi = ComplexMatrix::identity(4).scaled(0.25);
        let report = twirl_expectation(&phi, true).unwrap();
        assert_eq!(report.alpha, 0.25);
        assert_eq!(report.beta, 0.0);
        let brute = report.brute_force_state.unwrap();
        assert!(report.formula_state.max_abs_diff(&phi) < 1e-15);
        assert!(brute.max_abs_diff(&phi) < 1e-15);
    }

    #[test]
    fn key_averaged_stego_block_coefficients() {
        // diag blocks I/4, off-diag blocks I/8 (eta = 4): T = 1, S = 3/2.
        let phi = ComplexMatrix::from_fn(4, 4, |i, j| {
            let v = if i == j {
                0.25
            } else if i.abs_diff(j) == 2 {
                0.125
            } else {
                0.0
            };
            Complex64::new(v, 0.0)
        });
        let report = twirl_expectation(&phi, true).unwrap();
        assert!((report.t - 1.0).abs() < 1e-15);
        assert!((report.s - 1.5).abs() < 1e-15);
        assert!((report.alpha - 2.5 / 12.0).abs() < 1e-15);
        assert!((report.beta - 1.0 / 24.0).abs() < 1e-15);
        let brute = report.brute_force_state.unwrap();
        assert!(report.formula_state.max_abs_diff(&brute) < 1e-12);
    }

    #[test]
    fn all_ones_state_keeps_only_the_j_component() {
        let n = 5;
        let phi = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(1.0 / n as f64, 0.0));
        let report = twirl_expectation(&phi, true).unwrap();
        assert!(report.alpha.abs() < 1e-15);
        assert!((report.beta - 1.0 / n as f64).abs() < 1e-15);
        assert!(report
            .formula_state
            .max_abs_diff(&report.brute_force_state.unwrap())
            < 1e-12);
    }

    #[test]
    fn brute_force_refused_beyond_eight() {
        let phi = ComplexMatrix::identity(9);
        assert!(matches!(
            twirl_expectation(&phi, true),
            Err(MetricsError::TooLargeForBruteForce { n: 9 })
        ));
        // The closed form itself has no size limit.
        assert!(twirl_expectation(&phi, false).is_ok());
    }

    #[test]
    fn non_square_input_rejected() {
        let phi = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            twirl_expectation(&phi, false),
            Err(MetricsError::DimensionMismatch { left: 2, right: 3 })
        ));
    }

    #[test]
    fn lexicographic_enumeration_is_complete() {
        let mut perm = vec![0usize, 1, 2];
        let mut seen = vec![perm.clone()];
        while next_permutation(&mut perm) {
            seen.push(perm.clone());
        }
        assert_eq!(seen.len(), 6);
        let mut sorted = seen.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
        assert_eq!(seen, sorted, "enumeration order is lexicographic");
    }
}
