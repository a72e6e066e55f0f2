//! Receiver-side operations: ordinary decryption, covert extraction, and
//! extraction of the honest ciphertext.

use mat_core::{check_density, partial_trace_matrix, Complex64, ComplexMatrix, DensityMatrix};
use qop_kit::{hadamard, pad_unembed, qotp_decrypt, qotp_unitary};

use crate::encrypt::Ciphertext;
use crate::key::AnamorphicKey;
use crate::CoreError;

const RECOVERED_DENSITY_TOL: f64 = 1e-8;

/// Undo the basis permutation of the doubled space.
fn unscramble(ct: &Ciphertext, key: &AnamorphicKey) -> Result<ComplexMatrix, CoreError> {
    if ct.d1 != key.d1 {
        return Err(CoreError::Dimension(format!(
            "ciphertext carries d1 = {}, key expects {}",
            ct.d1, key.d1
        )));
    }
    let u = key.perm.unitary();
    Ok(ct.dm.mat().conjugate_by(&u.dagger()))
}

/// Zero both off-diagonal quadrants (full dephasing of the control qubit).
fn pinch_control(m: &ComplexMatrix) -> ComplexMatrix {
    let d = m.rows() / 2;
    let mut out = m.clone();
    for r in 0..d {
        for c in 0..d {
            out[(r, d + c)] = Complex64::new(0.0, 0.0);
            out[(d + r, c)] = Complex64::new(0.0, 0.0);
        }
    }
    out
}

/// Decrypt the original message.
///
/// Dephasing the control qubit and tracing it out leaves the average of the
/// two diagonal quadrants, which is the padded original message for every
/// admissible ciphertext; the recorded coupling never enters.
pub fn dom_decrypt(ct: &Ciphertext, key: &AnamorphicKey) -> Result<DensityMatrix, CoreError> {
    let md = unscramble(ct, key)?;
    let d = md.rows() / 2;
    // The pinch only clears quadrants the partial trace never reads, so the
    // control factor can be traced out directly.
    let reduced = partial_trace_matrix(&md, &[2, d], &[0])?;
    Ok(qotp_decrypt(&DensityMatrix::new(reduced)?, &key.k)?)
}

/// Extract the covert message exactly from the ciphertext matrix.
///
/// A Hadamard on the control qubit turns the quadrant difference into the
/// covert block: `B = eta * (D_0 - D_1) / 2`.  Fails with
/// [`CoreError::NoCovertSignal`] when the recovered block carries no mass,
/// as happens for honestly encrypted ciphertexts.
pub fn dcm_exact(ct: &Ciphertext, key: &AnamorphicKey) -> Result<DensityMatrix, CoreError> {
    let md = unscramble(ct, key)?;
    let d = md.rows() / 2;
    let h_big = hadamard().tensor(&ComplexMatrix::identity(d));
    let rho = md.conjugate_by(&h_big);
    let d0 = rho.block(0, 0, d, d);
    let d1 = rho.block(d, d, d, d);
    let b_hat = (&d0 - &d1).scaled(key.eta as f64 / 2.0);
    let b_sym = (&b_hat + &b_hat.dagger()).scaled(0.5);

    let embedded = pad_unembed(&b_sym, key.d2)?;
    let u_pad = qotp_unitary(&key.k_prime);
    let mc_mat = embedded.conjugate_by(&u_pad.dagger());

    let report = check_density(&mc_mat, RECOVERED_DENSITY_TOL);
    if !report.ok {
        let trace = mc_mat.trace().re;
        if trace < 0.5 {
            return Err(CoreError::NoCovertSignal { trace });
        }
        return Err(CoreError::Mat(mat_core::MatError::NotDensity(
            report.violations,
        )));
    }
    Ok(DensityMatrix::new(mc_mat)?)
}

/// Map an anamorphic ciphertext onto the honest ciphertext of the same
/// original message, using only the basis permutation.
pub fn eoc_extract(ct: &Ciphertext, key: &AnamorphicKey) -> Result<Ciphertext, CoreError> {
    let md = unscramble(ct, key)?;
    let pinched = pinch_control(&md);
    let u = key.perm.unitary();
    Ok(Ciphertext {
        d1: ct.d1,
        dm: DensityMatrix::new(pinched.conjugate_by(&u))?,
    })
}
