//! The three constructions of the anamorphic ciphertext.

use mat_core::{
    apply_hermitian_function, hermitian_eig, Complex64, ComplexMatrix, DensityMatrix, SpectralFn,
};
use qop_kit::{dephase_control, pad_embed, qotp_encrypt};
use serde::{Deserialize, Serialize};

use crate::eta::{le_slack, strict_feasibility};
use crate::key::{AnamorphicKey, SecurityConfig};
use crate::CoreError;

/// Ciphertext of the scheme: the doubled-space density matrix together with
/// the qubit count of the original message it carries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Ciphertext {
    pub d1: u32,
    pub dm: DensityMatrix,
}

impl Ciphertext {
    pub fn dim(&self) -> usize {
        1usize << (self.d1 + 1)
    }
}

impl<'de> Deserialize<'de> for Ciphertext {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            d1: u32,
            dm: DensityMatrix,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.d1 > 16 {
            return Err(serde::de::Error::custom(format!("d1 = {} too large", raw.d1)));
        }
        let expected = 1usize << (raw.d1 + 1);
        if raw.dm.dim() != expected {
            return Err(serde::de::Error::custom(format!(
                "ciphertext for d1 = {} must live in dimension {}, got {}",
                raw.d1,
                expected,
                raw.dm.dim()
            )));
        }
        Ok(Ciphertext {
            d1: raw.d1,
            dm: raw.dm,
        })
    }
}

/// Intermediate quantities of the dilation construction, kept for inspection.
#[derive(Debug, Clone, Serialize)]
pub struct DilationTrace {
    /// Operator norm of the contraction seed `V0 = M_o^(-1/2) M_c M_o^(-1/2)`.
    pub kappa: f64,
    /// `max(1, kappa)`; normalizes the seed to a contraction.
    pub kappa_max: f64,
    /// Residual dephasing strength `2 * kappa_max / eta`, in `[0, 1]`.
    pub lambda: f64,
    /// The contraction `W0 = V0 / kappa_max`.
    pub w0: ComplexMatrix,
    /// Halmos unitary dilation of `W0` transposed, on the doubled ancilla.
    pub u_bf: ComplexMatrix,
    /// Projector onto the support of the encrypted original message.
    pub support_projector: ComplexMatrix,
}

fn check_message_dims(
    mo: &DensityMatrix,
    mc: Option<&DensityMatrix>,
    key: &AnamorphicKey,
) -> Result<(), CoreError> {
    if mo.dim() != key.dim_original() {
        return Err(CoreError::Dimension(format!(
            "original message has dimension {}, key expects {}",
            mo.dim(),
            key.dim_original()
        )));
    }
    if let Some(mc) = mc {
        if mc.dim() != key.dim_covert() {
            return Err(CoreError::Dimension(format!(
                "covert message has dimension {}, key expects {}",
                mc.dim(),
                key.dim_covert()
            )));
        }
    }
    Ok(())
}

/// Pad both messages and lift the covert one into the original's space.
fn encrypted_blocks(
    mo: &DensityMatrix,
    mc: &DensityMatrix,
    key: &AnamorphicKey,
) -> Result<(ComplexMatrix, ComplexMatrix), CoreError> {
    check_message_dims(mo, Some(mc), key)?;
    let mo_enc = qotp_encrypt(mo, &key.k)?.into_matrix();
    let mc_enc = qotp_encrypt(mc, &key.k_prime)?.into_matrix();
    let mc_padded = pad_embed(&mc_enc, key.d1)?;
    Ok((mo_enc, mc_padded))
}

/// Conjugate the assembled block matrix by the key's basis permutation and
/// validate the result as a density matrix.
fn scramble(m_a: &ComplexMatrix, key: &AnamorphicKey) -> Result<Ciphertext, CoreError> {
    let u = key.perm.unitary();
    let dm = DensityMatrix::new(m_a.conjugate_by(&u))?;
    Ok(Ciphertext { d1: key.d1, dm })
}

fn assemble(mo_enc: &ComplexMatrix, mc_padded: &ComplexMatrix, eta: u64) -> ComplexMatrix {
    let d = mo_enc.rows();
    let diag = mo_enc.scaled(0.5);
    let off = mc_padded.scaled(1.0 / eta as f64);
    let mut m_a = ComplexMatrix::zeros(2 * d, 2 * d);
    m_a.set_block(0, 0, &diag);
    m_a.set_block(d, d, &diag);
    m_a.set_block(0, d, &off);
    m_a.set_block(d, 0, &off.dagger());
    m_a
}

/// Anamorphic encryption by explicit block assembly.
///
/// Re-checks the strict positivity condition for the key's recorded `eta`
/// against this exact message pair and fails with
/// [`CoreError::EtaInfeasible`] if it does not hold.
pub fn encrypt_direct(
    mo: &DensityMatrix,
    mc: &DensityMatrix,
    key: &AnamorphicKey,
) -> Result<Ciphertext, CoreError> {
    let (mo_enc, mc_padded) = encrypted_blocks(mo, mc, key)?;
    strict_feasibility(
        &mo_enc,
        &mc_padded,
        key.eta,
        SecurityConfig::default().min_eig_floor,
    )?;
    scramble(&assemble(&mo_enc, &mc_padded, key.eta), key)
}

/// Honest encryption of the original message alone: both diagonal blocks
/// carry the padded original, the covert block is zero.
pub fn encrypt_original(mo: &DensityMatrix, key: &AnamorphicKey) -> Result<Ciphertext, CoreError> {
    check_message_dims(mo, None, key)?;
    let mo_enc = qotp_encrypt(mo, &key.k)?.into_matrix();
    let d = mo_enc.rows();
    let diag = mo_enc.scaled(0.5);
    let mut m_f = ComplexMatrix::zeros(2 * d, 2 * d);
    m_f.set_block(0, 0, &diag);
    m_f.set_block(d, d, &diag);
    scramble(&m_f, key)
}

/// Anamorphic encryption through a unitary dilation.
///
/// Purifies the encrypted original message, steers the purification with the
/// Halmos dilation of the (transposed) contraction seed, traces out the
/// ancilla, and partially dephases the control qubit with strength
/// `lambda = 2 * kappa_max / eta`.  Agrees with [`encrypt_direct`] up to
/// floating-point error and additionally returns the contraction data.
pub fn encrypt_dilation(
    mo: &DensityMatrix,
    mc: &DensityMatrix,
    key: &AnamorphicKey,
) -> Result<(Ciphertext, DilationTrace), CoreError> {
    let (mo_enc, mc_padded) = encrypted_blocks(mo, mc, key)?;
    let d = mo_enc.rows();

    let eig_mo = hermitian_eig(&mo_enc)?;
    let floor = SecurityConfig::default().min_eig_floor;
    if eig_mo.min() < floor {
        return Err(CoreError::NotStrictlyPositive {
            min_eig: eig_mo.min(),
            floor,
        });
    }
    let sqrt_mo = eig_mo.map(f64::sqrt);
    let inv_sqrt_mo = eig_mo.map(|l| 1.0 / l.sqrt());
    let support_projector = eig_mo.map(|_| 1.0);

    let v0_raw = &(&inv_sqrt_mo * &mc_padded) * &inv_sqrt_mo;
    let v0 = (&v0_raw + &v0_raw.dagger()).scaled(0.5);
    let kappa = hermitian_eig(&v0)?
        .eigenvalues
        .iter()
        .fold(0.0f64, |m, &l| m.max(l.abs()));
    let kappa_max = kappa.max(1.0);

    let lambda_raw = 2.0 * kappa_max / key.eta as f64;
    if !le_slack(lambda_raw, 1.0) {
        return Err(CoreError::EtaTooSmallForDilation {
            eta: key.eta,
            required: 2.0 * kappa_max,
        });
    }
    let lambda = lambda_raw.min(1.0);

    let w0 = v0.scaled(1.0 / kappa_max);
    let w0t = w0.transpose();
    let ident = ComplexMatrix::identity(d);
    let gap_left = &ident - &(&w0t * &w0t.dagger());
    let gap_right = &ident - &(&w0t.dagger() * &w0t);
    let sqrt_left = apply_hermitian_function(&gap_left, SpectralFn::Sqrt)?;
    let sqrt_right = apply_hermitian_function(&gap_right, SpectralFn::Sqrt)?;
    let mut u_bf = ComplexMatrix::zeros(2 * d, 2 * d);
    u_bf.set_block(0, 0, &w0t);
    u_bf.set_block(0, d, &sqrt_left);
    u_bf.set_block(d, 0, &sqrt_right);
    u_bf.set_block(d, d, &w0t.dagger().scaled(-1.0));

    // Purification branches, one row per (control, message) pair, one column
    // per ancilla basis state.  Branch 0 leaves the vectorized square root in
    // the low ancilla block; branch 1 steers it through the dilation.
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut branches = ComplexMatrix::zeros(2 * d, 2 * d);
    for j in 0..d {
        for e in 0..d {
            branches[(j, e)] = amp * sqrt_mo[(j, e)];
        }
        for e in 0..2 * d {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..d {
                acc += u_bf[(e, k)] * sqrt_mo[(j, k)];
            }
            branches[(d + j, e)] = amp * acc;
        }
    }
    let omega = &branches * &branches.dagger();

    let m_a = dephase_control(&DensityMatrix::new(omega)?, lambda)?;
    let ct = scramble(m_a.mat(), key)?;
    Ok((
        ct,
        DilationTrace {
            kappa,
            kappa_max,
            lambda,
            w0,
            u_bf,
            support_projector,
        },
    ))
}
