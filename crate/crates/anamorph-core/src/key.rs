//! Joint key material and key generation.

use mat_core::DensityMatrix;
use qop_kit::{pad_embed, qotp_encrypt, PermSpec, QotpKey};
use seedstream::RandomSource;
use serde::{Deserialize, Serialize};

use crate::eta::{select_eta, EtaMode};
use crate::{qubits_for_dim, CoreError};

/// Hardness and conditioning parameters for key generation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SecurityConfig {
    /// Require `1/eta < 2^(-security_bits)`.
    pub security_bits: u32,
    /// Smallest admissible eigenvalue of the encrypted original message.
    pub min_eig_floor: f64,
}

impl Default for SecurityConfig {
    fn default() -> Self {
        SecurityConfig {
            security_bits: 1,
            min_eig_floor: 1e-9,
        }
    }
}

impl SecurityConfig {
    pub fn with_security_bits(security_bits: u32) -> Self {
        SecurityConfig {
            security_bits,
            ..SecurityConfig::default()
        }
    }
}

/// Joint key for the anamorphic scheme.
///
/// `k` pads the original message on `d1` qubits, `k_prime` pads the covert
/// message on `d2 <= d1` qubits, `perm` scrambles the basis of the doubled
/// `2^(d1+1)`-dimensional space, and `eta` is the covert coupling strength.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnamorphicKey {
    pub d1: u32,
    pub d2: u32,
    pub k: QotpKey,
    pub k_prime: QotpKey,
    pub perm: PermSpec,
    pub eta: u64,
}

impl AnamorphicKey {
    /// Dimension of the original message space.
    pub fn dim_original(&self) -> usize {
        1usize << self.d1
    }

    /// Dimension of the covert message space.
    pub fn dim_covert(&self) -> usize {
        1usize << self.d2
    }

    /// Dimension of the ciphertext space (control qubit plus message space).
    pub fn dim_cipher(&self) -> usize {
        1usize << (self.d1 + 1)
    }

    fn validate(&self) -> Result<(), String> {
        if self.d2 > self.d1 {
            return Err(format!("d2 = {} exceeds d1 = {}", self.d2, self.d1));
        }
        if self.d1 > 16 {
            return Err(format!("d1 = {} too large", self.d1));
        }
        if self.k.n_qubits() != self.d1 as usize {
            return Err(format!(
                "pad k covers {} qubits, expected {}",
                self.k.n_qubits(),
                self.d1
            ));
        }
        if self.k_prime.n_qubits() != self.d2 as usize {
            return Err(format!(
                "pad k_prime covers {} qubits, expected {}",
                self.k_prime.n_qubits(),
                self.d2
            ));
        }
        if self.perm.size() != self.dim_cipher() {
            return Err(format!(
                "permutation acts on {} points, expected {}",
                self.perm.size(),
                self.dim_cipher()
            ));
        }
        if self.eta < 2 {
            return Err(format!("eta = {} below minimum 2", self.eta));
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for AnamorphicKey {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Raw {
            d1: u32,
            d2: u32,
            k: QotpKey,
            k_prime: QotpKey,
            perm: PermSpec,
            eta: u64,
        }
        let raw = Raw::deserialize(deserializer)?;
        let key = AnamorphicKey {
            d1: raw.d1,
            d2: raw.d2,
            k: raw.k,
            k_prime: raw.k_prime,
            perm: raw.perm,
            eta: raw.eta,
        };
        key.validate().map_err(serde::de::Error::custom)?;
        Ok(key)
    }
}

/// Draw a fresh key for the message pair `(mo, mc)`.
///
/// Draw order from `rng` is fixed: the `2 * d1` pad bits of `k`, then the
/// `2 * d2` pad bits of `k_prime`, then the permutation via forward
/// Fisher-Yates.  The coupling `eta` is the smallest integer admissible for
/// this pair under `mode`; since the pads preserve spectra and the weak
/// condition depends only on spectra, the weak-mode `eta` is the same for
/// every key draw.
pub fn keygen<R: RandomSource>(
    mo: &DensityMatrix,
    mc: &DensityMatrix,
    cfg: &SecurityConfig,
    mode: EtaMode,
    rng: &mut R,
) -> Result<AnamorphicKey, CoreError> {
    let d1 = qubits_for_dim(mo.dim())?;
    let d2 = qubits_for_dim(mc.dim())?;
    if d2 > d1 {
        return Err(CoreError::Dimension(format!(
            "covert message on {d2} qubits does not fit original message on {d1} qubits"
        )));
    }

    let k = QotpKey::sample(d1 as usize, rng);
    let k_prime = QotpKey::sample(d2 as usize, rng);
    let perm = PermSpec::sample(1usize << (d1 + 1), rng);

    let mo_enc = qotp_encrypt(mo, &k)?.into_matrix();
    let mc_enc = qotp_encrypt(mc, &k_prime)?.into_matrix();
    let mc_padded = pad_embed(&mc_enc, d1)?;
    let eta = select_eta(&mo_enc, &mc_padded, cfg, mode)?;

    Ok(AnamorphicKey {
        d1,
        d2,
        k,
        k_prime,
        perm,
        eta,
    })
}
