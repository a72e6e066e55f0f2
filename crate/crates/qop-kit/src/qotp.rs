//! Quantum one-time pad: conjugation by a key-selected Pauli string.

use crate::pauli::{pauli_matrix, PauliString};
use crate::{qubits_for_dim, QopError};
use mat_core::{ComplexMatrix, DensityMatrix};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A 2n-bit pad key for an n-qubit register. Bit 2j is the X exponent and bit
/// 2j+1 the Z exponent of qubit j (qubit 0 most significant). The JSON form is
/// the bit string, leftmost bit first, e.g. `"10"` for X on one qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QotpKey {
    bits: Vec<bool>,
}

impl QotpKey {
    pub fn new(bits: Vec<bool>) -> Result<Self, QopError> {
        if bits.is_empty() || bits.len() % 2 != 0 {
            return Err(QopError::Dimension(format!(
                "pad key needs a positive even bit count, got {}",
                bits.len()
            )));
        }
        Ok(QotpKey { bits })
    }

    pub fn zero(n_qubits: usize) -> Self {
        QotpKey {
            bits: vec![false; 2 * n_qubits],
        }
    }

    /// Key from the low 2n bits of an integer, most significant bit first.
    pub fn from_index(index: u64, n_qubits: usize) -> Self {
        let bits = (0..2 * n_qubits)
            .map(|i| (index >> (2 * n_qubits - 1 - i)) & 1 == 1)
            .collect();
        QotpKey { bits }
    }

    pub fn to_index(&self) -> u64 {
        self.bits
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    /// Draw 2n key bits from the source, bit 0 first.
    pub fn sample(n_qubits: usize, rng: &mut impl seedstream::RandomSource) -> Self {
        QotpKey {
            bits: (0..2 * n_qubits).map(|_| rng.bit() == 1).collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.bits.len() / 2
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// The Pauli string this key selects.
    pub fn pauli(&self) -> PauliString {
        let n = self.n_qubits();
        let x_bits = (0..n).map(|j| self.bits[2 * j]).collect();
        let z_bits = (0..n).map(|j| self.bits[2 * j + 1]).collect();
        PauliString::new(x_bits, z_bits)
    }

    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn from_bit_string(s: &str) -> Result<Self, QopError> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(QopError::Dimension(format!(
                        "pad key contains '{other}', expected 0/1"
                    )))
                }
            }
        }
        QotpKey::new(bits)
    }
}

impl Serialize for QotpKey {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.bit_string())
    }
}

impl<'de> Deserialize<'de> for QotpKey {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        QotpKey::from_bit_string(&s).map_err(D::Error::custom)
    }
}

/// The pad unitary `U_k = ⊗_j X^{k_{2j}} Z^{k_{2j+1}}`.
pub fn qotp_unitary(key: &QotpKey) -> ComplexMatrix {
    pauli_matrix(&key.pauli())
}

fn check_dims(rho: &DensityMatrix, key: &QotpKey) -> Result<(), QopError> {
    let state_qubits = qubits_for_dim(rho.dim())? as usize;
    if state_qubits != key.n_qubits() {
        return Err(QopError::KeyLengthMismatch {
            key_qubits: key.n_qubits(),
            state_qubits,
        });
    }
    Ok(())
}

/// `U_k ρ U_k†`. Exact: the pad matrices are signed permutations, so the
/// arithmetic introduces no roundoff and encrypt/decrypt round-trips are
/// bit-identical.
pub fn qotp_encrypt(rho: &DensityMatrix, key: &QotpKey) -> Result<DensityMatrix, QopError> {
    check_dims(rho, key)?;
    let u = qotp_unitary(key);
    Ok(DensityMatrix::new(rho.mat().conjugate_by(&u))?)
}

/// `U_k† ρ U_k`.
pub fn qotp_decrypt(rho: &DensityMatrix, key: &QotpKey) -> Result<DensityMatrix, QopError> {
    check_dims(rho, key)?;
    let u = qotp_unitary(key).dagger();
    Ok(DensityMatrix::new(rho.mat().conjugate_by(&u))?)
}

const KEY_AVERAGE_QUBIT_LIMIT: usize = 4;

/// Exact average of `U_k ρ U_k†` over all 4^n keys; the Pauli twirl sends any
/// state to the maximally mixed one. Exhaustive, so capped at 4 qubits.
pub fn qotp_key_average(rho: &DensityMatrix) -> Result<DensityMatrix, QopError> {
    let n = qubits_for_dim(rho.dim())? as usize;
    if n > KEY_AVERAGE_QUBIT_LIMIT {
        return Err(QopError::TooLarge {
            n,
            limit: KEY_AVERAGE_QUBIT_LIMIT,
        });
    }
    let dim = rho.dim();
    let keys = 1u64 << (2 * n);
    let mut acc = ComplexMatrix::zeros(dim, dim);
    for k in 0..keys {
        let u = qotp_unitary(&QotpKey::from_index(k, n));
        acc = &acc + &rho.mat().conjugate_by(&u);
    }
    Ok(DensityMatrix::new(acc.scaled(1.0 / keys as f64))?)
}
