//! Key-tuple flattening and share bundles.
//!
//! The joint key is shared as six integers: `k1` the original pad, `k2` the
//! original dimension, `k3` the Lehmer index of the permutation, `k4` the
//! covert pad, `k5` the covert dimension, and `k6` an index into the public
//! list of admissible coupling strengths.  Each component lives in a small
//! known domain, and is Shamir-shared over the smallest prime field strictly
//! larger than that domain.

use std::collections::BTreeMap;

use anamorph_core::AnamorphicKey;
use qop_kit::{PermSpec, QotpKey};
use serde::{Deserialize, Deserializer, Serialize};

use crate::field::smallest_prime_above;
use crate::QassError;

/// Public, finite list of admissible coupling strengths, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EtaDomain {
    values: Vec<u64>,
}

impl EtaDomain {
    pub fn new(values: Vec<u64>) -> Result<Self, QassError> {
        if values.is_empty() {
            return Err(QassError::BadEtaDomain("domain is empty".into()));
        }
        if values[0] < 2 {
            return Err(QassError::BadEtaDomain(format!(
                "coupling strength {} below 2",
                values[0]
            )));
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(QassError::BadEtaDomain(
                "values must be strictly ascending".into(),
            ));
        }
        Ok(EtaDomain { values })
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index_of(&self, eta: u64) -> Option<usize> {
        self.values.binary_search(&eta).ok()
    }

    pub fn value_at(&self, index: usize) -> Option<u64> {
        self.values.get(index).copied()
    }

    /// Smallest admissible value at or above `eta`.
    pub fn smallest_at_least(&self, eta: u64) -> Option<u64> {
        let idx = self.values.partition_point(|&v| v < eta);
        self.value_at(idx)
    }
}

impl<'de> Deserialize<'de> for EtaDomain {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            values: Vec<u64>,
        }
        let raw = Raw::deserialize(deserializer)?;
        EtaDomain::new(raw.values).map_err(serde::de::Error::custom)
    }
}

/// The six key components as plain integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyTuple {
    pub k1: u64,
    pub k2: u64,
    pub k3: u64,
    pub k4: u64,
    pub k5: u64,
    pub k6: u64,
}

impl KeyTuple {
    pub fn from_key(key: &AnamorphicKey, eta_domain: &EtaDomain) -> Result<Self, QassError> {
        let k3 = key
            .perm
            .lehmer()
            .ok_or_else(|| QassError::BadShare("permutation too large to index".into()))?;
        let k6 = eta_domain
            .index_of(key.eta)
            .ok_or(QassError::NoFeasibleEta { required: key.eta })? as u64;
        Ok(KeyTuple {
            k1: key.k.to_index(),
            k2: key.d1 as u64,
            k3,
            k4: key.k_prime.to_index(),
            k5: key.d2 as u64,
            k6,
        })
    }

    pub fn to_key(&self, eta_domain: &EtaDomain) -> Result<AnamorphicKey, QassError> {
        let d1 = u32::try_from(self.k2)
            .ok()
            .filter(|&d| (1..=16).contains(&d))
            .ok_or_else(|| QassError::BadShare(format!("bad original dimension {}", self.k2)))?;
        let d2 = u32::try_from(self.k5)
            .ok()
            .filter(|&d| d <= d1)
            .ok_or_else(|| QassError::BadShare(format!("bad covert dimension {}", self.k5)))?;
        if self.k1 >= 1u64 << (2 * d1) {
            return Err(QassError::BadShare(format!(
                "original pad index {} out of range",
                self.k1
            )));
        }
        if self.k4 >= 1u64 << (2 * d2) {
            return Err(QassError::BadShare(format!(
                "covert pad index {} out of range",
                self.k4
            )));
        }
        let eta = eta_domain
            .value_at(self.k6 as usize)
            .ok_or_else(|| QassError::BadShare(format!("coupling index {} out of domain", self.k6)))?;
        Ok(AnamorphicKey {
            d1,
            d2,
            k: QotpKey::from_index(self.k1, d1 as usize),
            k_prime: QotpKey::from_index(self.k4, d2 as usize),
            perm: PermSpec::from_lehmer(1usize << (d1 + 1), self.k3)?,
            eta,
        })
    }

    pub fn component(&self, name: &str) -> Option<u64> {
        match name {
            "k1" => Some(self.k1),
            "k2" => Some(self.k2),
            "k3" => Some(self.k3),
            "k4" => Some(self.k4),
            "k5" => Some(self.k5),
            "k6" => Some(self.k6),
            _ => None,
        }
    }
}

/// Domain size of each component; the sharing field is the smallest prime
/// strictly above it.
pub(crate) fn component_domains(
    d1: u32,
    d2: u32,
    eta_count: u64,
) -> Result<[(&'static str, u64); 6], QassError> {
    let cipher_dim = 1u64 << (d1 + 1);
    if cipher_dim > 20 {
        return Err(QassError::UnsupportedScale {
            dim: cipher_dim as usize,
        });
    }
    let perms: u64 = (1..=cipher_dim).product();
    Ok([
        ("k1", 1u64 << (2 * d1)),
        ("k2", cipher_dim),
        ("k3", perms),
        ("k4", 1u64 << (2 * d2)),
        ("k5", cipher_dim),
        ("k6", eta_count),
    ])
}

/// One Shamir evaluation of one key component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassicalShare {
    pub p: u64,
    pub x: u64,
    pub y: u64,
}

/// Everything one player holds: six classical shares plus the index of their
/// quantum register in the encoded state.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShareBundle {
    pub player: usize,
    pub classical: BTreeMap<String, ClassicalShare>,
    pub qudit_index: usize,
}

impl ShareBundle {
    /// The bundle as handed to a party authorized only for the original
    /// message: covert components withheld.
    pub fn original_only(&self) -> ShareBundle {
        let mut kept = self.clone();
        kept.classical
            .retain(|name, _| matches!(name.as_str(), "k1" | "k2" | "k3"));
        kept
    }
}

/// Sharing field for a component domain.
pub(crate) fn field_for_domain(domain: u64) -> u64 {
    smallest_prime_above(domain.max(4))
}
