//! Prime-field scalars for the classical shares.

use crate::QassError;

/// Deterministic trial division; the moduli here are tiny.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn smallest_prime_at_least(n: u64) -> u64 {
    let mut p = n.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// Smallest prime strictly greater than `n`; fields are sized this way so
/// every domain value fits with room for the evaluation points.
pub fn smallest_prime_above(n: u64) -> u64 {
    smallest_prime_at_least(n + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldElement {
    value: u64,
    p: u64,
}

impl FieldElement {
    pub fn new(value: u64, p: u64) -> Result<Self, QassError> {
        if !is_prime(p) {
            return Err(QassError::NotPrime { p });
        }
        if value >= p {
            return Err(QassError::ValueOutOfField { value, p });
        }
        Ok(FieldElement { value, p })
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    fn lift(self, value: u64) -> FieldElement {
        FieldElement {
            value: value % self.p,
            p: self.p,
        }
    }

    pub fn add(self, other: FieldElement) -> FieldElement {
        assert_eq!(self.p, other.p, "mixed moduli");
        self.lift(self.value + other.value)
    }

    pub fn sub(self, other: FieldElement) -> FieldElement {
        assert_eq!(self.p, other.p, "mixed moduli");
        self.lift(self.value + self.p - other.value)
    }

    pub fn mul(self, other: FieldElement) -> FieldElement {
        assert_eq!(self.p, other.p, "mixed moduli");
        let wide = self.value as u128 * other.value as u128;
        self.lift((wide % self.p as u128) as u64)
    }

    /// Multiplicative inverse by Fermat's little theorem.
    pub fn inv(self) -> Result<FieldElement, QassError> {
        if self.value == 0 {
            return Err(QassError::BadShare("inverse of zero".into()));
        }
        let mut result = 1u128;
        let mut base = self.value as u128;
        let mut exp = self.p - 2;
        let modulus = self.p as u128;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * base % modulus;
            }
            base = base * base % modulus;
            exp >>= 1;
        }
        Ok(self.lift(result as u64))
    }
}
