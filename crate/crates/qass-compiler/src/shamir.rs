//! 2-of-3 Shamir sharing of a single field element.

use seedstream::RandomSource;

use crate::field::FieldElement;
use crate::QassError;

/// Evaluate `f(x) = secret + c x` at the three public points.
pub(crate) fn share_with_coefficient(
    secret: FieldElement,
    c: u64,
) -> [(FieldElement, FieldElement); 3] {
    let p = secret.modulus();
    let c = FieldElement::new(c % p, p).expect("reduced coefficient fits");
    [1u64, 2, 3].map(|point| {
        let x = FieldElement::new(point, p).expect("evaluation point fits");
        (x, secret.add(c.mul(x)))
    })
}

/// Draw the degree-one coefficient uniformly and hand out `(i, f(i))` for
/// players 1, 2, 3.
pub fn shamir_share(
    secret: FieldElement,
    rng: &mut impl RandomSource,
) -> Result<[(FieldElement, FieldElement); 3], QassError> {
    let p = secret.modulus();
    if p <= 3 {
        return Err(QassError::FieldTooSmall { p, min: 5 });
    }
    Ok(share_with_coefficient(secret, rng.below(p)))
}

/// Lagrange interpolation at zero from any two of the shares.
pub fn shamir_reconstruct(
    shares: &[(FieldElement, FieldElement)],
) -> Result<FieldElement, QassError> {
    if shares.len() < 2 {
        return Err(QassError::ThresholdUnmet);
    }
    let (xa, ya) = shares[0];
    let (xb, yb) = shares[1];
    if xa.modulus() != xb.modulus() {
        return Err(QassError::BadShare(format!(
            "moduli {} and {} disagree",
            xa.modulus(),
            xb.modulus()
        )));
    }
    if xa == xb {
        return Err(QassError::DuplicatePoints);
    }
    // s = (ya xb - yb xa) / (xb - xa)
    let numerator = ya.mul(xb).sub(yb.mul(xa));
    let denominator = xb.sub(xa).inv()?;
    Ok(numerator.mul(denominator))
}
