//! `((3,1))_q` polynomial erasure code.
//!
//! The encoder is the isometry `W|m> = (1/sqrt q) sum_c |m+c, m+2c, m+3c>`
//! over GF(q) — the quantum Shamir code at threshold 2 with evaluation points
//! 1, 2, 3.  Any single register is maximally mixed; any two registers
//! recover the input exactly.  Decoding relabels the qualified pair by the
//! linear bijection `(y_i, y_j) -> (s, y_k)` (secret plus the prediction of
//! the erased coordinate) and traces the prediction register, which is
//! maximally mixed independently of the secret, so coherences survive.

use mat_core::{partial_trace_matrix, Complex64, ComplexMatrix, DensityMatrix};
use serde::{Deserialize, Deserializer, Serialize};

use crate::field::{is_prime, FieldElement};
use crate::QassError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EncodedQuantumState {
    pub q: u64,
    pub n: usize,
    pub eval_points: [u64; 3],
    pub global: DensityMatrix,
    pub embed_dim: usize,
}

impl<'de> Deserialize<'de> for EncodedQuantumState {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            q: u64,
            n: usize,
            eval_points: [u64; 3],
            global: DensityMatrix,
            embed_dim: usize,
        }
        let raw = Raw::deserialize(deserializer)?;
        use serde::de::Error as _;
        if !is_prime(raw.q) {
            return Err(D::Error::custom(format!("q = {} is not prime", raw.q)));
        }
        if raw.n != 3 || raw.eval_points != [1, 2, 3] {
            return Err(D::Error::custom("only the 3-register code at points 1,2,3 is supported"));
        }
        if raw.embed_dim as u64 > raw.q {
            return Err(D::Error::custom(format!(
                "embedded dimension {} exceeds qudit size {}",
                raw.embed_dim, raw.q
            )));
        }
        let expect = (raw.q * raw.q * raw.q) as usize;
        if raw.global.dim() != expect {
            return Err(D::Error::custom(format!(
                "global state has dimension {}, expected q^3 = {}",
                raw.global.dim(),
                expect
            )));
        }
        Ok(EncodedQuantumState {
            q: raw.q,
            n: raw.n,
            eval_points: raw.eval_points,
            global: raw.global,
            embed_dim: raw.embed_dim,
        })
    }
}

/// Embed a `D`-dimensional state at the bottom of one qudit and spread it
/// over three.
pub fn cgl_encode(rho: &DensityMatrix, q: u64) -> Result<EncodedQuantumState, QassError> {
    if !is_prime(q) {
        return Err(QassError::NotPrime { p: q });
    }
    let embed_dim = rho.dim();
    let min = (embed_dim as u64).max(5);
    if q < min {
        return Err(QassError::FieldTooSmall { p: q, min });
    }

    let qs = q as usize;
    let amp = Complex64::new(1.0 / (qs as f64).sqrt(), 0.0);
    let mut isometry = ComplexMatrix::zeros(qs * qs * qs, qs);
    for m in 0..qs {
        for c in 0..qs {
            let row = ((m + c) % qs * qs + (m + 2 * c) % qs) * qs + (m + 3 * c) % qs;
            isometry[(row, m)] = amp;
        }
    }

    let embedded = ComplexMatrix::from_fn(qs, qs, |i, j| {
        if i < embed_dim && j < embed_dim {
            rho.mat()[(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let global = &(&isometry * &embedded) * &isometry.dagger();
    Ok(EncodedQuantumState {
        q,
        n: 3,
        eval_points: [1, 2, 3],
        global: DensityMatrix::new(global)?,
        embed_dim,
    })
}

/// `(y_i, y_j) -> (s, y_k)`: interpolate `f(x) = s + c x` through the two
/// held coordinates and predict the erased one.
pub(crate) fn pair_decode_map(
    q: u64,
    points: (u64, u64, u64),
    held: (u64, u64),
) -> (u64, u64) {
    let fe = |v: u64| FieldElement::new(v % q, q).expect("reduced value fits");
    let (xi, xj, xk) = (fe(points.0), fe(points.1), fe(points.2));
    let (yi, yj) = (fe(held.0), fe(held.1));
    let c = yj.sub(yi).mul(xj.sub(xi).inv().expect("distinct points"));
    let s = yi.sub(c.mul(xi));
    let yk = s.add(c.mul(xk));
    (s.value(), yk.value())
}

/// Recover the input from two registers of the encoded state; `available`
/// names the held evaluation points out of {1, 2, 3}.
pub fn cgl_decode(
    enc: &EncodedQuantumState,
    available: (usize, usize),
) -> Result<DensityMatrix, QassError> {
    let (mut i, mut j) = available;
    if i > j {
        std::mem::swap(&mut i, &mut j);
    }
    if i == j || i < 1 || j > 3 {
        return Err(QassError::InvalidPair {
            i: available.0,
            j: available.1,
        });
    }
    let erased = 6 - i - j;
    let qs = enc.q as usize;
    let dims = [qs, qs, qs];
    let reduced = partial_trace_matrix(enc.global.mat(), &dims, &[erased - 1])?;

    // Basis relabeling is a permutation, so conjugation is an exact entry
    // relocation rather than a matrix product.
    let map = |idx: usize| -> usize {
        let (yi, yj) = ((idx / qs) as u64, (idx % qs) as u64);
        let (s, yk) = pair_decode_map(enc.q, (i as u64, j as u64, erased as u64), (yi, yj));
        s as usize * qs + yk as usize
    };
    let mut relabeled = ComplexMatrix::zeros(qs * qs, qs * qs);
    for a in 0..qs * qs {
        let ma = map(a);
        for b in 0..qs * qs {
            relabeled[(ma, map(b))] = reduced[(a, b)];
        }
    }

    let secret_register = partial_trace_matrix(&relabeled, &[qs, qs], &[1])?;
    let out = secret_register.block(0, 0, enc.embed_dim, enc.embed_dim);
    Ok(DensityMatrix::new(out)?)
}
