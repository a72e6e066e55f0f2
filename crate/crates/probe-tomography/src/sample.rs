//! Measurement simulation for single shots.

use anamorph_core::Ciphertext;
use mat_core::ComplexMatrix;
use qop_kit::{hadamard, pauli_observable, phase_gate, PauliString, PermSpec};
use seedstream::RandomSource;
use serde::{Deserialize, Serialize};

use crate::TomoError;

const BRANCH_UNDERFLOW: f64 = 1e-12;

/// Control-qubit rotation applied before the branch measurement.  `X` reads
/// the real part of the covert coupling, `Y` the imaginary part (identically
/// zero for Hermitian covert blocks, so `X` alone suffices in practice).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Probe {
    X,
    Y,
}

impl Probe {
    fn rotation(self) -> ComplexMatrix {
        match self {
            Probe::X => hadamard(),
            Probe::Y => &hadamard() * &phase_gate(),
        }
    }
}

/// One measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotRecord {
    /// Control-qubit branch the shot collapsed to.
    pub branch: u8,
    /// Index into the design's nonidentity Pauli list.
    pub pauli: usize,
    /// Measured eigenvalue, +1 or -1.
    pub outcome: i8,
}

/// Exact branch blocks of the rotated, unscrambled ciphertext.
///
/// `rho' = (G (x) I) U† ct U (G† (x) I)`; the returned pair is the top-left
/// and bottom-right quadrant of `rho'`, whose traces are the branch
/// probabilities.
pub fn probe_blocks(
    ct: &Ciphertext,
    key_perm: &PermSpec,
    probe: Probe,
) -> Result<(ComplexMatrix, ComplexMatrix), TomoError> {
    let dm = ct.dm.mat();
    if key_perm.size() != dm.rows() {
        return Err(TomoError::BadPlan(format!(
            "permutation acts on {} points, ciphertext lives in dimension {}",
            key_perm.size(),
            dm.rows()
        )));
    }
    let d = dm.rows() / 2;
    let u = key_perm.unitary();
    let unscrambled = dm.conjugate_by(&u.dagger());
    let g_big = probe.rotation().tensor(&ComplexMatrix::identity(d));
    let rho = unscrambled.conjugate_by(&g_big);
    Ok((rho.block(0, 0, d, d), rho.block(d, d, d, d)))
}

/// Cached single-shot distribution: branch probabilities and all conditional
/// Pauli expectations, computed once per (ciphertext, permutation, probe).
///
/// Drawing from the cache consumes the stream in exactly the order of the
/// direct computation — branch, Pauli within group, outcome — so batched
/// sampling is bit-identical to repeated [`sample_shot`] calls on the same
/// stream.
#[derive(Debug, Clone)]
pub struct ProbeDistribution {
    p0: f64,
    p1: f64,
    /// `expect[b][p] = Tr(P rho_{M|b})` for each nonidentity Pauli index.
    expect: [Vec<f64>; 2],
}

impl ProbeDistribution {
    pub fn build(ct: &Ciphertext, key_perm: &PermSpec, probe: Probe) -> Result<Self, TomoError> {
        let (d0, d1) = probe_blocks(ct, key_perm, probe)?;
        let p0 = d0.trace().re;
        let p1 = d1.trace().re;
        if (p0 + p1 - 1.0).abs() > 1e-12 {
            return Err(TomoError::BadState(format!(
                "branch probabilities sum to {}",
                p0 + p1
            )));
        }
        if p0 < BRANCH_UNDERFLOW || p1 < BRANCH_UNDERFLOW {
            return Err(TomoError::EmptyBranch { p0, p1 });
        }
        let d1_qubits = d0.rows().trailing_zeros() as usize;
        let paulis = PauliString::enumerate_nonidentity(d1_qubits);
        let mut expect = [Vec::with_capacity(paulis.len()), Vec::with_capacity(paulis.len())];
        for (block, p, store) in [(&d0, p0, 0usize), (&d1, p1, 1usize)] {
            for pauli in &paulis {
                let obs = pauli_observable(pauli);
                let val = (&obs * block).trace().re / p;
                expect[store].push(val);
            }
        }
        Ok(ProbeDistribution { p0, p1, expect })
    }

    pub fn branch_probabilities(&self) -> (f64, f64) {
        (self.p0, self.p1)
    }

    /// `Tr(P rho_{M|b})` for the design's Pauli index `p`.
    pub fn conditional_expectation(&self, branch: u8, p: usize) -> f64 {
        self.expect[branch as usize][p]
    }

    /// Draw one shot for the given group.  Both designs use singleton groups,
    /// so the group index is the Pauli index; the within-group draw is still
    /// consumed to keep the stream layout design-independent.
    pub fn draw(&self, group: usize, rng: &mut impl RandomSource) -> Result<ShotRecord, TomoError> {
        if group >= self.expect[0].len() {
            return Err(TomoError::BadPlan(format!(
                "group {} out of range for {} Pauli groups",
                group,
                self.expect[0].len()
            )));
        }
        let branch: u8 = if rng.f64_unit() < self.p0 { 0 } else { 1 };
        let within = rng.below(1) as usize;
        let pauli = group + within;
        let q = 0.5 * (1.0 + self.conditional_expectation(branch, pauli));
        let outcome: i8 = if rng.f64_unit() < q.clamp(0.0, 1.0) { 1 } else { -1 };
        Ok(ShotRecord {
            branch,
            pauli,
            outcome,
        })
    }
}

/// Sample a single shot directly from the ciphertext.
///
/// Stream consumption order: branch (one float), Pauli within group (one
/// bounded draw), outcome (one float).
pub fn sample_shot(
    ct: &Ciphertext,
    key_perm: &PermSpec,
    group: usize,
    probe: Probe,
    rng: &mut impl RandomSource,
) -> Result<ShotRecord, TomoError> {
    ProbeDistribution::build(ct, key_perm, probe)?.draw(group, rng)
}
