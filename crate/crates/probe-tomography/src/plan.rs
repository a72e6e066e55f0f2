//! Shot planning from the sample-complexity bound.

use serde::{Deserialize, Serialize};

use crate::TomoError;

/// Measurement design for the Pauli draw.
///
/// `FramesD2` is the tabulated `d + 1 = 3` frame family for a single qubit:
/// each nonidentity Pauli forms its own frame.  `Singleton` generalizes to
/// any dimension with one group per nonidentity Pauli and the correspondingly
/// larger shot bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Design {
    FramesD2,
    Singleton,
}

/// Sized and allocated measurement schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TomographyPlan {
    /// Hilbert dimension of the message block.
    pub d: usize,
    /// Target Frobenius error on the scaled covert block.
    pub epsilon: f64,
    /// Admitted failure probability.
    pub delta: f64,
    pub design: Design,
    /// Total shot count.
    pub n_shots: usize,
    /// Shots per Pauli group; uniform, sums to `n_shots`.
    pub allocation: Vec<usize>,
}

impl TomographyPlan {
    /// Number of Pauli groups (one per nonidentity Pauli in both designs).
    pub fn group_count(&self) -> usize {
        self.d * self.d - 1
    }

    /// Inclusion probability of each nonidentity Pauli per shot.
    pub fn pauli_probability(&self) -> f64 {
        1.0 / self.group_count() as f64
    }
}

/// Size the experiment: smallest integer shot count satisfying the design's
/// bound, rounded up to a multiple of the group count, allocated uniformly.
///
/// Bounds (logs base 2):
/// * frames, d = 2: `N >= (d+1) d / (2 eps^2) * log2(4 d^2 / delta)`
/// * singleton, any d: `N >= d^3 / (2 eps^2) * log2(4 d^2 / delta)`
pub fn plan_shots(
    d1: u32,
    epsilon: f64,
    delta: f64,
    design: Design,
) -> Result<TomographyPlan, TomoError> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(TomoError::BadPlan(format!(
            "epsilon = {epsilon} outside (0, 1)"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(TomoError::BadPlan(format!("delta = {delta} outside (0, 1)")));
    }
    if d1 == 0 || d1 > 16 {
        return Err(TomoError::BadPlan(format!("d1 = {d1} out of range")));
    }
    let d = 1usize << d1;
    let df = d as f64;
    let log_term = (4.0 * df * df / delta).log2();
    let bound = match design {
        Design::FramesD2 => {
            if d != 2 {
                return Err(TomoError::UnsupportedDesign {
                    d,
                    detail: "frame tables exist only for d = 2".into(),
                });
            }
            (df + 1.0) * df / (2.0 * epsilon * epsilon) * log_term
        }
        Design::Singleton => df * df * df / (2.0 * epsilon * epsilon) * log_term,
    };
    let groups = d * d - 1;
    let minimal = bound.ceil() as usize;
    let n_shots = minimal.div_ceil(groups) * groups;
    Ok(TomographyPlan {
        d,
        epsilon,
        delta,
        design,
        n_shots,
        allocation: vec![n_shots / groups; groups],
    })
}
