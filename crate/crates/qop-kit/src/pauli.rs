//! Pauli strings and their matrix realizations.

use crate::QopError;
use mat_core::{Complex64, ComplexMatrix};

/// An n-qubit Pauli string indexed by X/Z exponent bits per qubit, qubit 0
/// most significant. No phase is tracked: the string `(x=1, z=1)` denotes the
/// literal product `XZ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    x_bits: Vec<bool>,
    z_bits: Vec<bool>,
}

impl PauliString {
    pub fn new(x_bits: Vec<bool>, z_bits: Vec<bool>) -> Self {
        assert_eq!(x_bits.len(), z_bits.len(), "bit vectors must align");
        PauliString { x_bits, z_bits }
    }

    pub fn identity(n: usize) -> Self {
        PauliString {
            x_bits: vec![false; n],
            z_bits: vec![false; n],
        }
    }

    pub fn n(&self) -> usize {
        self.x_bits.len()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x_bits
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z_bits
    }

    pub fn is_identity(&self) -> bool {
        self.x_bits.iter().all(|&b| !b) && self.z_bits.iter().all(|&b| !b)
    }

    /// Number of qubits carrying both an X and a Z factor.
    pub fn y_count(&self) -> usize {
        self.x_bits
            .iter()
            .zip(&self.z_bits)
            .filter(|(&x, &z)| x && z)
            .count()
    }

    /// One character per qubit: I, X, Z, or Y (the `x=z=1` slot).
    pub fn symbol(&self) -> String {
        self.x_bits
            .iter()
            .zip(&self.z_bits)
            .map(|(&x, &z)| match (x, z) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            })
            .collect()
    }

    pub fn from_symbol(s: &str) -> Result<Self, QopError> {
        let mut x_bits = Vec::with_capacity(s.len());
        let mut z_bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            let (x, z) = match ch {
                'I' => (false, false),
                'X' => (true, false),
                'Z' => (false, true),
                'Y' => (true, true),
                other => {
                    return Err(QopError::Dimension(format!(
                        "unknown Pauli symbol '{other}'"
                    )))
                }
            };
            x_bits.push(x);
            z_bits.push(z);
        }
        if x_bits.is_empty() {
            return Err(QopError::Dimension("empty Pauli symbol".into()));
        }
        Ok(PauliString { x_bits, z_bits })
    }

    /// All 4^n - 1 non-identity strings in lexicographic (I, X, Y, Z) order
    /// per qubit, most significant qubit first.
    pub fn enumerate_nonidentity(n: usize) -> Vec<PauliString> {
        let mut out = Vec::with_capacity(4usize.pow(n as u32) - 1);
        for code in 1..4usize.pow(n as u32) {
            let mut x_bits = vec![false; n];
            let mut z_bits = vec![false; n];
            let mut rem = code;
            for j in (0..n).rev() {
                let slot = rem % 4;
                rem /= 4;
                // slot order: 0=I, 1=X, 2=Y, 3=Z
                x_bits[j] = slot == 1 || slot == 2;
                z_bits[j] = slot == 2 || slot == 3;
            }
            out.push(PauliString { x_bits, z_bits });
        }
        out
    }
}

fn single_qubit_factor(x: bool, z: bool) -> ComplexMatrix {
    let one = Complex64::new(1.0, 0.0);
    let mut m = ComplexMatrix::zeros(2, 2);
    match (x, z) {
        (false, false) => {
            m[(0, 0)] = one;
            m[(1, 1)] = one;
        }
        (true, false) => {
            m[(0, 1)] = one;
            m[(1, 0)] = one;
        }
        (false, true) => {
            m[(0, 0)] = one;
            m[(1, 1)] = -one;
        }
        (true, true) => {
            // X Z with no phase: [[0, -1], [1, 0]].
            m[(0, 1)] = -one;
            m[(1, 0)] = one;
        }
    }
    m
}

/// Phase-free matrix realization `⊗_j X^{x_j} Z^{z_j}`. Unitary; Hermitian up
/// to the global phase contributed by each `x=z=1` slot.
pub fn pauli_matrix(p: &PauliString) -> ComplexMatrix {
    let mut m = single_qubit_factor(p.x_bits[0], p.z_bits[0]);
    for j in 1..p.n() {
        m = m.tensor(&single_qubit_factor(p.x_bits[j], p.z_bits[j]));
    }
    m
}

/// Hermitian measurement realization: `i^{#Y}` times the phase-free matrix,
/// i.e. the `x=z=1` slots become the textbook Y. Squares to the identity, so
/// outcomes are ±1 and `Tr(P ρ)` is real for Hermitian ρ.
pub fn pauli_observable(p: &PauliString) -> ComplexMatrix {
    let phase = match p.y_count() % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    };
    pauli_matrix(p).scaled(phase)
}

pub fn hadamard() -> ComplexMatrix {
    let h = 1.0 / 2.0_f64.sqrt();
    ComplexMatrix::from_fn(2, 2, |r, c| {
        Complex64::new(if r == 1 && c == 1 { -h } else { h }, 0.0)
    })
}

/// S = diag(1, i).
pub fn phase_gate() -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2, 2);
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    m[(1, 1)] = Complex64::new(0.0, 1.0);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use mat_core::hermitian_eig;

    #[test]
    fn frozen_single_qubit_matrices() {
        let x = pauli_matrix(&PauliString::from_symbol("X").unwrap());
        assert_eq!(x[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(x[(1, 0)], Complex64::new(1.0, 0.0));

        let z = pauli_matrix(&PauliString::from_symbol("Z").unwrap());
        assert_eq!(z[(1, 1)], Complex64::new(-1.0, 0.0));

        // (x=1, z=1) is the literal product X Z = [[0, -1], [1, 0]].
        let xz = pauli_matrix(&PauliString::new(vec![true], vec![true]));
        assert_eq!(xz[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(xz[(0, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(xz[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(xz[(1, 1)], Complex64::new(0.0, 0.0));

        // The observable version is Y.
        let y = pauli_observable(&PauliString::from_symbol("Y").unwrap());
        assert_eq!(y[(0, 1)], Complex64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], Complex64::new(0.0, 1.0));
    }

    #[test]
    fn two_qubit_ordering_is_left_most_significant() {
        // XI acts on qubit 0 => swaps the two 2-dim half-blocks.
        let xi = pauli_matrix(&PauliString::from_symbol("XI").unwrap());
        assert_eq!(xi[(0, 2)], Complex64::new(1.0, 0.0));
        assert_eq!(xi[(1, 3)], Complex64::new(1.0, 0.0));
        // IZ flips sign on odd indices.
        let iz = pauli_matrix(&PauliString::from_symbol("IZ").unwrap());
        assert_eq!(iz[(1, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(iz[(2, 2)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn observables_are_hermitian_and_square_to_identity() {
        for p in PauliString::enumerate_nonidentity(2) {
            let ob = pauli_observable(&p);
            assert!(ob.hermitian_residual() < 1e-15, "{} not Hermitian", p.symbol());
            let sq = &ob * &ob;
            assert!(
                sq.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15,
                "{}^2 != I",
                p.symbol()
            );
            let eig = hermitian_eig(&ob).unwrap();
            for l in eig.eigenvalues {
                assert!((l.abs() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn phase_free_matrices_are_unitary() {
        for p in PauliString::enumerate_nonidentity(2) {
            let m = pauli_matrix(&p);
            assert!((&m.dagger() * &m).max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        }
    }

    #[test]
    fn enumeration_counts_and_symbols() {
        let ps = PauliString::enumerate_nonidentity(1);
        let symbols: Vec<String> = ps.iter().map(|p| p.symbol()).collect();
        assert_eq!(symbols, vec!["X", "Y", "Z"]);
        assert_eq!(PauliString::enumerate_nonidentity(2).len(), 15);
        // Round trip through symbols.
        for p in PauliString::enumerate_nonidentity(2) {
            assert_eq!(PauliString::from_symbol(&p.symbol()).unwrap(), p);
        }
    }

    #[test]
    fn observables_are_trace_orthogonal() {
        let ps = PauliString::enumerate_nonidentity(2);
        for (i, a) in ps.iter().enumerate() {
            for (j, b) in ps.iter().enumerate() {
                let prod = &pauli_observable(a).dagger() * &pauli_observable(b);
                let tr = prod.trace();
                let want = if i == j { 4.0 } else { 0.0 };
                assert!((tr.re - want).abs() < 1e-12 && tr.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn hadamard_and_phase_compose_to_the_y_probe() {
        // (HS) X (HS)† = -Y and (HS) Y (HS)† = -Z.
        let u = &hadamard() * &phase_gate();
        let x = pauli_observable(&PauliString::from_symbol("X").unwrap());
        let y = pauli_observable(&PauliString::from_symbol("Y").unwrap());
        let z = pauli_observable(&PauliString::from_symbol("Z").unwrap());
        let ux = x.conjugate_by(&u);
        assert!(ux.max_abs_diff(&y.scaled(-1.0)) < 1e-14);
        let uy = y.conjugate_by(&u);
        assert!(uy.max_abs_diff(&z.scaled(-1.0)) < 1e-14);
    }
}
