//! Seeded random instance generators for tests and calibration runs.

use mat_core::{Complex64, ComplexMatrix, DensityMatrix};
use seedstream::RandomSource;

fn ginibre(dim: usize, rng: &mut impl RandomSource) -> ComplexMatrix {
    let mut g = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            let re = 2.0 * rng.f64_unit() - 1.0;
            let im = 2.0 * rng.f64_unit() - 1.0;
            g[(r, c)] = Complex64::new(re, im);
        }
    }
    g
}

/// Random full-support density matrix `G G† / tr(G G†)`.
pub fn random_density(dim: usize, rng: &mut impl RandomSource) -> DensityMatrix {
    let g = ginibre(dim, rng);
    let m = &g * &g.dagger();
    let trace = m.trace().re;
    DensityMatrix::new(m.scaled(1.0 / trace)).expect("normalized Gram matrix is a density matrix")
}

/// Random density matrix with all eigenvalues bounded well away from zero:
/// a ridge of a quarter of the mean eigenvalue is added before normalizing.
pub fn random_strict_pd(dim: usize, rng: &mut impl RandomSource) -> DensityMatrix {
    let g = ginibre(dim, rng);
    let m = &g * &g.dagger();
    let ridge = 0.25 * m.trace().re / dim as f64;
    let ridged = &m + &ComplexMatrix::identity(dim).scaled(ridge);
    let trace = ridged.trace().re;
    DensityMatrix::new(ridged.scaled(1.0 / trace)).expect("ridged Gram matrix is a density matrix")
}

/// Random pure state projector.
pub fn random_pure(dim: usize, rng: &mut impl RandomSource) -> DensityMatrix {
    let mut v = Vec::with_capacity(dim);
    for _ in 0..dim {
        let re = 2.0 * rng.f64_unit() - 1.0;
        let im = 2.0 * rng.f64_unit() - 1.0;
        v.push(Complex64::new(re, im));
    }
    DensityMatrix::pure_state(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use mat_core::hermitian_eig;
    use seedstream::Stream;

    #[test]
    fn generators_produce_valid_states() {
        let mut s = Stream::root(77);
        for dim in [2, 4, 8] {
            let rho = random_density(dim, &mut s);
            assert_eq!(rho.dim(), dim);
            let pd = random_strict_pd(dim, &mut s);
            let min = hermitian_eig(pd.mat()).unwrap().min();
            assert!(min > 0.01 / dim as f64, "dim {dim}: min eig {min}");
            let pure = random_pure(dim, &mut s);
            let purity = (pure.mat() * pure.mat()).trace().re;
            assert!((purity - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generators_are_seed_deterministic() {
        let mut a = Stream::root(5);
        let mut b = Stream::root(5);
        let x = random_density(4, &mut a);
        let y = random_density(4, &mut b);
        assert_eq!(x.mat().max_abs_diff(y.mat()), 0.0);
    }
}
