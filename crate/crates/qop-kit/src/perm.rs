//! Basis permutations with Lehmer indexing.

use crate::QopError;
use mat_core::{Complex64, ComplexMatrix};
use seedstream::RandomSource;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Cap for carrying a Lehmer index: 20! is the largest factorial that fits u64.
pub const LEHMER_SIZE_LIMIT: usize = 20;

/// A permutation of basis indices `0..size`. `mapping[j]` is where basis state
/// `j` goes. For `size <= 20` the canonical Lehmer index (position in
/// lexicographic order of all permutations) rides along.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermSpec {
    size: usize,
    mapping: Vec<usize>,
    lehmer: Option<u64>,
}

fn validate_mapping(mapping: &[usize]) -> Result<(), QopError> {
    let size = mapping.len();
    if size == 0 {
        return Err(QopError::BadPermutation {
            size,
            reason: "empty mapping".into(),
        });
    }
    let mut seen = vec![false; size];
    for &m in mapping {
        if m >= size {
            return Err(QopError::BadPermutation {
                size,
                reason: format!("image {m} out of range"),
            });
        }
        if seen[m] {
            return Err(QopError::BadPermutation {
                size,
                reason: format!("image {m} repeated"),
            });
        }
        seen[m] = true;
    }
    Ok(())
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn lehmer_index(mapping: &[usize]) -> u64 {
    let n = mapping.len();
    let mut index = 0u64;
    for i in 0..n {
        let smaller_later = mapping[(i + 1)..n]
            .iter()
            .filter(|&&m| m < mapping[i])
            .count() as u64;
        index += smaller_later * factorial(n - 1 - i);
    }
    index
}

impl PermSpec {
    pub fn new(mapping: Vec<usize>) -> Result<Self, QopError> {
        validate_mapping(&mapping)?;
        let size = mapping.len();
        let lehmer = (size <= LEHMER_SIZE_LIMIT).then(|| lehmer_index(&mapping));
        Ok(PermSpec {
            size,
            mapping,
            lehmer,
        })
    }

    pub fn identity(size: usize) -> Self {
        PermSpec::new((0..size).collect()).expect("identity is a permutation")
    }

    /// Decode a Lehmer index back into a permutation.
    pub fn from_lehmer(size: usize, index: u64) -> Result<Self, QopError> {
        if size == 0 || size > LEHMER_SIZE_LIMIT {
            return Err(QopError::BadPermutation {
                size,
                reason: format!("Lehmer decoding supports 1..={LEHMER_SIZE_LIMIT}"),
            });
        }
        if index >= factorial(size) {
            return Err(QopError::BadPermutation {
                size,
                reason: format!("Lehmer index {index} >= {size}!"),
            });
        }
        let mut pool: Vec<usize> = (0..size).collect();
        let mut mapping = Vec::with_capacity(size);
        let mut rem = index;
        for i in 0..size {
            let f = factorial(size - 1 - i);
            let digit = (rem / f) as usize;
            rem %= f;
            mapping.push(pool.remove(digit));
        }
        PermSpec::new(mapping)
    }

    /// Fisher–Yates draw (forward variant): position i swaps with
    /// `i + below(n - i)`. An all-zero source therefore yields the identity.
    pub fn sample(size: usize, rng: &mut impl RandomSource) -> Self {
        let mut mapping: Vec<usize> = (0..size).collect();
        for i in 0..size.saturating_sub(1) {
            let offset = rng.below((size - i) as u64) as usize;
            mapping.swap(i, i + offset);
        }
        PermSpec::new(mapping).expect("shuffle of a permutation is a permutation")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn lehmer(&self) -> Option<u64> {
        self.lehmer
    }

    pub fn apply(&self, j: usize) -> usize {
        self.mapping[j]
    }

    pub fn inverse(&self) -> PermSpec {
        let mut inv = vec![0usize; self.size];
        for (j, &m) in self.mapping.iter().enumerate() {
            inv[m] = j;
        }
        PermSpec::new(inv).expect("inverse of a permutation is a permutation")
    }

    /// The unitary with `U |j⟩ = |mapping(j)⟩`.
    pub fn unitary(&self) -> ComplexMatrix {
        permutation_unitary(self)
    }
}

pub fn permutation_unitary(perm: &PermSpec) -> ComplexMatrix {
    let n = perm.size();
    let mut u = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        u[(perm.apply(j), j)] = Complex64::new(1.0, 0.0);
    }
    u
}

#[derive(Serialize, Deserialize)]
struct RawPerm {
    size: usize,
    mapping: Vec<usize>,
    lehmer: Option<u64>,
}

impl Serialize for PermSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        RawPerm {
            size: self.size,
            mapping: self.mapping.clone(),
            lehmer: self.lehmer,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PermSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawPerm::deserialize(deserializer)?;
        if raw.mapping.len() != raw.size {
            return Err(D::Error::custom(format!(
                "mapping length {} != size {}",
                raw.mapping.len(),
                raw.size
            )));
        }
        let perm = PermSpec::new(raw.mapping).map_err(D::Error::custom)?;
        if raw.lehmer.is_some() && raw.lehmer != perm.lehmer {
            return Err(D::Error::custom(format!(
                "Lehmer index {:?} does not match the mapping (expected {:?})",
                raw.lehmer, perm.lehmer
            )));
        }
        Ok(perm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use seedstream::Stream;

    struct ZeroSource;
    impl RandomSource for ZeroSource {
        fn next_u64(&mut self) -> u64 {
            0
        }
    }

    #[test]
    fn unitary_moves_basis_states() {
        let p = PermSpec::new(vec![2, 0, 1]).unwrap();
        let u = p.unitary();
        // U|0> = |2>.
        assert_eq!(u[(2, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(0, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(u[(1, 2)], Complex64::new(1.0, 0.0));
        // Unitarity and inverse.
        assert!((&u.dagger() * &u).max_abs_diff(&ComplexMatrix::identity(3)) < 1e-15);
        assert_eq!(p.inverse().unitary(), u.dagger());
    }

    #[test]
    fn lehmer_matches_lexicographic_enumeration_for_n4() {
        // Generate all 24 permutations of 0..4 in lexicographic order and check
        // each decodes from its position.
        let mut all: Vec<Vec<usize>> = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let v = vec![a, b, c, d];
                        let mut sorted = v.clone();
                        sorted.sort();
                        if sorted == vec![0, 1, 2, 3] {
                            all.push(v);
                        }
                    }
                }
            }
        }
        assert_eq!(all.len(), 24);
        for (idx, mapping) in all.iter().enumerate() {
            let p = PermSpec::new(mapping.clone()).unwrap();
            assert_eq!(p.lehmer(), Some(idx as u64), "mapping {mapping:?}");
            assert_eq!(
                PermSpec::from_lehmer(4, idx as u64).unwrap().mapping(),
                &mapping[..]
            );
        }
    }

    #[test]
    fn all_zero_source_samples_identity() {
        let mut z = ZeroSource;
        let p = PermSpec::sample(8, &mut z);
        assert_eq!(p, PermSpec::identity(8));
    }

    #[test]
    fn sampling_is_roughly_uniform_over_s3() {
        let mut s = Stream::root(21);
        let mut counts = [0u32; 6];
        for _ in 0..6000 {
            let p = PermSpec::sample(3, &mut s);
            counts[p.lehmer().unwrap() as usize] += 1;
        }
        for &c in &counts {
            assert!((c as f64 - 1000.0).abs() < 150.0, "counts {counts:?}");
        }
    }

    #[test]
    fn rejects_bad_mappings_and_bad_json() {
        assert!(PermSpec::new(vec![0, 0, 1]).is_err());
        assert!(PermSpec::new(vec![0, 3]).is_err());
        let bad = r#"{"size":2,"mapping":[1,0],"lehmer":0}"#;
        assert!(serde_json::from_str::<PermSpec>(bad).is_err());
        let good = r#"{"size":2,"mapping":[1,0],"lehmer":1}"#;
        assert_eq!(
            serde_json::from_str::<PermSpec>(good).unwrap().mapping(),
            &[1, 0]
        );
        let no_index = r#"{"size":2,"mapping":[1,0],"lehmer":null}"#;
        assert_eq!(
            serde_json::from_str::<PermSpec>(no_index).unwrap().lehmer(),
            Some(1)
        );
    }

    #[test]
    fn large_permutations_drop_the_lehmer_index() {
        let mapping: Vec<usize> = (0..24).rev().collect();
        let p = PermSpec::new(mapping).unwrap();
        assert_eq!(p.lehmer(), None);
    }

    proptest! {
        #[test]
        fn lehmer_round_trip(seed in 0u64..10_000) {
            let mut s = Stream::root(seed);
            for &n in &[2usize, 4, 6, 8] {
                let p = PermSpec::sample(n, &mut s);
                let idx = p.lehmer().unwrap();
                let back = PermSpec::from_lehmer(n, idx).unwrap();
                prop_assert_eq!(back.mapping(), p.mapping());
            }
        }

        #[test]
        fn inverse_composes_to_identity(seed in 0u64..10_000) {
            let mut s = Stream::root(seed);
            let p = PermSpec::sample(6, &mut s);
            let u = p.unitary();
            let v = p.inverse().unitary();
            prop_assert!((&u * &v).max_abs_diff(&ComplexMatrix::identity(6)) < 1e-15);
        }
    }
}
