//! Integer partitions and cycle types.
//!
//! Partitions are ordered *graded reverse-lexicographically*: first by
//! weight, then by parts compared lexicographically in decreasing order.
//! For weight 3 this gives `[3] < [2,1] < [1,1,1]`. Every report and every
//! serialized formal sum uses this order.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("partition parts must be positive, got {0:?}")]
    NonPositivePart(Vec<usize>),
    #[error("partition parts must be weakly decreasing, got {0:?}")]
    NotDecreasing(Vec<usize>),
    #[error("cycle type {cycle_type} has weight {weight}, expected degree {degree}")]
    WrongDegree {
        cycle_type: Partition,
        weight: usize,
        degree: usize,
    },
}

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        if parts.contains(&0) {
            return Err(PartitionError::NonPositivePart(parts));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(PartitionError::NotDecreasing(parts));
        }
        Ok(Self { parts })
    }

    /// Sorts `parts` and drops zeros.
    pub fn from_parts_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    /// `(n)`, the trivial representation; empty for `n = 0`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self { parts: vec![n] }
        }
    }

    /// `(1^n)`, the sign representation.
    pub fn column(n: usize) -> Self {
        Self { parts: vec![1; n] }
    }

    /// The hook `(arm, 1^leg)`. With `arm = 0` this is `(1^leg)`.
    pub fn hook(arm: usize, leg: usize) -> Self {
        let mut parts = vec![arm];
        parts.extend(std::iter::repeat_n(1, leg));
        Self::from_parts_unsorted(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Self {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|col| self.parts.iter().take_while(|&&p| p >= col).count())
            .collect();
        Self { parts }
    }

    /// Hook length of the box in row `i`, column `j` (0-based).
    fn hook_length(&self, conj: &Partition, i: usize, j: usize) -> usize {
        (self.parts[i] - j - 1) + (conj.parts[j] - i - 1) + 1
    }

    /// Number of standard Young tableaux of this shape (hook-length formula),
    /// i.e. the dimension of the corresponding irreducible.
    pub fn dimension(&self) -> u64 {
        let n = self.weight();
        let conj = self.conjugate();
        let mut hooks: Vec<u128> = Vec::with_capacity(n);
        for (i, &row) in self.parts.iter().enumerate() {
            for j in 0..row {
                hooks.push(self.hook_length(&conj, i, j) as u128);
            }
        }
        let numerator: u128 = (1..=n as u128).product();
        let denominator: u128 = hooks.iter().product();
        (numerator / denominator) as u64
    }

    /// The set `{parts[i] - i + (len - 1)}`: first-column hook lengths, a
    /// beta-set with `len` beads.
    pub fn beta_set(&self) -> Vec<usize> {
        let len = self.parts.len();
        self.parts.iter().enumerate().map(|(i, &p)| p + len - 1 - i).collect()
    }

    /// Inverse of [`Partition::beta_set`] for any set of distinct bead
    /// positions (sorted or not).
    pub fn from_beta_set(beads: &[usize]) -> Self {
        let mut sorted = beads.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let len = sorted.len();
        let parts = sorted.iter().enumerate().map(|(i, &b)| b + i + 1 - len).collect();
        Self::from_parts_unsorted(parts)
    }

    /// Multiplicity of each part size: `m[k]` is the number of parts equal to `k`.
    pub fn multiplicities(&self) -> Vec<usize> {
        let first = self.parts.first().copied().unwrap_or(0);
        let mut m = vec![0; first + 1];
        for &p in &self.parts {
            m[p] += 1;
        }
        m
    }

    /// Whether the diagram of `self` contains the diagram of `other`.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(o, s)| o <= s)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(deserializer)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = PartitionError;

    fn try_from(parts: Vec<usize>) -> Result<Self, Self::Error> {
        Partition::new(parts)
    }
}

/// Convenience constructor for literals; panics on an invalid partition.
#[macro_export]
macro_rules! partition {
    () => { $crate::partitions::Partition::empty() };
    ($($p:expr),+ $(,)?) => {
        $crate::partitions::Partition::new(vec![$($p),+]).expect("valid partition literal")
    };
}

/// Cycle lengths of a conjugacy class of the symmetric group of degree
/// `weight()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleType(Partition);

impl CycleType {
    pub fn new(partition: Partition) -> Self {
        Self(partition)
    }

    /// Checks the cycle type against an ambient degree.
    pub fn in_degree(partition: Partition, degree: usize) -> Result<Self, PartitionError> {
        let weight = partition.weight();
        if weight != degree {
            return Err(PartitionError::WrongDegree {
                cycle_type: partition,
                weight,
                degree,
            });
        }
        Ok(Self(partition))
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.weight()
    }

    /// Order of the centralizer, `z = prod_k k^{m_k} m_k!`.
    pub fn centralizer_order(&self) -> u64 {
        self.0
            .multiplicities()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &m)| (k as u64).pow(m as u32) * factorial(m))
            .product()
    }

    pub fn class_size(&self) -> u64 {
        factorial(self.degree()) / self.centralizer_order()
    }

    /// Parity of any permutation of this cycle type (`+1` or `-1`).
    pub fn sign(&self) -> i64 {
        let even_cycles = self.0.parts.iter().filter(|&&p| p % 2 == 0).count();
        if even_cycles % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// All partitions of `n` in canonical (reverse-lexicographic) order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    fn fill(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition { parts: prefix.clone() });
            return;
        }
        for part in (1..=remaining.min(max)).rev() {
            prefix.push(part);
            fill(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn cycle_types_of(n: usize) -> Vec<CycleType> {
    partitions_of(n).into_iter().map(CycleType).collect()
}

pub fn irrep_dimension(lambda: &Partition) -> u64 {
    lambda.dimension()
}

pub fn class_size(mu: &CycleType) -> u64 {
    mu.class_size()
}

pub fn conjugate(lambda: &Partition) -> Partition {
    lambda.conjugate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Brute force: all weakly decreasing sequences of positive integers
    /// summing to `n`, found by filtering compositions.
    fn brute_force_partitions(n: usize) -> Vec<Vec<usize>> {
        fn compositions(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 1..=n {
                for mut rest in compositions(n - first) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        compositions(n)
            .into_iter()
            .filter(|c| c.windows(2).all(|w| w[0] >= w[1]))
            .collect()
    }

    /// Counts standard Young tableaux by placing 1..n one box at a time.
    fn brute_force_syt(shape: &[usize]) -> u64 {
        fn go(shape: &[usize], filled: &mut Vec<usize>, remaining: usize) -> u64 {
            if remaining == 0 {
                return 1;
            }
            let mut total = 0;
            for row in 0..shape.len() {
                let above_ok = row == 0 || filled[row - 1] > filled[row];
                if filled[row] < shape[row] && above_ok {
                    filled[row] += 1;
                    total += go(shape, filled, remaining - 1);
                    filled[row] -= 1;
                }
            }
            total
        }
        go(shape, &mut vec![0; shape.len()], shape.iter().sum())
    }

    fn cycle_type_of_perm(perm: &[usize]) -> Partition {
        let mut seen = vec![false; perm.len()];
        let mut lengths = Vec::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
                len += 1;
            }
            lengths.push(len);
        }
        Partition::from_parts_unsorted(lengths)
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in all_perms(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(
            partitions_of(3),
            vec![partition![3], partition![2, 1], partition![1, 1, 1]]
        );
        assert_eq!(partitions_of(6).len(), 11);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for n in 0..=9 {
            let mut expected = brute_force_partitions(n);
            expected.sort_by(|a, b| b.cmp(a));
            let got: Vec<Vec<usize>> = partitions_of(n).iter().map(|p| p.parts().to_vec()).collect();
            assert_eq!(got, expected, "n = {n}");
        }
        assert_eq!(brute_force_partitions(6).len(), 11);
    }

    #[test]
    fn canonical_order_is_sorted_order() {
        let mut all: Vec<Partition> = (0..=6).flat_map(partitions_of).collect();
        let listed = all.clone();
        all.sort();
        assert_eq!(all, listed);
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(partition![3].conjugate(), partition![1, 1, 1]);
        assert_eq!(partition![2, 1].conjugate(), partition![2, 1]);
        assert_eq!(partition![4, 2].conjugate(), partition![2, 2, 1, 1]);
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(partition![5].dimension(), 1);
        assert_eq!(partition![2, 1].dimension(), brute_force_syt(&[2, 1]));
        assert_eq!(partition![2, 1].dimension(), 2);
        assert_eq!(partition![4, 1].dimension(), 4);
        for n in 0..=8 {
            for p in partitions_of(n) {
                assert_eq!(p.dimension(), brute_force_syt(p.parts()), "{p}");
            }
        }
    }

    #[test]
    fn class_size_examples_against_enumeration() {
        let ct = |v: Vec<usize>| CycleType::new(Partition::new(v).unwrap());
        assert_eq!(ct(vec![1, 1, 1]).class_size(), 1);
        assert_eq!(ct(vec![3]).class_size(), 2);
        assert_eq!(ct(vec![2, 1]).class_size(), 3);
        for n in 0..=6 {
            let perms = all_perms(n);
            for mu in cycle_types_of(n) {
                let count = perms
                    .iter()
                    .filter(|p| &cycle_type_of_perm(p) == mu.partition())
                    .count() as u64;
                assert_eq!(mu.class_size(), count, "{mu}");
            }
        }
    }

    #[test]
    fn sum_rules() {
        for n in 0..=8 {
            let dims: u64 = partitions_of(n).iter().map(|p| p.dimension().pow(2)).sum();
            let classes: u64 = cycle_types_of(n).iter().map(|c| c.class_size()).sum();
            assert_eq!(dims, factorial(n));
            assert_eq!(classes, factorial(n));
        }
    }

    #[test]
    fn hooks_and_columns() {
        assert_eq!(Partition::hook(3, 2), partition![3, 1, 1]);
        assert_eq!(Partition::hook(1, 2), partition![1, 1, 1]);
        assert_eq!(Partition::hook(0, 2), partition![1, 1]);
        assert_eq!(Partition::hook(0, 0), Partition::empty());
        assert_eq!(Partition::row(0), Partition::empty());
        assert_eq!(Partition::column(0), Partition::empty());
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
        assert!(CycleType::in_degree(partition![2, 1], 4).is_err());
    }

    #[test]
    fn serializes_as_array() {
        assert_eq!(serde_json::to_string(&partition![2, 1]).unwrap(), "[2,1]");
        assert_eq!(serde_json::to_string(&Partition::empty()).unwrap(), "[]");
        let back: Partition = serde_json::from_str("[3,1]").unwrap();
        assert_eq!(back, partition![3, 1]);
        assert!(serde_json::from_str::<Partition>("[1,3]").is_err());
    }

    proptest! {
        #[test]
        fn conjugate_is_involution(n in 0usize..=10, pick in 0usize..1000) {
            let all = partitions_of(n);
            let p = &all[pick % all.len()];
            prop_assert_eq!(&p.conjugate().conjugate(), p);
            prop_assert_eq!(p.conjugate().weight(), n);
        }

        #[test]
        fn beta_set_round_trip(n in 0usize..=10, pick in 0usize..1000) {
            let all = partitions_of(n);
            let p = &all[pick % all.len()];
            prop_assert_eq!(&Partition::from_beta_set(&p.beta_set()), p);
        }
    }
}
