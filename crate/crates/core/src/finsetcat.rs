//! The categories FA, FS, FI and FB on the skeleton `{0, 1, 2, ...}`.
//!
//! A map `n -> m` is stored as its array of values. Internally values are
//! 0-based; `Display` and serialization print them 1-based so that `[1,2,1]`
//! reads as the map `1 -> 1, 2 -> 2, 3 -> 1` into `{1, 2}`.
//!
//! Hom-sets are always listed in lexicographic order of the value array.
//! That order fixes the canonical basis of every linearized hom-space.

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::partitions::factorial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("value {value} out of range for target of size {target}")]
    ValueOutOfRange { value: usize, target: usize },
    #[error("cannot compose: g has source {g_source}, f has target {f_target}")]
    NotComposable { g_source: usize, f_target: usize },
    #[error("map {0} is not surjective")]
    NotSurjective(FinMap),
    #[error("map {0} is not bijective")]
    NotBijective(FinMap),
    #[error("unknown hom class `{0}`")]
    UnknownFlavor(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HomClass {
    All,
    Surjection,
    Injection,
    Bijection,
}

impl HomClass {
    pub fn admits(self, f: &FinMap) -> bool {
        match self {
            HomClass::All => true,
            HomClass::Surjection => f.is_surjective(),
            HomClass::Injection => f.is_injective(),
            HomClass::Bijection => f.is_bijective(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HomClass::All => "fa",
            HomClass::Surjection => "fs",
            HomClass::Injection => "fi",
            HomClass::Bijection => "fb",
        }
    }
}

impl std::str::FromStr for HomClass {
    type Err = CategoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fa" | "all" => Ok(HomClass::All),
            "fs" | "surjection" => Ok(HomClass::Surjection),
            "fi" | "injection" => Ok(HomClass::Injection),
            "fb" | "bijection" => Ok(HomClass::Bijection),
            other => Err(CategoryError::UnknownFlavor(other.to_string())),
        }
    }
}

/// A function between the finite sets `{0..source}` and `{0..target}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinMap {
    target: usize,
    values: Vec<usize>,
}

impl FinMap {
    /// `values` are 0-based.
    pub fn new(target: usize, values: Vec<usize>) -> Result<Self, CategoryError> {
        if let Some(&value) = values.iter().find(|&&v| v >= target) {
            return Err(CategoryError::ValueOutOfRange { value, target });
        }
        Ok(Self { target, values })
    }

    /// `values` are 1-based, as printed.
    pub fn from_one_based(target: usize, values: &[usize]) -> Result<Self, CategoryError> {
        if let Some(&value) = values.iter().find(|&&v| v == 0 || v > target) {
            return Err(CategoryError::ValueOutOfRange { value, target });
        }
        Ok(Self {
            target,
            values: values.iter().map(|v| v - 1).collect(),
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            target: n,
            values: (0..n).collect(),
        }
    }

    pub fn source(&self) -> usize {
        self.values.len()
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }

    fn image_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.target];
        for &v in &self.values {
            counts[v] += 1;
        }
        counts
    }

    pub fn is_surjective(&self) -> bool {
        self.image_counts().iter().all(|&c| c > 0)
    }

    pub fn is_injective(&self) -> bool {
        self.image_counts().iter().all(|&c| c <= 1)
    }

    pub fn is_bijective(&self) -> bool {
        self.source() == self.target && self.is_injective()
    }

    /// Fibre sizes, indexed by target element.
    pub fn fibre_sizes(&self) -> Vec<usize> {
        self.image_counts()
    }

    /// `self ∘ f`, i.e. first `f`, then `self`.
    pub fn after(&self, f: &FinMap) -> Result<FinMap, CategoryError> {
        compose(self, f)
    }

    pub fn inverse(&self) -> Result<FinMap, CategoryError> {
        if !self.is_bijective() {
            return Err(CategoryError::NotBijective(self.clone()));
        }
        let mut inv = vec![0; self.values.len()];
        for (x, &y) in self.values.iter().enumerate() {
            inv[y] = x;
        }
        Ok(FinMap {
            target: self.target,
            values: inv,
        })
    }

    /// Position of this map in the lexicographic list of all maps
    /// `source -> target`.
    pub fn lex_rank(&self) -> usize {
        self.values.iter().fold(0, |acc, &v| acc * self.target + v)
    }
}

impl fmt::Display for FinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        write!(f, "]->{}", self.target)
    }
}

impl Serialize for FinMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let one_based: Vec<usize> = self.values.iter().map(|v| v + 1).collect();
        one_based.serialize(serializer)
    }
}

/// `g ∘ f`.
pub fn compose(g: &FinMap, f: &FinMap) -> Result<FinMap, CategoryError> {
    if g.source() != f.target() {
        return Err(CategoryError::NotComposable {
            g_source: g.source(),
            f_target: f.target(),
        });
    }
    Ok(FinMap {
        target: g.target,
        values: f.values.iter().map(|&x| g.values[x]).collect(),
    })
}

/// All maps `source -> target` of the given flavor, in lexicographic order.
pub fn enumerate_hom(flavor: HomClass, source: usize, target: usize) -> Vec<FinMap> {
    fn go(
        flavor: HomClass,
        source: usize,
        target: usize,
        values: &mut Vec<usize>,
        used: &mut Vec<usize>,
        missing: usize,
        out: &mut Vec<FinMap>,
    ) {
        let pos = values.len();
        if pos == source {
            if !matches!(flavor, HomClass::Surjection | HomClass::Bijection) || missing == 0 {
                out.push(FinMap {
                    target,
                    values: values.clone(),
                });
            }
            return;
        }
        let remaining = source - pos;
        for v in 0..target {
            let fresh = used[v] == 0;
            if matches!(flavor, HomClass::Injection | HomClass::Bijection) && !fresh {
                continue;
            }
            let still_missing = if fresh { missing - 1 } else { missing };
            if matches!(flavor, HomClass::Surjection | HomClass::Bijection) && still_missing > remaining - 1 {
                continue;
            }
            used[v] += 1;
            values.push(v);
            go(flavor, source, target, values, used, still_missing, out);
            values.pop();
            used[v] -= 1;
        }
    }
    if flavor == HomClass::Bijection && source != target {
        return Vec::new();
    }
    let mut out = Vec::new();
    go(
        flavor,
        source,
        target,
        &mut Vec::with_capacity(source),
        &mut vec![0; target],
        target,
        &mut out,
    );
    out
}

/// All `s` with `f ∘ s = id`, in lexicographic order.
pub fn sections(f: &FinMap) -> Result<Vec<FinMap>, CategoryError> {
    if !f.is_surjective() {
        return Err(CategoryError::NotSurjective(f.clone()));
    }
    let fibres: Vec<Vec<usize>> = (0..f.target())
        .map(|y| (0..f.source()).filter(|&x| f.apply(x) == y).collect())
        .collect();
    let mut out = vec![Vec::with_capacity(f.target())];
    for fibre in &fibres {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                fibre.iter().map(move |&x| {
                    let mut next = prefix.clone();
                    next.push(x);
                    next
                })
            })
            .collect();
    }
    Ok(out
        .into_iter()
        .map(|values| FinMap {
            target: f.source(),
            values,
        })
        .collect())
}

/// Stirling numbers of the second kind.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (0..=k.min(i)).rev() {
            row[j] = if j == 0 { 0 } else { j as u64 * row[j] + row[j - 1] };
        }
    }
    row[k]
}

/// Closed-form size of a hom-set `source -> target`.
pub fn hom_dimension(flavor: HomClass, source: usize, target: usize) -> u64 {
    match flavor {
        HomClass::All => (target as u64).pow(source as u32),
        HomClass::Surjection => factorial(target) * stirling2(source, target),
        HomClass::Injection => {
            if source > target {
                0
            } else {
                factorial(target) / factorial(target - source)
            }
        }
        HomClass::Bijection => {
            if source == target {
                factorial(source)
            } else {
                0
            }
        }
    }
}

/// The canonical basis of a linearized hom-space together with a reverse
/// index.
#[derive(Debug, Clone)]
pub struct HomBasis {
    flavor: HomClass,
    source: usize,
    target: usize,
    maps: Vec<FinMap>,
    index: HashMap<Vec<usize>, usize>,
}

impl HomBasis {
    pub fn new(flavor: HomClass, source: usize, target: usize) -> Self {
        let maps = enumerate_hom(flavor, source, target);
        let index = maps.iter().enumerate().map(|(i, f)| (f.values.clone(), i)).collect();
        Self {
            flavor,
            source,
            target,
            maps,
            index,
        }
    }

    pub fn flavor(&self) -> HomClass {
        self.flavor
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn maps(&self) -> &[FinMap] {
        &self.maps
    }

    pub fn get(&self, i: usize) -> &FinMap {
        &self.maps[i]
    }

    pub fn index_of(&self, f: &FinMap) -> Option<usize> {
        if f.source() != self.source || f.target() != self.target {
            return None;
        }
        self.index.get(&f.values).copied()
    }

    pub fn index_of_values(&self, values: &[usize]) -> Option<usize> {
        self.index.get(values).copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// All `target^source` maps by counting in base `target`.
    fn brute_force(flavor: HomClass, source: usize, target: usize) -> Vec<FinMap> {
        let total = if source == 0 { 1 } else { target.pow(source as u32) };
        let mut out = Vec::new();
        for mut code in 0..total {
            let mut values = vec![0; source];
            for slot in values.iter_mut().rev() {
                *slot = code % target.max(1);
                code /= target.max(1);
            }
            if source > 0 && target == 0 {
                continue;
            }
            let f = FinMap::new(target, values).unwrap();
            if flavor.admits(&f) {
                out.push(f);
            }
        }
        out
    }

    fn one(target: usize, v: &[usize]) -> FinMap {
        FinMap::from_one_based(target, v).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_hom(HomClass::Surjection, 3, 2).len(), 6);
        assert_eq!(brute_force(HomClass::Surjection, 3, 2).len(), 6);
        assert_eq!(enumerate_hom(HomClass::Injection, 2, 3).len(), 6);
        assert!(enumerate_hom(HomClass::Surjection, 2, 0).is_empty());
        assert_eq!(enumerate_hom(HomClass::All, 0, 0), vec![FinMap::identity(0)]);
        assert_eq!(enumerate_hom(HomClass::All, 0, 3).len(), 1);
        assert!(enumerate_hom(HomClass::All, 2, 0).is_empty());
        assert_eq!(enumerate_hom(HomClass::Surjection, 0, 0), vec![FinMap::identity(0)]);
        assert_eq!(enumerate_hom(HomClass::Injection, 0, 0), vec![FinMap::identity(0)]);
        assert!(enumerate_hom(HomClass::Injection, 3, 2).is_empty());
    }

    #[test]
    fn enumeration_matches_brute_force_in_lex_order() {
        for flavor in [
            HomClass::All,
            HomClass::Surjection,
            HomClass::Injection,
            HomClass::Bijection,
        ] {
            for s in 0..=5 {
                for t in 0..=5 {
                    assert_eq!(
                        enumerate_hom(flavor, s, t),
                        brute_force(flavor, s, t),
                        "{flavor:?} {s}->{t}"
                    );
                }
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(hom_dimension(HomClass::Surjection, 3, 2), 6);
        assert_eq!(hom_dimension(HomClass::Injection, 2, 3), 6);
        assert_eq!(hom_dimension(HomClass::Surjection, 6, 3), 540);
        assert_eq!(stirling2(6, 3), 90);
        assert_eq!(hom_dimension(HomClass::All, 0, 0), 1);
        assert_eq!(hom_dimension(HomClass::Surjection, 0, 0), 1);
    }

    #[test]
    fn dimensions_match_enumeration() {
        for flavor in [
            HomClass::All,
            HomClass::Surjection,
            HomClass::Injection,
            HomClass::Bijection,
        ] {
            for s in 0..=6 {
                for t in 0..=6 {
                    assert_eq!(enumerate_hom(flavor, s, t).len() as u64, hom_dimension(flavor, s, t));
                }
            }
        }
    }

    #[test]
    fn composition_examples() {
        let f = one(2, &[1, 2, 1]);
        assert_eq!(compose(&FinMap::identity(2), &f).unwrap(), f);
        let to_one = one(1, &[1, 1]);
        assert_eq!(compose(&to_one, &f).unwrap(), one(1, &[1, 1, 1]));
        let inj = one(2, &[2]);
        assert_eq!(compose(&to_one, &inj).unwrap(), FinMap::identity(1));
        assert!(compose(&f, &to_one).is_err());
    }

    #[test]
    fn composition_is_associative_and_closed() {
        let fs32 = enumerate_hom(HomClass::Surjection, 3, 2);
        let fs43 = enumerate_hom(HomClass::Surjection, 4, 3);
        let fs21 = enumerate_hom(HomClass::Surjection, 2, 1);
        for h in &fs43 {
            for g in &fs32 {
                let gh = compose(g, h).unwrap();
                assert!(gh.is_surjective());
                for f in &fs21 {
                    assert_eq!(compose(f, &gh).unwrap(), compose(&compose(f, g).unwrap(), h).unwrap());
                }
            }
        }
        let fi23 = enumerate_hom(HomClass::Injection, 2, 3);
        let fi34 = enumerate_hom(HomClass::Injection, 3, 4);
        for f in &fi23 {
            for g in &fi34 {
                assert!(compose(g, f).unwrap().is_injective());
            }
        }
    }

    #[test]
    fn section_examples() {
        let s = sections(&one(1, &[1, 1])).unwrap();
        assert_eq!(s, vec![one(2, &[1]), one(2, &[2])]);

        let alpha = one(3, &[2, 3, 1]);
        assert_eq!(sections(&alpha).unwrap(), vec![alpha.inverse().unwrap()]);

        // Fibre type (2,1): brute force over the 9 maps 2 -> 3.
        let f = one(2, &[1, 2, 1]);
        let brute: Vec<FinMap> = brute_force(HomClass::All, 2, 3)
            .into_iter()
            .filter(|s| compose(&f, s).unwrap() == FinMap::identity(2))
            .collect();
        assert_eq!(brute.len(), 2);
        assert_eq!(sections(&f).unwrap(), brute);

        assert!(sections(&one(2, &[1, 1])).is_err());
    }

    #[test]
    fn sections_are_injective_right_inverses() {
        for b in 0..=5 {
            for a in 0..=b {
                for f in enumerate_hom(HomClass::Surjection, b, a) {
                    let secs = sections(&f).unwrap();
                    let expected: usize = f.fibre_sizes().iter().product();
                    assert_eq!(secs.len(), expected);
                    for s in secs {
                        assert!(s.is_injective());
                        assert_eq!(compose(&f, &s).unwrap(), FinMap::identity(a));
                    }
                }
            }
        }
    }

    #[test]
    fn basis_index_round_trips() {
        let basis = HomBasis::new(HomClass::Surjection, 4, 2);
        for (i, f) in basis.maps().iter().enumerate() {
            assert_eq!(basis.index_of(f), Some(i));
        }
        assert_eq!(basis.index_of(&one(2, &[1, 1, 1, 1])), None);
    }

    #[test]
    fn parses_flavors() {
        assert_eq!("fs".parse::<HomClass>().unwrap(), HomClass::Surjection);
        assert_eq!("FI".parse::<HomClass>().unwrap(), HomClass::Injection);
        assert!("xx".parse::<HomClass>().is_err());
    }

    #[test]
    fn displays_one_based() {
        assert_eq!(one(2, &[1, 2, 1]).to_string(), "[1,2,1]->2");
        assert_eq!(serde_json::to_string(&one(2, &[1, 2, 1])).unwrap(), "[1,2,1]");
    }
}
