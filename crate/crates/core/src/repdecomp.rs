//! Character theory of the symmetric groups over the rationals.
//!
//! Character tables come from the Murnaghan–Nakayama rule on beta-sets and
//! are memoized per degree. Representations are given by the matrices of the
//! adjacent transpositions `s_i = (i, i+1)`; one representative per cycle type
//! is built as a fixed word in these generators.
//!
//! Grothendieck-group classes are integer formal sums of partitions
//! ([`SchurClass`]) or of ordered pairs of partitions ([`BiSchurClass`]). In a
//! pair `(λ, μ)`, `λ` is the covariant (target, left) factor and `μ` the
//! contravariant (source, right) factor.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::partitions::{cycle_types_of, factorial, partitions_of, CycleType, Partition};
use crate::ratlinalg::{rat, LinalgError, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("weight mismatch: partition {lambda} has weight {left}, cycle type {mu} has weight {right}")]
    WeightMismatch {
        lambda: Partition,
        mu: Partition,
        left: usize,
        right: usize,
    },
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("internal consistency: multiplicity of {irrep} is {value}, not a nonnegative integer")]
    BadMultiplicity { irrep: String, value: String },
    #[error("internal consistency: decomposition accounts for dimension {accounted}, space has dimension {dim}")]
    DimensionBookkeeping { accounted: u64, dim: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

// ---------------------------------------------------------------------------
// Permutations and class representatives

/// Cycle type of a permutation given by its images.
pub fn cycle_type_of(images: &[usize]) -> CycleType {
    let mut seen = vec![false; images.len()];
    let mut lengths = Vec::new();
    for start in 0..images.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = images[x];
            len += 1;
        }
        lengths.push(len);
    }
    CycleType::new(Partition::from_parts_unsorted(lengths))
}

/// Adjacent-transposition word for the class representative of `mu`: cycles
/// on consecutive blocks, `(i i+1 .. i+k-1) = s_i s_{i+1} .. s_{i+k-2}`.
pub fn representative_word(mu: &CycleType) -> Vec<usize> {
    let mut word = Vec::new();
    let mut start = 0;
    for &k in mu.partition().parts() {
        word.extend(start..start + k - 1);
        start += k;
    }
    word
}

/// The permutation `s_{w_0} ∘ s_{w_1} ∘ ...` on `n` points.
pub fn word_to_permutation(n: usize, word: &[usize]) -> Vec<usize> {
    let mut images: Vec<usize> = (0..n).collect();
    for &g in word.iter().rev() {
        // images := s_g ∘ images
        for x in images.iter_mut() {
            if *x == g {
                *x = g + 1;
            } else if *x == g + 1 {
                *x = g;
            }
        }
    }
    images
}

pub fn representative(mu: &CycleType) -> Vec<usize> {
    word_to_permutation(mu.degree(), &representative_word(mu))
}

// ---------------------------------------------------------------------------
// Character tables

/// `χ_λ(μ)` by Murnaghan–Nakayama: strip a rim hook of length `μ_1` in every
/// possible way, i.e. move a bead of the beta-set down by `μ_1` onto an empty
/// position, with sign `(-1)^{beads jumped}`.
fn mn_beta(beads: &mut Vec<usize>, cycles: &[usize]) -> i64 {
    let Some((&r, rest)) = cycles.split_first() else {
        return 1;
    };
    let mut total = 0;
    for i in 0..beads.len() {
        let x = beads[i];
        if x < r || beads.contains(&(x - r)) {
            continue;
        }
        let jumped = beads.iter().filter(|&&y| y > x - r && y < x).count();
        let sign = if jumped % 2 == 0 { 1 } else { -1 };
        beads[i] = x - r;
        total += sign * mn_beta(beads, rest);
        beads[i] = x;
    }
    total
}

#[derive(Debug, Clone)]
pub struct CharacterTable {
    degree: usize,
    irreps: Vec<Partition>,
    classes: Vec<CycleType>,
    /// `values[i][j] = χ_{irreps[i]}(classes[j])`
    values: Vec<Vec<i64>>,
    irrep_index: HashMap<Partition, usize>,
    class_index: HashMap<CycleType, usize>,
}

fn table_cache() -> &'static Mutex<HashMap<usize, Arc<CharacterTable>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<CharacterTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CharacterTable {
    /// The memoized table for degree `n`.
    pub fn of(n: usize) -> Arc<CharacterTable> {
        if let Some(t) = table_cache().lock().expect("character table cache poisoned").get(&n) {
            return Arc::clone(t);
        }
        let table = Arc::new(Self::compute(n));
        table_cache()
            .lock()
            .expect("character table cache poisoned")
            .entry(n)
            .or_insert(table)
            .clone()
    }

    fn compute(n: usize) -> Self {
        let irreps = partitions_of(n);
        let classes = cycle_types_of(n);
        let values = irreps
            .iter()
            .map(|lambda| {
                classes
                    .iter()
                    .map(|mu| mn_beta(&mut lambda.beta_set(), mu.partition().parts()))
                    .collect()
            })
            .collect();
        let irrep_index = irreps.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let class_index = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        Self {
            degree: n,
            irreps,
            classes,
            values,
            irrep_index,
            class_index,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn irreps(&self) -> &[Partition] {
        &self.irreps
    }

    pub fn classes(&self) -> &[CycleType] {
        &self.classes
    }

    pub fn value(&self, lambda: &Partition, mu: &CycleType) -> Option<i64> {
        let i = *self.irrep_index.get(lambda)?;
        let j = *self.class_index.get(mu)?;
        Some(self.values[i][j])
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.values[i]
    }

    pub fn class_position(&self, mu: &CycleType) -> Option<usize> {
        self.class_index.get(mu).copied()
    }

    pub fn irrep_position(&self, lambda: &Partition) -> Option<usize> {
        self.irrep_index.get(lambda).copied()
    }

    pub fn character(&self, lambda: &Partition) -> Option<ClassFunction> {
        let i = self.irrep_position(lambda)?;
        Some(ClassFunction {
            degree: self.degree,
            values: self.values[i].iter().map(|&v| rat(v)).collect(),
        })
    }

    /// First and second orthogonality relations, checked exactly.
    pub fn satisfies_orthogonality(&self) -> bool {
        let order = factorial(self.degree) as i128;
        let sizes: Vec<i128> = self.classes.iter().map(|c| c.class_size() as i128).collect();
        let k = self.classes.len();
        let rows_ok = (0..k).all(|i| {
            (0..k).all(|j| {
                let s: i128 = (0..k)
                    .map(|c| sizes[c] * self.values[i][c] as i128 * self.values[j][c] as i128)
                    .sum();
                s == if i == j { order } else { 0 }
            })
        });
        let cols_ok = (0..k).all(|c| {
            (0..k).all(|d| {
                let s: i128 = (0..k)
                    .map(|i| self.values[i][c] as i128 * self.values[i][d] as i128)
                    .sum();
                let z = self.classes[c].centralizer_order() as i128;
                s == if c == d { z } else { 0 }
            })
        });
        rows_ok && cols_ok
    }
}

/// `χ_λ(μ)`.
pub fn mn_character(lambda: &Partition, mu: &CycleType) -> Result<i64, RepError> {
    if lambda.weight() != mu.degree() {
        return Err(RepError::WeightMismatch {
            lambda: lambda.clone(),
            mu: mu.partition().clone(),
            left: lambda.weight(),
            right: mu.degree(),
        });
    }
    Ok(mn_beta(&mut lambda.beta_set(), mu.partition().parts()))
}

// ---------------------------------------------------------------------------
// Class functions

/// Values on the cycle types of `S_degree`, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    degree: usize,
    values: Vec<Rational>,
}

impl ClassFunction {
    pub fn new(degree: usize, values: Vec<Rational>) -> Result<Self, RepError> {
        let expected = partitions_of(degree).len();
        if values.len() != expected {
            return Err(RepError::InvalidRepresentation(format!(
                "class function of degree {degree} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Self { degree, values })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `<χ, ψ> = (1/n!) Σ_μ |C_μ| χ(μ) ψ(μ)`.
    pub fn inner(&self, other: &ClassFunction) -> Rational {
        let classes = cycle_types_of(self.degree);
        let total = classes
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .fold(Rational::zero(), |acc, (c, (x, y))| {
                acc + rat(c.class_size() as i64) * x * y
            });
        total / rat(factorial(self.degree) as i64)
    }
}

/// Values on pairs `(μ ⊢ left_degree, ν ⊢ right_degree)` of cycle types,
/// row-major in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiClassFunction {
    left_degree: usize,
    right_degree: usize,
    values: Vec<Rational>,
}

impl BiClassFunction {
    pub fn new(left_degree: usize, right_degree: usize, values: Vec<Rational>) -> Result<Self, RepError> {
        let expected = partitions_of(left_degree).len() * partitions_of(right_degree).len();
        if values.len() != expected {
            return Err(RepError::InvalidRepresentation(format!(
                "bi-class function of degrees ({left_degree},{right_degree}) needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Self {
            left_degree,
            right_degree,
            values,
        })
    }

    pub fn zero(left_degree: usize, right_degree: usize) -> Self {
        let n = partitions_of(left_degree).len() * partitions_of(right_degree).len();
        Self {
            left_degree,
            right_degree,
            values: vec![Rational::zero(); n],
        }
    }

    /// Evaluates `f(μ, ν)` on every pair of cycle types.
    pub fn from_fn(
        left_degree: usize,
        right_degree: usize,
        mut f: impl FnMut(&CycleType, &CycleType) -> Rational,
    ) -> Self {
        let left = cycle_types_of(left_degree);
        let right = cycle_types_of(right_degree);
        let values = left
            .iter()
            .flat_map(|mu| right.iter().map(move |nu| (mu, nu)))
            .map(|(mu, nu)| f(mu, nu))
            .collect();
        Self {
            left_degree,
            right_degree,
            values,
        }
    }

    pub fn left_degree(&self) -> usize {
        self.left_degree
    }

    pub fn right_degree(&self) -> usize {
        self.right_degree
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Value at the identity: the dimension of the underlying space.
    pub fn dimension(&self) -> Rational {
        // The identity class (1^n) is last in canonical order.
        self.values.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn try_sub(&self, other: &BiClassFunction) -> Result<BiClassFunction, RepError> {
        if (self.left_degree, self.right_degree) != (other.left_degree, other.right_degree) {
            return Err(RepError::InvalidRepresentation(format!(
                "cannot subtract bi-class functions of degrees ({},{}) and ({},{})",
                self.left_degree, self.right_degree, other.left_degree, other.right_degree
            )));
        }
        Ok(BiClassFunction {
            left_degree: self.left_degree,
            right_degree: self.right_degree,
            values: self.values.iter().zip(&other.values).map(|(x, y)| x - y).collect(),
        })
    }
}

fn check_multiplicity(irrep: impl fmt::Display, m: &Rational, allow_negative: bool) -> Result<i64, RepError> {
    let bad = || RepError::BadMultiplicity {
        irrep: irrep.to_string(),
        value: m.to_string(),
    };
    if !m.is_integer() || (!allow_negative && m.is_negative()) {
        return Err(bad());
    }
    m.to_integer().to_i64().ok_or_else(bad)
}

/// Multiplicities `<χ, χ_λ>` of a genuine character.
pub fn decompose_character(chi: &ClassFunction) -> Result<SchurClass, RepError> {
    decompose_character_inner(chi, false)
}

/// As [`decompose_character`] but for virtual characters: multiplicities must
/// be integers of any sign.
pub fn decompose_virtual_character(chi: &ClassFunction) -> Result<SchurClass, RepError> {
    decompose_character_inner(chi, true)
}

fn decompose_character_inner(chi: &ClassFunction, allow_negative: bool) -> Result<SchurClass, RepError> {
    let table = CharacterTable::of(chi.degree);
    let mut out = SchurClass::zero();
    for lambda in table.irreps() {
        let irr = table.character(lambda).expect("irrep of this degree");
        let m = check_multiplicity(lambda, &chi.inner(&irr), allow_negative)?;
        out.add_term(lambda.clone(), m);
    }
    Ok(out)
}

/// Multiplicities of `S_λ ⊠ S_μ` in a genuine bi-character.
pub fn decompose_bicharacter(chi: &BiClassFunction) -> Result<BiSchurClass, RepError> {
    decompose_bicharacter_inner(chi, false)
}

pub fn decompose_virtual_bicharacter(chi: &BiClassFunction) -> Result<BiSchurClass, RepError> {
    decompose_bicharacter_inner(chi, true)
}

fn decompose_bicharacter_inner(chi: &BiClassFunction, allow_negative: bool) -> Result<BiSchurClass, RepError> {
    let left = CharacterTable::of(chi.left_degree);
    let right = CharacterTable::of(chi.right_degree);
    let kl = left.classes().len();
    let kr = right.classes().len();
    let order = rat((factorial(chi.left_degree) * factorial(chi.right_degree)) as i64);
    // weighted[μ][ν] = |C_μ| |C_ν| χ(μ, ν)
    let weighted: Vec<Rational> = (0..kl * kr)
        .map(|idx| {
            let (i, j) = (idx / kr, idx % kr);
            rat((left.classes()[i].class_size() * right.classes()[j].class_size()) as i64) * &chi.values[idx]
        })
        .collect();
    let mut out = BiSchurClass::zero();
    for (li, lambda) in left.irreps().iter().enumerate() {
        // partial[ν] = Σ_μ weighted[μ][ν] χ_λ(μ)
        let partial: Vec<Rational> = (0..kr)
            .map(|j| {
                (0..kl).fold(Rational::zero(), |acc, i| {
                    acc + &weighted[i * kr + j] * rat(left.row(li)[i])
                })
            })
            .collect();
        for (ri, kappa) in right.irreps().iter().enumerate() {
            let total = (0..kr).fold(Rational::zero(), |acc, j| acc + &partial[j] * rat(right.row(ri)[j]));
            let m = total / &order;
            let name = format!("({lambda},{kappa})");
            let m = check_multiplicity(name, &m, allow_negative)?;
            out.add_term((lambda.clone(), kappa.clone()), m);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Representation spaces

fn check_coxeter(generators: &[RatMatrix], dim: usize, label: &str) -> Result<(), RepError> {
    let id = RatMatrix::identity(dim);
    for (i, s) in generators.iter().enumerate() {
        if s.rows() != dim || s.cols() != dim {
            return Err(RepError::InvalidRepresentation(format!(
                "{label} generator {i} is {}x{}, expected {dim}x{dim}",
                s.rows(),
                s.cols()
            )));
        }
    }
    for (i, s) in generators.iter().enumerate() {
        if (s * s) != id {
            return Err(RepError::InvalidRepresentation(format!("{label}: s_{i}^2 != 1")));
        }
        if let Some(t) = generators.get(i + 1) {
            let st = s * t;
            if (&(&st * &st) * &st) != id {
                return Err(RepError::InvalidRepresentation(format!(
                    "{label}: (s_{i} s_{})^3 != 1",
                    i + 1
                )));
            }
        }
        for (j, t) in generators.iter().enumerate().skip(i + 2) {
            if (s * t) != (t * s) {
                return Err(RepError::InvalidRepresentation(format!(
                    "{label}: s_{i} s_{j} != s_{j} s_{i}"
                )));
            }
        }
    }
    Ok(())
}

fn word_matrix(generators: &[RatMatrix], dim: usize, word: &[usize]) -> RatMatrix {
    word.iter()
        .fold(RatMatrix::identity(dim), |acc, &g| &acc * &generators[g])
}

/// A representation of `S_degree` given by the matrices of `s_0 .. s_{n-2}`.
#[derive(Debug, Clone)]
pub struct RepSpace {
    degree: usize,
    dim: usize,
    generators: Vec<RatMatrix>,
}

impl RepSpace {
    /// Validates shapes and the Coxeter relations of the generators.
    pub fn new(degree: usize, dim: usize, generators: Vec<RatMatrix>) -> Result<Self, RepError> {
        if generators.len() != degree.saturating_sub(1) {
            return Err(RepError::InvalidRepresentation(format!(
                "S_{degree} needs {} generators, got {}",
                degree.saturating_sub(1),
                generators.len()
            )));
        }
        check_coxeter(&generators, dim, "left")?;
        Ok(Self {
            degree,
            dim,
            generators,
        })
    }

    /// Permutation representation: `images[g][i]` is where generator `g` sends
    /// basis vector `i`.
    pub fn from_permutations(degree: usize, images: &[Vec<usize>]) -> Result<Self, RepError> {
        let dim = images.first().map_or(0, Vec::len);
        let gens = images.iter().map(|p| RatMatrix::permutation(p)).collect();
        if degree <= 1 && images.is_empty() {
            return Err(RepError::InvalidRepresentation(
                "dimension of a generator-free permutation representation is ambiguous; use RepSpace::new".into(),
            ));
        }
        Self::new(degree, dim, gens)
    }

    pub fn trivial(degree: usize) -> Self {
        Self {
            degree,
            dim: 1,
            generators: vec![RatMatrix::identity(1); degree.saturating_sub(1)],
        }
    }

    /// `S_n` permuting `n` points.
    pub fn natural(degree: usize) -> Self {
        let generators = (0..degree.saturating_sub(1))
            .map(|g| RatMatrix::permutation(&word_to_permutation(degree, &[g])))
            .collect();
        Self {
            degree,
            dim: degree,
            generators,
        }
    }

    /// Left regular representation on the group algebra, basis in
    /// lexicographic order of permutations.
    pub fn regular(degree: usize) -> Self {
        let perms = crate::finsetcat::HomBasis::new(crate::finsetcat::HomClass::Bijection, degree, degree);
        let generators = (0..degree.saturating_sub(1))
            .map(|g| {
                let s = word_to_permutation(degree, &[g]);
                let images: Vec<usize> = perms
                    .maps()
                    .iter()
                    .map(|p| {
                        let moved: Vec<usize> = p.values().iter().map(|&x| s[x]).collect();
                        perms.index_of_values(&moved).expect("product of permutations")
                    })
                    .collect();
                RatMatrix::permutation(&images)
            })
            .collect();
        Self {
            degree,
            dim: perms.len(),
            generators,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[RatMatrix] {
        &self.generators
    }

    pub fn action(&self, word: &[usize]) -> RatMatrix {
        word_matrix(&self.generators, self.dim, word)
    }
}

/// A space with commuting actions of `S_left_degree` and `S_right_degree`.
#[derive(Debug, Clone)]
pub struct BiRepSpace {
    left_degree: usize,
    right_degree: usize,
    dim: usize,
    left: Vec<RatMatrix>,
    right: Vec<RatMatrix>,
}

impl BiRepSpace {
    pub fn new(
        left_degree: usize,
        right_degree: usize,
        dim: usize,
        left: Vec<RatMatrix>,
        right: Vec<RatMatrix>,
    ) -> Result<Self, RepError> {
        if left.len() != left_degree.saturating_sub(1) || right.len() != right_degree.saturating_sub(1) {
            return Err(RepError::InvalidRepresentation(format!(
                "S_{left_degree} x S_{right_degree} needs {} + {} generators, got {} + {}",
                left_degree.saturating_sub(1),
                right_degree.saturating_sub(1),
                left.len(),
                right.len()
            )));
        }
        check_coxeter(&left, dim, "left")?;
        check_coxeter(&right, dim, "right")?;
        for (i, l) in left.iter().enumerate() {
            for (j, r) in right.iter().enumerate() {
                if (l * r) != (r * l) {
                    return Err(RepError::InvalidRepresentation(format!(
                        "left generator {i} does not commute with right generator {j}"
                    )));
                }
            }
        }
        Ok(Self {
            left_degree,
            right_degree,
            dim,
            left,
            right,
        })
    }

    pub fn zero(left_degree: usize, right_degree: usize) -> Self {
        Self {
            left_degree,
            right_degree,
            dim: 0,
            left: vec![RatMatrix::zeros(0, 0); left_degree.saturating_sub(1)],
            right: vec![RatMatrix::zeros(0, 0); right_degree.saturating_sub(1)],
        }
    }

    pub fn left_degree(&self) -> usize {
        self.left_degree
    }

    pub fn right_degree(&self) -> usize {
        self.right_degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn left_generators(&self) -> &[RatMatrix] {
        &self.left
    }

    pub fn right_generators(&self) -> &[RatMatrix] {
        &self.right
    }
}

/// Trace of one representative per cycle type.
pub fn rep_character(v: &RepSpace) -> ClassFunction {
    let values = cycle_types_of(v.degree)
        .iter()
        .map(|mu| v.action(&representative_word(mu)).trace())
        .collect();
    ClassFunction {
        degree: v.degree,
        values,
    }
}

pub fn bicharacter(v: &BiRepSpace) -> BiClassFunction {
    let left: Vec<RatMatrix> = cycle_types_of(v.left_degree)
        .iter()
        .map(|mu| word_matrix(&v.left, v.dim, &representative_word(mu)))
        .collect();
    let right: Vec<RatMatrix> = cycle_types_of(v.right_degree)
        .iter()
        .map(|nu| word_matrix(&v.right, v.dim, &representative_word(nu)))
        .collect();
    let values = left
        .iter()
        .flat_map(|l| right.iter().map(move |r| (l * r).trace()))
        .collect();
    BiClassFunction {
        left_degree: v.left_degree,
        right_degree: v.right_degree,
        values,
    }
}

pub fn decompose(v: &RepSpace) -> Result<SchurClass, RepError> {
    let class = decompose_character(&rep_character(v))?;
    let accounted: u64 = class.iter().map(|(p, m)| p.dimension() * m as u64).sum();
    if accounted != v.dim as u64 {
        return Err(RepError::DimensionBookkeeping { accounted, dim: v.dim });
    }
    Ok(class)
}

pub fn bidecompose(v: &BiRepSpace) -> Result<BiSchurClass, RepError> {
    let class = decompose_bicharacter(&bicharacter(v))?;
    let accounted = class.dimension() as u64;
    if accounted != v.dim as u64 {
        return Err(RepError::DimensionBookkeeping { accounted, dim: v.dim });
    }
    Ok(class)
}

// ---------------------------------------------------------------------------
// Formal sums

/// A finite integer combination of keys, kept in canonical key order with
/// zero coefficients pruned.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalSum<K: Ord> {
    terms: BTreeMap<K, i64>,
}

pub type SchurClass = FormalSum<Partition>;
pub type BiSchurClass = FormalSum<(Partition, Partition)>;

impl<K: Ord> Default for FormalSum<K> {
    fn default() -> Self {
        Self { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> FormalSum<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(key: K) -> Self {
        let mut s = Self::zero();
        s.add_term(key, 1);
        s
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K, i64)>) -> Self {
        let mut s = Self::zero();
        for (k, c) in terms {
            s.add_term(k, c);
        }
        s
    }

    pub fn add_term(&mut self, key: K, coefficient: i64) {
        if coefficient == 0 {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert(0);
        *entry += coefficient;
        if *entry == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn coefficient(&self, key: &K) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, i64)> {
        self.terms.iter().map(|(k, &c)| (k, c))
    }

    pub fn scaled(&self, factor: i64) -> Self {
        Self::from_terms(self.iter().map(|(k, c)| (k.clone(), c * factor)))
    }

    pub fn filtered(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, &c)| (k.clone(), c))
                .collect(),
        }
    }

    /// First key (in canonical order) where the two sums differ.
    pub fn first_difference<'a>(&'a self, other: &'a Self) -> Option<(&'a K, i64, i64)> {
        let mut keys: Vec<&K> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| (k, self.coefficient(k), other.coefficient(k)))
            .find(|(_, a, b)| a != b)
    }
}

impl SchurClass {
    pub fn dimension(&self) -> i64 {
        self.iter().map(|(p, c)| c * p.dimension() as i64).sum()
    }

    /// Drops all terms of weight greater than `max_weight`.
    pub fn truncated(&self, max_weight: usize) -> Self {
        self.filtered(|p| p.weight() <= max_weight)
    }
}

impl BiSchurClass {
    pub fn dimension(&self) -> i64 {
        self.iter()
            .map(|((l, r), c)| c * (l.dimension() * r.dimension()) as i64)
            .sum()
    }

    /// `S_λ ⊠ S_μ` as a one-term class.
    pub fn pair(left: Partition, right: Partition) -> Self {
        Self::single((left, right))
    }

    /// The part with left weight `a` and right weight `b`.
    pub fn cell(&self, b: usize, a: usize) -> Self {
        self.filtered(|(l, r)| l.weight() == a && r.weight() == b)
    }
}

impl<K: Ord + Clone> AddAssign<&FormalSum<K>> for FormalSum<K> {
    fn add_assign(&mut self, rhs: &FormalSum<K>) {
        for (k, c) in rhs.iter() {
            self.add_term(k.clone(), c);
        }
    }
}

impl<K: Ord + Clone> SubAssign<&FormalSum<K>> for FormalSum<K> {
    fn sub_assign(&mut self, rhs: &FormalSum<K>) {
        for (k, c) in rhs.iter() {
            self.add_term(k.clone(), -c);
        }
    }
}

impl<K: Ord + Clone> Add for &FormalSum<K> {
    type Output = FormalSum<K>;

    fn add(self, rhs: &FormalSum<K>) -> FormalSum<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Sub for &FormalSum<K> {
    type Output = FormalSum<K>;

    fn sub(self, rhs: &FormalSum<K>) -> FormalSum<K> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<K: Ord + Clone> Add for FormalSum<K> {
    type Output = FormalSum<K>;

    fn add(mut self, rhs: FormalSum<K>) -> FormalSum<K> {
        self += &rhs;
        self
    }
}

impl<K: Ord + Clone> Sub for FormalSum<K> {
    type Output = FormalSum<K>;

    fn sub(mut self, rhs: FormalSum<K>) -> FormalSum<K> {
        self -= &rhs;
        self
    }
}

impl<K: Ord + Clone> Neg for FormalSum<K> {
    type Output = FormalSum<K>;

    fn neg(self) -> FormalSum<K> {
        self.scaled(-1)
    }
}

fn write_terms<K: Ord>(f: &mut fmt::Formatter<'_>, sum: &FormalSum<K>, key: impl Fn(&K) -> String) -> fmt::Result {
    if sum.terms.is_empty() {
        return write!(f, "0");
    }
    for (i, (k, &c)) in sum.terms.iter().enumerate() {
        let sign = if c < 0 {
            "-"
        } else if i > 0 {
            "+"
        } else {
            ""
        };
        if i > 0 {
            write!(f, " {sign} ")?;
        } else {
            write!(f, "{sign}")?;
        }
        if c.abs() != 1 {
            write!(f, "{}*", c.abs())?;
        }
        write!(f, "{}", key(k))?;
    }
    Ok(())
}

impl fmt::Display for SchurClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self, |p| format!("s{p}"))
    }
}

impl fmt::Display for BiSchurClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self, |(l, r)| format!("({l},{r})"))
    }
}

#[derive(Serialize)]
struct SchurTerm<'a> {
    partition: &'a Partition,
    coefficient: i64,
}

#[derive(Serialize)]
struct BiSchurTerm<'a> {
    left: &'a Partition,
    right: &'a Partition,
    coefficient: i64,
}

impl Serialize for SchurClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for (partition, coefficient) in self.iter() {
            seq.serialize_element(&SchurTerm { partition, coefficient })?;
        }
        seq.end()
    }
}

impl Serialize for BiSchurClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.len()))?;
        for ((left, right), coefficient) in self.iter() {
            seq.serialize_element(&BiSchurTerm {
                left,
                right,
                coefficient,
            })?;
        }
        seq.end()
    }
}

// ---------------------------------------------------------------------------
// Products

/// All `ν ⊇ λ` with `ν/λ` a horizontal strip of `n` boxes.
pub fn pieri_h(lambda: &Partition, n: usize) -> SchurClass {
    fn go(lambda: &[usize], row: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        let base = lambda.get(row).copied().unwrap_or(0);
        if row > lambda.len() {
            if left == 0 {
                out.push(Partition::from_parts_unsorted(prefix.clone()));
            }
            return;
        }
        // ν_row ranges over [λ_row, λ_{row-1}] (unbounded for the first row).
        let cap = if row == 0 {
            base + left
        } else {
            lambda[row - 1].min(base + left)
        };
        for v in base..=cap {
            prefix.push(v);
            go(lambda, row + 1, left - (v - base), prefix, out);
            prefix.pop();
        }
    }
    let mut shapes = Vec::new();
    go(lambda.parts(), 0, n, &mut Vec::new(), &mut shapes);
    SchurClass::from_terms(shapes.into_iter().map(|p| (p, 1)))
}

/// All `ν ⊇ λ` with `ν/λ` a vertical strip of `t` boxes.
pub fn pieri_e(lambda: &Partition, t: usize) -> SchurClass {
    let conj = pieri_h(&lambda.conjugate(), t);
    SchurClass::from_terms(conj.iter().map(|(p, c)| (p.conjugate(), c)))
}

/// Sub-multisets of the parts of `nu` with total weight `p`, each paired
/// with its complement.
fn splits(nu: &Partition, p: usize) -> Vec<(Partition, Partition)> {
    let mult = nu.multiplicities();
    let mut out = Vec::new();
    fn go(mult: &[usize], k: usize, left: usize, take: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Vec<usize>)>) {
        if k == 0 {
            if left == 0 {
                let mut a = Vec::new();
                let mut b = Vec::new();
                for (size, (&m, &t)) in mult.iter().zip(take.iter()).enumerate().skip(1) {
                    a.extend(std::iter::repeat_n(size, t));
                    b.extend(std::iter::repeat_n(size, m - t));
                }
                out.push((a, b));
            }
            return;
        }
        for t in 0..=mult[k].min(left / k) {
            take[k] = t;
            go(mult, k - 1, left - t * k, take, out);
        }
        take[k] = 0;
    }
    let mut raw = Vec::new();
    if mult.len() > 1 {
        go(&mult, mult.len() - 1, p, &mut vec![0; mult.len()], &mut raw);
    } else if p == 0 {
        raw.push((Vec::new(), Vec::new()));
    }
    for (a, b) in raw {
        out.push((Partition::from_parts_unsorted(a), Partition::from_parts_unsorted(b)));
    }
    out
}

/// Character of `Ind_{S_p x S_q}^{S_{p+q}} (S_λ ⊠ S_μ)`:
/// `Ind χ(ν) = Σ_{α ∪ β = ν} z_ν / (z_α z_β) χ_λ(α) χ_μ(β)`.
pub fn induced_character(lambda: &Partition, mu: &Partition) -> ClassFunction {
    let (p, q) = (lambda.weight(), mu.weight());
    let n = p + q;
    let tp = CharacterTable::of(p);
    let tq = CharacterTable::of(q);
    let values = cycle_types_of(n)
        .iter()
        .map(|nu| {
            let z_nu = nu.centralizer_order();
            splits(nu.partition(), p)
                .into_iter()
                .fold(Rational::zero(), |acc, (alpha, beta)| {
                    let alpha = CycleType::new(alpha);
                    let beta = CycleType::new(beta);
                    let coeff = Rational::new(
                        (z_nu as i64).into(),
                        ((alpha.centralizer_order() * beta.centralizer_order()) as i64).into(),
                    );
                    let chi = tp.value(lambda, &alpha).expect("degree p") * tq.value(mu, &beta).expect("degree q");
                    acc + coeff * rat(chi)
                })
        })
        .collect();
    ClassFunction { degree: n, values }
}

fn product_cache() -> &'static Mutex<HashMap<(Partition, Partition), SchurClass>> {
    static CACHE: OnceLock<Mutex<HashMap<(Partition, Partition), SchurClass>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `s_λ · s_μ` from the induced character (Littlewood–Richardson
/// coefficients as character inner products).
pub fn induction_product(lambda: &Partition, mu: &Partition) -> SchurClass {
    let key = if lambda <= mu {
        (lambda.clone(), mu.clone())
    } else {
        (mu.clone(), lambda.clone())
    };
    if let Some(hit) = product_cache().lock().expect("product cache poisoned").get(&key) {
        return hit.clone();
    }
    let class =
        decompose_character(&induced_character(lambda, mu)).expect("an induced character is a genuine character");
    product_cache()
        .lock()
        .expect("product cache poisoned")
        .insert(key, class.clone());
    class
}

fn is_row(p: &Partition) -> bool {
    p.len() == 1
}

fn is_column(p: &Partition) -> bool {
    !p.is_empty() && p.parts().iter().all(|&x| x == 1)
}

/// Product of two irreducibles, using Pieri when one factor is a row or a
/// column and the induced-character oracle otherwise.
pub fn irreducible_product(lambda: &Partition, mu: &Partition) -> SchurClass {
    if lambda.is_empty() {
        return SchurClass::single(mu.clone());
    }
    if mu.is_empty() {
        return SchurClass::single(lambda.clone());
    }
    if is_row(mu) {
        return pieri_h(lambda, mu.weight());
    }
    if is_row(lambda) {
        return pieri_h(mu, lambda.weight());
    }
    if is_column(mu) {
        return pieri_e(lambda, mu.weight());
    }
    if is_column(lambda) {
        return pieri_e(mu, lambda.weight());
    }
    induction_product(lambda, mu)
}

/// The induction (Day convolution) product of classes.
pub fn convolution_class(x: &SchurClass, y: &SchurClass) -> SchurClass {
    let mut out = SchurClass::zero();
    for (lambda, a) in x.iter() {
        for (mu, b) in y.iter() {
            out += &irreducible_product(lambda, mu).scaled(a * b);
        }
    }
    out
}

/// Convolution in the right (contravariant) coordinate.
pub fn biconvolution_right(x: &BiSchurClass, y: &SchurClass) -> BiSchurClass {
    let mut out = BiSchurClass::zero();
    for ((left, right), a) in x.iter() {
        for (mu, b) in y.iter() {
            for (nu, c) in irreducible_product(right, mu).iter() {
                out.add_term((left.clone(), nu.clone()), a * b * c);
            }
        }
    }
    out
}

/// `Σ_{t=0}^{n} (-1)^t [triv_{n-t}] ⊙ [sgn_t]`.
pub fn derham_sum(n: usize) -> SchurClass {
    let mut total = SchurClass::zero();
    for t in 0..=n {
        let term = convolution_class(
            &SchurClass::single(Partition::row(n - t)),
            &SchurClass::single(Partition::column(t)),
        );
        total += &term.scaled(if t % 2 == 0 { 1 } else { -1 });
    }
    total
}

pub fn derham_check(n: usize) -> bool {
    derham_sum(n).is_zero()
}

/// `Σ_{n ≤ max} [triv_n]`.
pub fn triv_series(max_weight: usize) -> SchurClass {
    SchurClass::from_terms((0..=max_weight).map(|n| (Partition::row(n), 1)))
}

/// `Σ_{t ≤ max} (-1)^t [sgn_t]`.
pub fn alternating_sgn_series(max_weight: usize) -> SchurClass {
    SchurClass::from_terms((0..=max_weight).map(|t| (Partition::column(t), if t % 2 == 0 { 1 } else { -1 })))
}

/// `Σ_t (-1)^t ((x ⊙ triv) ⊙ sgn_t)`, truncated to weights `≤ max_weight`
/// (terms beyond that weight cannot contribute below it).
pub fn invert_triv(x: &SchurClass, max_weight: usize) -> SchurClass {
    let with_triv = convolution_class(x, &triv_series(max_weight)).truncated(max_weight);
    convolution_class(&with_triv, &alternating_sgn_series(max_weight)).truncated(max_weight)
}

/// Checks `x = Σ_t (-1)^t (x ⊙ triv) ⊙ sgn_t` in all weights `≤` the largest
/// weight occurring in `x`.
pub fn inversion_check(x: &SchurClass) -> bool {
    let max_weight = x.iter().map(|(p, _)| p.weight()).max().unwrap_or(0);
    &invert_triv(x, max_weight) == x
}

/// `1 / n!` as a rational, for tests and reports.
pub fn inverse_group_order(n: usize) -> Rational {
    Rational::new(One::one(), (factorial(n) as i64).into())
}

pub fn gcd_of_class(x: &SchurClass) -> i64 {
    x.iter().fold(0i64, |g, (_, c)| g.gcd(&c))
}
