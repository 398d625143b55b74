//! Exact linear algebra over arbitrary-precision rationals.
//!
//! Everything here is exact: there is no floating point anywhere in the
//! crate. Matrices are dense; elimination and subspaces work on sparse rows,
//! since the hom-space matrices that feed them are mostly zeros. Each row is
//! reduced against earlier pivot rows in input order, so results are
//! deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A dense `rows x cols` matrix, stored row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self { rows, cols, entries })
    }

    /// Builds a matrix from integer rows; all rows must have equal length.
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch(format!(
                "ragged rows: {} vs {cols}",
                bad.len()
            )));
        }
        let entries = rows.iter().flatten().map(|&x| rat(x)).collect();
        Ok(Self {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn from_columns(rows: usize, columns: &[Vec<Rational>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    /// The permutation matrix sending basis vector `e_i` to `e_{images[i]}`.
    pub fn permutation(images: &[usize]) -> Self {
        let n = images.len();
        let mut m = Self::zeros(n, n);
        for (i, &j) in images.iter().enumerate() {
            m.set(j, i, Rational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Rational>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn try_mul(&self, other: &RatMatrix) -> Result<RatMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    /// Determinant of a square matrix (1 for the empty matrix).
    pub fn determinant(&self) -> Result<Rational, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut m = self.row_vecs();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if p != col {
                m.swap(p, col);
                det = -det;
            }
            det *= &m[col][col];
            let inv = m[col][col].recip();
            let (top, bottom) = m.split_at_mut(col + 1);
            let pivot = &top[col];
            for row in bottom.iter_mut() {
                if row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] * &inv;
                for j in col..n {
                    let delta = &factor * &pivot[j];
                    row[j] -= delta;
                }
            }
        }
        Ok(det)
    }

    /// Rows `rows` and columns `cols`, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RatMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j).clone())
            .collect();
        RatMatrix {
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub fn rank(&self) -> usize {
        Echelon::of_dense_rows(self.row_vecs()).pivots.len()
    }

    pub fn kernel_basis(&self) -> RatMatrix {
        Subspace::kernel(self).basis_matrix()
    }

    pub fn image_basis(&self) -> RatMatrix {
        Subspace::column_space(self).basis_matrix()
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;

    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.try_mul(rhs).expect("matrix dimensions must agree")
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A sparse vector: `(index, value)` pairs with strictly increasing indices
/// and no stored zeros.
pub type SparseVec = Vec<(usize, Rational)>;

pub fn to_sparse(v: &[Rational]) -> SparseVec {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub fn to_dense(v: &[(usize, Rational)], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

fn sparse_get(v: &[(usize, Rational)], i: usize) -> Option<&Rational> {
    v.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &v[k].1)
}

/// `a - factor * b`.
fn sub_scaled(a: &[(usize, Rational)], factor: &Rational, b: &[(usize, Rational)]) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ai = a.get(i).map_or(usize::MAX, |e| e.0);
        let bj = b.get(j).map_or(usize::MAX, |e| e.0);
        if ai < bj {
            out.push(a[i].clone());
            i += 1;
        } else if bj < ai {
            out.push((bj, -(factor * &b[j].1)));
            j += 1;
        } else {
            let x = &a[i].1 - factor * &b[j].1;
            if !x.is_zero() {
                out.push((ai, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduced row echelon form of a list of sparse rows.
#[derive(Debug, Clone)]
struct Echelon {
    /// Nonzero rows of the RREF in pivot order; row `i` has a 1 in column
    /// `pivots[i]` and zeros in every other pivot column.
    rows: Vec<SparseVec>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn of_rows(rows: impl IntoIterator<Item = SparseVec>) -> Self {
        // Forward pass: each pivot row is keyed by its leading column and
        // scaled so that the leading entry is 1.
        let mut leading: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for mut row in rows {
            while let Some((col, x)) = row.first().cloned() {
                match leading.get(&col) {
                    Some(pivot) => row = sub_scaled(&row, &x, pivot),
                    None => {
                        if !x.is_one() {
                            let inv = x.recip();
                            for e in row.iter_mut() {
                                e.1 *= &inv;
                            }
                        }
                        leading.insert(col, row);
                        break;
                    }
                }
            }
        }
        // Back substitution, last pivot first: reduced rows only carry
        // non-pivot columns to the right of their pivot.
        let pivots: Vec<usize> = leading.keys().copied().collect();
        let mut reduced: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for &p in pivots.iter().rev() {
            let mut row = leading.remove(&p).expect("pivot row present");
            let hits: Vec<(usize, Rational)> = row[1..]
                .iter()
                .filter(|(c, _)| reduced.contains_key(c))
                .cloned()
                .collect();
            for (c, x) in hits {
                row = sub_scaled(&row, &x, &reduced[&c]);
            }
            reduced.insert(p, row);
        }
        Self {
            rows: reduced.into_values().collect(),
            pivots,
        }
    }

    fn of_dense_rows(rows: Vec<Vec<Rational>>) -> Self {
        Self::of_rows(rows.iter().map(|r| to_sparse(r)))
    }
}

/// A linear subspace of `Q^n` with a basis `v_0, ..., v_{d-1}` and
/// coordinate positions `p_0, ..., p_{d-1}` such that `v_j[p_k] = δ_jk`.
///
/// The coordinates of any `w` in the subspace are then just `w[p_k]`, which
/// makes membership tests and traces of coordinate-permuting actions cheap.
/// Basis vectors are stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
    positions: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Vec::new(),
            positions: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: (0..ambient).map(|i| vec![(i, Rational::one())]).collect(),
            positions: (0..ambient).collect(),
        }
    }

    /// Span of arbitrary vectors of length `ambient`.
    pub fn span(ambient: usize, vectors: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient}",
                bad.len()
            )));
        }
        Ok(Self::span_sparse(ambient, vectors.iter().map(|v| to_sparse(v))))
    }

    /// Span of sparse vectors; indices must be below `ambient`.
    pub fn span_sparse(ambient: usize, vectors: impl IntoIterator<Item = SparseVec>) -> Self {
        let ech = Echelon::of_rows(vectors);
        debug_assert!(ech.pivots.last().is_none_or(|&p| p < ambient));
        Self {
            ambient,
            basis: ech.rows,
            positions: ech.pivots,
        }
    }

    pub fn column_space(m: &RatMatrix) -> Self {
        Self::span(m.rows(), m.columns()).expect("columns have matching length")
    }

    /// Right null space `{x : M x = 0}`.
    pub fn kernel(m: &RatMatrix) -> Self {
        Self::kernel_of_rows(m.cols(), m.row_vecs())
    }

    /// Null space of the matrix whose rows are `rows` (each of length `ncols`).
    pub fn kernel_of_rows(ncols: usize, rows: Vec<Vec<Rational>>) -> Self {
        Self::kernel_of_sparse_rows(ncols, rows.iter().map(|r| to_sparse(r)))
    }

    pub fn kernel_of_sparse_rows(ncols: usize, rows: impl IntoIterator<Item = SparseVec>) -> Self {
        let ech = Echelon::of_rows(rows);
        let mut is_pivot = vec![false; ncols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..ncols).filter(|&c| !is_pivot[c]).collect();
        let mut slot = vec![usize::MAX; ncols];
        for (k, &f) in free.iter().enumerate() {
            slot[f] = k;
        }
        let mut basis: Vec<SparseVec> = free.iter().map(|_| Vec::new()).collect();
        // Pivots are visited in increasing order, so entries stay sorted
        // except for the free coordinate itself, placed afterwards.
        for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
            for (c, x) in &row[1..] {
                basis[slot[*c]].push((p, -x.clone()));
            }
        }
        for (v, &f) in basis.iter_mut().zip(&free) {
            let at = v.partition_point(|(i, _)| *i < f);
            v.insert(at, (f, Rational::one()));
        }
        Self {
            ambient: ncols,
            basis,
            positions: free,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn sparse_basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Rational>> {
        self.basis.iter().map(|v| to_dense(v, self.ambient)).collect()
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Basis vectors as the columns of an `ambient x dim` matrix.
    pub fn basis_matrix(&self) -> RatMatrix {
        let mut m = RatMatrix::zeros(self.ambient, self.dim());
        for (j, v) in self.basis.iter().enumerate() {
            for (i, x) in v {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    /// Coordinates of `v` in the basis, or `None` if `v` is not in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient
            )));
        }
        let coords: Vec<Rational> = self.positions.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, b) in coords.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for (i, x) in b {
                residual[*i] -= c * x;
            }
        }
        Ok(residual.iter().all(Zero::is_zero).then_some(coords))
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        matches!(self.coordinates(v), Ok(Some(_)))
    }

    /// Membership of a sparse vector with indices below the ambient dimension.
    pub fn contains_sparse(&self, v: &[(usize, Rational)]) -> bool {
        let mut residual: BTreeMap<usize, Rational> = v.iter().cloned().collect();
        for (k, &p) in self.positions.iter().enumerate() {
            let Some(c) = sparse_get(v, p).cloned() else {
                continue;
            };
            for (i, x) in &self.basis[k] {
                let e = residual.entry(*i).or_insert_with(Rational::zero);
                *e -= &c * x;
            }
        }
        residual.values().all(Zero::is_zero)
    }

    pub fn is_within(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient && self.basis.iter().all(|v| other.contains_sparse(v))
    }

    /// Trace of the coordinate permutation `e_i -> e_{images[i]}` restricted
    /// to this subspace. Only meaningful when the subspace is stable under
    /// the permutation; [`Subspace::is_stable_under`] checks that.
    pub fn permutation_trace(&self, images: &[usize]) -> Rational {
        let mut preimage = vec![0; images.len()];
        for (i, &j) in images.iter().enumerate() {
            preimage[j] = i;
        }
        self.basis
            .iter()
            .zip(&self.positions)
            .fold(Rational::zero(), |acc, (v, &p)| match sparse_get(v, preimage[p]) {
                Some(x) => acc + x,
                None => acc,
            })
    }

    /// Signed variant: `e_i -> signs[i] * e_{images[i]}`.
    pub fn signed_permutation_trace(&self, images: &[usize], signs: &[i8]) -> Rational {
        let mut preimage = vec![0; images.len()];
        for (i, &j) in images.iter().enumerate() {
            preimage[j] = i;
        }
        self.basis
            .iter()
            .zip(&self.positions)
            .fold(Rational::zero(), |acc, (v, &p)| {
                let i = preimage[p];
                match sparse_get(v, i) {
                    Some(x) if signs[i] < 0 => acc - x,
                    Some(x) => acc + x,
                    None => acc,
                }
            })
    }

    pub fn is_stable_under(&self, images: &[usize]) -> bool {
        self.basis.iter().all(|v| {
            let mut moved: SparseVec = v.iter().map(|(i, x)| (images[*i], x.clone())).collect();
            moved.sort_by_key(|e| e.0);
            self.contains_sparse(&moved)
        })
    }
}
pub fn rank(m: &RatMatrix) -> usize {
    m.rank()
}

pub fn kernel_basis(m: &RatMatrix) -> RatMatrix {
    m.kernel_basis()
}

pub fn image_basis(m: &RatMatrix) -> RatMatrix {
    m.image_basis()
}

/// Coefficients `x` with `S x = v`, or `None` when `v` is outside the column
/// span of `S`. Free variables are set to zero.
pub fn solve_membership(s: &RatMatrix, v: &[Rational]) -> Result<Option<Vec<Rational>>, LinalgError> {
    if s.rows() != v.len() {
        return Err(LinalgError::DimensionMismatch(format!(
            "system has {} rows but right-hand side has length {}",
            s.rows(),
            v.len()
        )));
    }
    let n = s.cols();
    let augmented: Vec<Vec<Rational>> = (0..s.rows())
        .map(|i| {
            let mut row = s.row(i).to_vec();
            row.push(v[i].clone());
            row
        })
        .collect();
    let ech = Echelon::of_dense_rows(augmented);
    if ech.pivots.last() == Some(&n) {
        return Ok(None);
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &p) in ech.rows.iter().zip(&ech.pivots) {
        if let Some(rhs) = sparse_get(row, n) {
            x[p] = rhs.clone();
        }
    }
    Ok(Some(x))
}
