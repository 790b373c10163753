//! Exact linear algebra over the prime field F_d.
//!
//! Vectors and matrices carry their index sets, so a block like Γ^A_B is
//! obtained by [`FdMatrix::block`] with vertex sets rather than positions.

use std::fmt;

use crate::error::{Error, Result};
use crate::vertex::{Vertex, VertexSet};

pub fn is_prime(d: u32) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2u32;
    while k.saturating_mul(k) <= d {
        if d % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

pub fn check_prime(d: u32) -> Result<()> {
    if is_prime(d) {
        Ok(())
    } else {
        Err(Error::NotPrime(d))
    }
}

#[inline]
pub(crate) fn add_mod(a: u32, b: u32, d: u32) -> u32 {
    ((a as u64 + b as u64) % d as u64) as u32
}

#[inline]
pub(crate) fn sub_mod(a: u32, b: u32, d: u32) -> u32 {
    ((a as u64 + d as u64 - (b % d) as u64) % d as u64) as u32
}

#[inline]
pub(crate) fn mul_mod(a: u32, b: u32, d: u32) -> u32 {
    ((a as u64 * b as u64) % d as u64) as u32
}

#[inline]
pub(crate) fn neg_mod(a: u32, d: u32) -> u32 {
    (d - a % d) % d
}

/// Multiplicative inverse by Fermat; `a` must be nonzero mod `d`.
pub(crate) fn inv_mod(a: u32, d: u32) -> u32 {
    debug_assert!(a % d != 0);
    let (mut base, mut exp, mut acc) = (a as u64 % d as u64, d as u64 - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % d as u64;
        }
        base = base * base % d as u64;
        exp >>= 1;
    }
    acc as u32
}

/// An element of F_d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FdScalar {
    value: u32,
    d: u32,
}

impl FdScalar {
    pub fn new(value: i64, d: u32) -> Result<Self> {
        check_prime(d)?;
        Ok(Self { value: value.rem_euclid(d as i64) as u32, d })
    }

    pub fn value(self) -> u32 {
        self.value
    }

    pub fn modulus(self) -> u32 {
        self.d
    }

    pub fn add(self, o: Self) -> Self {
        Self { value: add_mod(self.value, o.value, self.d), d: self.d }
    }

    pub fn sub(self, o: Self) -> Self {
        Self { value: sub_mod(self.value, o.value, self.d), d: self.d }
    }

    pub fn mul(self, o: Self) -> Self {
        Self { value: mul_mod(self.value, o.value, self.d), d: self.d }
    }

    pub fn neg(self) -> Self {
        Self { value: neg_mod(self.value, self.d), d: self.d }
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| Self { value: inv_mod(self.value, self.d), d: self.d })
    }
}

/// A configuration or momentum q^I: one field element per vertex of `index`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FdVector {
    d: u32,
    index: VertexSet,
    entries: Vec<u32>,
}

impl FdVector {
    pub fn zeros(index: VertexSet, d: u32) -> Self {
        let n = index.len();
        Self { d, index, entries: vec![0; n] }
    }

    /// Entries are given in canonical index order and reduced mod `d`.
    pub fn from_entries(index: VertexSet, d: u32, entries: impl IntoIterator<Item = i64>) -> Result<Self> {
        let entries: Vec<u32> = entries.into_iter().map(|e| e.rem_euclid(d as i64) as u32).collect();
        if entries.len() != index.len() {
            return Err(Error::IndexMismatch(format!(
                "{} entries for index of size {}",
                entries.len(),
                index.len()
            )));
        }
        Ok(Self { d, index, entries })
    }

    pub fn from_pairs(d: u32, pairs: impl IntoIterator<Item = (Vertex, i64)>) -> Result<Self> {
        let pairs: Vec<(Vertex, i64)> = pairs.into_iter().collect();
        let index = VertexSet::new(pairs.iter().map(|p| p.0))?;
        let mut v = Self::zeros(index, d);
        for (vx, e) in pairs {
            v.set(vx, e);
        }
        Ok(v)
    }

    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn index(&self) -> &VertexSet {
        &self.index
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// Value at vertex `v`; vertices outside the index read as zero.
    pub fn get(&self, v: Vertex) -> u32 {
        self.index.position(v).map_or(0, |k| self.entries[k])
    }

    pub fn set(&mut self, v: Vertex, value: i64) {
        let k = self.index.position(v).expect("vertex not in vector index");
        self.entries[k] = value.rem_euclid(self.d as i64) as u32;
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, u32)> + '_ {
        self.index.iter().zip(self.entries.iter().copied())
    }

    /// Restriction q^A of q to the sub-index A (missing vertices read as zero).
    pub fn restrict(&self, a: &VertexSet) -> FdVector {
        FdVector { d: self.d, index: a.clone(), entries: a.iter().map(|v| self.get(v)).collect() }
    }

    /// Zero-extends or restricts to `index`.
    pub fn reindex(&self, index: &VertexSet) -> FdVector {
        self.restrict(index)
    }

    /// Concatenation q^A ⊕ q^B over disjoint index sets.
    pub fn join(&self, other: &FdVector) -> Result<FdVector> {
        if self.d != other.d {
            return Err(Error::FieldMismatch(self.d, other.d));
        }
        if !self.index.is_disjoint(&other.index) {
            return Err(Error::IndexMismatch("joined vectors overlap".into()));
        }
        let index = self.index.union(&other.index);
        let entries = index.iter().map(|v| self.get(v) + other.get(v)).collect();
        Ok(FdVector { d: self.d, index, entries })
    }

    fn check_same(&self, o: &FdVector) -> Result<()> {
        if self.d != o.d {
            return Err(Error::FieldMismatch(self.d, o.d));
        }
        if self.index != o.index {
            return Err(Error::IndexMismatch(format!("{} vs {}", self.index, o.index)));
        }
        Ok(())
    }

    pub fn add(&self, o: &FdVector) -> Result<FdVector> {
        self.check_same(o)?;
        let entries = self.entries.iter().zip(&o.entries).map(|(&a, &b)| add_mod(a, b, self.d)).collect();
        Ok(FdVector { d: self.d, index: self.index.clone(), entries })
    }

    pub fn sub(&self, o: &FdVector) -> Result<FdVector> {
        self.check_same(o)?;
        let entries = self.entries.iter().zip(&o.entries).map(|(&a, &b)| sub_mod(a, b, self.d)).collect();
        Ok(FdVector { d: self.d, index: self.index.clone(), entries })
    }

    pub fn neg(&self) -> FdVector {
        FdVector {
            d: self.d,
            index: self.index.clone(),
            entries: self.entries.iter().map(|&a| neg_mod(a, self.d)).collect(),
        }
    }

    pub fn scale(&self, c: u32) -> FdVector {
        FdVector {
            d: self.d,
            index: self.index.clone(),
            entries: self.entries.iter().map(|&a| mul_mod(a, c, self.d)).collect(),
        }
    }

    /// ⟨p, q⟩ in F_d.
    pub fn dot(&self, o: &FdVector) -> Result<u32> {
        self.check_same(o)?;
        Ok(self.entries.iter().zip(&o.entries).fold(0, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, self.d), self.d)))
    }

    /// Every configuration of F_d^index, in little-endian mixed-radix order
    /// (the first vertex varies fastest).
    pub fn enumerate(index: &VertexSet, d: u32) -> ConfigIter {
        ConfigIter { index: index.clone(), d, next: Some(vec![0; index.len()]) }
    }
}

impl fmt::Debug for FdVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, (v, e)) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}:{e}")?;
        }
        write!(f, ") mod {}", self.d)
    }
}

pub struct ConfigIter {
    index: VertexSet,
    d: u32,
    next: Option<Vec<u32>>,
}

impl Iterator for ConfigIter {
    type Item = FdVector;

    fn next(&mut self) -> Option<FdVector> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut carried = true;
        for e in succ.iter_mut() {
            *e += 1;
            if *e < self.d {
                carried = false;
                break;
            }
            *e = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(FdVector { d: self.d, index: self.index.clone(), entries: cur })
    }
}

/// Result of [`FdMatrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FdMatrix,
    pub pivot_cols: Vec<usize>,
    pub rank: usize,
}

/// Dense matrix C^R_C over F_d with rows indexed by R and columns by C.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FdMatrix {
    d: u32,
    rows: VertexSet,
    cols: VertexSet,
    data: Vec<u32>,
}

impl FdMatrix {
    pub fn zeros(rows: VertexSet, cols: VertexSet, d: u32) -> Self {
        let n = rows.len() * cols.len();
        Self { d, rows, cols, data: vec![0; n] }
    }

    pub fn identity(index: VertexSet, d: u32) -> Self {
        let mut m = Self::zeros(index.clone(), index, d);
        for k in 0..m.rows.len() {
            m.data[k * m.cols.len() + k] = 1 % d;
        }
        m
    }

    /// Row-major entries, reduced mod `d`.
    pub fn from_rows(rows: VertexSet, cols: VertexSet, d: u32, entries: &[Vec<i64>]) -> Result<Self> {
        check_prime(d)?;
        if entries.len() != rows.len() || entries.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::IndexMismatch(format!("expected {}x{} entries", rows.len(), cols.len())));
        }
        let data = entries.iter().flatten().map(|e| e.rem_euclid(d as i64) as u32).collect();
        Ok(Self { d, rows, cols, data })
    }

    /// Convenience for position-indexed matrices: rows and cols are 0..n.
    pub fn from_array(d: u32, entries: &[Vec<i64>]) -> Result<Self> {
        let r = entries.len() as u32;
        let c = entries.first().map_or(0, |row| row.len()) as u32;
        Self::from_rows(
            VertexSet::from_iter_dedup(0..r),
            VertexSet::from_iter_dedup(0..c),
            d,
            entries,
        )
    }

    pub fn modulus(&self) -> u32 {
        self.d
    }

    pub fn rows(&self) -> &VertexSet {
        &self.rows
    }

    pub fn cols(&self) -> &VertexSet {
        &self.cols
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    /// Entry by position.
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols.len() + j]
    }

    #[inline]
    pub fn set_at(&mut self, i: usize, j: usize, value: u32) {
        let c = self.cols.len();
        self.data[i * c + j] = value % self.d;
    }

    /// Entry by vertex labels; labels outside the index read as zero.
    pub fn get(&self, r: Vertex, c: Vertex) -> u32 {
        match (self.rows.position(r), self.cols.position(c)) {
            (Some(i), Some(j)) => self.at(i, j),
            _ => 0,
        }
    }

    pub fn set(&mut self, r: Vertex, c: Vertex, value: i64) {
        let i = self.rows.position(r).expect("row vertex not in index");
        let j = self.cols.position(c).expect("col vertex not in index");
        self.set_at(i, j, value.rem_euclid(self.d as i64) as u32);
    }

    /// Rows as nested vectors, in canonical order.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.nrows()).map(|i| (0..self.ncols()).map(|j| self.at(i, j)).collect()).collect()
    }

    /// Sub-block M^A_B; vertices outside the index contribute zero rows/cols.
    pub fn block(&self, a: &VertexSet, b: &VertexSet) -> FdMatrix {
        let mut m = FdMatrix::zeros(a.clone(), b.clone(), self.d);
        for (i, r) in a.iter().enumerate() {
            let Some(ri) = self.rows.position(r) else { continue };
            for (j, c) in b.iter().enumerate() {
                if let Some(cj) = self.cols.position(c) {
                    m.data[i * b.len() + j] = self.at(ri, cj);
                }
            }
        }
        m
    }

    pub fn transpose(&self) -> FdMatrix {
        let mut m = FdMatrix::zeros(self.cols.clone(), self.rows.clone(), self.d);
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                m.data[j * self.nrows() + i] = self.at(i, j);
            }
        }
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.nrows()).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    fn check_same_shape(&self, o: &FdMatrix) -> Result<()> {
        if self.d != o.d {
            return Err(Error::FieldMismatch(self.d, o.d));
        }
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::IndexMismatch("matrix shapes differ".into()));
        }
        Ok(())
    }

    pub fn add(&self, o: &FdMatrix) -> Result<FdMatrix> {
        self.check_same_shape(o)?;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| add_mod(a, b, self.d)).collect();
        Ok(FdMatrix { data, ..self.clone() })
    }

    pub fn sub(&self, o: &FdMatrix) -> Result<FdMatrix> {
        self.check_same_shape(o)?;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| sub_mod(a, b, self.d)).collect();
        Ok(FdMatrix { data, ..self.clone() })
    }

    pub fn neg(&self) -> FdMatrix {
        FdMatrix { data: self.data.iter().map(|&a| neg_mod(a, self.d)).collect(), ..self.clone() }
    }

    /// Product A·B; the column index of A must equal the row index of B.
    pub fn mul(&self, o: &FdMatrix) -> Result<FdMatrix> {
        if self.d != o.d {
            return Err(Error::FieldMismatch(self.d, o.d));
        }
        if self.cols != o.rows {
            return Err(Error::IndexMismatch(format!("cols {} vs rows {}", self.cols, o.rows)));
        }
        let (n, k, m) = (self.nrows(), self.ncols(), o.ncols());
        let d = self.d as u64;
        let mut out = FdMatrix::zeros(self.rows.clone(), o.cols.clone(), self.d);
        for i in 0..n {
            for j in 0..m {
                let mut acc = 0u64;
                for t in 0..k {
                    acc = (acc + self.at(i, t) as u64 * o.at(t, j) as u64) % d;
                }
                out.data[i * m + j] = acc as u32;
            }
        }
        Ok(out)
    }

    /// M·v where v is indexed by the columns of M.
    pub fn mul_vec(&self, v: &FdVector) -> Result<FdVector> {
        if self.d != v.d {
            return Err(Error::FieldMismatch(self.d, v.d));
        }
        if &self.cols != v.index() {
            return Err(Error::IndexMismatch(format!("cols {} vs vector {}", self.cols, v.index())));
        }
        let d = self.d as u64;
        let entries = (0..self.nrows())
            .map(|i| {
                (0..self.ncols()).fold(0u64, |acc, j| (acc + self.at(i, j) as u64 * v.entries[j] as u64) % d) as u32
            })
            .collect();
        Ok(FdVector { d: self.d, index: self.rows.clone(), entries })
    }

    /// Reduced row echelon form; row and column indices are kept.
    pub fn rref(&self) -> Rref {
        let d = self.d;
        let (n, m) = (self.nrows(), self.ncols());
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m {
            if r == n {
                break;
            }
            let Some(p) = (r..n).find(|&i| a.at(i, c) != 0) else { continue };
            if p != r {
                for j in 0..m {
                    a.data.swap(p * m + j, r * m + j);
                }
            }
            let inv = inv_mod(a.at(r, c), d);
            for j in 0..m {
                a.data[r * m + j] = mul_mod(a.data[r * m + j], inv, d);
            }
            for i in 0..n {
                let f = a.at(i, c);
                if i != r && f != 0 {
                    for j in 0..m {
                        let v = sub_mod(a.data[i * m + j], mul_mod(f, a.data[r * m + j], d), d);
                        a.data[i * m + j] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: a, rank: pivots.len(), pivot_cols: pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    pub fn is_injective(&self) -> bool {
        self.rank() == self.ncols()
    }

    pub fn is_surjective(&self) -> bool {
        self.rank() == self.nrows()
    }

    /// A basis of ker M, one vector per free column (indexed by the columns).
    pub fn kernel_basis(&self) -> Vec<FdVector> {
        let Rref { matrix: r, pivot_cols, .. } = self.rref();
        let d = self.d;
        let free: Vec<usize> = (0..self.ncols()).filter(|c| !pivot_cols.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut entries = vec![0u32; self.ncols()];
                entries[f] = 1;
                for (row, &pc) in pivot_cols.iter().enumerate() {
                    entries[pc] = neg_mod(r.at(row, f), d);
                }
                FdVector { d, index: self.cols.clone(), entries }
            })
            .collect()
    }

    /// All d^dim elements of ker M, by linear combination of the basis.
    pub fn kernel_elements(&self) -> Vec<FdVector> {
        let basis = self.kernel_basis();
        let coeff_index = VertexSet::from_iter_dedup(0..basis.len() as u32);
        FdVector::enumerate(&coeff_index, self.d)
            .map(|c| {
                let mut acc = FdVector::zeros(self.cols.clone(), self.d);
                for (b, &k) in basis.iter().zip(c.entries()) {
                    acc = acc.add(&b.scale(k)).expect("same index");
                }
                acc
            })
            .collect()
    }

    /// Two-sided inverse; the result has rows = cols(M) and cols = rows(M).
    pub fn inverse(&self) -> Result<FdMatrix> {
        if self.nrows() != self.ncols() {
            return Err(Error::NotSquare { rows: self.nrows(), cols: self.ncols() });
        }
        let n = self.nrows();
        let r = self.augmented_with_identity().rref();
        if r.pivot_cols.iter().filter(|&&c| c < n).count() < n {
            return Err(Error::NotInvertible);
        }
        let mut inv = FdMatrix::zeros(self.cols.clone(), self.rows.clone(), self.d);
        for i in 0..n {
            for j in 0..n {
                inv.data[i * n + j] = r.matrix.at(i, n + j);
            }
        }
        Ok(inv)
    }

    /// Canonical right inverse R with M·R = 1 on the rows: free variables of
    /// each column system are set to zero.
    pub fn right_inverse(&self) -> Result<FdMatrix> {
        let (n, m) = (self.nrows(), self.ncols());
        let r = self.augmented_with_identity().rref();
        let left: Vec<usize> = r.pivot_cols.iter().copied().filter(|&c| c < m).collect();
        if left.len() < n {
            return Err(Error::NotSurjective);
        }
        // With M surjective the first n rows carry pivots in M's columns, and
        // the augmented block holds E with E·M = rref(M); column j of the
        // right inverse places row i of E at pivot column i.
        let mut out = FdMatrix::zeros(self.cols.clone(), self.rows.clone(), self.d);
        for (i, &pc) in left.iter().enumerate() {
            for j in 0..n {
                out.data[pc * n + j] = r.matrix.at(i, m + j);
            }
        }
        Ok(out)
    }

    /// Particular solution of M x = b with free variables zero, or `None`.
    pub fn solve(&self, b: &FdVector) -> Option<FdVector> {
        if b.index() != &self.rows || b.modulus() != self.d {
            return None;
        }
        let (n, m) = (self.nrows(), self.ncols());
        let mut aug = FdMatrix::zeros(
            self.rows.clone(),
            VertexSet::from_iter_dedup(0..(m as u32 + 1)),
            self.d,
        );
        for i in 0..n {
            for j in 0..m {
                aug.data[i * (m + 1) + j] = self.at(i, j);
            }
            aug.data[i * (m + 1) + m] = b.entries[i];
        }
        let r = aug.rref();
        if r.pivot_cols.contains(&m) {
            return None;
        }
        let mut x = FdVector::zeros(self.cols.clone(), self.d);
        for (row, &pc) in r.pivot_cols.iter().enumerate() {
            x.entries[pc] = r.matrix.at(row, m);
        }
        Some(x)
    }

    /// [M | 1] with columns renumbered 0..m+n (positions only).
    fn augmented_with_identity(&self) -> FdMatrix {
        let (n, m) = (self.nrows(), self.ncols());
        let mut aug = FdMatrix::zeros(
            self.rows.clone(),
            VertexSet::from_iter_dedup(0..(m + n) as u32),
            self.d,
        );
        for i in 0..n {
            for j in 0..m {
                aug.data[i * (m + n) + j] = self.at(i, j);
            }
            aug.data[i * (m + n) + m + i] = 1;
        }
        aug
    }
}

impl fmt::Debug for FdMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FdMatrix mod {} rows {} cols {}", self.d, self.rows, self.cols)?;
        for i in 0..self.nrows() {
            let row: Vec<String> = (0..self.ncols()).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}
