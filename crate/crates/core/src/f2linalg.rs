//! Graded vector spaces and sparse matrices over F2.
//!
//! Tensor powers of `A = F[x]/(x^2)` use the lexicographic basis with `1 < x`
//! in every factor. Basis index `i` of `A^{⊗m}` has factor `k` (counted from
//! the left) equal to `x` exactly when bit `m - 1 - k` of `i` is set.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("permutation of length {len} does not act on {arity} tensor factors")]
    Arity { len: usize, arity: usize },
    #[error("not a permutation: {0:?}")]
    NotPermutation(Vec<usize>),
    #[error("map is not homogeneous of degree {declared}: entry ({row},{col}) has degree {found}")]
    Degree { declared: i32, row: usize, col: usize, found: i32 },
    #[error("entry ({0},{1}) outside the matrix")]
    OutOfRange(usize, usize),
}

pub type Result<T> = std::result::Result<T, LinalgError>;

// ---------------------------------------------------------------------------
// Graded spaces

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisVector {
    pub label: String,
    pub degree: i32,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GradedF2Space {
    basis: Vec<BasisVector>,
}

impl GradedF2Space {
    pub fn new(basis: Vec<BasisVector>) -> Self {
        Self { basis }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The ground field, one basis vector in degree 0.
    pub fn field() -> Self {
        Self::new(vec![BasisVector { label: "1".into(), degree: 0 }])
    }

    /// `A = <1, x>` with `p(1) = 1`, `p(x) = -1`.
    pub fn frobenius() -> Self {
        Self::tensor_power(1)
    }

    pub fn tensor_power(m: usize) -> Self {
        let basis = (0..1usize << m)
            .map(|i| BasisVector { label: tensor_label(m, i), degree: tensor_degree(m, i) })
            .collect();
        Self { basis }
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.basis {
            for b in &other.basis {
                basis.push(BasisVector {
                    label: format!("{}⊗{}", a.label, b.label),
                    degree: a.degree + b.degree,
                });
            }
        }
        Self { basis }
    }

    /// `(V{σ})^d = V^{d+σ}`: every basis vector moves down by `σ`.
    pub fn shift(&self, sigma: i32) -> Self {
        let basis = self
            .basis
            .iter()
            .map(|b| BasisVector { label: b.label.clone(), degree: b.degree - sigma })
            .collect();
        Self { basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisVector] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis[i].degree
    }

    pub fn dims(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for b in &self.basis {
            *out.entry(b.degree).or_insert(0) += 1;
        }
        out
    }

    pub fn labels_in_degree(&self, d: i32) -> Vec<&str> {
        self.basis.iter().filter(|b| b.degree == d).map(|b| b.label.as_str()).collect()
    }
}

pub fn tensor_label(m: usize, i: usize) -> String {
    if m == 0 {
        return "1".into();
    }
    (0..m)
        .map(|k| if i >> (m - 1 - k) & 1 == 1 { "x" } else { "1" })
        .collect::<Vec<_>>()
        .join("⊗")
}

/// Intrinsic degree of basis vector `i` of `A^{⊗m}`.
pub fn tensor_degree(m: usize, i: usize) -> i32 {
    m as i32 - 2 * i.count_ones() as i32
}

// ---------------------------------------------------------------------------
// Sparse matrices

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    entries: BTreeSet<(usize, usize)>,
}

impl F2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeSet::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: n, cols: n, entries: (0..n).map(|i| (i, i)).collect() }
    }

    pub fn from_entries<I>(rows: usize, cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = Self::zero(rows, cols);
        for (r, c) in entries {
            if r >= rows || c >= cols {
                return Err(LinalgError::OutOfRange(r, c));
            }
            m.toggle(r, c);
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.entries.iter().copied()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.entries.contains(&(r, c))
    }

    pub fn toggle(&mut self, r: usize, c: usize) {
        if !self.entries.remove(&(r, c)) {
            self.entries.insert((r, c));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.symmetric_difference(&other.entries).copied().collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    /// Matrix product `self · other` (apply `other` first).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(LinalgError::Dimension(format!(
                "cannot compose {}x{} after {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut by_col: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(r, c) in &self.entries {
            by_col.entry(c).or_default().push(r);
        }
        let mut out = Self::zero(self.rows, other.cols);
        for &(k, j) in &other.entries {
            if let Some(rs) = by_col.get(&k) {
                for &i in rs {
                    out.toggle(i, j);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; row `(i1, i2)` has index `i1 * other.rows + i2`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.rows * other.rows, self.cols * other.cols);
        for &(r1, c1) in &self.entries {
            for &(r2, c2) in &other.entries {
                out.entries.insert((r1 * other.rows + r2, c1 * other.cols + c2));
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    /// Image of a basis vector.
    pub fn column(&self, c: usize) -> Vec<usize> {
        self.entries.iter().filter(|e| e.1 == c).map(|e| e.0).collect()
    }

    /// Image of a vector given as a set of basis indices.
    pub fn apply(&self, v: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for &(r, c) in &self.entries {
            if v.contains(&c) && !out.remove(&r) {
                out.insert(r);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank_and_kernel().0
    }

    /// Inverse of a square matrix, if it has one.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut rows: Vec<BitVec> = (0..n).map(|i| {
            let mut v = BitVec::new(2 * n);
            v.flip(n + i);
            v
        }).collect();
        for &(r, c) in &self.entries {
            rows[r].flip(c);
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| rows[r].get(col))?;
            rows.swap(col, pivot);
            let p = rows[col].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != col && row.get(col) {
                    row.xor_assign(&p);
                }
            }
        }
        let mut out = Self::zero(n, n);
        for (r, row) in rows.iter().enumerate() {
            for c in row.ones() {
                if c >= n {
                    out.entries.insert((r, c - n));
                }
            }
        }
        Some(out)
    }

    /// Rank and a basis of the kernel, each kernel vector given as a sorted
    /// list of column indices.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<usize>>) {
        let mut columns: Vec<BitVec> = (0..self.cols).map(|_| BitVec::new(self.rows)).collect();
        for &(r, c) in &self.entries {
            columns[c].flip(r);
        }
        let mut elim = ColumnEliminator::new(self.rows, self.cols);
        let mut kernel = Vec::new();
        for (c, col) in columns.into_iter().enumerate() {
            if let Some(comb) = elim.insert(col, c) {
                kernel.push(comb.ones());
            }
        }
        (elim.rank(), kernel)
    }
}

/// Tensor factor permutation on `A^{⊗m}`: factor `k` moves to position
/// `perm[k]`.
pub fn tensor_permutation(m: usize, perm: &[usize]) -> Result<F2Matrix> {
    if perm.len() != m {
        return Err(LinalgError::Arity { len: perm.len(), arity: m });
    }
    let mut seen = vec![false; m];
    for &p in perm {
        if p >= m || seen[p] {
            return Err(LinalgError::NotPermutation(perm.to_vec()));
        }
        seen[p] = true;
    }
    let n = 1usize << m;
    let mut out = F2Matrix::zero(n, n);
    for i in 0..n {
        let mut j = 0;
        for (k, &p) in perm.iter().enumerate() {
            if i >> (m - 1 - k) & 1 == 1 {
                j |= 1 << (m - 1 - p);
            }
        }
        out.entries.insert((j, i));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Graded maps

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    pub source: GradedF2Space,
    pub target: GradedF2Space,
    pub degree: i32,
    pub matrix: F2Matrix,
}

impl GradedMap {
    pub fn new(source: GradedF2Space, target: GradedF2Space, degree: i32, matrix: F2Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(LinalgError::Dimension(format!(
                "{}x{} matrix between spaces of dimension {} and {}",
                matrix.rows(),
                matrix.cols(),
                source.dim(),
                target.dim()
            )));
        }
        for (r, c) in matrix.entries() {
            let found = target.degree(r) - source.degree(c);
            if found != degree {
                return Err(LinalgError::Degree { declared: degree, row: r, col: c, found });
            }
        }
        Ok(Self { source, target, degree, matrix })
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.source != other.target {
            return Err(LinalgError::Dimension("source and target spaces differ".into()));
        }
        Ok(Self {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            matrix: self.matrix.mul(&other.matrix)?,
        })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            source: self.source.tensor(&other.source),
            target: self.target.tensor(&other.target),
            degree: self.degree + other.degree,
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// Sum of two maps with equal source, target and degree.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.source != other.source || self.target != other.target || self.degree != other.degree {
            return Err(LinalgError::Dimension("summands live in different hom spaces".into()));
        }
        Ok(Self { matrix: self.matrix.add(&other.matrix)?, ..self.clone() })
    }

    pub fn identity(space: &GradedF2Space) -> Self {
        Self {
            source: space.clone(),
            target: space.clone(),
            degree: 0,
            matrix: F2Matrix::identity(space.dim()),
        }
    }
}

/// The Frobenius algebra structure maps on `A`.
#[derive(Debug, Clone)]
pub struct FrobeniusData {
    pub eps: GradedMap,
    pub eps_dot: GradedMap,
    pub eta: GradedMap,
    pub eta_dot: GradedMap,
    pub merge: GradedMap,
    pub split: GradedMap,
}

impl FrobeniusData {
    pub fn new() -> Self {
        let f = GradedF2Space::field();
        let a = GradedF2Space::frobenius();
        let aa = GradedF2Space::tensor_power(2);
        let mk = |s: &GradedF2Space, t: &GradedF2Space, deg, m: F2Matrix| {
            GradedMap::new(s.clone(), t.clone(), deg, m).expect("structure map degree")
        };
        Self {
            eps: mk(&a, &f, 1, small::eps()),
            eps_dot: mk(&a, &f, -1, small::eps_dot()),
            eta: mk(&f, &a, 1, small::eta()),
            eta_dot: mk(&f, &a, -1, small::eta_dot()),
            merge: mk(&aa, &a, -1, small::merge()),
            split: mk(&a, &aa, -1, small::split()),
        }
    }

    /// `p_A` on the basis of `A`.
    pub fn degree_map(&self) -> [(&'static str, i32); 2] {
        [("1", 1), ("x", -1)]
    }
}

impl Default for FrobeniusData {
    fn default() -> Self {
        Self::new()
    }
}

/// Bare matrices of the structure maps, basis `{1, x}` of `A`.
pub mod small {
    use super::F2Matrix;

    fn m(rows: usize, cols: usize, e: &[(usize, usize)]) -> F2Matrix {
        F2Matrix::from_entries(rows, cols, e.iter().copied()).unwrap()
    }

    /// ε(x) = 1, ε(1) = 0
    pub fn eps() -> F2Matrix {
        m(1, 2, &[(0, 1)])
    }
    /// ε̇(1) = 1, ε̇(x) = 0
    pub fn eps_dot() -> F2Matrix {
        m(1, 2, &[(0, 0)])
    }
    /// η(1) = 1
    pub fn eta() -> F2Matrix {
        m(2, 1, &[(0, 0)])
    }
    /// η̇(1) = x
    pub fn eta_dot() -> F2Matrix {
        m(2, 1, &[(1, 0)])
    }
    pub fn merge() -> F2Matrix {
        m(2, 4, &[(0, 0), (1, 1), (1, 2)])
    }
    pub fn split() -> F2Matrix {
        m(4, 2, &[(1, 0), (2, 0), (3, 1)])
    }
}

// ---------------------------------------------------------------------------
// Dense bit vectors and incremental elimination, used for ranks.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    pub fn new(len: usize) -> Self {
        Self { words: vec![0; len.div_ceil(64)] }
    }

    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn lowest(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

/// Column-by-column Gaussian elimination that records, for each dependent
/// column, the combination of inserted columns summing to zero.
pub struct ColumnEliminator {
    pivots: HashMap<usize, (BitVec, BitVec)>,
    ncols: usize,
}

impl ColumnEliminator {
    pub fn new(_nrows: usize, ncols: usize) -> Self {
        Self { pivots: HashMap::new(), ncols }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Returns the kernel combination if `col` depends on earlier columns.
    pub fn insert(&mut self, mut col: BitVec, index: usize) -> Option<BitVec> {
        let mut comb = BitVec::new(self.ncols);
        comb.flip(index);
        while let Some(r) = col.lowest() {
            match self.pivots.get(&r) {
                Some((pc, pk)) => {
                    col.xor_assign(pc);
                    comb.xor_assign(pk);
                }
                None => {
                    self.pivots.insert(r, (col, comb));
                    return None;
                }
            }
        }
        Some(comb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_moves_degrees_down() {
        let f = GradedF2Space::field().shift(-3);
        assert_eq!(f.dims(), BTreeMap::from([(3, 1)]));
        let a = GradedF2Space::frobenius();
        assert_eq!(a.shift(0), a);
        assert_eq!(a.shift(2).labels_in_degree(-3), vec!["x"]);
    }

    #[test]
    fn tensor_basis_is_lexicographic() {
        let a2 = GradedF2Space::tensor_power(2);
        let labels: Vec<_> = a2.basis().iter().map(|b| b.label.as_str()).collect();
        assert_eq!(labels, ["1⊗1", "1⊗x", "x⊗1", "x⊗x"]);
        assert_eq!(a2, GradedF2Space::frobenius().tensor(&GradedF2Space::frobenius()));
    }

    #[test]
    fn permutations() {
        assert_eq!(tensor_permutation(3, &[0, 1, 2]).unwrap(), F2Matrix::identity(8));
        let swap = tensor_permutation(2, &[1, 0]).unwrap();
        // 1⊗x is index 1, x⊗1 is index 2
        assert_eq!(swap.column(1), vec![2]);
        let p = tensor_permutation(3, &[1, 2, 0]).unwrap();
        let q = tensor_permutation(3, &[2, 0, 1]).unwrap();
        assert_eq!(p.mul(&q).unwrap(), F2Matrix::identity(8));
        assert!(matches!(tensor_permutation(2, &[0]), Err(LinalgError::Arity { .. })));
        assert!(tensor_permutation(2, &[0, 0]).is_err());
    }

    #[test]
    fn ranks() {
        let (r, k) = F2Matrix::zero(3, 3).rank_and_kernel();
        assert_eq!((r, k.len()), (0, 3));
        let (r, k) = F2Matrix::identity(4).rank_and_kernel();
        assert_eq!((r, k.len()), (4, 0));
        let (r, k) = small::merge().rank_and_kernel();
        assert_eq!((r, k.len()), (2, 2));
        for v in k {
            let set: BTreeSet<_> = v.into_iter().collect();
            assert!(small::merge().apply(&set).is_empty());
        }
    }

    #[test]
    fn graded_map_checks_degree() {
        let a = GradedF2Space::frobenius();
        let f = GradedF2Space::field();
        assert!(GradedMap::new(a.clone(), f.clone(), 1, small::eps()).is_ok());
        assert!(matches!(
            GradedMap::new(a, f, 0, small::eps()),
            Err(LinalgError::Degree { .. })
        ));
    }

    #[test]
    fn kron_matches_tensor_of_spaces() {
        let fr = FrobeniusData::new();
        let t = fr.eta_dot.tensor(&GradedMap::identity(&GradedF2Space::frobenius()));
        // η̇ ⊗ id sends 1 to x⊗1
        assert_eq!(t.matrix.column(0), vec![2]);
        assert_eq!(t.target, GradedF2Space::tensor_power(2));
    }

    #[test]
    fn inverses() {
        let swap = tensor_permutation(3, &[2, 0, 1]).unwrap();
        let inv = swap.inverse().unwrap();
        assert_eq!(inv.mul(&swap).unwrap(), F2Matrix::identity(8));
        let upper = F2Matrix::from_entries(3, 3, [(0, 0), (1, 1), (2, 2), (0, 2), (1, 2)]).unwrap();
        assert_eq!(upper.mul(&upper.inverse().unwrap()).unwrap(), F2Matrix::identity(3));
        assert!(small::merge().mul(&small::split()).unwrap().inverse().is_none());
    }
}
