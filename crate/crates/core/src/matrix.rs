//! Dense matrices over `F_q`: rank, minors, exterior powers, inverses and the
//! row/column symmetries that preserve principal-minor vanishing.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::Rng;
use thiserror::Error;

use crate::field::{FieldElement, FieldError, PrimeModulus};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("invalid index set: {0}")]
    InvalidIndexSet(String),
    #[error("size {size} out of range 1..={max}")]
    SizeOutOfRange { size: usize, max: usize },
    #[error("not a permutation of 1..={0}")]
    InvalidPermutation(usize),
    #[error("scaling factor must be nonzero")]
    ZeroScale,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A strictly increasing subset of `{1, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSet {
    n: usize,
    members: Vec<usize>,
}

impl IndexSet {
    pub fn new(n: usize, mut members: Vec<usize>) -> Result<Self, MatrixError> {
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(MatrixError::InvalidIndexSet(format!(
                "duplicate members in {members:?}"
            )));
        }
        if let Some(&bad) = members.iter().find(|&&m| m == 0 || m > n) {
            return Err(MatrixError::InvalidIndexSet(format!("{bad} is outside 1..={n}")));
        }
        Ok(IndexSet { n, members })
    }

    pub fn full(n: usize) -> Self {
        IndexSet {
            n,
            members: (1..=n).collect(),
        }
    }

    pub fn empty(n: usize) -> Self {
        IndexSet { n, members: vec![] }
    }

    /// Builds a set from a bit mask, bit `i - 1` standing for member `i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        IndexSet {
            n,
            members: (1..=n).filter(|i| mask >> (i - 1) & 1 == 1).collect(),
        }
    }

    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &i| m | 1 << (i - 1))
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn complement(&self) -> IndexSet {
        IndexSet {
            n: self.n,
            members: (1..=self.n).filter(|&i| !self.contains(i)).collect(),
        }
    }

    /// Zero-based positions, for indexing into matrices.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().map(|&i| i - 1)
    }

    /// All `k`-subsets of `{1..n}` in lexicographic order.
    pub fn subsets(n: usize, k: usize) -> impl Iterator<Item = IndexSet> {
        (1..=n).combinations(k).map(move |members| IndexSet { n, members })
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.members.iter().join(","))
    }
}

/// Determinant of the `k x k` row-major matrix in `buf`, which is clobbered.
///
/// Sizes up to 3 use the closed-form expansion; larger sizes use elimination
/// with pivot search.
pub fn det_in_place(buf: &mut [u32], k: usize, m: PrimeModulus) -> u32 {
    debug_assert!(buf.len() >= k * k);
    match k {
        0 => 1 % m.get(),
        1 => buf[0],
        2 => m.sub(m.mul(buf[0], buf[3]), m.mul(buf[1], buf[2])),
        3 => {
            let t0 = m.mul(buf[0], m.sub(m.mul(buf[4], buf[8]), m.mul(buf[5], buf[7])));
            let t1 = m.mul(buf[1], m.sub(m.mul(buf[3], buf[8]), m.mul(buf[5], buf[6])));
            let t2 = m.mul(buf[2], m.sub(m.mul(buf[3], buf[7]), m.mul(buf[4], buf[6])));
            m.add(m.sub(t0, t1), t2)
        }
        _ => {
            let mut det = 1u32;
            for col in 0..k {
                let Some(p) = (col..k).find(|&r| buf[r * k + col] != 0) else {
                    return 0;
                };
                if p != col {
                    for c in 0..k {
                        buf.swap(p * k + c, col * k + c);
                    }
                    det = m.neg(det);
                }
                let pivot = buf[col * k + col];
                det = m.mul(det, pivot);
                let pinv = m.inv(pivot).expect("nonzero pivot");
                for r in col + 1..k {
                    let f = buf[r * k + col];
                    if f == 0 {
                        continue;
                    }
                    let f = m.mul(f, pinv);
                    for c in col..k {
                        buf[r * k + c] = m.sub(buf[r * k + c], m.mul(f, buf[col * k + c]));
                    }
                }
            }
            det
        }
    }
}

/// Rank of the `rows x cols` row-major matrix in `buf`, which is clobbered.
pub fn rank_in_place(buf: &mut [u32], rows: usize, cols: usize, m: PrimeModulus) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| buf[r * cols + col] != 0) else {
            continue;
        };
        if p != rank {
            for c in 0..cols {
                buf.swap(p * cols + c, rank * cols + c);
            }
        }
        let pinv = m.inv(buf[rank * cols + col]).expect("nonzero pivot");
        for r in rank + 1..rows {
            let f = buf[r * cols + col];
            if f == 0 {
                continue;
            }
            let f = m.mul(f, pinv);
            for c in col..cols {
                buf[r * cols + c] = m.sub(buf[r * cols + c], m.mul(f, buf[rank * cols + c]));
            }
        }
        rank += 1;
    }
    rank
}

/// The three families of actions that preserve the principal minor ideals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetryAction {
    /// `M -> P M P^T` where `P` sends basis vector `i` to `sigma[i - 1]`.
    Permute(Vec<usize>),
    Transpose,
    ScaleRow {
        row: usize,
        factor: u32,
    },
    ScaleCol {
        col: usize,
        factor: u32,
    },
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    modulus: PrimeModulus,
    data: Vec<u32>,
}

impl ExactMatrix {
    /// Builds a matrix from residues; values are reduced mod `q`.
    pub fn new(rows: usize, cols: usize, modulus: PrimeModulus, data: Vec<u64>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ExactMatrix {
            rows,
            cols,
            modulus,
            data: data.into_iter().map(|v| modulus.reduce(v)).collect(),
        })
    }

    /// Builds a matrix from already-reduced residues.
    pub(crate) fn from_raw(rows: usize, cols: usize, modulus: PrimeModulus, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        debug_assert!(data.iter().all(|&v| v < modulus.get()));
        ExactMatrix {
            rows,
            cols,
            modulus,
            data,
        }
    }

    /// Builds a matrix from signed integer rows.
    pub fn from_rows<R: AsRef<[i64]>>(modulus: PrimeModulus, rows: &[R]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(MatrixError::DimensionMismatch("ragged rows".into()));
        }
        if rows.is_empty() || cols == 0 {
            return Err(MatrixError::DimensionMismatch("empty matrix".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&v| modulus.reduce_signed(v)))
            .collect();
        Ok(ExactMatrix::from_raw(rows.len(), cols, modulus, data))
    }

    pub fn zeros(rows: usize, cols: usize, modulus: PrimeModulus) -> Self {
        ExactMatrix::from_raw(rows, cols, modulus, vec![0; rows * cols])
    }

    pub fn identity(n: usize, modulus: PrimeModulus) -> Self {
        let mut m = ExactMatrix::zeros(n, n, modulus);
        for i in 0..n {
            m.data[i * n + i] = 1 % modulus.get();
        }
        m
    }

    pub fn diagonal(modulus: PrimeModulus, diag: &[u64]) -> Self {
        let n = diag.len();
        let mut m = ExactMatrix::zeros(n, n, modulus);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = modulus.reduce(d);
        }
        m
    }

    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, modulus: PrimeModulus, rng: &mut R) -> Self {
        let q = modulus.get();
        let data = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
        ExactMatrix::from_raw(rows, cols, modulus, data)
    }

    /// Rejection-samples a uniformly random invertible matrix.
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, modulus: PrimeModulus, rng: &mut R) -> Self {
        loop {
            let m = ExactMatrix::random(n, n, modulus, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Zero-based entry access.
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.modulus.element(self.raw(i, j) as u64)
    }

    #[inline]
    pub fn raw(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn raw_data(&self) -> &[u32] {
        &self.data
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = self.modulus.reduce(v);
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn row_vec(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.raw(i, j));
            }
        }
        ExactMatrix::from_raw(self.cols, self.rows, self.modulus, data)
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, MatrixError> {
        if self.modulus != rhs.modulus {
            return Err(FieldError::ModulusMismatch(self.modulus.get(), rhs.modulus.get()).into());
        }
        if self.cols != rhs.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let m = self.modulus;
        let q = m.get() as u64;
        let mut data = vec![0u32; self.rows * rhs.cols];
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0u64;
                for k in 0..self.cols {
                    acc = (acc + self.raw(i, k) as u64 * rhs.raw(k, j) as u64) % q;
                }
                data[i * rhs.cols + j] = acc as u32;
            }
        }
        Ok(ExactMatrix::from_raw(self.rows, rhs.cols, m, data))
    }

    /// Submatrix on the given (one-based) row and column sets.
    pub fn submatrix(&self, rowset: &IndexSet, colset: &IndexSet) -> Result<ExactMatrix, MatrixError> {
        if rowset.ambient() != self.rows || colset.ambient() != self.cols {
            return Err(MatrixError::InvalidIndexSet(format!(
                "index sets over {{1..{}}} x {{1..{}}} for a {}x{} matrix",
                rowset.ambient(),
                colset.ambient(),
                self.rows,
                self.cols
            )));
        }
        if rowset.is_empty() || colset.is_empty() {
            return Err(MatrixError::InvalidIndexSet("empty selection".into()));
        }
        let data = rowset
            .positions()
            .flat_map(|i| colset.positions().map(move |j| (i, j)))
            .map(|(i, j)| self.raw(i, j))
            .collect();
        Ok(ExactMatrix::from_raw(rowset.len(), colset.len(), self.modulus, data))
    }

    pub fn rank(&self) -> usize {
        let mut buf = self.data.clone();
        rank_in_place(&mut buf, self.rows, self.cols, self.modulus)
    }

    pub fn det(&self) -> Result<FieldElement, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::DimensionMismatch(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut buf = self.data.clone();
        Ok(self
            .modulus
            .element(det_in_place(&mut buf, self.rows, self.modulus) as u64))
    }

    pub fn minor(&self, rowset: &IndexSet, colset: &IndexSet) -> Result<FieldElement, MatrixError> {
        if rowset.len() != colset.len() {
            return Err(MatrixError::DimensionMismatch(format!(
                "minor on {} rows and {} columns",
                rowset.len(),
                colset.len()
            )));
        }
        if rowset.is_empty() {
            return Ok(self.modulus.one());
        }
        self.submatrix(rowset, colset)?.det()
    }

    /// Every principal `t`-minor, keyed by its index set.
    pub fn principal_minors(&self, t: usize) -> Result<BTreeMap<IndexSet, FieldElement>, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::DimensionMismatch(
                "principal minors of a non-square matrix".into(),
            ));
        }
        if t == 0 || t > self.rows {
            return Err(MatrixError::SizeOutOfRange {
                size: t,
                max: self.rows,
            });
        }
        IndexSet::subsets(self.rows, t)
            .map(|s| self.minor(&s, &s).map(|v| (s, v)))
            .collect()
    }

    /// True iff every principal `t`-minor vanishes.
    pub fn principal_minors_vanish(&self, t: usize) -> Result<bool, MatrixError> {
        Ok(self.principal_minors(t)?.values().all(|v| v.is_zero()))
    }

    /// The `t`-th compound matrix; rows and columns indexed by `t`-subsets in
    /// lexicographic order.
    pub fn exterior_power(&self, t: usize) -> Result<ExactMatrix, MatrixError> {
        let max = self.rows.min(self.cols);
        if t == 0 || t > max {
            return Err(MatrixError::SizeOutOfRange { size: t, max });
        }
        let row_sets: Vec<_> = IndexSet::subsets(self.rows, t).collect();
        let col_sets: Vec<_> = IndexSet::subsets(self.cols, t).collect();
        let mut data = Vec::with_capacity(row_sets.len() * col_sets.len());
        for r in &row_sets {
            for c in &col_sets {
                data.push(self.minor(r, c)?.value());
            }
        }
        Ok(ExactMatrix::from_raw(
            row_sets.len(),
            col_sets.len(),
            self.modulus,
            data,
        ))
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<ExactMatrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let m = self.modulus;
        let w = 2 * n;
        let mut aug = vec![0u32; n * w];
        for i in 0..n {
            aug[i * w..i * w + n].copy_from_slice(self.row_vec(i));
            aug[i * w + n + i] = 1 % m.get();
        }
        for col in 0..n {
            let p = (col..n).find(|&r| aug[r * w + col] != 0).ok_or(MatrixError::Singular)?;
            if p != col {
                for c in 0..w {
                    aug.swap(p * w + c, col * w + c);
                }
            }
            let pinv = m.inv(aug[col * w + col]).expect("nonzero pivot");
            for c in 0..w {
                aug[col * w + c] = m.mul(aug[col * w + c], pinv);
            }
            for r in 0..n {
                let f = aug[r * w + col];
                if r == col || f == 0 {
                    continue;
                }
                for c in 0..w {
                    aug[r * w + c] = m.sub(aug[r * w + c], m.mul(f, aug[col * w + c]));
                }
            }
        }
        let data = (0..n).flat_map(|i| aug[i * w + n..(i + 1) * w].to_vec()).collect();
        Ok(ExactMatrix::from_raw(n, n, m, data))
    }

    /// Checks `det(A^-1[S,S]) * det(A) = det(A[S^c,S^c])` for the principal
    /// selection `S`. The empty set and the full set are allowed.
    pub fn jacobi_complementary_minor_check(&self, s: &IndexSet) -> Result<bool, MatrixError> {
        if s.ambient() != self.rows {
            return Err(MatrixError::InvalidIndexSet(format!(
                "{s} is not a subset of 1..={}",
                self.rows
            )));
        }
        let inv = self.inverse()?;
        let det = self.det()?;
        let lhs = inv.minor(s, s)? * det;
        let sc = s.complement();
        let rhs = self.minor(&sc, &sc)?;
        Ok(lhs == rhs)
    }

    pub fn apply_symmetry(&self, action: &SymmetryAction) -> Result<ExactMatrix, MatrixError> {
        match action {
            SymmetryAction::Transpose => Ok(self.transpose()),
            SymmetryAction::Permute(sigma) => {
                if !self.is_square() {
                    return Err(MatrixError::DimensionMismatch("permuting a non-square matrix".into()));
                }
                let n = self.rows;
                let mut seen = vec![false; n + 1];
                for &s in sigma {
                    if s == 0 || s > n || std::mem::replace(&mut seen[s], true) {
                        return Err(MatrixError::InvalidPermutation(n));
                    }
                }
                if sigma.len() != n {
                    return Err(MatrixError::InvalidPermutation(n));
                }
                let mut out = ExactMatrix::zeros(n, n, self.modulus);
                for i in 0..n {
                    for j in 0..n {
                        out.data[(sigma[i] - 1) * n + sigma[j] - 1] = self.raw(i, j);
                    }
                }
                Ok(out)
            }
            SymmetryAction::ScaleRow { row, factor } => {
                let f = self.modulus.reduce(*factor as u64);
                if f == 0 {
                    return Err(MatrixError::ZeroScale);
                }
                if *row == 0 || *row > self.rows {
                    return Err(MatrixError::InvalidIndexSet(format!("row {row}")));
                }
                let mut out = self.clone();
                for j in 0..self.cols {
                    out.data[(row - 1) * self.cols + j] = self.modulus.mul(self.raw(row - 1, j), f);
                }
                Ok(out)
            }
            SymmetryAction::ScaleCol { col, factor } => {
                let f = self.modulus.reduce(*factor as u64);
                if f == 0 {
                    return Err(MatrixError::ZeroScale);
                }
                if *col == 0 || *col > self.cols {
                    return Err(MatrixError::InvalidIndexSet(format!("column {col}")));
                }
                let mut out = self.clone();
                for i in 0..self.rows {
                    out.data[i * self.cols + col - 1] = self.modulus.mul(self.raw(i, col - 1), f);
                }
                Ok(out)
            }
        }
    }

    /// Renders the fixture text format: `rows cols q`, then one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.modulus);
        for i in 0..self.rows {
            s.push_str(&self.row_vec(i).iter().join(" "));
            s.push('\n');
        }
        s
    }
}

impl FromStr for ExactMatrix {
    type Err = MatrixError;

    fn from_str(text: &str) -> Result<Self, MatrixError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header: Vec<u64> = lines
            .next()
            .ok_or_else(|| MatrixError::Parse("missing header".into()))?
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| MatrixError::Parse(format!("bad header token {t:?}")))
            })
            .collect::<Result<_, _>>()?;
        let [rows, cols, q] = header[..] else {
            return Err(MatrixError::Parse("header must be `rows cols q`".into()));
        };
        let modulus = PrimeModulus::new(q)?;
        let mut data = Vec::with_capacity((rows * cols) as usize);
        for (i, line) in lines.enumerate() {
            let row: Vec<i64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse()
                        .map_err(|_| MatrixError::Parse(format!("bad entry {t:?} on row {}", i + 1)))
                })
                .collect::<Result<_, _>>()?;
            if row.len() as u64 != cols {
                return Err(MatrixError::Parse(format!(
                    "row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            data.extend(row.into_iter().map(|v| modulus.reduce_signed(v) as u64));
        }
        if data.len() as u64 != rows * cols {
            return Err(MatrixError::Parse(format!(
                "expected {rows} rows, found {}",
                data.len() as u64 / cols.max(1)
            )));
        }
        ExactMatrix::new(rows as usize, cols as usize, modulus, data)
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactMatrix(F_{}) [", self.modulus)?;
        for i in 0..self.rows {
            write!(f, "[{}]", self.row_vec(i).iter().join(", "))?;
            if i + 1 < self.rows {
                write!(f, ", ")?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fq(q: u64) -> PrimeModulus {
        PrimeModulus::new(q).unwrap()
    }

    fn set(n: usize, m: &[usize]) -> IndexSet {
        IndexSet::new(n, m.to_vec()).unwrap()
    }

    /// Cofactor expansion along the first row; independent of elimination.
    fn cofactor_det(m: &ExactMatrix) -> u32 {
        let n = m.rows();
        let f = m.modulus();
        if n == 1 {
            return m.raw(0, 0);
        }
        let mut acc = 0;
        for j in 0..n {
            let rows = IndexSet::from_mask(n, ((1u64 << n) - 1) & !1);
            let cols = IndexSet::from_mask(n, ((1u64 << n) - 1) & !(1 << j));
            let sub = cofactor_det(&m.submatrix(&rows, &cols).unwrap());
            let term = f.mul(m.raw(0, j), sub);
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(4, fq(2)).rank(), 4);
        assert_eq!(ExactMatrix::zeros(3, 3, fq(3)).rank(), 0);
        assert_eq!(ExactMatrix::from_rows(fq(2), &[[1, 1], [1, 1]]).unwrap().rank(), 1);
    }

    #[test]
    fn minor_examples() {
        let i3 = ExactMatrix::identity(3, fq(7));
        assert_eq!(i3.minor(&set(3, &[1, 2]), &set(3, &[1, 2])).unwrap().value(), 1);
        assert_eq!(i3.minor(&set(3, &[1, 2]), &set(3, &[2, 3])).unwrap().value(), 0);
        let m = ExactMatrix::from_rows(fq(5), &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(m.minor(&set(2, &[1, 2]), &set(2, &[1, 2])).unwrap().value(), 3);
        assert!(matches!(
            i3.minor(&set(3, &[1]), &set(3, &[1, 2])),
            Err(MatrixError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn principal_minor_examples() {
        let f = fq(5);
        for t in 1..=4 {
            let pm = ExactMatrix::identity(4, f).principal_minors(t).unwrap();
            assert_eq!(pm.len(), [4, 6, 4, 1][t - 1]);
            assert!(pm.values().all(|v| v.value() == 1));
        }
        let hollow = ExactMatrix::from_rows(f, &[[0, 1, 2], [3, 0, 4], [1, 1, 0]]).unwrap();
        assert!(hollow.principal_minors_vanish(1).unwrap());
        let full = hollow.principal_minors(3).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(*full.values().next().unwrap(), hollow.det().unwrap());
        assert!(matches!(
            hollow.principal_minors(0),
            Err(MatrixError::SizeOutOfRange { .. })
        ));
        assert!(matches!(
            hollow.principal_minors(4),
            Err(MatrixError::SizeOutOfRange { .. })
        ));
    }

    #[test]
    fn elimination_det_matches_cofactor() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2, 3, 7, 101] {
            for n in 1..=6 {
                for _ in 0..20 {
                    let m = ExactMatrix::random(n, n, fq(q), &mut rng);
                    assert_eq!(m.det().unwrap().value(), cofactor_det(&m), "{m:?}");
                }
            }
        }
    }

    #[test]
    fn exterior_power_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = fq(7);
        let m = ExactMatrix::random(4, 3, f, &mut rng);
        assert_eq!(m.exterior_power(1).unwrap(), m);
        let sq = ExactMatrix::random(4, 4, f, &mut rng);
        let top = sq.exterior_power(4).unwrap();
        assert_eq!((top.rows(), top.cols()), (1, 1));
        assert_eq!(top.get(0, 0), sq.det().unwrap());
        assert!(m.exterior_power(4).is_err());
    }

    #[test]
    fn cauchy_binet() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = fq(7);
        for _ in 0..50 {
            let a = ExactMatrix::random(4, 3, f, &mut rng);
            let b = ExactMatrix::random(3, 4, f, &mut rng);
            let ab = a.mul(&b).unwrap();
            for t in 1..=3 {
                let lhs = ab.exterior_power(t).unwrap();
                let rhs = a.exterior_power(t).unwrap().mul(&b.exterior_power(t).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn rank_is_largest_nonvanishing_exterior_power() {
        // exhaustive over 3x3 matrices on F_2
        let f = fq(2);
        for code in 0u64..512 {
            let m = ExactMatrix::new(3, 3, f, (0..9).map(|b| code >> b & 1).collect()).unwrap();
            let largest = (1..=3)
                .rev()
                .find(|&t| !m.exterior_power(t).unwrap().is_zero())
                .unwrap_or(0);
            assert_eq!(m.rank(), largest);
        }
    }

    #[test]
    fn inverse_examples() {
        let f = fq(101);
        assert_eq!(
            ExactMatrix::identity(5, f).inverse().unwrap(),
            ExactMatrix::identity(5, f)
        );
        let two = ExactMatrix::from_rows(fq(5), &[[2]]).unwrap();
        assert_eq!(two.inverse().unwrap().raw(0, 0), 3);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 1..=6 {
            let m = ExactMatrix::random_invertible(n, f, &mut rng);
            let inv = m.inverse().unwrap();
            assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(n, f));
            assert_eq!(inv.inverse().unwrap(), m);
        }
        let sing = ExactMatrix::from_rows(f, &[[1, 2], [2, 4]]).unwrap();
        assert_eq!(sing.inverse(), Err(MatrixError::Singular));
    }

    #[test]
    fn jacobi_examples() {
        let f = fq(7);
        for n in 1..=4 {
            let id = ExactMatrix::identity(n, f);
            let diag = ExactMatrix::diagonal(f, &(1..=n as u64).collect::<Vec<_>>());
            for mask in 0..1u64 << n {
                let s = IndexSet::from_mask(n, mask);
                assert!(id.jacobi_complementary_minor_check(&s).unwrap());
                assert!(diag.jacobi_complementary_minor_check(&s).unwrap());
            }
        }
        let sing = ExactMatrix::zeros(3, 3, f);
        assert_eq!(
            sing.jacobi_complementary_minor_check(&set(3, &[1])),
            Err(MatrixError::Singular)
        );
    }

    #[test]
    fn symmetry_examples() {
        let f = fq(5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = ExactMatrix::random(4, 4, f, &mut rng);
        assert_eq!(m.apply_symmetry(&SymmetryAction::Permute(vec![1, 2, 3, 4])).unwrap(), m);
        assert!(m.apply_symmetry(&SymmetryAction::Permute(vec![1, 1, 3, 4])).is_err());
        assert_eq!(
            m.apply_symmetry(&SymmetryAction::ScaleRow { row: 2, factor: 5 }),
            Err(MatrixError::ZeroScale)
        );
        let mt = m.apply_symmetry(&SymmetryAction::Transpose).unwrap();
        for t in 1..=4 {
            assert_eq!(m.principal_minors(t).unwrap(), mt.principal_minors(t).unwrap());
        }
    }

    #[test]
    fn permutation_relabels_principal_minor_pattern() {
        let f = fq(5);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sigma = vec![3, 1, 4, 2];
        for _ in 0..100 {
            let m = ExactMatrix::random(4, 4, f, &mut rng);
            let pm = m.apply_symmetry(&SymmetryAction::Permute(sigma.clone())).unwrap();
            for t in 1..=4 {
                let before = m.principal_minors(t).unwrap();
                let after = pm.principal_minors(t).unwrap();
                for (s, v) in before {
                    let image = IndexSet::new(4, s.members().iter().map(|&i| sigma[i - 1]).collect()).unwrap();
                    assert_eq!(v.is_zero(), after[&image].is_zero());
                }
            }
        }
    }

    #[test]
    fn text_format() {
        let m: ExactMatrix = "2 3 5\n1 2 3\n-1 7 0\n".parse().unwrap();
        assert_eq!(m.raw_data(), &[1, 2, 3, 4, 2, 0]);
        assert_eq!(m.to_text(), "2 3 5\n1 2 3\n4 2 0\n");
        assert_eq!(m.to_text().parse::<ExactMatrix>().unwrap(), m);
        assert!("2 2 4\n1 0\n0 1".parse::<ExactMatrix>().is_err());
        assert!("2 2 5\n1 0\n".parse::<ExactMatrix>().is_err());
        assert!("2 2 5\n1 0 0\n0 1".parse::<ExactMatrix>().is_err());
    }
}
