//! Plücker coordinates, normal forms and the column/row-space map on
//! rank-`r` matrices.
//!
//! Coordinates are raw maximal minors, indexed by `r`-subsets in
//! lexicographic order, and every vector is scaled so that its first nonzero
//! coordinate is 1. Points of `Grass(r, n)(F_q)` are enumerated from reduced
//! row echelon forms, one pivot pattern at a time.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::field::{FieldElement, FieldError, PrimeModulus};
use crate::matrix::{det_in_place, ExactMatrix, IndexSet, MatrixError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrassError {
    #[error("invalid shape: {0}")]
    Shape(String),
    #[error("matrix has rank {found}, expected {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("selected block is singular")]
    SingularBlock,
    #[error("Plücker vectors live on different index systems: {0}")]
    IndexerMismatch(String),
    #[error("all coordinates are zero")]
    ZeroVector,
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of `r`-dimensional subspaces of `F_q^n`, or `None` on overflow.
pub fn gaussian_binomial(n: usize, r: usize, q: u64) -> Option<u128> {
    if r > n {
        return Some(0);
    }
    // [m, k]_q = [m-1, k-1]_q + q^k [m-1, k]_q
    let mut row = vec![0u128; r + 1];
    row[0] = 1;
    for m in 1..=n {
        for k in (1..=r.min(m)).rev() {
            let qk = (q as u128).checked_pow(k as u32)?;
            row[k] = row[k - 1].checked_add(qk.checked_mul(row[k])?)?;
        }
    }
    Some(row[r])
}

/// Lexicographic ranking of the `r`-subsets of `{1..n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetIndexer {
    n: usize,
    r: usize,
    subsets: Vec<IndexSet>,
}

impl SubsetIndexer {
    pub fn new(n: usize, r: usize) -> Result<Self, GrassError> {
        if r == 0 || r > n || n > 64 {
            return Err(GrassError::Shape(format!("need 0 < r <= n <= 64, got r={r}, n={n}")));
        }
        Ok(SubsetIndexer {
            n,
            r,
            subsets: IndexSet::subsets(n, r).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[IndexSet] {
        &self.subsets
    }

    pub fn unrank(&self, rank: usize) -> Option<&IndexSet> {
        self.subsets.get(rank)
    }

    /// Position of `s` in lexicographic order, computed combinatorially.
    pub fn rank(&self, s: &IndexSet) -> Option<usize> {
        if s.ambient() != self.n || s.len() != self.r {
            return None;
        }
        let mut rank = 0u128;
        let mut prev = 0;
        for (k, &v) in s.members().iter().enumerate() {
            for skipped in prev + 1..v {
                rank += binomial(self.n - skipped, self.r - k - 1);
            }
            prev = v;
        }
        Some(rank as usize)
    }
}

/// A point of `Grass(r, n)` as a projective Plücker vector over `F_q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PluckerVector {
    n: usize,
    r: usize,
    modulus: PrimeModulus,
    coords: Vec<u32>,
    canonical: bool,
}

impl PluckerVector {
    /// Wraps raw coordinates (lexicographic subset order), rejecting the zero
    /// vector. The result is not rescaled.
    pub fn from_coords(n: usize, r: usize, modulus: PrimeModulus, coords: Vec<u64>) -> Result<Self, GrassError> {
        let expected = binomial(n, r);
        if r == 0 || r > n || coords.len() as u128 != expected {
            return Err(GrassError::Shape(format!(
                "{} coordinates for Grass({r}, {n}), expected {expected}",
                coords.len()
            )));
        }
        let coords: Vec<u32> = coords.into_iter().map(|c| modulus.reduce(c)).collect();
        let first = coords.iter().find(|&&c| c != 0).ok_or(GrassError::ZeroVector)?;
        let canonical = *first == 1;
        Ok(PluckerVector {
            n,
            r,
            modulus,
            coords,
            canonical,
        })
    }

    pub(crate) fn from_raw_canonical(n: usize, r: usize, modulus: PrimeModulus, mut coords: Vec<u32>) -> Option<Self> {
        let first = *coords.iter().find(|&&c| c != 0)?;
        if first != 1 {
            let inv = modulus.inv(first).expect("nonzero");
            for c in coords.iter_mut() {
                *c = modulus.mul(*c, inv);
            }
        }
        Some(PluckerVector {
            n,
            r,
            modulus,
            coords,
            canonical: true,
        })
    }

    /// Scales so the lexicographically first nonzero coordinate is 1.
    pub fn canonicalize(&self) -> PluckerVector {
        PluckerVector::from_raw_canonical(self.n, self.r, self.modulus, self.coords.clone())
            .expect("Plücker vectors are nonzero")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    pub fn indexer(&self) -> SubsetIndexer {
        SubsetIndexer::new(self.n, self.r).expect("valid shape")
    }

    pub fn raw_coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn coord(&self, s: &IndexSet) -> Option<FieldElement> {
        let rank = self.indexer().rank(s)?;
        Some(self.modulus.element(self.coords[rank] as u64))
    }

    /// Bit `k` set iff the `k`-th coordinate (lexicographic) vanishes.
    pub fn zero_mask(&self) -> u128 {
        zero_mask(&self.coords)
    }

    /// Projective equality.
    pub fn same_point(&self, other: &PluckerVector) -> bool {
        self.n == other.n
            && self.r == other.r
            && self.modulus == other.modulus
            && self.canonicalize().coords == other.canonicalize().coords
    }

    /// The dual point in `Grass(n - r, n)`: the coordinate at `S` becomes the
    /// coordinate at the complement of `S`, up to sign.
    pub fn dual(&self) -> PluckerVector {
        let dual_idx = SubsetIndexer::new(self.n, self.n - self.r);
        match dual_idx {
            Ok(idx) => {
                let mine = self.indexer();
                let m = self.modulus;
                let coords = idx
                    .subsets()
                    .iter()
                    .map(|s| {
                        let c = s.complement();
                        let v = self.coords[mine.rank(&c).expect("complement has size r")];
                        // sign of the shuffle (c, s)
                        let inversions: usize = c
                            .members()
                            .iter()
                            .map(|&a| s.members().iter().filter(|&&b| b < a).count())
                            .sum();
                        if inversions % 2 == 1 {
                            m.neg(v)
                        } else {
                            v
                        }
                    })
                    .collect();
                PluckerVector::from_raw_canonical(self.n, self.n - self.r, m, coords).expect("nonzero")
            }
            Err(_) => panic!("dual of Grass({}, {}) is empty", self.r, self.n),
        }
    }

    /// Checks every quadratic Plücker relation
    /// `sum_l (-1)^l p(I + j_l) p(J - j_l) = 0` over `(r-1)`-subsets `I`
    /// and `(r+1)`-subsets `J`.
    pub fn satisfies_plucker_relations(&self) -> bool {
        let (n, r, m) = (self.n, self.r, self.modulus);
        if r == 1 || r + 1 > n {
            return true;
        }
        let idx = self.indexer();
        // p on an arbitrary tuple: alternating extension of the sorted coordinate
        let p = |tuple: &[usize]| -> u32 {
            let mut sorted = tuple.to_vec();
            let mut parity = 0;
            for i in 0..sorted.len() {
                for j in 0..sorted.len() - 1 - i {
                    if sorted[j] > sorted[j + 1] {
                        sorted.swap(j, j + 1);
                        parity ^= 1;
                    } else if sorted[j] == sorted[j + 1] {
                        return 0;
                    }
                }
            }
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return 0;
            }
            let v = self.coords[idx.rank(&IndexSet::new(n, sorted).expect("in range")).expect("size r")];
            if parity == 1 {
                m.neg(v)
            } else {
                v
            }
        };
        for i_set in (1..=n).combinations(r - 1) {
            for j_set in (1..=n).combinations(r + 1) {
                let mut acc = 0u32;
                for l in 0..=r {
                    let mut left = i_set.clone();
                    left.push(j_set[l]);
                    let right: Vec<usize> = j_set
                        .iter()
                        .enumerate()
                        .filter(|&(k, _)| k != l)
                        .map(|(_, &v)| v)
                        .collect();
                    let term = m.mul(p(&left), p(&right));
                    acc = if l % 2 == 0 { m.add(acc, term) } else { m.sub(acc, term) };
                }
                if acc != 0 {
                    return false;
                }
            }
        }
        true
    }
}

pub(crate) fn zero_mask(coords: &[u32]) -> u128 {
    coords
        .iter()
        .enumerate()
        .filter(|&(_, &c)| c == 0)
        .fold(0u128, |m, (k, _)| m | 1 << k)
}

impl fmt::Debug for PluckerVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Grass({}, {})/F_{} [{}]",
            self.r,
            self.n,
            self.modulus,
            self.coords.iter().join(":")
        )
    }
}

#[derive(Serialize, Deserialize)]
struct PluckerJson {
    n: usize,
    r: usize,
    q: u64,
    coords: Vec<u64>,
}

impl Serialize for PluckerVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PluckerJson {
            n: self.n,
            r: self.r,
            q: self.modulus.get() as u64,
            coords: self.coords.iter().map(|&c| c as u64).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PluckerVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PluckerJson::deserialize(d)?;
        let modulus = PrimeModulus::new(raw.q).map_err(D::Error::custom)?;
        if let Some(c) = raw.coords.iter().find(|&&c| c >= raw.q) {
            return Err(D::Error::custom(format!("coordinate {c} is not reduced mod {}", raw.q)));
        }
        PluckerVector::from_coords(raw.n, raw.r, modulus, raw.coords).map_err(D::Error::custom)
    }
}

fn check_full_rank(m: &ExactMatrix, r: usize) -> Result<(), GrassError> {
    let found = m.rank();
    if found != r {
        return Err(GrassError::RankMismatch { expected: r, found });
    }
    Ok(())
}

/// Plücker vector of the column space of an `n x r` matrix of rank `r`.
pub fn plucker_of_columns(b: &ExactMatrix) -> Result<PluckerVector, GrassError> {
    let (n, r) = (b.rows(), b.cols());
    if r > n {
        return Err(GrassError::Shape(format!("{n}x{r} matrix has more columns than rows")));
    }
    check_full_rank(b, r)?;
    plucker_of_rows(&b.transpose())
}

/// Plücker vector of the row space of an `r x n` matrix of rank `r`.
pub fn plucker_of_rows(c: &ExactMatrix) -> Result<PluckerVector, GrassError> {
    let (r, n) = (c.rows(), c.cols());
    if r > n {
        return Err(GrassError::Shape(format!("{r}x{n} matrix has more rows than columns")));
    }
    check_full_rank(c, r)?;
    let m = c.modulus();
    let mut buf = vec![0u32; r * r];
    let coords = IndexSet::subsets(n, r)
        .map(|s| {
            for i in 0..r {
                for (k, j) in s.positions().enumerate() {
                    buf[i * r + k] = c.raw(i, j);
                }
            }
            det_in_place(&mut buf, r, m)
        })
        .collect();
    Ok(PluckerVector::from_raw_canonical(n, r, m, coords).expect("full rank gives a nonzero vector"))
}

/// `B' = B * B(i_set)^-1`, the unique matrix with the same column space and
/// `B'(i_set) = I`.
pub fn normalize(b: &ExactMatrix, i_set: &IndexSet) -> Result<ExactMatrix, GrassError> {
    let r = b.cols();
    if i_set.len() != r || i_set.ambient() != b.rows() {
        return Err(GrassError::Shape(format!(
            "{i_set} does not select {r} of {} rows",
            b.rows()
        )));
    }
    let block = b.submatrix(i_set, &IndexSet::full(r))?;
    let inv = block.inverse().map_err(|_| GrassError::SingularBlock)?;
    Ok(b.mul(&inv)?)
}

/// `C' = C(j_set)^-1 * C`, the row-space analogue of [`normalize`].
pub fn normalize_rows(c: &ExactMatrix, j_set: &IndexSet) -> Result<ExactMatrix, GrassError> {
    Ok(normalize(&c.transpose(), j_set)?.transpose())
}

/// `A = left * core * right` with `left(i_set) = I` and `right(j_set) = I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub left: ExactMatrix,
    pub core: ExactMatrix,
    pub right: ExactMatrix,
    pub i_set: IndexSet,
    pub j_set: IndexSet,
}

impl Factorization {
    pub fn reconstruct(&self) -> ExactMatrix {
        self.left
            .mul(&self.core)
            .and_then(|m| m.mul(&self.right))
            .expect("factor shapes are conformable")
    }
}

/// Normalized factorization on the lexicographically least chart.
pub fn factor(a: &ExactMatrix, r: usize) -> Result<Factorization, GrassError> {
    if !a.is_square() {
        return Err(GrassError::Shape(format!(
            "{}x{} matrix is not square",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    check_full_rank(a, r)?;
    if r == 0 {
        return Err(GrassError::Shape("rank 0 has no factorization".into()));
    }
    let all = IndexSet::full(n);
    let i_set = IndexSet::subsets(n, r)
        .find(|s| a.submatrix(s, &all).map(|m| m.rank() == r).unwrap_or(false))
        .expect("rank r guarantees r independent rows");
    let j_set = IndexSet::subsets(n, r)
        .find(|s| a.minor(&i_set, s).map(|d| !d.is_zero()).unwrap_or(false))
        .expect("independent rows contain an invertible block");
    let core = a.submatrix(&i_set, &j_set)?;
    let core_inv = core.inverse()?;
    let left = a.submatrix(&all, &j_set)?.mul(&core_inv)?;
    let right = core_inv.mul(&a.submatrix(&i_set, &all)?)?;
    Ok(Factorization {
        left,
        core,
        right,
        i_set,
        j_set,
    })
}

/// `A -> (col A, row A)` for a matrix of rank exactly `r`.
pub fn theta(a: &ExactMatrix, r: usize) -> Result<(PluckerVector, PluckerVector), GrassError> {
    let f = factor(a, r)?;
    Ok((plucker_of_columns(&f.left)?, plucker_of_rows(&f.right)?))
}

/// True iff `g_S * h_S = 0` for every index `S`.
pub fn componentwise_product_vanishes(g: &PluckerVector, h: &PluckerVector) -> Result<bool, GrassError> {
    if g.n != h.n || g.r != h.r || g.modulus != h.modulus {
        return Err(GrassError::IndexerMismatch(format!(
            "Grass({}, {})/F_{} vs Grass({}, {})/F_{}",
            g.r, g.n, g.modulus, h.r, h.n, h.modulus
        )));
    }
    Ok(g.coords.iter().zip(&h.coords).all(|(&a, &b)| a == 0 || b == 0))
}

/// The echelon cells of `Grass(r, n)`: one per pivot set.
#[derive(Debug, Clone)]
pub struct PivotCell {
    pub pivots: Vec<usize>,
    /// `(row, col)` positions (zero-based) of the free entries.
    pub free: Vec<(usize, usize)>,
}

impl PivotCell {
    pub fn all(n: usize, r: usize) -> Vec<PivotCell> {
        (0..n)
            .combinations(r)
            .map(|pivots| {
                let free = pivots
                    .iter()
                    .enumerate()
                    .flat_map(|(row, &p)| (p + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (row, c)))
                    .collect();
                PivotCell { pivots, free }
            })
            .collect()
    }

    pub fn size(&self, q: u64) -> u128 {
        (q as u128).pow(self.free.len() as u32)
    }
}

/// Streams the points of one echelon cell as raw canonical coordinate
/// vectors.
pub fn visit_cell<F: FnMut(&[u32])>(n: usize, r: usize, modulus: PrimeModulus, cell: &PivotCell, mut visit: F) {
    let q = modulus.get();
    let mut mat = vec![0u32; r * n];
    for (row, &p) in cell.pivots.iter().enumerate() {
        mat[row * n + p] = 1;
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(r).collect();
    let mut coords = vec![0u32; subsets.len()];
    let mut buf = vec![0u32; r * r];
    let mut digits = vec![0u32; cell.free.len()];
    loop {
        for (k, cols) in subsets.iter().enumerate() {
            for i in 0..r {
                for (c, &j) in cols.iter().enumerate() {
                    buf[i * r + c] = mat[i * n + j];
                }
            }
            coords[k] = det_in_place(&mut buf, r, modulus);
        }
        visit(&coords);
        // odometer over the free entries
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return;
            }
            let (row, col) = cell.free[pos];
            digits[pos] += 1;
            if digits[pos] == q {
                digits[pos] = 0;
                mat[row * n + col] = 0;
                pos += 1;
            } else {
                mat[row * n + col] = digits[pos];
                break;
            }
        }
    }
}

/// Cost of a full enumeration, in coordinate evaluations.
pub fn enumeration_cost(n: usize, r: usize, q: u64) -> Option<u128> {
    gaussian_binomial(n, r, q)?.checked_mul(binomial(n, r))
}

/// Every point of `Grass(r, n)(F_q)` exactly once, in echelon-cell order.
pub fn enumerate_grassmannian(
    n: usize,
    r: usize,
    modulus: PrimeModulus,
    budget: &Budget,
) -> Result<Vec<PluckerVector>, GrassError> {
    SubsetIndexer::new(n, r)?;
    budget.check(
        format!("Grass({r}, {n})(F_{modulus})"),
        enumeration_cost(n, r, modulus.get() as u64),
    )?;
    let mut out = Vec::new();
    for cell in PivotCell::all(n, r) {
        visit_cell(n, r, modulus, &cell, |coords| {
            out.push(
                PluckerVector::from_raw_canonical(n, r, modulus, coords.to_vec())
                    .expect("echelon rows are independent"),
            );
        });
    }
    Ok(out)
}
