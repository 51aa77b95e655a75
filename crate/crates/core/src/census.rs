//! Exact point counts over `F_q`.
//!
//! Matrix strata are counted by sharded brute force, Grassmannian strata by
//! streaming the echelon cells, and the two are tied together by the bundle
//! identity `|Y(n, t, t)| = |H| * |GL(t, q)|`. The `verify_*` functions turn
//! the decomposition statements into exhaustive set comparisons.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Instant;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::budget::{Budget, BudgetExceeded};
use crate::field::{FieldError, PrimeModulus};
use crate::graphs::{
    coordinate_edges, graph_of_point, graph_of_zero_mask, is_permissible, minimal_permissible_supergraphs, GraphError,
    SimpleGraph,
};
use crate::grassmannian::{
    enumeration_cost, plucker_of_columns, plucker_of_rows, theta, visit_cell, zero_mask, GrassError, PivotCell,
};
use crate::matrix::{det_in_place, rank_in_place, ExactMatrix, IndexSet, MatrixError};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("invalid stratum: {0}")]
    Spec(String),
    #[error("locus empty at q = {0}; increase q or report codim = infinity")]
    EmptyLocus(u32),
    #[error("dimension estimate needs counts at two distinct primes")]
    TooFewPrimes,
    #[error("integer overflow computing {0}")]
    Overflow(String),
    #[error("thread pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Grass(#[from] GrassError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankSpec {
    Any,
    Exact(usize),
}

impl fmt::Display for RankSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankSpec::Any => f.write_str("any"),
            RankSpec::Exact(r) => write!(f, "{r}"),
        }
    }
}

impl std::str::FromStr for RankSpec {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, CensusError> {
        if s == "any" {
            return Ok(RankSpec::Any);
        }
        s.parse()
            .map(RankSpec::Exact)
            .map_err(|_| CensusError::Spec(format!("rank must be an integer or \"any\", got {s:?}")))
    }
}

impl Serialize for RankSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RankSpec::Any => s.serialize_str("any"),
            RankSpec::Exact(r) => s.serialize_u64(*r as u64),
        }
    }
}

impl<'de> Deserialize<'de> for RankSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(usize),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(r) => Ok(RankSpec::Exact(r)),
            Repr::Str(s) if s == "any" => Ok(RankSpec::Any),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("bad rank {s:?}"))),
        }
    }
}

/// `n x n` matrices over `F_q` of the given rank whose principal `t`-minors
/// all vanish.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StratumSpec {
    pub n: usize,
    pub r: RankSpec,
    pub t: usize,
    pub q: PrimeModulus,
}

impl StratumSpec {
    pub fn new(n: usize, r: RankSpec, t: usize, q: PrimeModulus) -> Result<Self, CensusError> {
        if !(1..=n).contains(&t) {
            return Err(CensusError::Spec(format!("need 1 <= t <= n, got t = {t}, n = {n}")));
        }
        if let RankSpec::Exact(r) = r {
            if r > n {
                return Err(CensusError::Spec(format!("rank {r} exceeds n = {n}")));
            }
        }
        Ok(StratumSpec { n, r, t, q })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusMethod {
    MatrixBruteforce,
    GrassmannPairs,
    GraphStratum,
}

impl fmt::Display for CensusMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CensusMethod::MatrixBruteforce => "matrix-bruteforce",
            CensusMethod::GrassmannPairs => "grassmann-pairs",
            CensusMethod::GraphStratum => "graph-stratum",
        })
    }
}

impl std::str::FromStr for CensusMethod {
    type Err = CensusError;

    fn from_str(s: &str) -> Result<Self, CensusError> {
        match s {
            "matrix-bruteforce" => Ok(CensusMethod::MatrixBruteforce),
            "grassmann-pairs" => Ok(CensusMethod::GrassmannPairs),
            "graph-stratum" => Ok(CensusMethod::GraphStratum),
            _ => Err(CensusError::Spec(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRecord {
    pub spec: StratumSpec,
    pub count: u64,
    pub method: CensusMethod,
    pub elapsed_ms: u64,
}

#[derive(Serialize, Deserialize)]
struct RecordRepr {
    n: usize,
    r: RankSpec,
    t: usize,
    q: PrimeModulus,
    count: String,
    method: CensusMethod,
    elapsed_ms: u64,
}

impl Serialize for CensusRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RecordRepr {
            n: self.spec.n,
            r: self.spec.r,
            t: self.spec.t,
            q: self.spec.q,
            count: self.count.to_string(),
            method: self.method,
            elapsed_ms: self.elapsed_ms,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CensusRecord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = RecordRepr::deserialize(d)?;
        let spec = StratumSpec::new(repr.n, repr.r, repr.t, repr.q).map_err(serde::de::Error::custom)?;
        let count = repr
            .count
            .parse()
            .map_err(|_| serde::de::Error::custom(format!("count {:?} is not a decimal integer", repr.count)))?;
        Ok(CensusRecord {
            spec,
            count,
            method: repr.method,
            elapsed_ms: repr.elapsed_ms,
        })
    }
}

pub const CSV_HEADER: &str = "n,r,t,q,count,method,elapsed_ms";

impl CensusRecord {
    /// Same record with the timing zeroed, for byte-stable output.
    pub fn without_timing(&self) -> CensusRecord {
        CensusRecord {
            elapsed_ms: 0,
            ..self.clone()
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.spec.n, self.spec.r, self.spec.t, self.spec.q, self.count, self.method, self.elapsed_ms
        )
    }
}

pub fn records_to_csv(records: &[CensusRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn records_from_csv(text: &str) -> Result<Vec<CensusRecord>, CensusError> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(CensusError::Spec("missing CSV header".into()));
    }
    let bad = |line: &str| CensusError::Spec(format!("bad CSV row {line:?}"));
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            let [n, r, t, q, count, method, ms] = f[..] else {
                return Err(bad(line));
            };
            let q = PrimeModulus::new(q.parse().map_err(|_| bad(line))?)?;
            Ok(CensusRecord {
                spec: StratumSpec::new(
                    n.parse().map_err(|_| bad(line))?,
                    r.parse()?,
                    t.parse().map_err(|_| bad(line))?,
                    q,
                )?,
                count: count.parse().map_err(|_| bad(line))?,
                method: method.parse()?,
                elapsed_ms: ms.parse().map_err(|_| bad(line))?,
            })
        })
        .collect()
}

/// Runs `f` on a pool of `jobs` workers; `jobs == 0` uses the global pool.
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T, CensusError> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CensusError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}

fn elapsed_ms(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

/// Projected cost of the matrix brute force, in evaluated cells.
pub fn bruteforce_cost(n: usize, q: u64) -> Option<u128> {
    (q as u128).checked_pow((n * n) as u32)?.checked_mul((n * n) as u128)
}

struct MatrixKernel {
    n: usize,
    t: usize,
    r: RankSpec,
    m: PrimeModulus,
    subsets: Vec<Vec<usize>>,
}

impl MatrixKernel {
    fn accepts(&self, a: &[u32], buf: &mut [u32]) -> bool {
        let (n, t) = (self.n, self.t);
        for s in &self.subsets {
            for (i, &si) in s.iter().enumerate() {
                for (j, &sj) in s.iter().enumerate() {
                    buf[i * t + j] = a[si * n + sj];
                }
            }
            if det_in_place(buf, t, self.m) != 0 {
                return false;
            }
        }
        match self.r {
            RankSpec::Any => true,
            RankSpec::Exact(r) => {
                buf[..n * n].copy_from_slice(a);
                rank_in_place(buf, n, n, self.m) == r
            }
        }
    }

    /// Counts the matrices whose first `prefix.len()` entries (row-major)
    /// are fixed to `prefix`.
    fn count_shard(&self, prefix: &[u32]) -> u64 {
        let n2 = self.n * self.n;
        let q = self.m.get();
        let k = prefix.len();
        let mut a = vec![0u32; n2];
        a[..k].copy_from_slice(prefix);
        let mut buf = vec![0u32; n2];
        let mut count = 0;
        loop {
            if self.accepts(&a, &mut buf) {
                count += 1;
            }
            let mut pos = n2;
            loop {
                if pos == k {
                    return count;
                }
                pos -= 1;
                a[pos] += 1;
                if a[pos] == q {
                    a[pos] = 0;
                } else {
                    break;
                }
            }
        }
    }
}

fn shard_prefixes(q: u32, len: usize) -> Vec<Vec<u32>> {
    (0..len).map(|_| 0..q).multi_cartesian_product().collect()
}

/// Exact size of the stratum by enumerating all `q^(n^2)` matrices. The
/// space is split on its leading entries and the shard counts are summed in
/// shard order, so the result does not depend on the worker count.
pub fn count_y_bruteforce(spec: &StratumSpec, budget: &Budget) -> Result<CensusRecord, CensusError> {
    let start = Instant::now();
    let StratumSpec { n, r, t, q } = *spec;
    budget.check(
        format!("{n}x{n} matrices over F_{q}"),
        bruteforce_cost(n, q.get() as u64),
    )?;
    let kernel = MatrixKernel {
        n,
        t,
        r,
        m: q,
        subsets: (0..n).combinations(t).collect(),
    };
    let target = 2 * rayon::current_num_threads() as u64;
    let mut k = 0;
    while k < n * n && (q.get() as u64).pow(k as u32) < target {
        k += 1;
    }
    let shards: Vec<u64> = shard_prefixes(q.get(), k)
        .par_iter()
        .map(|p| kernel.count_shard(p))
        .collect();
    Ok(CensusRecord {
        spec: *spec,
        count: shards.iter().sum(),
        method: CensusMethod::MatrixBruteforce,
        elapsed_ms: elapsed_ms(start),
    })
}

/// Zero-mask histogram of `Grass(r, n)(F_q)`, one entry per pattern of
/// vanishing coordinates.
pub fn zero_mask_histogram(
    n: usize,
    r: usize,
    q: PrimeModulus,
    budget: &Budget,
) -> Result<BTreeMap<u128, u64>, CensusError> {
    if r == 0 || r > n || n > 16 {
        return Err(CensusError::Spec(format!(
            "Grass({r}, {n}) outside the supported range"
        )));
    }
    budget.check(
        format!("Grass({r}, {n})(F_{q})"),
        enumeration_cost(n, r, q.get() as u64),
    )?;
    let cells = PivotCell::all(n, r);
    let partial: Vec<HashMap<u128, u64>> = cells
        .par_iter()
        .map(|cell| {
            let mut h = HashMap::new();
            visit_cell(n, r, q, cell, |coords| *h.entry(zero_mask(coords)).or_insert(0) += 1);
            h
        })
        .collect();
    let mut out = BTreeMap::new();
    for h in partial {
        for (mask, c) in h {
            *out.entry(mask).or_insert(0) += c;
        }
    }
    Ok(out)
}

/// Ordered pairs of points of `Grass(t, n)(F_q)` with `g_S h_S = 0` for
/// every `S`.
pub fn count_h_pairs(n: usize, t: usize, q: PrimeModulus, budget: &Budget) -> Result<CensusRecord, CensusError> {
    let start = Instant::now();
    let spec = StratumSpec::new(n, RankSpec::Exact(t), t, q)?;
    let hist = zero_mask_histogram(n, t, q, budget)?;
    let coords = crate::grassmannian::binomial(n, t) as u32;
    let all = if coords == 128 {
        u128::MAX
    } else {
        (1u128 << coords) - 1
    };
    let supports: Vec<(u128, u64)> = hist.iter().map(|(&z, &c)| (all & !z, c)).collect();
    let mut count = 0u64;
    for &(s1, c1) in &supports {
        for &(s2, c2) in &supports {
            if s1 & s2 == 0 {
                count = c1
                    .checked_mul(c2)
                    .and_then(|p| count.checked_add(p))
                    .ok_or_else(|| CensusError::Overflow("pair count".into()))?;
            }
        }
    }
    Ok(CensusRecord {
        spec,
        count,
        method: CensusMethod::GrassmannPairs,
        elapsed_ms: elapsed_ms(start),
    })
}

/// `|GL(r, q)| = prod_{i < r} (q^r - q^i)`.
pub fn gl_order(r: usize, q: u64) -> Result<u64, CensusError> {
    if r == 0 {
        return Err(CensusError::Spec("GL(0) is not counted".into()));
    }
    let overflow = || CensusError::Overflow(format!("|GL({r}, {q})|"));
    let qr = q.checked_pow(r as u32).ok_or_else(overflow)?;
    (0..r).try_fold(1u64, |acc, i| {
        acc.checked_mul(qr - q.pow(i as u32)).ok_or_else(overflow)
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleCheck {
    pub matrices: CensusRecord,
    pub pairs: CensusRecord,
    pub gl: u64,
    pub holds: bool,
}

pub fn verify_bundle_count(n: usize, t: usize, q: PrimeModulus, budget: &Budget) -> Result<BundleCheck, CensusError> {
    let spec = StratumSpec::new(n, RankSpec::Exact(t), t, q)?;
    let matrices = count_y_bruteforce(&spec, budget)?;
    let pairs = count_h_pairs(n, t, q, budget)?;
    let gl = gl_order(t, q.get() as u64)?;
    let holds = pairs.count.checked_mul(gl) == Some(matrices.count);
    Ok(BundleCheck {
        matrices,
        pairs,
        gl,
        holds,
    })
}

/// Graphs of all points of `Grass(n - 2, n)(F_q)`, bucketed by edge set.
#[derive(Debug, Clone)]
pub struct GraphCensus {
    pub n: usize,
    pub q: PrimeModulus,
    /// Edge bit strings (see [`SimpleGraph::edge_bits`]) to point counts.
    pub counts: BTreeMap<u128, u64>,
}

impl GraphCensus {
    pub fn new(n: usize, q: PrimeModulus, budget: &Budget) -> Result<Self, CensusError> {
        if !(3..=16).contains(&n) {
            return Err(CensusError::Spec(format!("graph census needs 3 <= n <= 16, got {n}")));
        }
        let table = coordinate_edges(n);
        let mut counts = BTreeMap::new();
        for (mask, c) in zero_mask_histogram(n, n - 2, q, budget)? {
            *counts
                .entry(graph_of_zero_mask(n, &table, mask).edge_bits())
                .or_insert(0) += c;
        }
        Ok(GraphCensus { n, q, counts })
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn graphs(&self) -> impl Iterator<Item = (SimpleGraph, u64)> + '_ {
        self.counts
            .iter()
            .map(|(&b, &c)| (SimpleGraph::from_edge_bits(self.n, b).expect("valid order"), c))
    }

    /// Points whose graph is exactly `g`.
    pub fn exact_count(&self, g: &SimpleGraph) -> u64 {
        self.counts.get(&g.edge_bits()).copied().unwrap_or(0)
    }

    /// Points whose graph contains `g`.
    pub fn closure_count(&self, g: &SimpleGraph) -> u64 {
        let need = g.edge_bits();
        self.counts
            .iter()
            .filter(|(&b, _)| b & need == need)
            .map(|(_, &c)| c)
            .sum()
    }

    /// Record for the closure of the stratum of `g`, filed under
    /// `r = t = n - 2`.
    pub fn record(&self, g: &SimpleGraph) -> Result<CensusRecord, CensusError> {
        Ok(CensusRecord {
            spec: StratumSpec::new(self.n, RankSpec::Exact(self.n - 2), self.n - 2, self.q)?,
            count: self.closure_count(g),
            method: CensusMethod::GraphStratum,
            elapsed_ms: 0,
        })
    }
}

/// Number of points of `Grass(n - 2, n)(F_q)` whose graph contains `g`.
pub fn count_graph_stratum(g: &SimpleGraph, q: PrimeModulus, budget: &Budget) -> Result<CensusRecord, CensusError> {
    let start = Instant::now();
    let census = GraphCensus::new(g.order(), q, budget)?;
    let mut rec = census.record(g)?;
    rec.elapsed_ms = elapsed_ms(start);
    Ok(rec)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionEstimate {
    pub dimension: i64,
    pub estimate: f64,
    pub residual: f64,
    pub q_low: u32,
    pub q_high: u32,
}

/// `log(c2 / c1) / log(q2 / q1)` at the two largest primes.
pub fn estimate_dimension_from_counts(counts: &[(u32, u64)]) -> Result<DimensionEstimate, CensusError> {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    sorted.dedup_by_key(|(q, _)| *q);
    if sorted.len() < 2 || sorted.len() != counts.len() {
        return Err(CensusError::TooFewPrimes);
    }
    let (q1, c1) = sorted[sorted.len() - 2];
    let (q2, c2) = sorted[sorted.len() - 1];
    for (q, c) in [(q1, c1), (q2, c2)] {
        if c == 0 {
            return Err(CensusError::EmptyLocus(q));
        }
    }
    let estimate = (c2 as f64 / c1 as f64).ln() / (q2 as f64 / q1 as f64).ln();
    let dimension = estimate.round();
    Ok(DimensionEstimate {
        dimension: dimension as i64,
        estimate,
        residual: (estimate - dimension).abs(),
        q_low: q1,
        q_high: q2,
    })
}

pub fn estimate_dimension(records: &[CensusRecord]) -> Result<DimensionEstimate, CensusError> {
    let counts: Vec<(u32, u64)> = records.iter().map(|r| (r.spec.q.get(), r.count)).collect();
    estimate_dimension_from_counts(&counts)
}

/// Outcome of an exhaustive check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    pub name: String,
    /// Points or cases examined.
    pub checked: u64,
    pub counterexample: Option<String>,
}

impl Verification {
    fn new(name: impl Into<String>) -> Self {
        Verification {
            name: name.into(),
            checked: 0,
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn absorb(&mut self, other: Verification) {
        self.checked += other.checked;
        if self.counterexample.is_none() {
            self.counterexample = other.counterexample;
        }
    }
}

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.counterexample {
            None => write!(f, "{}: pass ({} checked)", self.name, self.checked),
            Some(c) => write!(
                f,
                "{}: FAIL after {} checked; counterexample: {c}",
                self.name, self.checked
            ),
        }
    }
}

/// A term `coeff * x_{v1} * x_{v2} * ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: i64,
    pub vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    pub terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn var(v: usize) -> Self {
        Polynomial {
            terms: vec![Monomial {
                coeff: 1,
                vars: vec![v],
            }],
        }
    }

    /// `x_a x_b - x_c x_d`.
    pub fn binomial(a: usize, b: usize, c: usize, d: usize) -> Self {
        Polynomial {
            terms: vec![
                Monomial {
                    coeff: 1,
                    vars: vec![a, b],
                },
                Monomial {
                    coeff: -1,
                    vars: vec![c, d],
                },
            ],
        }
    }

    /// Determinant of the square matrix whose `(i, j)` entry is the variable
    /// `var(i, j)`.
    pub fn determinant(k: usize, var: impl Fn(usize, usize) -> usize) -> Self {
        let terms = (0..k)
            .permutations(k)
            .map(|p| {
                let inversions = (0..k).tuple_combinations().filter(|&(i, j)| p[i] > p[j]).count();
                Monomial {
                    coeff: if inversions % 2 == 0 { 1 } else { -1 },
                    vars: (0..k).map(|i| var(i, p[i])).collect(),
                }
            })
            .collect();
        Polynomial { terms }
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.iter().flat_map(|t| t.vars.iter().copied()).max()
    }

    pub fn eval(&self, point: &[u32], m: PrimeModulus) -> u32 {
        self.terms.iter().fold(0, |acc, t| {
            let v = t.vars.iter().fold(m.reduce_signed(t.coeff), |p, &x| m.mul(p, point[x]));
            m.add(acc, v)
        })
    }
}

/// Common zeros in `F_q^v` of a list of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingLocusSpec {
    pub vars: usize,
    pub constraints: Vec<Polynomial>,
    pub q: PrimeModulus,
}

impl VanishingLocusSpec {
    pub fn new(vars: usize, constraints: Vec<Polynomial>, q: PrimeModulus) -> Result<Self, CensusError> {
        if let Some(v) = constraints.iter().filter_map(Polynomial::max_var).max() {
            if v >= vars {
                return Err(CensusError::Spec(format!(
                    "variable {v} out of range for {vars} variables"
                )));
            }
        }
        Ok(VanishingLocusSpec { vars, constraints, q })
    }

    pub fn contains(&self, point: &[u32]) -> bool {
        self.constraints.iter().all(|p| p.eval(point, self.q) == 0)
    }
}

fn for_each_point(vars: usize, q: u32, mut f: impl FnMut(&[u32]) -> bool) {
    let mut x = vec![0u32; vars];
    loop {
        if !f(&x) {
            return;
        }
        let mut pos = 0;
        loop {
            if pos == vars {
                return;
            }
            x[pos] += 1;
            if x[pos] == q {
                x[pos] = 0;
                pos += 1;
            } else {
                break;
            }
        }
    }
}

/// Exhaustively checks `V(lhs) = V(rhs[0]) ∪ V(rhs[1]) ∪ ...` over
/// `F_q^vars`.
pub fn verify_union(
    name: &str,
    lhs: &VanishingLocusSpec,
    rhs: &[VanishingLocusSpec],
    budget: &Budget,
) -> Result<Verification, CensusError> {
    let q = lhs.q;
    if rhs.iter().any(|r| r.vars != lhs.vars || r.q != q) {
        return Err(CensusError::Spec("loci live in different spaces".into()));
    }
    budget.check(
        format!("{name} over F_{q}^{}", lhs.vars),
        (q.get() as u128).checked_pow(lhs.vars as u32),
    )?;
    let mut v = Verification::new(name);
    for_each_point(lhs.vars, q.get(), |x| {
        v.checked += 1;
        let left = lhs.contains(x);
        if left != rhs.iter().any(|r| r.contains(x)) {
            v.counterexample = Some(format!(
                "{x:?} lies {} the left-hand locus only",
                if left { "in" } else { "outside" }
            ));
            return false;
        }
        true
    });
    Ok(v)
}

/// For every `2 x s` matrix over `F_q` and every pair of 2-minors sharing
/// a column `b`: if both vanish then column `b` is zero or the third minor
/// on the same three columns vanishes.
pub fn verify_overlap_rule(s: usize, q: PrimeModulus, budget: &Budget) -> Result<Verification, CensusError> {
    if s < 3 {
        return Err(CensusError::Spec(format!("need at least three columns, got {s}")));
    }
    budget.check(
        format!("2x{s} matrices over F_{q}"),
        (q.get() as u128).checked_pow(2 * s as u32),
    )?;
    let m = q;
    let minor = |x: &[u32], a: usize, b: usize| m.sub(m.mul(x[a], x[s + b]), m.mul(x[b], x[s + a]));
    let mut v = Verification::new(format!("overlap rule s={s} q={q}"));
    for_each_point(2 * s, q.get(), |x| {
        v.checked += 1;
        for b in 0..s {
            for (a, c) in (0..s).filter(|&c| c != b).tuple_combinations() {
                if minor(x, a, b) == 0 && minor(x, b, c) == 0 && !(x[b] == 0 && x[s + b] == 0) && minor(x, a, c) != 0 {
                    v.counterexample = Some(format!("rows {:?} / {:?}, columns {a},{b},{c}", &x[..s], &x[s..]));
                    return false;
                }
            }
        }
        true
    });
    Ok(v)
}

/// Loci for the `3 x 3` determinant-plus-nested-2-minor statement under the
/// row order `i` and column order `j` (zero-based permutations of 0..3).
pub struct Case3Loci {
    pub det_mu: VanishingLocusSpec,
    pub p1: VanishingLocusSpec,
    pub p2: VanishingLocusSpec,
    /// `(mu, D^{j2 j3}_{i1 i2})`
    pub mu_d23: VanishingLocusSpec,
    /// `(mu, D^{j1 j3}_{i1 i2}, D^{j2 j3}_{i1 i2})`
    pub mu_d13_d23: VanishingLocusSpec,
    /// `(x_{i1 j2}, x_{i2 j2})`
    pub column_j2: VanishingLocusSpec,
}

pub fn case3_loci(i: [usize; 3], j: [usize; 3], q: PrimeModulus) -> Result<Case3Loci, CensusError> {
    let x = |r: usize, c: usize| 3 * r + c;
    // D^{tu}_{rs} = x_rt x_su - x_ru x_st
    let d = |r: usize, s: usize, t: usize, u: usize| Polynomial::binomial(x(r, t), x(s, u), x(r, u), x(s, t));
    let mu = d(i[0], i[1], j[0], j[1]);
    let d13 = d(i[0], i[1], j[0], j[2]);
    let d23 = d(i[0], i[1], j[1], j[2]);
    let locus = |ps: Vec<Polynomial>| VanishingLocusSpec::new(9, ps, q);
    Ok(Case3Loci {
        det_mu: locus(vec![Polynomial::determinant(3, x), mu.clone()])?,
        p1: locus(vec![mu.clone(), d13.clone(), d23.clone()])?,
        p2: locus(vec![mu.clone(), d(i[0], i[2], j[0], j[1]), d(i[1], i[2], j[0], j[1])])?,
        mu_d23: locus(vec![mu.clone(), d23.clone()])?,
        mu_d13_d23: locus(vec![mu, d13, d23])?,
        column_j2: locus(vec![Polynomial::var(x(i[0], j[1])), Polynomial::var(x(i[1], j[1]))])?,
    })
}

fn case3_single(i: [usize; 3], j: [usize; 3], q: PrimeModulus, budget: &Budget) -> Result<Verification, CensusError> {
    let l = case3_loci(i, j, q)?;
    let tag = format!("i={:?} j={:?}", i.map(|v| v + 1), j.map(|v| v + 1));
    let mut v = verify_union(
        &format!("V(det, mu) = V(P1) u V(P2) [{tag}]"),
        &l.det_mu,
        &[l.p1, l.p2],
        budget,
    )?;
    v.absorb(verify_union(
        &format!("intermediate [{tag}]"),
        &l.mu_d23,
        &[l.mu_d13_d23, l.column_j2],
        budget,
    )?);
    Ok(v)
}

/// The two-component decomposition of `V(det X, mu)` for a `3 x 3` matrix,
/// exhaustively over `F_q^9`: at the identity index choice, then at every
/// other choice when `q = 3` or at `extra` seeded random choices otherwise.
pub fn verify_case3(q: PrimeModulus, extra: usize, seed: u64, budget: &Budget) -> Result<Verification, CensusError> {
    let id = [0, 1, 2];
    let mut choices = vec![(id, id)];
    let perms: Vec<[usize; 3]> = (0..3).permutations(3).map(|p| [p[0], p[1], p[2]]).collect();
    let others: Vec<_> = perms
        .iter()
        .flat_map(|&i| perms.iter().map(move |&j| (i, j)))
        .filter(|&c| c != (id, id))
        .collect();
    if q.get() == 3 {
        choices.extend(others);
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        choices.extend(others.choose_multiple(&mut rng, extra).copied());
    }
    let mut v = Verification::new(format!("case3 q={q}"));
    for (i, j) in choices {
        v.absorb(case3_single(i, j, q, budget)?);
        if !v.passed() {
            break;
        }
    }
    Ok(v)
}

/// The chart computation with two overlapping 2-minors in the variables
/// `u61 u62 u63 u71 u72 u73`: the locus splits as `V(P1) ∪ V(P2)` with
/// neither component inside the other.
pub fn verify_m2_overlapping2(q: PrimeModulus) -> Result<Verification, CensusError> {
    let [u61, u62, u63, u71, u72, u73] = [0, 1, 2, 3, 4, 5];
    let locus = |ps| VanishingLocusSpec::new(6, ps, q);
    let ideal = locus(vec![
        Polynomial::binomial(u61, u72, u62, u71),
        Polynomial::binomial(u62, u73, u63, u72),
    ])?;
    let p1 = locus(vec![
        Polynomial::binomial(u61, u72, u62, u71),
        Polynomial::binomial(u62, u73, u63, u72),
        Polynomial::binomial(u61, u73, u63, u71),
    ])?;
    let p2 = locus(vec![Polynomial::var(u62), Polynomial::var(u72)])?;
    let mut v = verify_union(
        &format!("m2 overlapping 2-minors q={q}"),
        &ideal,
        &[p1.clone(), p2.clone()],
        &Budget::unlimited(),
    )?;
    if v.passed() {
        let (mut only1, mut only2) = (false, false);
        for_each_point(6, q.get(), |x| {
            let (a, b) = (p1.contains(x), p2.contains(x));
            only1 |= a && !b;
            only2 |= b && !a;
            true
        });
        if !(only1 && only2) {
            v.counterexample = Some("one component contains the other".into());
        }
    }
    Ok(v)
}

/// Jacobi's complementary-minor identity on random invertible matrices of
/// sizes `2..=max_n`, every principal selection per matrix.
pub fn verify_jacobi(max_n: usize, q: PrimeModulus, samples: usize, seed: u64) -> Result<Verification, CensusError> {
    if max_n < 2 {
        return Err(CensusError::Spec("need max_n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Verification::new(format!("jacobi n<={max_n} q={q}"));
    for k in 0..samples {
        let n = 2 + k % (max_n - 1);
        let a = ExactMatrix::random_invertible(n, q, &mut rng);
        if let Some(bad) = jacobi_failure(&a)? {
            v.counterexample = Some(bad);
            break;
        }
        v.checked += 1;
    }
    Ok(v)
}

fn jacobi_failure(a: &ExactMatrix) -> Result<Option<String>, CensusError> {
    let n = a.rows();
    for mask in 0..1u64 << n {
        let s = IndexSet::from_mask(n, mask);
        if !a.jacobi_complementary_minor_check(&s)? {
            return Ok(Some(format!("{} with S = {s}", a.to_text().trim())));
        }
    }
    Ok(None)
}

/// Jacobi's identity on every invertible `n x n` matrix over `F_q`.
pub fn verify_jacobi_exhaustive(n: usize, q: PrimeModulus, budget: &Budget) -> Result<Verification, CensusError> {
    budget.check(
        format!("{n}x{n} matrices over F_{q}"),
        bruteforce_cost(n, q.get() as u64),
    )?;
    let mut v = Verification::new(format!("jacobi exhaustive n={n} q={q}"));
    let mut err = None;
    for_each_point(n * n, q.get(), |x| {
        let a = ExactMatrix::new(n, n, q, x.iter().map(|&e| e as u64).collect()).expect("square data");
        if a.rank() < n {
            return true;
        }
        v.checked += 1;
        match jacobi_failure(&a) {
            Ok(None) => true,
            Ok(Some(bad)) => {
                v.counterexample = Some(bad);
                false
            }
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    err.map_or(Ok(v), Err)
}

/// Invertible matrices with vanishing principal `t`-minors are equinumerous
/// with those with vanishing principal `(n - t)`-minors.
pub fn verify_jacobi_duality(
    n: usize,
    t: usize,
    q: PrimeModulus,
    budget: &Budget,
) -> Result<Verification, CensusError> {
    if !(1..n).contains(&t) {
        return Err(CensusError::Spec(format!("need 1 <= t < n, got t = {t}")));
    }
    let a = count_y_bruteforce(&StratumSpec::new(n, RankSpec::Exact(n), t, q)?, budget)?;
    let b = count_y_bruteforce(&StratumSpec::new(n, RankSpec::Exact(n), n - t, q)?, budget)?;
    let mut v = Verification::new(format!("jacobi duality n={n} t={t} q={q}"));
    v.checked = 2;
    if a.count != b.count {
        v.counterexample = Some(format!("{} vs {}", a.count, b.count));
    }
    Ok(v)
}

/// Every point of `Grass(n - 2, n)(F_q)` has a permissible graph.
pub fn verify_graph_permissible(n: usize, q: PrimeModulus, budget: &Budget) -> Result<Verification, CensusError> {
    let census = GraphCensus::new(n, q, budget)?;
    let mut v = Verification::new(format!("graph permissibility n={n} q={q}"));
    for (g, c) in census.graphs() {
        if !is_permissible(&g) {
            v.counterexample = Some(format!("point with graph {g}"));
            break;
        }
        v.checked += c;
    }
    Ok(v)
}

/// For every edge set `E` with at most `max_edges` edges, the points whose
/// graph contains `E` are exactly the points whose graph contains one of the
/// minimal permissible supergraphs of `E`.
pub fn verify_var_decomposition(
    n: usize,
    q: PrimeModulus,
    max_edges: usize,
    budget: &Budget,
) -> Result<Verification, CensusError> {
    let census = GraphCensus::new(n, q, budget)?;
    let graphs: Vec<(SimpleGraph, u64)> = census.graphs().collect();
    let pairs = n * (n - 1) / 2;
    let mut v = Verification::new(format!("var decomposition n={n} q={q} |E|<={max_edges}"));
    for k in 0..=max_edges.min(pairs - 1) {
        for edges in (0..pairs).combinations(k) {
            let e = SimpleGraph::from_edge_bits(n, edges.iter().fold(0u128, |m, &b| m | 1 << b))?;
            let supers = minimal_permissible_supergraphs(&e)?;
            for (g, c) in &graphs {
                let lhs = e.is_subgraph_of(g);
                let rhs = supers.iter().any(|s| s.is_subgraph_of(g));
                if lhs != rhs {
                    v.counterexample = Some(format!("E = {e}, point graph {g}"));
                    return Ok(v);
                }
                v.checked += c;
            }
        }
    }
    Ok(v)
}

/// Sets of Plücker indices (one-based, lexicographic) from the worked
/// `5 x 5` example: the column point vanishes on `I`, the row point on `J`.
pub const N5_I: [[usize; 3]; 6] = [[1, 2, 4], [1, 2, 5], [1, 4, 5], [2, 3, 5], [2, 4, 5], [3, 4, 5]];
pub const N5_J: [[usize; 3]; 4] = [[1, 2, 3], [1, 3, 4], [1, 3, 5], [2, 3, 4]];

/// Solid edges of the column-side graph; the dotted edge is `1-5` when
/// `b41 = 0` and `2-4` when `b52 = 0`.
pub const N5_COLUMN_EDGES: [(usize, usize); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (3, 4), (3, 5)];
pub const N5_ROW_EDGES: [(usize, usize); 6] = [(1, 2), (1, 4), (1, 5), (2, 4), (2, 5), (4, 5)];

/// Free parameters of the `5 x 5` family `A = B * core * C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct N5Params {
    pub b41: u32,
    pub b42: u32,
    pub b52: u32,
    pub c15: u32,
    pub c25: u32,
    pub c35: u32,
}

/// `B` is `5 x 3` with rows 1-3 the identity; `C` is `3 x 5` normalized on
/// columns `{1, 2, 4}`. The constrained entries are already zero.
pub fn n5_factors(p: &N5Params, q: PrimeModulus) -> Result<(ExactMatrix, ExactMatrix), CensusError> {
    let b = ExactMatrix::new(
        5,
        3,
        q,
        [1, 0, 0, 0, 1, 0, 0, 0, 1, p.b41, p.b42, 0, 0, p.b52, 0]
            .map(u64::from)
            .to_vec(),
    )?;
    let c = ExactMatrix::new(
        3,
        5,
        q,
        [1, 0, 0, 0, p.c15, 0, 1, 0, 0, p.c25, 0, 0, 0, 1, p.c35]
            .map(u64::from)
            .to_vec(),
    )?;
    Ok((b, c))
}

fn in_y533(a: &ExactMatrix) -> Result<bool, CensusError> {
    Ok(a.rank() == 3 && a.principal_minors_vanish(3)?)
}

/// Samples the constrained `5 x 5` family and checks membership in
/// `Y_{5,3,3}`, the factor graphs, the `I`/`J` vanishing pattern, and the
/// forced-vanishing implications behind the constraint choice.
pub fn verify_n5_example(q: PrimeModulus, samples: usize, seed: u64) -> Result<Verification, CensusError> {
    let mut v = Verification::new(format!("n5 example q={q}"));
    let fail = |mut v: Verification, msg: String| {
        v.counterexample = Some(msg);
        Ok(v)
    };

    let all: Vec<[usize; 3]> = (1..=5).combinations(3).map(|c| [c[0], c[1], c[2]]).collect();
    let disjoint = N5_I.iter().all(|s| !N5_J.contains(s));
    let covers = all.iter().all(|s| N5_I.contains(s) || N5_J.contains(s));
    if !(disjoint && covers && N5_I.len() + N5_J.len() == all.len()) {
        return fail(v, "I and J do not partition the 3-subsets of {1..5}".into());
    }

    // forced vanishing: b51 = 0 and b41 b52 - b42 b51 = 0 give b41 = 0 or b52 = 0
    let m = q;
    let mut bad = None;
    for_each_point(4, q.get(), |b| {
        let [b41, b42, b51, b52] = [b[0], b[1], b[2], b[3]];
        if b51 == 0 && m.sub(m.mul(b41, b52), m.mul(b42, b51)) == 0 && b41 != 0 && b52 != 0 {
            bad = Some(format!("b41={b41} b42={b42} b52={b52}"));
        }
        bad.is_none()
    });
    // c13 = c23 = c33 = 0 kill c23 c35 - c25 c33 and c13 c35 - c15 c33
    for_each_point(6, q.get(), |c| {
        let [c13, c15, c23, c25, c33, c35] = [c[0], c[1], c[2], c[3], c[4], c[5]];
        if c13 == 0 && c23 == 0 && c33 == 0 {
            let h1 = m.sub(m.mul(c23, c35), m.mul(c25, c33));
            let h2 = m.sub(m.mul(c13, c35), m.mul(c15, c33));
            if h1 != 0 || h2 != 0 {
                bad = Some(format!("c = {c:?}"));
            }
        }
        bad.is_none()
    });
    if let Some(b) = bad {
        return fail(v, format!("forced vanishing fails at {b}"));
    }

    let coords = |s: &[usize; 3]| IndexSet::new(5, s.to_vec()).expect("valid subset");
    let row_graph = SimpleGraph::from_edges(5, &N5_ROW_EDGES)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nonzero = |rng: &mut ChaCha8Rng| rng.gen_range(1..q.get());
    for _ in 0..samples {
        let b41_zero = rng.gen_bool(0.5);
        let mut p = N5Params {
            b41: nonzero(&mut rng),
            b42: nonzero(&mut rng),
            b52: nonzero(&mut rng),
            c15: nonzero(&mut rng),
            c25: nonzero(&mut rng),
            c35: nonzero(&mut rng),
        };
        let dotted = if b41_zero {
            p.b41 = 0;
            (1, 5)
        } else {
            p.b52 = 0;
            (2, 4)
        };
        let (b, c) = n5_factors(&p, q)?;
        let core = ExactMatrix::random_invertible(3, q, &mut rng);
        let a = b.mul(&core)?.mul(&c)?;
        v.checked += 1;
        if !in_y533(&a)? {
            return fail(v, format!("{p:?} gives a matrix outside Y(5,3,3)"));
        }
        let (g, h) = (plucker_of_columns(&b)?, plucker_of_rows(&c)?);
        let (tg, th) = theta(&a, 3)?;
        if !(tg.same_point(&g) && th.same_point(&h)) {
            return fail(v, format!("{p:?}: factorization points differ from (B, C)"));
        }
        let mut col_graph = SimpleGraph::from_edges(5, &N5_COLUMN_EDGES)?;
        col_graph.add_edge(dotted.0, dotted.1)?;
        let (gg, hg) = (graph_of_point(&g)?, graph_of_point(&h)?);
        if gg != col_graph || hg != row_graph || !is_permissible(&gg) || !is_permissible(&hg) {
            return fail(v, format!("{p:?}: factor graphs ({gg}) / ({hg})"));
        }
        let i_ok = N5_I.iter().all(|s| g.coord(&coords(s)).is_some_and(|x| x.is_zero()));
        let j_ok = N5_J.iter().all(|s| h.coord(&coords(s)).is_some_and(|x| x.is_zero()));
        if !(i_ok && j_ok) {
            return fail(v, format!("{p:?}: I/J vanishing pattern broken"));
        }
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmannian::{enumerate_grassmannian, gaussian_binomial};
    use std::collections::HashSet;

    fn fq(q: u64) -> PrimeModulus {
        PrimeModulus::new(q).unwrap()
    }

    fn spec(n: usize, r: RankSpec, t: usize, q: u64) -> StratumSpec {
        StratumSpec::new(n, r, t, fq(q)).unwrap()
    }

    /// Direct count through `ExactMatrix`, independent of the shard kernel.
    fn naive_y(n: usize, r: RankSpec, t: usize, q: u64) -> u64 {
        let f = fq(q);
        let mut count = 0;
        for_each_point(n * n, q as u32, |x| {
            let a = ExactMatrix::new(n, n, f, x.iter().map(|&e| e as u64).collect()).unwrap();
            let rank_ok = match r {
                RankSpec::Any => true,
                RankSpec::Exact(r) => a.rank() == r,
            };
            if rank_ok && a.principal_minors_vanish(t).unwrap() {
                count += 1;
            }
            true
        });
        count
    }

    #[test]
    fn spec_validation() {
        assert!(StratumSpec::new(3, RankSpec::Any, 0, fq(2)).is_err());
        assert!(StratumSpec::new(3, RankSpec::Any, 4, fq(2)).is_err());
        assert!(StratumSpec::new(3, RankSpec::Exact(4), 1, fq(2)).is_err());
        assert_eq!("any".parse::<RankSpec>().unwrap(), RankSpec::Any);
        assert!("two".parse::<RankSpec>().is_err());
    }

    #[test]
    fn bruteforce_examples() {
        let b = Budget::default();
        assert_eq!(count_y_bruteforce(&spec(3, RankSpec::Any, 1, 2), &b).unwrap().count, 64);
        assert_eq!(
            count_y_bruteforce(&spec(3, RankSpec::Exact(3), 3, 2), &b)
                .unwrap()
                .count,
            0
        );
        let all = count_y_bruteforce(&spec(2, RankSpec::Any, 2, 3), &b).unwrap().count;
        // singular 2x2 over F_3: 81 - |GL(2,3)|
        assert_eq!(all, 81 - 48);
    }

    #[test]
    fn bruteforce_matches_naive_count() {
        let b = Budget::default();
        for (n, q) in [(2, 2), (2, 3), (3, 2)] {
            for t in 1..=n {
                for r in std::iter::once(RankSpec::Any).chain((0..=n).map(RankSpec::Exact)) {
                    let got = count_y_bruteforce(&spec(n, r, t, q), &b).unwrap().count;
                    assert_eq!(got, naive_y(n, r, t, q), "n={n} r={r} t={t} q={q}");
                }
            }
        }
    }

    #[test]
    fn bruteforce_is_independent_of_workers() {
        let s = spec(3, RankSpec::Exact(2), 2, 3);
        let b = Budget::default();
        let one = with_jobs(1, || count_y_bruteforce(&s, &b)).unwrap().unwrap();
        let four = with_jobs(4, || count_y_bruteforce(&s, &b)).unwrap().unwrap();
        assert_eq!(one.count, four.count);
    }

    #[test]
    fn budget_is_enforced() {
        let err = count_y_bruteforce(&spec(4, RankSpec::Any, 2, 5), &Budget::default()).unwrap_err();
        let CensusError::Budget(e) = err else {
            panic!("expected budget error")
        };
        assert_eq!(e.projected, 5u128.pow(16) * 16);
        assert!(count_y_bruteforce(&spec(3, RankSpec::Any, 1, 2), &Budget::new(100)).is_err());
    }

    #[test]
    fn h_pairs_examples() {
        let b = Budget::default();
        assert_eq!(count_h_pairs(2, 1, fq(2), &b).unwrap().count, 2);
        // oracle: scan all 35 x 35 pairs
        let pts = enumerate_grassmannian(4, 2, fq(2), &b).unwrap();
        let scan = pts
            .iter()
            .flat_map(|g| pts.iter().map(move |h| (g, h)))
            .filter(|(g, h)| crate::grassmannian::componentwise_product_vanishes(g, h).unwrap())
            .count() as u64;
        assert_eq!(count_h_pairs(4, 2, fq(2), &b).unwrap().count, scan);
    }

    #[test]
    fn gl_order_examples() {
        assert_eq!(gl_order(1, 7).unwrap(), 6);
        assert_eq!(gl_order(2, 2).unwrap(), 6);
        assert_eq!(gl_order(2, 3).unwrap(), 48);
        assert!(gl_order(0, 3).is_err());
        assert!(matches!(gl_order(10, 101), Err(CensusError::Overflow(_))));
        // oracle: count invertible matrices directly
        for (r, q) in [(2usize, 2u64), (2, 3), (3, 2)] {
            let any_inv = {
                let f = fq(q);
                let mut c = 0;
                for_each_point(r * r, q as u32, |x| {
                    c += (ExactMatrix::new(r, r, f, x.iter().map(|&e| e as u64).collect())
                        .unwrap()
                        .rank()
                        == r) as u64;
                    true
                });
                c
            };
            assert_eq!(gl_order(r, q).unwrap(), any_inv);
        }
    }

    #[test]
    fn bundle_identity_small() {
        let b = Budget::default();
        for (n, t, q) in [(3, 1, 2), (4, 2, 2), (3, 2, 2)] {
            let check = verify_bundle_count(n, t, fq(q), &b).unwrap();
            assert!(check.holds, "{check:?}");
        }
    }

    #[test]
    fn graph_stratum_examples() {
        let b = Budget::default();
        for (n, q) in [(4, 2), (4, 3), (5, 2)] {
            let e = SimpleGraph::empty(n).unwrap();
            let rec = count_graph_stratum(&e, fq(q), &b).unwrap();
            assert_eq!(rec.count as u128, gaussian_binomial(n, n - 2, q).unwrap());
            assert_eq!(rec.method, CensusMethod::GraphStratum);
        }
        let mut g = SimpleGraph::complete(4).unwrap();
        g.remove_edge(1, 2);
        assert_eq!(count_graph_stratum(&g, fq(2), &b).unwrap().count, 1);
    }

    #[test]
    fn graph_stratum_is_monotone() {
        let census = GraphCensus::new(5, fq(2), &Budget::default()).unwrap();
        let graphs = crate::graphs::enumerate_permissible(5).unwrap();
        for g1 in &graphs {
            for g2 in graphs.iter().filter(|g2| g1.is_subgraph_of(g2)) {
                assert!(census.closure_count(g1) >= census.closure_count(g2));
            }
        }
        let total: u64 = graphs.iter().map(|g| census.exact_count(g)).sum();
        assert_eq!(total, census.total());
    }

    #[test]
    fn dimension_estimates() {
        let b = Budget::default();
        let proj: Vec<(u32, u64)> = [5u64, 7, 11]
            .iter()
            .map(|&q| (q as u32, gaussian_binomial(4, 1, q).unwrap() as u64))
            .collect();
        assert_eq!(estimate_dimension_from_counts(&proj).unwrap().dimension, 3);
        let census7 = GraphCensus::new(5, fq(7), &b).unwrap();
        let census11 = GraphCensus::new(5, fq(11), &b).unwrap();
        let full = SimpleGraph::empty(5).unwrap();
        let d = estimate_dimension(&[census7.record(&full).unwrap(), census11.record(&full).unwrap()]).unwrap();
        assert_eq!((d.dimension, d.q_low, d.q_high), (6, 7, 11));
        assert!(d.residual < 0.5);
        let edge = SimpleGraph::from_edges(5, &[(1, 2)]).unwrap();
        let d = estimate_dimension(&[census7.record(&edge).unwrap(), census11.record(&edge).unwrap()]).unwrap();
        assert_eq!(d.dimension, 5);
        assert!(matches!(
            estimate_dimension_from_counts(&[(7, 0), (11, 3)]),
            Err(CensusError::EmptyLocus(7))
        ));
        assert!(matches!(
            estimate_dimension_from_counts(&[(7, 3)]),
            Err(CensusError::TooFewPrimes)
        ));
        assert!(matches!(
            estimate_dimension_from_counts(&[(7, 3), (7, 3)]),
            Err(CensusError::TooFewPrimes)
        ));
    }

    #[test]
    fn record_json_and_csv() {
        let rec = CensusRecord {
            spec: spec(4, RankSpec::Exact(2), 2, 3),
            count: 123_456_789_012,
            method: CensusMethod::MatrixBruteforce,
            elapsed_ms: 17,
        };
        let json = serde_json::to_string(&rec).unwrap();
        assert_eq!(
            json,
            r#"{"n":4,"r":2,"t":2,"q":3,"count":"123456789012","method":"matrix-bruteforce","elapsed_ms":17}"#
        );
        let back: CensusRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, rec);
        assert_eq!(serde_json::to_string(&back).unwrap(), json);
        let any = CensusRecord {
            spec: spec(3, RankSpec::Any, 1, 2),
            ..rec.clone()
        };
        assert!(serde_json::to_string(&any).unwrap().contains(r#""r":"any""#));
        let csv = records_to_csv(&[rec.clone(), any.clone()]);
        assert!(csv.starts_with("n,r,t,q,count,method,elapsed_ms\n4,2,2,3,123456789012,"));
        assert_eq!(records_from_csv(&csv).unwrap(), vec![rec, any]);
        assert!(records_from_csv("4,2,2,3,1,matrix-bruteforce,0\n").is_err());
        assert!(serde_json::from_str::<CensusRecord>(
            r#"{"n":4,"r":2,"t":2,"q":4,"count":"1","method":"matrix-bruteforce","elapsed_ms":0}"#
        )
        .is_err());
    }

    #[test]
    fn polynomial_evaluation() {
        let f = fq(7);
        let det = Polynomial::determinant(3, |i, j| 3 * i + j);
        assert_eq!(det.terms.len(), 6);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a = ExactMatrix::random(3, 3, f, &mut rng);
            assert_eq!(det.eval(a.raw_data(), f), a.det().unwrap().value());
        }
        assert!(VanishingLocusSpec::new(2, vec![Polynomial::var(2)], f).is_err());
    }

    #[test]
    fn overlap_rule() {
        let b = Budget::default();
        for (s, q, n) in [(3, 2, 64), (3, 3, 729)] {
            let v = verify_overlap_rule(s, fq(q), &b).unwrap();
            assert!(v.passed());
            assert_eq!(v.checked, n);
        }
        assert!(verify_overlap_rule(4, fq(5), &b).unwrap().passed());
    }

    #[test]
    fn case3_examples() {
        let f = fq(3);
        let l = case3_loci([0, 1, 2], [0, 1, 2], f).unwrap();
        let zero = [0u32; 9];
        assert!(l.det_mu.contains(&zero) && l.p1.contains(&zero) && l.p2.contains(&zero));
        // rank one, x11 = 0
        let rank1 = [0, 0, 0, 1, 2, 1, 2, 1, 2];
        assert!(l.det_mu.contains(&rank1));
        assert!(l.p1.contains(&rank1) || l.p2.contains(&rank1));
        let v = verify_case3(f, 0, 0, &Budget::default()).unwrap();
        assert!(v.passed(), "{v}");
        // 36 index choices, two identities each
        assert_eq!(v.checked, 36 * 2 * 19_683);
    }

    #[test]
    fn union_check_reports_counterexamples() {
        let f = fq(2);
        let lhs = VanishingLocusSpec::new(2, vec![Polynomial::binomial(0, 1, 0, 1)], f).unwrap();
        let only_x0 = VanishingLocusSpec::new(2, vec![Polynomial::var(0)], f).unwrap();
        let v = verify_union("trivial", &lhs, &[only_x0], &Budget::default()).unwrap();
        assert!(!v.passed());
    }

    #[test]
    fn m2_example() {
        for q in [2, 3] {
            let v = verify_m2_overlapping2(fq(q)).unwrap();
            assert!(v.passed(), "{v}");
            assert_eq!(v.checked, q.pow(6));
        }
        let f = fq(3);
        let p1_third = Polynomial::binomial(0, 5, 2, 3);
        // u62 = u72 = 0, u61 = u73 = 1, u63 = u71 = 0
        let x = [1, 0, 0, 0, 0, 1];
        assert_eq!(p1_third.eval(&x, f), 1);
    }

    #[test]
    fn jacobi_checks() {
        let v = verify_jacobi(6, fq(101), 200, 1).unwrap();
        assert!(v.passed() && v.checked == 200);
        let v = verify_jacobi_exhaustive(2, fq(3), &Budget::default()).unwrap();
        assert_eq!(v.checked, 48);
        for q in [2, 3] {
            assert!(verify_jacobi_duality(3, 1, fq(q), &Budget::default()).unwrap().passed());
        }
    }

    #[test]
    fn graph_permissibility_of_points() {
        let b = Budget::default();
        let v = verify_graph_permissible(5, fq(2), &b).unwrap();
        assert!(v.passed());
        assert_eq!(v.checked, 155);
        // oracle: graph_of_point on every enumerated point
        let pts = enumerate_grassmannian(4, 2, fq(3), &b).unwrap();
        let census = GraphCensus::new(4, fq(3), &b).unwrap();
        let mut seen = HashSet::new();
        for p in &pts {
            seen.insert(graph_of_point(p).unwrap());
        }
        assert_eq!(seen.len(), census.counts.len());
    }

    #[test]
    fn var_decomposition_small() {
        let v = verify_var_decomposition(4, fq(2), 2, &Budget::default()).unwrap();
        assert!(v.passed(), "{v}");
    }

    #[test]
    fn n5_family() {
        let f = fq(7);
        let zero = N5Params {
            b41: 0,
            b42: 0,
            b52: 0,
            c15: 0,
            c25: 0,
            c35: 0,
        };
        let (b, c) = n5_factors(&zero, f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let core = ExactMatrix::random_invertible(3, f, &mut rng);
        assert!(in_y533(&b.mul(&core).unwrap().mul(&c).unwrap()).unwrap());
        let singular = ExactMatrix::diagonal(f, &[1, 1, 0]);
        assert!(!in_y533(&b.mul(&singular).unwrap().mul(&c).unwrap()).unwrap());
        let v = verify_n5_example(f, 100, 11).unwrap();
        assert!(v.passed(), "{v}");
        assert_eq!(v.checked, 100);
    }
}
