//! Graphs of Plücker vanishing patterns on `Grass(n-2, n)`.
//!
//! A point `g` gets the graph on vertices `1..=n` with an edge `{i, j}`
//! exactly when the coordinate indexed by `{1..n} \ {i, j}` vanishes. The
//! graphs that arise this way are the *permissible* ones: not complete, and
//! a disjoint union of cliques once every dominating vertex is deleted. This
//! module classifies them, computes the codimension of their strata, and
//! works out the minimal permissible pairs covering `K_n`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

use crate::grassmannian::PluckerVector;
use crate::matrix::IndexSet;

pub const MAX_VERTICES: usize = 32;
/// Largest order accepted by the exhaustive enumerators.
pub const MAX_ENUMERATION_ORDER: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph order {0} outside 3..={MAX_VERTICES}")]
    Order(usize),
    #[error("vertex {vertex} outside 1..={n}")]
    Vertex { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("graph is not permissible: {0}")]
    NotPermissible(Witness),
    #[error("the complete graph has no permissible supergraph")]
    Complete,
    #[error("order {n} exceeds the enumeration budget ({max})")]
    OverBudget { n: usize, max: usize },
    #[error("point lives on Grass({r}, {n}); graphs need r = n - 2")]
    WrongShape { n: usize, r: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

/// Why a graph fails permissibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Complete,
    /// `u - v - w` with `u, w` non-adjacent and none of the three dominating.
    InducedPath(usize, usize, usize),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Complete => write!(f, "graph is complete"),
            Witness::InducedPath(u, v, w) => write!(f, "induced path {u}-{v}-{w} among non-dominating vertices"),
        }
    }
}

#[inline]
fn bits(mask: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| mask >> i & 1 == 1)
}

/// A labeled simple graph on vertices `1..=n`, stored as one neighbour mask
/// per vertex (bit `i` for vertex `i + 1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleGraph {
    n: usize,
    adj: [u32; MAX_VERTICES],
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if !(3..=MAX_VERTICES).contains(&n) {
            return Err(GraphError::Order(n));
        }
        Ok(SimpleGraph {
            n,
            adj: [0; MAX_VERTICES],
        })
    }

    pub fn complete(n: usize) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::empty(n)?;
        let all = g.vertex_mask();
        for v in 0..n {
            g.adj[v] = all & !(1 << v);
        }
        Ok(g)
    }

    /// Clique on the (zero-based) vertex mask `clique`, every other vertex
    /// isolated.
    pub fn clique_on(n: usize, clique: u32) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::empty(n)?;
        for v in bits(clique & g.vertex_mask()) {
            g.adj[v] = clique & !(1 << v);
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::empty(n)?;
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn vertex_mask(&self) -> u32 {
        if self.n == 32 {
            u32::MAX
        } else {
            (1u32 << self.n) - 1
        }
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            return Err(GraphError::Vertex { vertex: v, n: self.n });
        }
        Ok(())
    }

    /// Adds the edge `{i, j}` (one-based).
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<(), GraphError> {
        self.check_vertex(i)?;
        self.check_vertex(j)?;
        if i == j {
            return Err(GraphError::Loop(i));
        }
        self.adj[i - 1] |= 1 << (j - 1);
        self.adj[j - 1] |= 1 << (i - 1);
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        if (1..=self.n).contains(&i) && (1..=self.n).contains(&j) {
            self.adj[i - 1] &= !(1 << (j - 1));
            self.adj[j - 1] &= !(1 << (i - 1));
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (1..=self.n).contains(&i) && (1..=self.n).contains(&j) && self.adj[i - 1] >> (j - 1) & 1 == 1
    }

    /// Zero-based neighbour mask.
    pub fn neighbours(&self, v: usize) -> u32 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v - 1].count_ones() as usize
    }

    /// Edges `(i, j)` with `i < j`, one-based, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |i| bits(self.adj[i] & !((2u32 << i) - 1)).map(move |j| (i + 1, j + 1)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.n]
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * (self.n - 1) / 2
    }

    /// Zero-based mask of the vertices adjacent to all others.
    pub fn dominating_mask(&self) -> u32 {
        let all = self.vertex_mask();
        (0..self.n)
            .filter(|&v| self.adj[v] == all & !(1 << v))
            .fold(0, |m, v| m | 1 << v)
    }

    pub fn isolated_mask(&self) -> u32 {
        (0..self.n).filter(|&v| self.adj[v] == 0).fold(0, |m, v| m | 1 << v)
    }

    pub fn complement(&self) -> SimpleGraph {
        let all = self.vertex_mask();
        let mut g = *self;
        for v in 0..self.n {
            g.adj[v] = all & !self.adj[v] & !(1 << v);
        }
        g
    }

    pub fn is_subgraph_of(&self, other: &SimpleGraph) -> bool {
        self.n == other.n && (0..self.n).all(|v| self.adj[v] & !other.adj[v] == 0)
    }

    pub fn union(&self, other: &SimpleGraph) -> SimpleGraph {
        assert_eq!(self.n, other.n, "graphs of different order");
        let mut g = *self;
        for v in 0..self.n {
            g.adj[v] |= other.adj[v];
        }
        g
    }

    /// Makes `v` (zero-based) adjacent to every other vertex.
    pub fn make_dominating(&mut self, v: usize) {
        let all = self.vertex_mask();
        self.adj[v] = all & !(1 << v);
        for u in 0..self.n {
            if u != v {
                self.adj[u] |= 1 << v;
            }
        }
    }

    /// Induced subgraph on a zero-based vertex mask, kept on the same labels.
    pub fn restrict(&self, keep: u32) -> SimpleGraph {
        let mut g = *self;
        for v in 0..self.n {
            g.adj[v] = if keep >> v & 1 == 1 { self.adj[v] & keep } else { 0 };
        }
        g
    }

    /// Relabels vertex `v` as `sigma[v - 1]` (one-based images).
    pub fn relabel(&self, sigma: &[usize]) -> SimpleGraph {
        assert_eq!(sigma.len(), self.n);
        let mut g = SimpleGraph {
            n: self.n,
            adj: [0; MAX_VERTICES],
        };
        for (i, j) in self.edges() {
            g.adj[sigma[i - 1] - 1] |= 1 << (sigma[j - 1] - 1);
            g.adj[sigma[j - 1] - 1] |= 1 << (sigma[i - 1] - 1);
        }
        g
    }

    /// Edge set as a bit string over the lexicographically ordered pairs;
    /// requires `n <= 16`.
    pub fn edge_bits(&self) -> u128 {
        assert!(self.n <= 16, "edge bit strings need n <= 16");
        let mut out = 0u128;
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.adj[i] >> j & 1 == 1 {
                    out |= 1 << k;
                }
                k += 1;
            }
        }
        out
    }

    pub fn from_edge_bits(n: usize, edge_bits: u128) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::empty(n)?;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if edge_bits >> k & 1 == 1 {
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
                k += 1;
            }
        }
        Ok(g)
    }

    /// Smallest edge bit string over all relabelings (`n <= 8`).
    pub fn canonical_form(&self) -> Result<u128, GraphError> {
        if self.n > MAX_ENUMERATION_ORDER {
            return Err(GraphError::OverBudget {
                n: self.n,
                max: MAX_ENUMERATION_ORDER,
            });
        }
        Ok((1..=self.n)
            .permutations(self.n)
            .map(|sigma| self.relabel(&sigma).edge_bits())
            .min()
            .expect("at least one permutation"))
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for v in 1..=self.n {
            s.push_str(&format!("  {v};\n"));
        }
        for (i, j) in self.edges() {
            s.push_str(&format!("  {i} -- {j};\n"));
        }
        s.push_str("}\n");
        s
    }

    /// Parses a comma-separated list of `i-j` edges.
    pub fn parse_edge_list(n: usize, list: &str) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::empty(n)?;
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (a, b) = item
                .split_once('-')
                .ok_or_else(|| GraphError::Parse(format!("edge {item:?} is not of the form i-j")))?;
            let parse = |t: &str| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| GraphError::Parse(format!("bad vertex {t:?}")))
            };
            g.add_edge(parse(a)?, parse(b)?)?;
        }
        Ok(g)
    }
}

/// The edge-list text format `n; i j; i j; ...`.
impl FromStr for SimpleGraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, GraphError> {
        let mut parts = s.split(';').map(str::trim);
        let n = parts
            .next()
            .filter(|t| !t.is_empty())
            .ok_or_else(|| GraphError::Parse("missing vertex count".into()))?
            .parse::<usize>()
            .map_err(|_| GraphError::Parse("vertex count is not an integer".into()))?;
        let mut g = SimpleGraph::empty(n)?;
        for part in parts.filter(|p| !p.is_empty()) {
            let ends: Vec<usize> = part
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| GraphError::Parse(format!("bad vertex {t:?}"))))
                .collect::<Result<_, _>>()?;
            let [i, j] = ends[..] else {
                return Err(GraphError::Parse(format!("edge {part:?} needs two endpoints")));
            };
            g.add_edge(i, j)?;
        }
        Ok(g)
    }
}

impl fmt::Display for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)?;
        for (i, j) in self.edges() {
            write!(f, "; {i} {j}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph({self})")
    }
}

/// For `Grass(n-2, n)`: the vertex pair (zero-based) encoded by each
/// coordinate, in lexicographic order of the `(n-2)`-subsets.
pub fn coordinate_edges(n: usize) -> Vec<(usize, usize)> {
    IndexSet::subsets(n, n - 2)
        .map(|s| {
            let c = s.complement();
            (c.members()[0] - 1, c.members()[1] - 1)
        })
        .collect()
}

/// Graph of a coordinate zero pattern (bit `k` set when coordinate `k`
/// vanishes), using the table from [`coordinate_edges`].
pub fn graph_of_zero_mask(n: usize, table: &[(usize, usize)], zeros: u128) -> SimpleGraph {
    let mut g = SimpleGraph::empty(n).expect("valid order");
    for (k, &(i, j)) in table.iter().enumerate() {
        if zeros >> k & 1 == 1 {
            g.adj[i] |= 1 << j;
            g.adj[j] |= 1 << i;
        }
    }
    g
}

pub fn graph_of_point(g: &PluckerVector) -> Result<SimpleGraph, GraphError> {
    let (n, r) = (g.n(), g.r());
    if n < 3 || r + 2 != n {
        return Err(GraphError::WrongShape { n, r });
    }
    Ok(graph_of_zero_mask(n, &coordinate_edges(n), g.zero_mask()))
}

/// `None` when permissible, otherwise the obstruction.
pub fn permissibility_witness(g: &SimpleGraph) -> Option<Witness> {
    if g.is_complete() {
        return Some(Witness::Complete);
    }
    let rest = g.vertex_mask() & !g.dominating_mask();
    for v in bits(rest) {
        let nb = g.adj[v] & rest;
        for u in bits(nb) {
            let missing = nb & !g.adj[u] & !(1 << u);
            if missing != 0 {
                let w = missing.trailing_zeros() as usize;
                let (a, b) = if u < w { (u, w) } else { (w, u) };
                return Some(Witness::InducedPath(a + 1, v + 1, b + 1));
            }
        }
    }
    None
}

/// Permissibility via the induced-path criterion.
pub fn is_permissible(g: &SimpleGraph) -> bool {
    permissibility_witness(g).is_none()
}

/// Permissibility straight from the definition: delete the dominating
/// vertices, split the rest into connected components, and require each
/// component to be complete.
pub fn is_permissible_by_definition(g: &SimpleGraph) -> bool {
    if g.is_complete() {
        return false;
    }
    let rest = g.vertex_mask() & !g.dominating_mask();
    components(g, rest).into_iter().all(|c| is_clique(g, c))
}

fn components(g: &SimpleGraph, within: u32) -> Vec<u32> {
    let mut left = within;
    let mut out = Vec::new();
    while left != 0 {
        let mut comp = 1u32 << left.trailing_zeros();
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = g.adj[v] & within & !comp;
            comp |= new;
            frontier |= new;
        }
        left &= !comp;
        out.push(comp);
    }
    out
}

fn is_clique(g: &SimpleGraph, set: u32) -> bool {
    bits(set).all(|v| g.adj[v] & set == set & !(1 << v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrivialKind {
    Dominating,
    Isolated,
    Empty,
}

impl fmt::Display for TrivialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrivialKind::Dominating => "dominating",
            TrivialKind::Isolated => "isolated",
            TrivialKind::Empty => "empty",
        })
    }
}

/// The dominating vertices of a permissible graph, or else its isolated ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrivialPart {
    pub kind: TrivialKind,
    /// Zero-based vertex mask.
    pub vertices: u32,
}

impl TrivialPart {
    pub fn m(&self) -> usize {
        self.vertices.count_ones() as usize
    }
}

fn require_permissible(g: &SimpleGraph) -> Result<(), GraphError> {
    match permissibility_witness(g) {
        None => Ok(()),
        Some(w) => Err(GraphError::NotPermissible(w)),
    }
}

pub fn trivial_part(g: &SimpleGraph) -> Result<TrivialPart, GraphError> {
    require_permissible(g)?;
    let dom = g.dominating_mask();
    let iso = g.isolated_mask();
    debug_assert!(dom == 0 || iso == 0);
    Ok(if dom != 0 {
        TrivialPart {
            kind: TrivialKind::Dominating,
            vertices: dom,
        }
    } else if iso != 0 {
        TrivialPart {
            kind: TrivialKind::Isolated,
            vertices: iso,
        }
    } else {
        TrivialPart {
            kind: TrivialKind::Empty,
            vertices: 0,
        }
    })
}

/// Cliques of a permissible graph after its trivial part is removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliquePartition {
    /// Zero-based vertex masks, ordered by smallest member.
    pub blocks: Vec<u32>,
}

impl CliquePartition {
    pub fn orders(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.count_ones() as usize).collect()
    }

    pub fn c(&self) -> usize {
        self.blocks.len()
    }

    pub fn l(&self) -> usize {
        self.orders().iter().map(|a| a - 1).sum()
    }
}

pub fn clique_partition(g: &SimpleGraph) -> Result<CliquePartition, GraphError> {
    let triv = trivial_part(g)?;
    let rest = g.vertex_mask() & !triv.vertices;
    let blocks = components(g, rest);
    if let Some(&bad) = blocks.iter().find(|&&b| !is_clique(g, b)) {
        return Err(GraphError::Invariant(format!(
            "component {:?} of a permissible graph is not a clique",
            bits(bad).map(|v| v + 1).collect::<Vec<_>>()
        )));
    }
    Ok(CliquePartition { blocks })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codim {
    pub value: usize,
    pub kind: TrivialKind,
    pub m: usize,
    pub c: usize,
    pub l: usize,
}

/// Codimension of the closure of the stratum of `g` in `Grass(n-2, n)`:
/// `2m + l` when the trivial part is dominating, `l` otherwise. The
/// `n - c +/- m` forms are evaluated as well and must agree.
pub fn codim_breakdown(g: &SimpleGraph) -> Result<Codim, GraphError> {
    let triv = trivial_part(g)?;
    let part = clique_partition(g)?;
    let (n, m, c, l) = (g.order(), triv.m(), part.c(), part.l());
    let (value, alt) = match triv.kind {
        TrivialKind::Dominating => (2 * m + l, (n + m).checked_sub(c)),
        _ => (l, n.checked_sub(c + m)),
    };
    if alt != Some(value) {
        return Err(GraphError::Invariant(format!(
            "codim forms disagree for {g}: {value} vs {alt:?}"
        )));
    }
    Ok(Codim {
        value,
        kind: triv.kind,
        m,
        c,
        l,
    })
}

pub fn codim(g: &SimpleGraph) -> Result<usize, GraphError> {
    codim_breakdown(g).map(|c| c.value)
}

fn check_enumeration_order(n: usize) -> Result<(), GraphError> {
    if n < 3 {
        return Err(GraphError::Order(n));
    }
    if n > MAX_ENUMERATION_ORDER {
        return Err(GraphError::OverBudget {
            n,
            max: MAX_ENUMERATION_ORDER,
        });
    }
    Ok(())
}

/// Set partitions of the listed vertices, as lists of masks.
fn set_partitions(vertices: &[usize]) -> Vec<Vec<u32>> {
    let Some((&first, rest)) = vertices.split_first() else {
        return vec![vec![]];
    };
    let mut out = Vec::new();
    for mut p in set_partitions(rest) {
        for k in 0..p.len() {
            let mut q = p.clone();
            q[k] |= 1 << first;
            out.push(q);
        }
        p.push(1 << first);
        out.push(p);
    }
    out
}

/// Every permissible labeled graph on `n` vertices, built as a dominating set
/// plus a clique partition of the remaining vertices.
pub fn enumerate_permissible(n: usize) -> Result<Vec<SimpleGraph>, GraphError> {
    check_enumeration_order(n)?;
    let all = (1u32 << n) - 1;
    let mut out = Vec::new();
    for dom in 0..=all {
        let rest: Vec<usize> = bits(all & !dom).collect();
        for partition in set_partitions(&rest) {
            let mut g = SimpleGraph::empty(n)?;
            for block in &partition {
                for v in bits(*block) {
                    g.adj[v] = block & !(1 << v);
                }
            }
            for v in bits(dom) {
                g.make_dominating(v);
            }
            // emit each graph only from its true dominating set
            if g.dominating_mask() == dom && !g.is_complete() {
                out.push(g);
            }
        }
    }
    out.sort();
    Ok(out)
}

fn minimal_elements(mut graphs: Vec<SimpleGraph>) -> Vec<SimpleGraph> {
    graphs.sort_by_key(|g| (g.edge_count(), *g));
    graphs.dedup();
    let mut kept: Vec<SimpleGraph> = Vec::new();
    for g in graphs {
        if !kept.iter().any(|k| k.is_subgraph_of(&g)) {
            kept.push(g);
        }
    }
    kept.sort();
    kept
}

/// Minimal permissible supergraphs by the branching rule: while some
/// induced path `u - v - w` survives among non-dominating vertices, branch
/// on adding `uw` or on making `v` dominating.
pub fn minimal_permissible_supergraphs_branching(e: &SimpleGraph) -> Result<Vec<SimpleGraph>, GraphError> {
    if e.is_complete() {
        return Err(GraphError::Complete);
    }
    let mut leaves = Vec::new();
    let mut seen = HashSet::new();
    let mut stack = vec![*e];
    while let Some(w) = stack.pop() {
        if !seen.insert(w) {
            continue;
        }
        match permissibility_witness(&w) {
            None => leaves.push(w),
            Some(Witness::Complete) => {}
            Some(Witness::InducedPath(u, v, x)) => {
                let mut closed = w;
                closed.add_edge(u, x).expect("valid vertices");
                stack.push(closed);
                let mut dom = w;
                dom.make_dominating(v - 1);
                stack.push(dom);
            }
        }
    }
    Ok(minimal_elements(leaves))
}

/// Minimal permissible supergraphs by filtering the full enumeration.
pub fn minimal_permissible_supergraphs_filter(e: &SimpleGraph) -> Result<Vec<SimpleGraph>, GraphError> {
    if e.is_complete() {
        return Err(GraphError::Complete);
    }
    let supers = enumerate_permissible(e.order())?
        .into_iter()
        .filter(|g| e.is_subgraph_of(g))
        .collect();
    Ok(minimal_elements(supers))
}

/// Both computations, which must agree.
pub fn minimal_permissible_supergraphs(e: &SimpleGraph) -> Result<Vec<SimpleGraph>, GraphError> {
    let branching = minimal_permissible_supergraphs_branching(e)?;
    let filtered = minimal_permissible_supergraphs_filter(e)?;
    if branching != filtered {
        return Err(GraphError::Invariant(format!(
            "supergraph routes disagree for {e}: {branching:?} vs {filtered:?}"
        )));
    }
    Ok(branching)
}

/// A clique-plus-isolated graph together with its complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PermissiblePair {
    pub s_graph: SimpleGraph,
    pub t_graph: SimpleGraph,
    pub clique_order: usize,
}

impl PermissiblePair {
    /// Pair for the clique on a zero-based vertex mask.
    pub fn for_clique(n: usize, clique: u32) -> Result<Self, GraphError> {
        let s_graph = SimpleGraph::clique_on(n, clique)?;
        let pair = PermissiblePair {
            s_graph,
            t_graph: s_graph.complement(),
            clique_order: clique.count_ones() as usize,
        };
        pair.validate()?;
        Ok(pair)
    }

    /// Zero-based mask of the clique in `s_graph`.
    pub fn clique(&self) -> u32 {
        self.s_graph.vertex_mask() & !self.s_graph.isolated_mask()
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let (s, t) = (&self.s_graph, &self.t_graph);
        let n = s.order();
        let fail = |msg: &str| Err(GraphError::Invariant(format!("pair ({s}) / ({t}): {msg}")));
        if !(2..n).contains(&self.clique_order) {
            return fail("clique order outside 2..=n-1");
        }
        if !s.union(t).is_complete() {
            return fail("edges do not cover K_n");
        }
        if *t != s.complement() {
            return fail("second graph is not the complement of the first");
        }
        if !is_permissible(s) || !is_permissible(t) {
            return fail("a side is not permissible");
        }
        let clique = self.clique();
        if clique.count_ones() as usize != self.clique_order || *s != SimpleGraph::clique_on(n, clique)? {
            return fail("first graph is not a clique plus isolated vertices");
        }
        Ok(())
    }

    pub fn total_codim(&self) -> Result<usize, GraphError> {
        Ok(codim(&self.s_graph)? + codim(&self.t_graph)?)
    }
}

/// All minimal covering pairs: one per vertex set of size `2..=n-1`,
/// ordered by clique order and then lexicographically.
pub fn minimal_cover_pairs(n: usize) -> Result<Vec<PermissiblePair>, GraphError> {
    SimpleGraph::empty(n)?;
    let mut out = Vec::new();
    for a in 2..n {
        for members in (0..n).combinations(a) {
            let mask = members.iter().fold(0u32, |m, &v| m | 1 << v);
            out.push(PermissiblePair::for_clique(n, mask)?);
        }
    }
    Ok(out)
}

/// Shrinks a permissible `G` and enlarges its complement `H` until they form
/// a minimal covering pair. Every clique `B` of `G` minus its trivial part
/// yields the pair for `B` (together with the dominating vertices, if any);
/// when the trivial part is dominating, completing `H` on the remaining
/// vertices gives one more pair. The edgeless graph has no such pair.
pub fn minimize_pair(g: &SimpleGraph) -> Result<Vec<PermissiblePair>, GraphError> {
    let triv = trivial_part(g)?;
    let part = clique_partition(g)?;
    let n = g.order();
    let mut out = BTreeSet::new();
    match triv.kind {
        TrivialKind::Dominating => {
            let rest = g.vertex_mask() & !triv.vertices;
            // complete H' on the non-dominating vertices; the new G is the
            // star-like graph of edges at the dominating vertices
            out.insert(PermissiblePair::for_clique(n, rest)?);
            for &block in part.blocks.iter().filter(|b| b.count_ones() >= 2) {
                // vertices outside B and the dominating set become dominating in H
                out.insert(PermissiblePair::for_clique(n, block | triv.vertices)?);
            }
        }
        TrivialKind::Isolated | TrivialKind::Empty => {
            for &block in &part.blocks {
                out.insert(PermissiblePair::for_clique(n, block)?);
            }
        }
    }
    for pair in &out {
        let covers_g = pair.s_graph.is_subgraph_of(g) || pair.t_graph.is_subgraph_of(g);
        let covers_h = g.complement().is_subgraph_of(&pair.t_graph) || g.complement().is_subgraph_of(&pair.s_graph);
        if !(covers_g && covers_h) {
            return Err(GraphError::Invariant(format!("pair {pair:?} does not shrink {g}")));
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimY {
    pub n: usize,
    /// Maximum of `4(n-2) - codim S - codim T + (n-2)^2` over minimal pairs.
    pub value: usize,
    pub formula: usize,
    pub maximizer: PermissiblePair,
}

/// Dimension of the rank-`(n-2)` matrices with vanishing principal
/// `(n-2)`-minors, as a maximum over minimal covering pairs. Fails if the
/// maximum disagrees with `n^2 - n - 4`.
pub fn dim_y_formula(n: usize) -> Result<DimY, GraphError> {
    if n < 4 {
        return Err(GraphError::Order(n));
    }
    let base = 4 * (n - 2) + (n - 2) * (n - 2);
    let mut best: Option<(usize, PermissiblePair)> = None;
    for pair in minimal_cover_pairs(n)? {
        let value = base
            .checked_sub(pair.total_codim()?)
            .ok_or_else(|| GraphError::Invariant("codimension exceeds parameter count".into()))?;
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, pair));
        }
    }
    let (value, maximizer) = best.ok_or_else(|| GraphError::Invariant("no pairs".into()))?;
    let formula = n * n - n - 4;
    if value != formula {
        return Err(GraphError::Invariant(format!(
            "combinatorial maximum {value} differs from n^2 - n - 4 = {formula}"
        )));
    }
    Ok(DimY {
        n,
        value,
        formula,
        maximizer,
    })
}
