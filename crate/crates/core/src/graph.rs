//! 3-graphs, 2-graphs and vertex sets.
//!
//! A [`ThreeGraph`] keeps, for every unordered vertex pair, the neighbourhood
//! `N(xy)` as a bitset. Membership, codegrees and joint neighbourhoods are word
//! operations, and iteration follows vertex order, so every output is canonical.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// An edge: three distinct vertices stored in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 3]", try_from = "[usize; 3]")]
pub struct Triple([Vertex; 3]);

impl Triple {
    pub fn new(a: Vertex, b: Vertex, c: Vertex) -> Result<Self> {
        if a == b || b == c || a == c {
            return Err(Error::DegenerateTriple([a, b, c]));
        }
        Ok(Self::sorted(a, b, c))
    }

    /// Caller guarantees distinctness.
    pub(crate) fn sorted(a: Vertex, b: Vertex, c: Vertex) -> Self {
        debug_assert!(a != b && b != c && a != c);
        let mut v = [a, b, c];
        v.sort_unstable();
        Triple(v)
    }

    pub fn vertices(&self) -> [Vertex; 3] {
        self.0
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.contains(&v)
    }
}

impl From<Triple> for [usize; 3] {
    fn from(t: Triple) -> Self {
        t.0
    }
}

impl TryFrom<[usize; 3]> for Triple {
    type Error = Error;
    fn try_from(v: [usize; 3]) -> Result<Self> {
        Triple::new(v[0], v[1], v[2])
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.0[0], self.0[1], self.0[2])
    }
}

pub type EdgeSet = BTreeSet<Triple>;

/// Anything that can answer "is this triple an edge".
pub trait EdgeQuery {
    fn has(&self, t: &Triple) -> bool;

    fn has_vertices(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        a != b && b != c && a != c && self.has(&Triple::sorted(a, b, c))
    }
}

impl EdgeQuery for EdgeSet {
    fn has(&self, t: &Triple) -> bool {
        self.contains(t)
    }
}

impl EdgeQuery for HashSet<Triple> {
    fn has(&self, t: &Triple) -> bool {
        self.contains(t)
    }
}

impl<A: EdgeQuery, B: EdgeQuery> EdgeQuery for (&A, &B) {
    fn has(&self, t: &Triple) -> bool {
        self.0.has(t) || self.1.has(t)
    }
}

/// Never contains anything.
pub struct NoEdges;

impl EdgeQuery for NoEdges {
    fn has(&self, _: &Triple) -> bool {
        false
    }
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

/// Iterates the set bits of a word slice in increasing order.
pub struct Bits<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl<'a> Bits<'a> {
    fn new(words: &'a [u64]) -> Self {
        Self::starting_at(words, 0)
    }

    fn starting_at(words: &'a [u64], from: usize) -> Self {
        let index = from / 64;
        let current = if index < words.len() {
            words[index] & (!0u64 << (from % 64))
        } else {
            0
        };
        Bits { words, index, current }
    }
}

impl Iterator for Bits<'_> {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// A subset of `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    bits: Vec<u64>,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        VertexSet { universe, bits: vec![0; words_for(universe)] }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for v in 0..universe {
            s.insert(v);
        }
        s
    }

    pub fn from_vertices(universe: usize, vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut s = Self::empty(universe);
        for v in vertices {
            if v >= universe {
                return Err(Error::OutOfRange { vertex: v, n: universe });
            }
            s.insert(v);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, v: Vertex) {
        self.bits[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: Vertex) {
        self.bits[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.universe && self.bits[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> Bits<'_> {
        Bits::new(&self.bits)
    }

    pub fn to_vec(&self) -> Vec<Vertex> {
        self.iter().collect()
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.bits
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= *b;
        }
    }

    pub fn subtract(&mut self, other: &VertexSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a &= !*b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }

    pub fn complement(&self) -> VertexSet {
        let mut s = VertexSet::full(self.universe);
        s.subtract(self);
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

fn pair_slot(x: Vertex, y: Vertex) -> usize {
    let (a, b) = if x < y { (x, y) } else { (y, x) };
    b * (b - 1) / 2 + a
}

/// A 3-uniform hypergraph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct ThreeGraph {
    n: usize,
    words: usize,
    /// Neighbourhood bitsets, one row of `words` per unordered pair.
    nbhd: Vec<u64>,
    degrees: Vec<usize>,
    edge_count: usize,
}

impl fmt::Debug for ThreeGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ThreeGraph(n={}, m={})", self.n, self.edge_count)
    }
}

impl Default for ThreeGraph {
    fn default() -> Self {
        ThreeGraph::empty(0)
    }
}

impl EdgeQuery for ThreeGraph {
    fn has(&self, t: &Triple) -> bool {
        let [a, b, c] = t.0;
        c < self.n && self.row(a, b)[c / 64] >> (c % 64) & 1 == 1
    }
}

impl ThreeGraph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        let pairs = n * n.saturating_sub(1) / 2;
        ThreeGraph { n, words, nbhd: vec![0; pairs * words], degrees: vec![0; n], edge_count: 0 }
    }

    /// Canonicalises and deduplicates `triples`.
    pub fn build(n: usize, triples: impl IntoIterator<Item = [Vertex; 3]>) -> Result<Self> {
        let mut g = Self::empty(n);
        for [a, b, c] in triples {
            for v in [a, b, c] {
                if v >= n {
                    return Err(Error::OutOfRange { vertex: v, n });
                }
            }
            let t = Triple::new(a, b, c)?;
            g.insert(t);
        }
        Ok(g)
    }

    pub fn from_edges<'a>(n: usize, edges: impl IntoIterator<Item = &'a Triple>) -> Result<Self> {
        Self::build(n, edges.into_iter().map(|t| t.0))
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    g.insert(Triple([a, b, c]));
                }
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count == 0
    }

    /// Raw bitset words of `N(xy)`.
    pub(crate) fn row(&self, x: Vertex, y: Vertex) -> &[u64] {
        let s = pair_slot(x, y) * self.words;
        &self.nbhd[s..s + self.words]
    }

    fn row_mut(&mut self, x: Vertex, y: Vertex) -> &mut [u64] {
        let s = pair_slot(x, y) * self.words;
        &mut self.nbhd[s..s + self.words]
    }

    fn flip(&mut self, x: Vertex, y: Vertex, z: Vertex, on: bool) {
        let w = &mut self.row_mut(x, y)[z / 64];
        if on {
            *w |= 1 << (z % 64);
        } else {
            *w &= !(1 << (z % 64));
        }
    }

    /// Adds an edge; returns false if it was present. Vertices must be in range.
    pub(crate) fn insert(&mut self, t: Triple) -> bool {
        if self.has(&t) {
            return false;
        }
        let [a, b, c] = t.0;
        self.flip(a, b, c, true);
        self.flip(a, c, b, true);
        self.flip(b, c, a, true);
        for v in t.0 {
            self.degrees[v] += 1;
        }
        self.edge_count += 1;
        true
    }

    /// Removes an edge; returns false if it was absent.
    pub(crate) fn remove(&mut self, t: &Triple) -> bool {
        if !self.has(t) {
            return false;
        }
        let [a, b, c] = t.0;
        self.flip(a, b, c, false);
        self.flip(a, c, b, false);
        self.flip(b, c, a, false);
        for v in t.0 {
            self.degrees[v] -= 1;
        }
        self.edge_count -= 1;
        true
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n {
            Err(Error::OutOfRange { vertex: v, n: self.n })
        } else {
            Ok(())
        }
    }

    fn check_pair(&self, x: Vertex, y: Vertex) -> Result<()> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        if x == y {
            return Err(Error::SamePair(x));
        }
        Ok(())
    }

    pub fn contains(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        a < self.n && b < self.n && c < self.n && self.has_vertices(a, b, c)
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Triple> + '_ {
        let n = self.n;
        (0..n).flat_map(move |a| {
            (a + 1..n).flat_map(move |b| {
                Bits::starting_at(self.row(a, b), b + 1).map(move |c| Triple([a, b, c]))
            })
        })
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edges().collect()
    }

    /// `N(xy)` in increasing order. Panics on an invalid pair.
    pub fn neighbours(&self, x: Vertex, y: Vertex) -> Bits<'_> {
        assert!(x != y && x < self.n && y < self.n, "invalid pair ({x}, {y})");
        Bits::new(self.row(x, y))
    }

    pub fn neighbour_set(&self, x: Vertex, y: Vertex) -> Result<VertexSet> {
        self.check_pair(x, y)?;
        Ok(VertexSet { universe: self.n, bits: self.row(x, y).to_vec() })
    }

    /// `|N(xy) ∩ U|`.
    pub fn codegree(&self, x: Vertex, y: Vertex, within: Option<&VertexSet>) -> Result<usize> {
        self.check_pair(x, y)?;
        Ok(self.codegree_unchecked(x, y, within))
    }

    pub(crate) fn codegree_unchecked(&self, x: Vertex, y: Vertex, within: Option<&VertexSet>) -> usize {
        let row = self.row(x, y);
        match within {
            None => row.iter().map(|w| w.count_ones() as usize).sum(),
            Some(u) => row.iter().zip(u.words()).map(|(a, b)| (a & b).count_ones() as usize).sum(),
        }
    }

    /// Number of edges `xyz` with `y, z ∈ U`.
    pub fn degree(&self, x: Vertex, within: Option<&VertexSet>) -> Result<usize> {
        self.check_vertex(x)?;
        Ok(match within {
            None => self.degrees[x],
            Some(u) => {
                let twice: usize = u
                    .iter()
                    .filter(|&y| y != x)
                    .map(|y| self.codegree_unchecked(x, y, Some(u)))
                    .sum();
                twice / 2
            }
        })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn min_codegree(&self) -> usize {
        self.pairs().map(|(x, y)| self.codegree_unchecked(x, y, None)).min().unwrap_or(0)
    }

    pub fn max_codegree(&self) -> usize {
        self.pairs().map(|(x, y)| self.codegree_unchecked(x, y, None)).max().unwrap_or(0)
    }

    fn pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> {
        let n = self.n;
        (0..n).flat_map(move |x| (x + 1..n).map(move |y| (x, y)))
    }

    /// Pairs of positive codegree.
    pub fn shadow(&self) -> Graph2 {
        let mut s = Graph2::new(self.n);
        for (x, y) in self.pairs() {
            if self.row(x, y).iter().any(|&w| w != 0) {
                s.insert(x, y);
            }
        }
        s
    }

    /// The link graph of `x`, optionally restricted to pairs inside `U`.
    pub fn link(&self, x: Vertex, within: Option<&VertexSet>) -> Result<Graph2> {
        self.check_vertex(x)?;
        let mut l = Graph2::new(self.n);
        for y in 0..self.n {
            if y == x || within.is_some_and(|u| !u.contains(y)) {
                continue;
            }
            for z in Bits::starting_at(self.row(x, y), y + 1) {
                if within.is_none_or(|u| u.contains(z)) {
                    l.insert(y, z);
                }
            }
        }
        Ok(l)
    }

    /// `N(e1) ∩ N(e2) ∩ N(e3) ∩ U`.
    pub fn joint_neighbourhood(&self, pairs: &[(Vertex, Vertex)], within: Option<&VertexSet>) -> Result<VertexSet> {
        let mut s = match within {
            Some(u) => u.clone(),
            None => VertexSet::full(self.n),
        };
        for &(x, y) in pairs {
            self.check_pair(x, y)?;
            for (a, b) in s.bits.iter_mut().zip(self.row(x, y)) {
                *a &= *b;
            }
        }
        Ok(s)
    }

    /// Sorted neighbourhood lists keyed by pair, as a plain map.
    pub fn pair_index(&self) -> BTreeMap<(Vertex, Vertex), Vec<Vertex>> {
        let mut m = BTreeMap::new();
        for (x, y) in self.pairs() {
            let nb: Vec<Vertex> = Bits::new(self.row(x, y)).collect();
            if !nb.is_empty() {
                m.insert((x, y), nb);
            }
        }
        m
    }

    /// Edges of `self` not in `other`.
    pub fn difference<Q: EdgeQuery>(&self, other: &Q) -> ThreeGraph {
        let mut g = self.clone();
        for t in self.edges() {
            if other.has(&t) {
                g.remove(&t);
            }
        }
        g
    }

    pub fn without_edges<'a>(&self, edges: impl IntoIterator<Item = &'a Triple>) -> ThreeGraph {
        let mut g = self.clone();
        for t in edges {
            g.remove(t);
        }
        g
    }

    pub fn with_edges<'a>(&self, edges: impl IntoIterator<Item = &'a Triple>) -> Result<ThreeGraph> {
        let mut g = self.clone();
        for t in edges {
            for v in t.0 {
                self.check_vertex(v)?;
            }
            g.insert(*t);
        }
        Ok(g)
    }

    /// Edges with all three vertices in `U`, on the same vertex range.
    pub fn induced(&self, within: &VertexSet) -> ThreeGraph {
        let mut g = ThreeGraph::empty(self.n);
        for t in self.edges() {
            if t.0.iter().all(|&v| within.contains(v)) {
                g.insert(t);
            }
        }
        g
    }

    /// Vertices of positive degree.
    pub fn support(&self) -> VertexSet {
        let mut s = VertexSet::empty(self.n);
        for (v, &d) in self.degrees.iter().enumerate() {
            if d > 0 {
                s.insert(v);
            }
        }
        s
    }

    pub fn check_divisibility(&self, kind: DivisibilityKind) -> Result<DivisibilityCheck> {
        kind.validate()?;
        let deg_mod3 = |g: &Self| {
            g.degrees
                .iter()
                .enumerate()
                .find(|(_, &d)| d % 3 != 0)
                .map(|(v, &d)| Violation::Degree { vertex: v, degree: d })
        };
        let violation = match kind {
            DivisibilityKind::Vertex3 => deg_mod3(self),
            DivisibilityKind::Cycle(ell) => deg_mod3(self).or_else(|| {
                (self.edge_count % ell != 0)
                    .then_some(Violation::EdgeCount { count: self.edge_count, modulus: ell })
            }),
            DivisibilityKind::K43 => (self.edge_count % 4 != 0)
                .then_some(Violation::EdgeCount { count: self.edge_count, modulus: 4 })
                .or_else(|| deg_mod3(self))
                .or_else(|| {
                    self.pairs().find_map(|(x, y)| {
                        let c = self.codegree_unchecked(x, y, None);
                        (c % 2 != 0).then_some(Violation::Codegree { pair: (x, y), codegree: c })
                    })
                }),
        };
        Ok(DivisibilityCheck { divisible: violation.is_none(), violation })
    }
}

/// Which divisibility conditions to test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DivisibilityKind {
    Vertex3,
    Cycle(usize),
    K43,
}

impl DivisibilityKind {
    fn validate(&self) -> Result<()> {
        match self {
            DivisibilityKind::Cycle(ell) if *ell < 4 => {
                Err(Error::BadParams(format!("cycle length {ell} is below 4")))
            }
            _ => Ok(()),
        }
    }
}

impl std::str::FromStr for DivisibilityKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let kind = match s {
            "vertex3" => DivisibilityKind::Vertex3,
            "k43" => DivisibilityKind::K43,
            _ => {
                let ell = s
                    .strip_prefix("cycle:")
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| Error::BadParams(format!("unknown divisibility kind `{s}`")))?;
                DivisibilityKind::Cycle(ell)
            }
        };
        kind.validate()?;
        Ok(kind)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Degree { vertex: Vertex, degree: usize },
    EdgeCount { count: usize, modulus: usize },
    Codegree { pair: (Vertex, Vertex), codegree: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityCheck {
    pub divisible: bool,
    pub violation: Option<Violation>,
}

/// A simple graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Graph2 {
    n: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
}

impl Graph2 {
    pub fn new(n: usize) -> Self {
        Graph2 { n, edges: BTreeSet::new() }
    }

    pub fn build(n: usize, pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut g = Self::new(n);
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::OutOfRange { vertex: x.max(y), n });
            }
            if x == y {
                return Err(Error::SamePair(x));
            }
            g.insert(x, y);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for x in 0..n {
            for y in x + 1..n {
                g.insert(x, y);
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn insert(&mut self, x: Vertex, y: Vertex) -> bool {
        self.edges.insert((x.min(y), x.max(y)))
    }

    pub fn remove(&mut self, x: Vertex, y: Vertex) -> bool {
        self.edges.remove(&(x.min(y), x.max(y)))
    }

    pub fn contains(&self, x: Vertex, y: Vertex) -> bool {
        self.edges.contains(&(x.min(y), x.max(y)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Adjacency lists in increasing order.
    pub fn adjacency(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        adj
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tight_cycle(vs: &[usize]) -> Vec<[usize; 3]> {
        let k = vs.len();
        (0..k).map(|i| [vs[i], vs[(i + 1) % k], vs[(i + 2) % k]]).collect()
    }

    #[test]
    fn complete_four_vertices() {
        let g = ThreeGraph::build(4, [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g, ThreeGraph::complete(4));
    }

    #[test]
    fn five_cycle_edges() {
        let g = ThreeGraph::build(5, tight_cycle(&[0, 1, 2, 3, 4])).unwrap();
        let got: Vec<[usize; 3]> = g.edges().map(|t| t.vertices()).collect();
        assert_eq!(got, vec![[0, 1, 2], [0, 1, 4], [0, 3, 4], [1, 2, 3], [2, 3, 4]]);
    }

    #[test]
    fn duplicates_collapse() {
        let g = ThreeGraph::build(4, [[0, 1, 2], [2, 1, 0], [1, 0, 2]]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn build_rejects_bad_triples() {
        assert!(matches!(ThreeGraph::build(3, [[0, 1, 3]]), Err(Error::OutOfRange { vertex: 3, n: 3 })));
        assert!(matches!(ThreeGraph::build(3, [[0, 1, 1]]), Err(Error::DegenerateTriple(_))));
    }

    #[test]
    fn complete_five_queries() {
        let g = ThreeGraph::complete(5);
        assert_eq!(g.codegree(0, 3, None).unwrap(), 3);
        assert_eq!(g.degree(2, None).unwrap(), 6);
        assert_eq!(g.min_codegree(), 3);
        assert_eq!(g.max_codegree(), 3);
        assert_eq!(g.shadow(), Graph2::complete(5));
    }

    #[test]
    fn same_pair_rejected() {
        let g = ThreeGraph::complete(5);
        assert!(matches!(g.codegree(1, 1, None), Err(Error::SamePair(1))));
        assert!(matches!(g.codegree(1, 9, None), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn empty_and_isolated() {
        let g = ThreeGraph::empty(6);
        assert_eq!(g.codegree(0, 1, None).unwrap(), 0);
        let g = ThreeGraph::build(5, [[0, 1, 2]]).unwrap();
        assert_eq!(g.degree(4, None).unwrap(), 0);
        assert_eq!(g.min_codegree(), 0);
        assert_eq!(g.shadow(), Graph2::build(5, [(0, 1), (0, 2), (1, 2)]).unwrap());
    }

    #[test]
    fn joint_neighbourhood_in_k6() {
        let g = ThreeGraph::complete(6);
        let j = g.joint_neighbourhood(&[(0, 1), (2, 3), (0, 2)], None).unwrap();
        assert_eq!(j.to_vec(), vec![4, 5]);
        let same = g.joint_neighbourhood(&[(0, 1), (0, 1), (0, 1)], None).unwrap();
        assert_eq!(same, g.neighbour_set(0, 1).unwrap());
        let none = g.joint_neighbourhood(&[(0, 1)], Some(&VertexSet::empty(6))).unwrap();
        assert!(none.is_empty());
    }

    #[test]
    fn divisibility_examples() {
        let k5 = ThreeGraph::complete(5);
        assert!(k5.check_divisibility(DivisibilityKind::Cycle(5)).unwrap().divisible);
        let c8 = ThreeGraph::build(8, tight_cycle(&[0, 1, 2, 3, 4, 5, 6, 7])).unwrap();
        assert!(c8.check_divisibility(DivisibilityKind::Cycle(4)).unwrap().divisible);
        let single = ThreeGraph::build(3, [[0, 1, 2]]).unwrap();
        let c = single.check_divisibility(DivisibilityKind::Vertex3).unwrap();
        assert!(!c.divisible);
        assert_eq!(c.violation, Some(Violation::Degree { vertex: 0, degree: 1 }));
        assert!(k5.check_divisibility(DivisibilityKind::Cycle(3)).is_err());
        assert!(ThreeGraph::complete(4).check_divisibility(DivisibilityKind::Cycle(4)).unwrap().divisible);
    }

    #[test]
    fn divisibility_kind_parses() {
        assert_eq!("cycle:7".parse::<DivisibilityKind>().unwrap(), DivisibilityKind::Cycle(7));
        assert_eq!("k43".parse::<DivisibilityKind>().unwrap(), DivisibilityKind::K43);
        assert!("cycle:2".parse::<DivisibilityKind>().is_err());
        assert!("nonsense".parse::<DivisibilityKind>().is_err());
    }

    #[test]
    fn degree_within_subset() {
        let g = ThreeGraph::complete(6);
        let u = VertexSet::from_vertices(6, [1, 2, 3, 4]).unwrap();
        // pairs inside {1,2,3,4}: C(4,2); for x inside, pairs avoid x: C(3,2)
        assert_eq!(g.degree(0, Some(&u)).unwrap(), 6);
        assert_eq!(g.degree(1, Some(&u)).unwrap(), 3);
    }

    fn arb_graph() -> impl Strategy<Value = ThreeGraph> {
        (3usize..9).prop_flat_map(|n| {
            let all: Vec<[usize; 3]> = (0..n)
                .flat_map(|a| (a + 1..n).flat_map(move |b| (b + 1..n).map(move |c| [a, b, c])))
                .collect();
            let len = all.len();
            proptest::collection::vec(any::<bool>(), len).prop_map(move |mask| {
                ThreeGraph::build(n, all.iter().zip(mask).filter(|(_, m)| *m).map(|(t, _)| *t)).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn pair_index_round_trip(g in arb_graph()) {
            let rebuilt = ThreeGraph::build(g.n(), g.edges().map(|t| t.vertices())).unwrap();
            prop_assert_eq!(rebuilt.pair_index(), g.pair_index());
            prop_assert_eq!(rebuilt, g);
        }

        #[test]
        fn degree_sums(g in arb_graph()) {
            let n = g.n();
            let deg: usize = (0..n).map(|x| g.degree(x, None).unwrap()).sum();
            let codeg: usize = (0..n)
                .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
                .map(|(x, y)| g.codegree(x, y, None).unwrap())
                .sum();
            prop_assert_eq!(deg, 3 * g.edge_count());
            prop_assert_eq!(codeg, 3 * g.edge_count());
        }

        #[test]
        fn cycle_divisibility_implies_vertex3(g in arb_graph(), ell in 4usize..9) {
            if g.check_divisibility(DivisibilityKind::Cycle(ell)).unwrap().divisible {
                prop_assert!(g.check_divisibility(DivisibilityKind::Vertex3).unwrap().divisible);
            }
        }

        #[test]
        fn membership_matches_edge_list(g in arb_graph()) {
            let edges = g.edge_set();
            let n = g.n();
            for a in 0..n { for b in a+1..n { for c in b+1..n {
                let t = Triple::new(a, b, c).unwrap();
                prop_assert_eq!(g.has(&t), edges.contains(&t));
            }}}
        }
    }
}
