//! Growing a sparse family of edge-disjoint paths into edge-disjoint tight
//! cycles, using only edges of a reserve graph for the new part of each cycle.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeQuery, ThreeGraph, Triple, Vertex};
use crate::pathfinder;
use crate::rng::{self, Rng};
use crate::walks::{self, WalkKind, WalkSeq};

/// Edge-disjoint open paths on a common number of vertices.
#[derive(Clone, Debug, Default, Serialize)]
pub struct SparseFamily {
    paths: Vec<WalkSeq>,
    gamma: f64,
}

impl SparseFamily {
    pub fn new(paths: Vec<WalkSeq>, gamma: f64) -> Result<Self> {
        let mut seen = HashSet::new();
        let len = paths.first().map(|p| p.len());
        for p in &paths {
            if p.kind() != WalkKind::Path {
                return Err(Error::Precondition("family members must be paths".into()));
            }
            if Some(p.len()) != len {
                return Err(Error::Precondition("family paths must have a common vertex count".into()));
            }
            for &e in p.edges() {
                if !seen.insert(e) {
                    return Err(Error::EdgeOverlap);
                }
            }
        }
        Ok(SparseFamily { paths, gamma })
    }

    pub fn paths(&self) -> &[WalkSeq] {
        &self.paths
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Vertex count shared by all paths, 0 for an empty family.
    pub fn path_len(&self) -> usize {
        self.paths.first().map_or(0, |p| p.len())
    }
}

/// The pair and type whose path count comes closest to (or exceeds) its bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SparsityOffender {
    pub pair: (Vertex, Vertex),
    pub path_type: u8,
    pub count: usize,
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparsityReport {
    pub sparse: bool,
    pub worst: Option<SparsityOffender>,
}

fn end_pairs(p: &WalkSeq) -> [(Vertex, Vertex); 2] {
    let v = p.vertices();
    let k = v.len();
    [(v[0], v[1]), (v[k - 2], v[k - 1])]
}

/// Exact check that, for every pair `e` and type `r`, at most `gamma * n^(3-r)`
/// paths have type `r` with respect to `e`.
pub fn check_gamma_sparse(fam: &SparseFamily, n: usize, gamma: f64) -> SparsityReport {
    let total = fam.paths.len();
    if total == 0 {
        return SparsityReport { sparse: true, worst: None };
    }
    let nf = n as f64;
    let bound = |r: u8| gamma * nf.powi(3 - r as i32);
    let mut by_vertex: HashMap<Vertex, Vec<usize>> = HashMap::new();
    for (i, p) in fam.paths.iter().enumerate() {
        let mut vs: Vec<Vertex> = end_pairs(p).iter().flat_map(|&(a, b)| [a, b]).collect();
        vs.sort_unstable();
        vs.dedup();
        for v in vs {
            by_vertex.entry(v).or_default().push(i);
        }
    }
    let mut ends: Vec<Vertex> = by_vertex.keys().copied().collect();
    ends.sort_unstable();
    let outside: Vec<Vertex> = (0..n).filter(|v| !by_vertex.contains_key(v)).take(2).collect();

    let mut worst: Option<SparsityOffender> = None;
    let mut consider = |pair: (Vertex, Vertex), r: u8, count: usize| {
        let cand = SparsityOffender { pair, path_type: r, count, bound: bound(r) };
        let ratio = |o: &SparsityOffender| o.count as f64 / o.bound.max(f64::MIN_POSITIVE);
        if worst.as_ref().is_none_or(|w| ratio(&cand) > ratio(w)) {
            worst = Some(cand);
        }
    };

    // pairs meeting no end vertex see every path as type 0
    if outside.len() == 2 {
        consider((outside[0], outside[1]), 0, total);
    }
    // one end vertex and one vertex outside all ends: every path through x is type 1
    if let Some(&y) = outside.first() {
        for &x in &ends {
            consider((x.min(y), x.max(y)), 1, by_vertex[&x].len());
        }
    }
    for (i, &x) in ends.iter().enumerate() {
        for &y in &ends[i + 1..] {
            let mut touching: Vec<usize> = by_vertex[&x].iter().chain(&by_vertex[&y]).copied().collect();
            touching.sort_unstable();
            touching.dedup();
            let mut counts = [total - touching.len(), 0, 0];
            for &j in &touching {
                counts[walks::classify_type(&fam.paths[j], (x, y)).value() as usize] += 1;
            }
            for (r, &c) in counts.iter().enumerate() {
                consider((x, y), r as u8, c);
            }
        }
    }
    let sparse = worst.as_ref().is_none_or(|w| w.count as f64 <= w.bound);
    SparsityReport { sparse, worst }
}

/// Edge query that marks everything outside the unused reserve as taken.
struct ReserveOnly<'a> {
    reserve: &'a ThreeGraph,
    used: &'a HashSet<Triple>,
}

impl EdgeQuery for ReserveOnly<'_> {
    fn has(&self, t: &Triple) -> bool {
        !self.reserve.has(t) || self.used.contains(t)
    }
}

/// Reserve edges consumed so far, with their pair codegrees.
#[derive(Default)]
struct ReserveUsage {
    used: HashSet<Triple>,
    codegree: HashMap<(Vertex, Vertex), usize>,
    max: usize,
}

impl ReserveUsage {
    fn add(&mut self, t: Triple) {
        self.used.insert(t);
        let [a, b, c] = t.vertices();
        for pair in [(a, b), (a, c), (b, c)] {
            let d = self.codegree.entry(pair).or_default();
            *d += 1;
            self.max = self.max.max(*d);
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Extension {
    /// Union of the produced cycles.
    #[serde(skip)]
    pub graph: ThreeGraph,
    /// One cycle per input path, in input order; each starts with its path.
    pub cycles: Vec<WalkSeq>,
    /// Maximum pair codegree of the used reserve edges after each extension.
    pub reserve_codegree: Vec<usize>,
    /// Indices (into the input) of paths left unextended; always empty for
    /// [`extend_family`].
    pub failed: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ExtendOptions {
    /// Process paths in a seeded random order instead of input order.
    pub shuffle: bool,
    /// Skip paths that cannot be extended instead of failing.
    pub best_effort: bool,
}

fn check_inputs(h1: &ThreeGraph, h2: &ThreeGraph, fam: &SparseFamily, ell: usize) -> Result<()> {
    if h1.n() != h2.n() {
        return Err(Error::Precondition("both graphs must share a vertex set".into()));
    }
    if let Some(t) = h1.edges().find(|t| h2.has(t)) {
        return Err(Error::Precondition(format!("graphs share the edge {t}")));
    }
    for p in &fam.paths {
        walks::validate(p.vertices(), WalkKind::Path, h1)?;
    }
    if !fam.is_empty() && ell < fam.path_len() + 2 {
        return Err(Error::Precondition(format!(
            "cycles of length {ell} cannot extend paths on {} vertices",
            fam.path_len()
        )));
    }
    Ok(())
}

/// Extends every path of `fam` (a subgraph of `h1`) to a tight `ell`-cycle whose
/// remaining edges come from the reserve `h2`, never reusing a reserve edge.
/// Fails before extension `i` (1-based) if the used reserve already has a pair
/// of codegree above `mu * n`.
pub fn extend_family(
    h1: &ThreeGraph,
    h2: &ThreeGraph,
    fam: &SparseFamily,
    ell: usize,
    mu: f64,
    seed: u64,
) -> Result<Extension> {
    extend_family_with(h1, h2, fam, ell, mu, seed, ExtendOptions::default())
}

pub fn extend_family_with(
    h1: &ThreeGraph,
    h2: &ThreeGraph,
    fam: &SparseFamily,
    ell: usize,
    mu: f64,
    seed: u64,
    opts: ExtendOptions,
) -> Result<Extension> {
    check_inputs(h1, h2, fam, ell)?;
    let mut rng = rng::stream(seed, rng::streams::EXTENDER);
    let union = h1.with_edges(&h2.edge_set())?;
    let budget = mu * h1.n() as f64;
    let mut order: Vec<usize> = (0..fam.len()).collect();
    if opts.shuffle {
        order.shuffle(&mut rng);
    }
    let mut usage = ReserveUsage::default();
    let mut slots: Vec<Option<WalkSeq>> = vec![None; fam.len()];
    let mut out = Extension { graph: ThreeGraph::empty(h1.n()), ..Default::default() };
    for (step, &i) in order.iter().enumerate() {
        if usage.max as f64 > budget {
            return Err(Error::CodegreeBudgetExceeded(step + 1));
        }
        match extend_one(&union, h2, &usage.used, &fam.paths[i], ell, &mut rng) {
            Ok(c) => {
                for &e in c.edges() {
                    out.graph.insert(e);
                    if h2.has(&e) {
                        usage.add(e);
                    }
                }
                slots[i] = Some(c);
            }
            Err(_) if opts.best_effort => out.failed.push(i),
            Err(_) => return Err(Error::NoExtensionAvailable(step + 1)),
        }
        out.reserve_codegree.push(usage.max);
    }
    if !opts.best_effort && usage.max as f64 > budget {
        return Err(Error::CodegreeBudgetExceeded(fam.len() + 1));
    }
    out.failed.sort_unstable();
    out.cycles = slots.into_iter().flatten().collect();
    Ok(out)
}

fn extend_one(
    union: &ThreeGraph,
    reserve: &ThreeGraph,
    used: &HashSet<Triple>,
    p: &WalkSeq,
    ell: usize,
    rng: &mut Rng,
) -> Result<WalkSeq> {
    let avoid = ReserveOnly { reserve, used };
    let c = pathfinder::extend_to_cycle(union, p, ell, None, None, &avoid, rng)?;
    let own: HashSet<Triple> = p.edges().iter().copied().collect();
    if c.edges().iter().any(|e| !own.contains(e) && (!reserve.has(e) || used.contains(e))) {
        return Err(Error::Internal("extension left the unused reserve".into()));
    }
    Ok(c)
}

/// Largest pair codegree of `edges`.
pub fn max_codegree_of<'a>(edges: impl IntoIterator<Item = &'a Triple>) -> usize {
    let mut usage = ReserveUsage::default();
    for &e in edges {
        usage.add(e);
    }
    usage.max
}
