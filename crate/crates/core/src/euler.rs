//! Euler tours: spanning trails, closing and splicing, and a small exact search.

use std::collections::{HashMap, HashSet};

use rand::RngExt;
use serde::Serialize;

use crate::decomposer::{CoverOutcome, cover_with, enumerate_cycles, greedy_pack_within};
use crate::error::{Error, Result};
use crate::graph::{DivisibilityKind, NoEdges, ThreeGraph, Triple, Vertex};
use crate::pathfinder;
use crate::rng::{self, Rng};
use crate::walks::{self, WalkKind, WalkSeq};

pub const DEFAULT_TRAIL_BUDGET: u64 = 2_000_000;
pub const DEFAULT_EULER_BUDGET: u64 = 50_000_000;

/// Moves tried per search node.
const BRANCH: usize = 12;
/// Seeds tried by `assemble_euler` before giving up.
const ATTEMPTS: u64 = 8;
/// Longest cycle used when the remainder is split into cycles of mixed length.
const MAX_MIXED_LEN: usize = 12;
const MIXED_CYCLE_LIMIT: usize = 200_000;
const MIXED_COVER_BUDGET: u64 = 2_000_000;
/// Graphs up to this size are decided by exact search when no spanning trail works.
/// Small graphs often have no spanning trail at all: a tight 4-cycle has six pairs
/// but only four consecutive ones.
pub const EXACT_FALLBACK_EDGES: usize = 24;

#[derive(Clone, Debug, Serialize)]
pub struct SpanningTrail {
    pub trail: WalkSeq,
    /// Largest codegree of the trail's edge set.
    pub max_codegree: usize,
    pub nodes: u64,
}

fn pair(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

struct TrailSearch<'a> {
    g: &'a ThreeGraph,
    seq: Vec<Vertex>,
    used: HashSet<Triple>,
    seen: HashMap<(Vertex, Vertex), usize>,
    missing: usize,
}

impl TrailSearch<'_> {
    fn push(&mut self, v: Vertex) {
        let k = self.seq.len();
        if k >= 2 {
            self.used.insert(Triple::sorted(self.seq[k - 2], self.seq[k - 1], v));
        }
        if k >= 1 {
            let c = self.seen.entry(pair(self.seq[k - 1], v)).or_insert(0);
            if *c == 0 {
                self.missing -= 1;
            }
            *c += 1;
        }
        self.seq.push(v);
    }

    fn pop(&mut self) {
        let v = self.seq.pop().expect("nonempty");
        let k = self.seq.len();
        if k >= 1 {
            let c = self.seen.get_mut(&pair(self.seq[k - 1], v)).expect("counted");
            *c -= 1;
            if *c == 0 {
                self.missing += 1;
            }
        }
        if k >= 2 {
            self.used.remove(&Triple::sorted(self.seq[k - 2], self.seq[k - 1], v));
        }
    }

    fn free(&self, a: Vertex, b: Vertex, c: Vertex) -> bool {
        self.g.contains(a, b, c) && !self.used.contains(&Triple::sorted(a, b, c))
    }

    fn covered(&self, a: Vertex, b: Vertex) -> bool {
        self.seen.get(&pair(a, b)).is_some_and(|&c| c > 0)
    }

    /// Up to `BRANCH` extensions of one to three vertices ending in an
    /// uncovered pair, shortest first.
    fn moves(&self, rng: &mut Rng) -> Vec<Vec<Vertex>> {
        let k = self.seq.len();
        let (a, b) = (self.seq[k - 2], self.seq[k - 1]);
        let mut first: Vec<Vertex> = self.g.neighbours(a, b).filter(|&x| self.free(a, b, x)).collect();
        shuffle(&mut first, rng);
        let mut out: Vec<Vec<Vertex>> = first.iter().filter(|&&x| !self.covered(b, x)).map(|&x| vec![x]).collect();
        if out.len() >= BRANCH {
            out.truncate(BRANCH);
            return out;
        }
        let mut longer = Vec::new();
        for &x in &first {
            let e1 = Triple::sorted(a, b, x);
            for y in self.g.neighbours(b, x) {
                if !self.free(b, x, y) || Triple::sorted(b, x, y) == e1 {
                    continue;
                }
                if !self.covered(x, y) {
                    longer.push(vec![x, y]);
                }
            }
        }
        shuffle(&mut longer, rng);
        out.extend(longer.into_iter().take(BRANCH - out.len()));
        if !out.is_empty() {
            return out;
        }
        // a connector vertex v in front of an uncovered pair c d
        let mut far = Vec::new();
        for &v in &first {
            let e1 = Triple::sorted(a, b, v);
            for c in self.g.neighbours(b, v) {
                let e2 = Triple::sorted(b, v, c);
                if !self.free(b, v, c) || e2 == e1 {
                    continue;
                }
                for d in self.g.neighbours(v, c) {
                    let e3 = Triple::sorted(v, c, d);
                    if self.free(v, c, d) && e3 != e1 && e3 != e2 && !self.covered(c, d) {
                        far.push(vec![v, c, d]);
                    }
                }
            }
        }
        shuffle(&mut far, rng);
        far.truncate(BRANCH);
        far
    }
}

fn shuffle<T>(v: &mut [T], rng: &mut Rng) {
    for i in (1..v.len()).rev() {
        v.swap(i, rng.random_range(0..=i));
    }
}

/// A trail in which every pair of non-isolated vertices occurs consecutively.
///
/// Depth-first search that repeatedly walks to an uncovered pair, directly or
/// through up to two connector vertices, backtracking on dead ends. Fails with
/// `ConstructionFailed` when the search runs out of options or of `budget` nodes.
pub fn spanning_trail(g: &ThreeGraph, seed: u64, budget: u64) -> Result<SpanningTrail> {
    let (trail, nodes) = search_trail(g, seed, budget, |t| Some(t.clone()))?;
    let max_codegree = crate::extender::max_codegree_of(trail.edges());
    Ok(SpanningTrail { trail, max_codegree, nodes })
}

/// Spanning trail search that keeps going until `accept` turns a trail into an answer.
fn search_trail<T>(
    g: &ThreeGraph,
    seed: u64,
    budget: u64,
    mut accept: impl FnMut(&WalkSeq) -> Option<T>,
) -> Result<(T, u64)> {
    let support = g.support().to_vec();
    if g.is_empty() {
        return Err(Error::ConstructionFailed("the graph has no edges".into()));
    }
    for (i, &a) in support.iter().enumerate() {
        if let Some(&b) = support[i + 1..].iter().find(|&&b| g.codegree_unchecked(a, b, None) == 0) {
            return Err(Error::ConstructionFailed(format!("pair ({a}, {b}) lies in no edge")));
        }
    }
    let mut rng = rng::stream(seed, rng::streams::EULER);
    let mut search = TrailSearch {
        g,
        seq: Vec::new(),
        used: HashSet::new(),
        seen: HashMap::new(),
        missing: support.len() * (support.len() - 1) / 2,
    };
    let mut starts: Vec<[Vertex; 3]> = g.edges().map(|e| e.vertices()).collect();
    shuffle(&mut starts, &mut rng);
    starts.truncate(BRANCH);
    let mut nodes = 0u64;
    for start in starts {
        for v in start {
            search.push(v);
        }
        // each frame: candidate moves and the index of the next one to try
        let mut stack: Vec<(Vec<Vec<Vertex>>, usize)> = vec![(search.moves(&mut rng), 0)];
        while let Some((moves, next)) = stack.last_mut() {
            nodes += 1;
            if search.missing == 0 && *next == 0 {
                let trail = walks::validate(&search.seq, WalkKind::Trail, g)?;
                if let Some(out) = accept(&trail) {
                    return Ok((out, nodes));
                }
                // rejected: treat as a dead end
                *next = moves.len();
            }
            if nodes > budget {
                return Err(Error::ConstructionFailed(format!("spanning trail search exceeded {budget} nodes")));
            }
            if *next >= moves.len() {
                stack.pop();
                if let Some((moves, next)) = stack.last() {
                    for _ in 0..moves[next - 1].len() {
                        search.pop();
                    }
                }
                continue;
            }
            let m = moves[*next].clone();
            *next += 1;
            for v in m {
                search.push(v);
            }
            let fresh = search.moves(&mut rng);
            stack.push((fresh, 0));
        }
        for _ in 0..3 {
            search.pop();
        }
    }
    Err(Error::ConstructionFailed("no spanning trail found".into()))
}

/// True iff `w` is a tour of `g` using every edge exactly once.
pub fn verify_euler(g: &ThreeGraph, w: &WalkSeq) -> bool {
    w.is_closed()
        && walks::validate(w.vertices(), WalkKind::Tour, g).is_ok()
        && w.edges().len() == g.edge_count()
}

/// Splits `rest` into tight cycles: `ell`-cycles greedily, then an exact cover
/// of the remainder by cycles of mixed lengths.
fn split_into_cycles(rest: &ThreeGraph, ell: usize, seed: u64) -> Option<Vec<WalkSeq>> {
    if rest.is_empty() {
        return Some(Vec::new());
    }
    let mixed = |h: &ThreeGraph| -> Option<Vec<WalkSeq>> {
        let mut all = Vec::new();
        for len in 4..=MAX_MIXED_LEN.min(h.n()) {
            all.extend(enumerate_cycles(h, len, MIXED_CYCLE_LIMIT).ok()?);
            if all.len() > MIXED_CYCLE_LIMIT {
                return None;
            }
        }
        match cover_with(h, &all, MIXED_COVER_BUDGET).0 {
            CoverOutcome::Found(c) => Some(c),
            _ => None,
        }
    };
    if let Some(c) = mixed(rest) {
        return Some(c);
    }
    let packed = greedy_pack_within(rest, ell, seed, crate::decomposer::DEFAULT_SEARCH_BUDGET);
    let mut cycles = packed.walks(rest).ok()?;
    let left = ThreeGraph::from_edges(rest.n(), packed.leftover.iter()).ok()?;
    cycles.extend(mixed(&left)?);
    Some(cycles)
}

/// An Euler tour of a vertex-divisible `g`: a spanning trail closed to a tour,
/// the remaining edges split into cycles, and each cycle spliced into the tour.
/// Graphs with at most [`EXACT_FALLBACK_EDGES`] edges on which this fails go to
/// [`exact_euler`]; a proof of non-existence is reported as `Precondition`.
pub fn assemble_euler(g: &ThreeGraph, ell: usize, seed: u64) -> Result<WalkSeq> {
    let check = g.check_divisibility(DivisibilityKind::Vertex3)?;
    if !check.divisible {
        return Err(Error::Precondition(format!("graph is not 3-vertex-divisible: {:?}", check.violation)));
    }
    let mut last_err = Error::ConstructionFailed("no attempt made".into());
    for attempt in 0..ATTEMPTS {
        let s = rng::child_seed(seed, attempt);
        let mut rng = rng::stream(s, rng::streams::EULER);
        let mut rejected = 0usize;
        let found = search_trail(g, s, DEFAULT_TRAIL_BUDGET, |trail| {
            let out = close_and_splice(g, trail, ell, s, &mut rng);
            if out.is_none() {
                rejected += 1;
            }
            out
        });
        match found {
            Ok((tour, _)) => {
                if verify_euler(g, &tour) {
                    return Ok(tour);
                }
                return Err(Error::Internal("assembled tour misses edges".into()));
            }
            Err(e) => {
                log::debug!("attempt {attempt}: {e}, {rejected} spanning trails rejected");
                last_err = e;
            }
        }
    }
    if g.edge_count() <= EXACT_FALLBACK_EDGES {
        return match exact_euler(g, DEFAULT_EULER_BUDGET) {
            EulerOutcome::Tour(w) => Ok(w),
            EulerOutcome::Infeasible => Err(Error::Precondition("exhaustive search found no Euler tour".into())),
            EulerOutcome::BudgetExceeded => Err(last_err),
        };
    }
    Err(last_err)
}

/// Closes `trail` to a tour, splits the other edges into cycles and splices them in.
fn close_and_splice(g: &ThreeGraph, trail: &WalkSeq, ell: usize, seed: u64, rng: &mut Rng) -> Option<WalkSeq> {
    let tour = pathfinder::close_to_tour(g, trail, &NoEdges, rng).ok()?;
    let rest = g.without_edges(tour.edges());
    let mut cycles = split_into_cycles(&rest, ell, seed)?;
    cycles.sort_by_key(|c| c.canonical());
    let mut out = tour;
    for c in &cycles {
        out = walks::splice_cycle(&out, c).ok()?;
    }
    walks::validate(out.vertices(), WalkKind::Tour, g).ok()
}

#[derive(Clone, Debug, Serialize)]
pub enum EulerOutcome {
    Tour(WalkSeq),
    Infeasible,
    BudgetExceeded,
}

struct EulerSearch<'a> {
    g: &'a ThreeGraph,
    seq: Vec<Vertex>,
    used: HashSet<Triple>,
    target: usize,
    nodes: u64,
    budget: u64,
}

impl EulerSearch<'_> {
    /// `Some(true)` once a tour is found, `None` when over budget.
    fn extend(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let k = self.seq.len();
        if k == self.target {
            let s = &self.seq;
            let c1 = Triple::sorted(s[k - 2], s[k - 1], s[0]);
            let c2 = Triple::sorted(s[k - 1], s[0], s[1]);
            let fits = |a: Vertex, b: Vertex, c: Vertex| a != b && b != c && a != c && self.g.contains(a, b, c);
            return Some(
                fits(s[k - 2], s[k - 1], s[0])
                    && fits(s[k - 1], s[0], s[1])
                    && c1 != c2
                    && !self.used.contains(&c1)
                    && !self.used.contains(&c2),
            );
        }
        let (a, b) = (self.seq[k - 2], self.seq[k - 1]);
        let options: Vec<Vertex> = self.g.neighbours(a, b).collect();
        for z in options {
            let e = Triple::sorted(a, b, z);
            if self.used.contains(&e) {
                continue;
            }
            self.used.insert(e);
            self.seq.push(z);
            match self.extend() {
                Some(false) => {}
                other => return other,
            }
            self.seq.pop();
            self.used.remove(&e);
        }
        Some(false)
    }
}

/// Exhaustive search for an Euler tour, meant for graphs with a few dozen edges.
pub fn exact_euler(g: &ThreeGraph, budget: u64) -> EulerOutcome {
    let m = g.edge_count();
    let divisible = g.check_divisibility(DivisibilityKind::Vertex3).is_ok_and(|c| c.divisible);
    if m < 4 || !divisible {
        return EulerOutcome::Infeasible;
    }
    // rotate so the tour opens with the least edge, in one of its six orders
    let [a, b, c] = g.edges().next().expect("nonempty").vertices();
    let mut search = EulerSearch { g, seq: Vec::new(), used: HashSet::new(), target: m, nodes: 0, budget };
    for start in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
        search.seq = start.to_vec();
        search.used = HashSet::from([Triple::sorted(a, b, c)]);
        match search.extend() {
            Some(true) => {
                let w = walks::validate(&search.seq, WalkKind::Tour, g).expect("search keeps edges distinct");
                return EulerOutcome::Tour(w);
            }
            Some(false) => {}
            None => return EulerOutcome::BudgetExceeded,
        }
    }
    EulerOutcome::Infeasible
}
