//! Covering every edge outside `H[U]` by cycles that may borrow edges inside `U`.
//!
//! An edge has type `i` when it meets `U` in `i` vertices. Edges of types 1 and
//! 2 are partly held back as a reserve, the rest of `H − H[U]` is packed
//! greedily, leftover edges of types 0 and 1 are grown into cycles through the
//! uncovered edges, and the type-2 edges at each vertex `v ∉ U` are split into
//! 3-edge paths `abcd` of the link of `v` and lifted to tight paths `a b v c d`
//! closed inside `U`.

use rand::RngExt;
use serde::{Deserialize, Serialize};

use super::greedy::pack_in_place;
use super::{
    DEFAULT_SEARCH_BUDGET, DecompositionReport, DecompositionStatus, P3Outcome, StageStats, find_cycle_through,
    greedy_p3_paths, p3_decompose,
};
use crate::error::{Error, Result};
use crate::extender;
use crate::graph::{EdgeQuery, Graph2, ThreeGraph, Triple, Vertex, VertexSet};
use crate::pathfinder;
use crate::rng::{self, Rng};
use crate::walks::{self, WalkKind, WalkSeq};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverDownParams {
    /// Probability of holding a type-1 edge back from the greedy stage.
    pub p1: f64,
    /// Probability of holding a type-2 edge back from the greedy stage.
    pub p2: f64,
    /// Reported bound on the codegree of used edges inside `U`, as a fraction of `n`.
    pub mu: f64,
    pub search_budget: u64,
    /// Node budget of each exhaustive search for a cycle through one edge.
    pub edge_budget: u64,
    pub p3_budget: u64,
}

impl Default for CoverDownParams {
    fn default() -> Self {
        CoverDownParams {
            p1: 0.1,
            p2: 0.9,
            mu: 0.5,
            search_budget: DEFAULT_SEARCH_BUDGET,
            edge_budget: 200_000,
            p3_budget: 200_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CoverDownOutcome {
    /// Cycles over the input graph; the leftover holds every uncovered edge.
    pub report: DecompositionReport,
    /// Uncovered edges with at least one vertex outside `U`.
    pub uncovered_outside: usize,
    /// Largest codegree of cycle edges inside `U`.
    pub inside_max_codegree: usize,
    /// Whether that codegree is at most `mu * n`.
    pub within_mu: bool,
}

impl CoverDownOutcome {
    /// Every edge outside `H[U]` lies on a cycle.
    pub fn covers_outside(&self) -> bool {
        self.uncovered_outside == 0
    }
}

/// Marks the edges meeting `U` in more than `limit` vertices as unavailable.
struct AboveType<'a> {
    u: &'a VertexSet,
    limit: usize,
}

impl EdgeQuery for AboveType<'_> {
    fn has(&self, t: &Triple) -> bool {
        t.vertices().iter().filter(|&&v| self.u.contains(v)).count() > self.limit
    }
}

struct Run<'a> {
    u: &'a VertexSet,
    rest: ThreeGraph,
    cycles: Vec<WalkSeq>,
    rng: Rng,
    ell: usize,
    edge_budget: u64,
}

impl Run<'_> {
    fn kind(&self, e: &Triple) -> usize {
        e.vertices().iter().filter(|&&v| self.u.contains(v)).count()
    }

    fn take(&mut self, c: WalkSeq) {
        for e in c.edges() {
            self.rest.remove(e);
        }
        self.cycles.push(c);
    }

    /// Extends the path `seq` of uncovered edges into a cycle of uncovered
    /// edges, using edges of type above `cap` only when nothing else works.
    fn grow(&mut self, seq: &[Vertex], cap: usize) -> Option<WalkSeq> {
        let p = walks::validate(seq, WalkKind::Path, &self.rest).ok()?;
        if p.len() + 1 > self.ell {
            return None;
        }
        for limit in cap..=3 {
            let above = AboveType { u: self.u, limit };
            for allowed in [Some(self.u), None] {
                if let Ok(c) = pathfinder::extend_to_cycle(&self.rest, &p, self.ell, allowed, None, &above, &mut self.rng) {
                    return Some(c);
                }
            }
        }
        None
    }

    /// Tries to put the uncovered edge `e` on a cycle; true on success.
    fn cover_edge(&mut self, e: Triple) -> bool {
        let cap = (self.kind(&e) + 1).min(2);
        let [a, b, c] = e.vertices();
        let inside = |v: Vertex| self.u.contains(v);
        // a vertex of U in the middle keeps both closing windows clear of type 1
        let mut orders = vec![[a, b, c], [b, a, c], [a, c, b]];
        orders.sort_by_key(|o| !inside(o[1]));
        for o in orders {
            if let Some(cyc) = self.grow(&o, cap) {
                self.take(cyc);
                return true;
            }
        }
        match find_cycle_through(&self.rest, self.ell, [a, b, c], self.edge_budget) {
            Ok(Some(cyc)) => {
                self.take(cyc);
                true
            }
            _ => false,
        }
    }

    fn cover_type(&mut self, t: usize) -> (usize, usize) {
        let mut todo: Vec<Triple> = self.rest.edges().filter(|e| self.kind(e) == t).collect();
        for i in (1..todo.len()).rev() {
            todo.swap(i, self.rng.random_range(0..=i));
        }
        let before = self.cycles.len();
        let mut failed = 0;
        for e in todo {
            if self.rest.has(&e) && !self.cover_edge(e) {
                failed += 1;
            }
        }
        (self.cycles.len() - before, failed)
    }

    /// Splits the type-2 link of each `v ∉ U` into 3-edge paths and closes
    /// each lifted path `a b v c d` into a cycle.
    fn cover_links(&mut self, p3_budget: u64) -> (usize, usize) {
        let n = self.rest.n();
        let before = self.cycles.len();
        let mut unsplit = 0;
        for v in (0..n).filter(|&v| !self.u.contains(v)) {
            let mut link = Graph2::new(n);
            for e in self.rest.edges().filter(|e| e.contains(v)) {
                let [x, y] = e.vertices().into_iter().filter(|&x| x != v).collect::<Vec<_>>()[..] else {
                    unreachable!()
                };
                if self.u.contains(x) && self.u.contains(y) {
                    link.insert(x, y);
                }
            }
            if link.is_empty() {
                continue;
            }
            let paths = match p3_decompose(&link, p3_budget) {
                P3Outcome::Complete(p) => p,
                _ => {
                    unsplit += 1;
                    greedy_p3_paths(&link).0
                }
            };
            for [a, b, c, d] in paths {
                if let Some(cyc) = self.grow(&[a, b, v, c, d], 2) {
                    self.take(cyc);
                }
            }
        }
        (self.cycles.len() - before, unsplit)
    }

    fn stage(&self, name: &str, cycles: usize, note: String) -> StageStats {
        let outside: Vec<Triple> = self.rest.edges().filter(|e| self.kind(e) < 3).collect();
        StageStats {
            name: name.into(),
            cycles,
            leftover_edges: outside.len(),
            leftover_max_codegree: extender::max_codegree_of(&outside),
            note: Some(note),
        }
    }
}

/// Finds edge-disjoint `ell`-cycles of `g` covering, as far as it manages,
/// every edge with a vertex outside `u`. Requires every vertex outside `u` to
/// have degree divisible by 3. Stage statistics count uncovered edges outside `H[U]`.
pub fn cover_down(g: &ThreeGraph, u: &VertexSet, ell: usize, params: &CoverDownParams, seed: u64) -> Result<CoverDownOutcome> {
    let n = g.n();
    if u.universe() != n {
        return Err(Error::Precondition("vertex set and graph differ in size".into()));
    }
    if let Some(x) = (0..n).find(|&x| !u.contains(x) && g.degrees()[x] % 3 != 0) {
        return Err(Error::Precondition(format!("vertex {x} outside U has degree {} not divisible by 3", g.degrees()[x])));
    }
    let mut run = Run {
        u,
        rest: g.clone(),
        cycles: Vec::new(),
        rng: rng::stream(seed, rng::streams::COVER_DOWN),
        ell,
        edge_budget: params.edge_budget,
    };
    let mut stages = Vec::new();

    let mut reserve_rng = rng::stream(seed, rng::streams::RESERVE);
    let mut open = ThreeGraph::empty(n);
    for e in g.edges() {
        let keep_back = match run.kind(&e) {
            0 => false,
            1 => reserve_rng.random_bool(params.p1.clamp(0.0, 1.0)),
            2 => reserve_rng.random_bool(params.p2.clamp(0.0, 1.0)),
            _ => true,
        };
        if !keep_back {
            open.insert(e);
        }
    }
    let mut greedy_rng = rng::stream(seed, rng::streams::GREEDY);
    let (packed, _) = pack_in_place(&mut open, ell, params.search_budget, &mut greedy_rng)?;
    let made = packed.len();
    for c in packed {
        run.take(c);
    }
    stages.push(run.stage("greedy", made, format!("{} edges held back", g.edge_count() - made * ell - open.edge_count())));

    for t in [0, 1] {
        let (made, failed) = run.cover_type(t);
        stages.push(run.stage(&format!("type {t}"), made, format!("{failed} edges without a cycle")));
    }
    let (made, unsplit) = run.cover_links(params.p3_budget);
    stages.push(run.stage("links", made, format!("{unsplit} links without an exact path split")));
    let (made, failed) = run.cover_type(2);
    stages.push(run.stage("type 2", made, format!("{failed} edges without a cycle")));

    let mut report = DecompositionReport::from_cycles(g, ell, &run.cycles, DecompositionStatus::Partial)?;
    if report.leftover.is_empty() {
        report.status = DecompositionStatus::Complete;
    }
    report.stats.seed = seed;
    report.stats.stages = stages;
    let uncovered_outside = report.leftover.iter().filter(|e| run.kind(e) < 3).count();
    let inside: Vec<Triple> =
        run.cycles.iter().flat_map(|c| c.edges().iter().copied()).filter(|e| run.kind(e) == 3).collect();
    let inside_max_codegree = extender::max_codegree_of(&inside);
    Ok(CoverDownOutcome {
        report,
        uncovered_outside,
        inside_max_codegree,
        within_mu: inside_max_codegree as f64 <= params.mu * n as f64,
    })
}
