//! Greedy packing: remove cycles until none is left.

use rand::RngExt;

use super::{DecompositionReport, DecompositionStatus, find_cycle};
use crate::error::{Error, Result};
use crate::graph::{EdgeQuery, NoEdges, ThreeGraph, Triple};
use crate::pathfinder;
use crate::rng::{self, Rng};
use crate::walks::{self, WalkKind, WalkSeq};

/// Search nodes allowed for the exhaustive phase of one greedy run.
pub const DEFAULT_SEARCH_BUDGET: u64 = 50_000_000;

/// Consecutive failed random extensions before switching to exhaustive search.
const RANDOM_MISSES: usize = 24;

/// Packs tight `ell`-cycles greedily: random extensions of random edges while
/// they keep succeeding, then exhaustive search until the leftover is cycle-free.
pub fn greedy_pack(g: &ThreeGraph, ell: usize, seed: u64) -> DecompositionReport {
    greedy_pack_within(g, ell, seed, DEFAULT_SEARCH_BUDGET)
}

pub fn greedy_pack_within(g: &ThreeGraph, ell: usize, seed: u64, budget: u64) -> DecompositionReport {
    let mut rng = rng::stream(seed, rng::streams::GREEDY);
    let (cycles, cycle_free, nodes) = pack(g, ell, budget, &mut rng);
    let mut r = DecompositionReport::from_cycles(g, ell, &cycles, DecompositionStatus::Partial)
        .expect("greedy cycles are disjoint");
    if r.leftover.is_empty() {
        r.status = DecompositionStatus::Complete;
    }
    r.stats.seed = seed;
    r.stats.iterations = nodes;
    r.stats.leftover_cycle_free = Some(cycle_free);
    r
}

/// Greedy cycles of `g`, whether the leftover was proved cycle-free, and search nodes used.
pub(crate) fn pack(g: &ThreeGraph, ell: usize, budget: u64, rng: &mut Rng) -> (Vec<WalkSeq>, bool, u64) {
    let mut rest = g.clone();
    let mut cycles = Vec::new();
    if ell < 4 || ell > g.n() {
        return (cycles, ell >= 4, 0);
    }
    let mut pool: Vec<Triple> = g.edges().collect();
    let mut misses = 0;
    while misses < RANDOM_MISSES && !pool.is_empty() {
        let i = rng.random_range(0..pool.len());
        let e = pool[i];
        if !rest.has(&e) {
            pool.swap_remove(i);
            continue;
        }
        match random_cycle_through(&rest, e, ell, rng) {
            Some(c) => {
                take(&mut rest, &c);
                cycles.push(c);
                misses = 0;
            }
            None => misses += 1,
        }
    }
    let mut nodes = 0u64;
    let mut from = 0;
    loop {
        match find_cycle(&rest, ell, from, budget.saturating_sub(nodes)) {
            Ok(Some(c)) => {
                from = c.vertices()[0];
                take(&mut rest, &c);
                cycles.push(c);
            }
            Ok(None) => return (cycles, true, nodes),
            Err(Error::IterationBudgetExceeded(_)) => return (cycles, false, budget),
            Err(_) => return (cycles, false, nodes),
        }
        // find_cycle does not report its node count; charge a nominal amount
        nodes += 1;
    }
}

fn take(g: &mut ThreeGraph, c: &WalkSeq) {
    for e in c.edges() {
        g.remove(e);
    }
}

/// One random extension attempt from `e`, with a random vertex in the middle.
fn random_cycle_through(g: &ThreeGraph, e: Triple, ell: usize, rng: &mut Rng) -> Option<WalkSeq> {
    let mut v = e.vertices();
    v.swap(1, rng.random_range(0..3));
    let p = walks::validate(&v, WalkKind::Path, g).ok()?;
    pathfinder::extend_to_cycle(g, &p, ell, None, None, &NoEdges, rng).ok()
}

/// Removes greedily found cycles from `g` in place and returns them; used by
/// multi-stage packers that keep their own leftover.
pub(crate) fn pack_in_place(g: &mut ThreeGraph, ell: usize, budget: u64, rng: &mut Rng) -> Result<(Vec<WalkSeq>, bool)> {
    let (cycles, free, _) = pack(g, ell, budget, rng);
    for c in &cycles {
        take(g, c);
    }
    Ok((cycles, free))
}
