//! Exact cover of the edge set by tight cycles.

use std::collections::HashMap;

use super::{DecompositionReport, DecompositionStatus, enumerate_cycles};
use crate::error::Error;
use crate::graph::{DivisibilityKind, ThreeGraph, Triple};
use crate::walks::WalkSeq;

pub const DEFAULT_EXACT_BUDGET: u64 = 10_000_000;

/// Cycles beyond this count make the instance count as over budget.
const CYCLE_LIMIT: usize = 2_000_000;

struct Cover {
    cycle_edges: Vec<Vec<usize>>,
    edge_cycles: Vec<Vec<usize>>,
    covered: Vec<bool>,
    blocked: Vec<u32>,
    avail: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
}

enum Search {
    Found,
    Exhausted,
    OverBudget,
}

impl Cover {
    fn take(&mut self, c: usize) {
        for i in 0..self.cycle_edges[c].len() {
            let f = self.cycle_edges[c][i];
            self.covered[f] = true;
            for j in 0..self.edge_cycles[f].len() {
                let d = self.edge_cycles[f][j];
                self.blocked[d] += 1;
                if self.blocked[d] == 1 {
                    for &h in &self.cycle_edges[d] {
                        self.avail[h] -= 1;
                    }
                }
            }
        }
        self.chosen.push(c);
    }

    fn untake(&mut self, c: usize) {
        self.chosen.pop();
        for i in (0..self.cycle_edges[c].len()).rev() {
            let f = self.cycle_edges[c][i];
            for j in 0..self.edge_cycles[f].len() {
                let d = self.edge_cycles[f][j];
                self.blocked[d] -= 1;
                if self.blocked[d] == 0 {
                    for &h in &self.cycle_edges[d] {
                        self.avail[h] += 1;
                    }
                }
            }
            self.covered[f] = false;
        }
    }

    fn solve(&mut self) -> Search {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Search::OverBudget;
        }
        // fewest remaining cycles first, lowest edge index on ties
        let mut pick: Option<usize> = None;
        for e in 0..self.covered.len() {
            if !self.covered[e] && pick.is_none_or(|p| self.avail[e] < self.avail[p]) {
                pick = Some(e);
            }
        }
        let Some(e) = pick else {
            return Search::Found;
        };
        if self.avail[e] == 0 {
            return Search::Exhausted;
        }
        for k in 0..self.edge_cycles[e].len() {
            let c = self.edge_cycles[e][k];
            if self.blocked[c] != 0 {
                continue;
            }
            self.take(c);
            match self.solve() {
                Search::Exhausted => self.untake(c),
                other => return other,
            }
        }
        Search::Exhausted
    }
}

/// Decides whether `g` has a decomposition into tight `ell`-cycles.
///
/// Non-divisible inputs are rejected at once. Otherwise the search branches on
/// the uncovered edge lying in the fewest available cycles, and reports
/// `BudgetExceeded` after `budget` nodes.
pub fn exact_decompose(g: &ThreeGraph, ell: usize, budget: u64) -> DecompositionReport {
    let done = |cycles: &[WalkSeq], status, nodes| {
        let mut r = DecompositionReport::from_cycles(g, ell, cycles, status).expect("search keeps cycles disjoint");
        r.stats.iterations = nodes;
        r
    };
    if ell < 4 {
        return done(&[], DecompositionStatus::Infeasible, 0);
    }
    if g.is_empty() {
        return done(&[], DecompositionStatus::Complete, 0);
    }
    match g.check_divisibility(DivisibilityKind::Cycle(ell)) {
        Ok(c) if c.divisible => {}
        _ => return done(&[], DecompositionStatus::Infeasible, 0),
    }
    let cycles = match enumerate_cycles(g, ell, CYCLE_LIMIT) {
        Ok(c) => c,
        Err(Error::LimitExceeded(_)) => return done(&[], DecompositionStatus::BudgetExceeded, 0),
        Err(_) => return done(&[], DecompositionStatus::Infeasible, 0),
    };
    let (outcome, nodes) = cover_with(g, &cycles, budget);
    match outcome {
        CoverOutcome::Found(chosen) => done(&chosen, DecompositionStatus::Complete, nodes),
        CoverOutcome::Exhausted => done(&[], DecompositionStatus::Infeasible, nodes),
        CoverOutcome::OverBudget => done(&[], DecompositionStatus::BudgetExceeded, nodes),
    }
}

pub(crate) enum CoverOutcome {
    Found(Vec<WalkSeq>),
    Exhausted,
    OverBudget,
}

/// Exact cover of `E(g)` by members of `cycles` (any lengths), plus the node count.
pub(crate) fn cover_with(g: &ThreeGraph, cycles: &[WalkSeq], budget: u64) -> (CoverOutcome, u64) {
    let edges: Vec<Triple> = g.edges().collect();
    let index: HashMap<Triple, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let mut edge_cycles = vec![Vec::new(); edges.len()];
    let mut cycle_edges = Vec::with_capacity(cycles.len());
    for (c, cyc) in cycles.iter().enumerate() {
        let mut ids: Vec<usize> = cyc.edges().iter().map(|e| index[e]).collect();
        ids.sort_unstable();
        for &e in &ids {
            edge_cycles[e].push(c);
        }
        cycle_edges.push(ids);
    }
    let avail = edge_cycles.iter().map(Vec::len).collect();
    let mut cover = Cover {
        cycle_edges,
        edge_cycles,
        covered: vec![false; edges.len()],
        blocked: vec![0; cycles.len()],
        avail,
        chosen: Vec::new(),
        nodes: 0,
        budget,
    };
    let outcome = match cover.solve() {
        Search::Found => CoverOutcome::Found(cover.chosen.iter().map(|&c| cycles[c].clone()).collect()),
        Search::Exhausted => CoverOutcome::Exhausted,
        Search::OverBudget => CoverOutcome::OverBudget,
    };
    (outcome, cover.nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposer::validate_decomposition;

    fn tight_cycle(n: usize, k: usize) -> ThreeGraph {
        ThreeGraph::build(n, (0..k).map(|i| [i, (i + 1) % k, (i + 2) % k])).unwrap()
    }

    #[test]
    fn small_instances() {
        let k4 = exact_decompose(&ThreeGraph::complete(4), 4, DEFAULT_EXACT_BUDGET);
        assert_eq!((k4.status, k4.cycles.len()), (DecompositionStatus::Complete, 1));

        let g = ThreeGraph::complete(5);
        let k5 = exact_decompose(&g, 5, DEFAULT_EXACT_BUDGET);
        assert_eq!((k5.status, k5.cycles.len()), (DecompositionStatus::Complete, 2));
        assert!(validate_decomposition(&g, &k5.cycles));
        k5.check_accounting(&g).unwrap();

        let c8 = exact_decompose(&tight_cycle(8, 8), 4, DEFAULT_EXACT_BUDGET);
        assert_eq!(c8.status, DecompositionStatus::Infeasible);
        assert_eq!(c8.leftover.len(), 8);
    }

    #[test]
    fn non_divisible_is_infeasible_without_search() {
        let g = ThreeGraph::build(5, [[0, 1, 2]]).unwrap();
        let r = exact_decompose(&g, 4, DEFAULT_EXACT_BUDGET);
        assert_eq!((r.status, r.stats.iterations), (DecompositionStatus::Infeasible, 0));
    }

    #[test]
    fn tiny_budget() {
        let g = ThreeGraph::complete(8);
        // 56 edges, degrees 21: divisible for ell = 7 and 8
        let r = exact_decompose(&g, 8, 3);
        assert_eq!(r.status, DecompositionStatus::BudgetExceeded);
        r.check_accounting(&g).unwrap();
    }

    #[test]
    fn two_disjoint_k4() {
        let mut e: Vec<[usize; 3]> = ThreeGraph::complete(4).edges().map(|t| t.vertices()).collect();
        e.extend(ThreeGraph::complete(4).edges().map(|t| t.vertices().map(|v| v + 4)));
        let g = ThreeGraph::build(8, e).unwrap();
        let r = exact_decompose(&g, 4, DEFAULT_EXACT_BUDGET);
        assert_eq!((r.status, r.cycles.len()), (DecompositionStatus::Complete, 2));
    }
}
