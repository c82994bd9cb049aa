//! Depth-first search for tight cycles, driven by neighbourhood bitsets.

use crate::error::{Error, Result};
use crate::graph::{ThreeGraph, Vertex};
use crate::walks::{self, WalkKind, WalkSeq};

/// Bounded exhaustive search for tight `ell`-cycles.
pub struct CycleSearch<'a> {
    g: &'a ThreeGraph,
    ell: usize,
    budget: u64,
    nodes: u64,
}

impl<'a> CycleSearch<'a> {
    pub fn new(g: &'a ThreeGraph, ell: usize) -> Result<Self> {
        if ell < 4 {
            return Err(Error::BadParams(format!("cycle length {ell} is below 4")));
        }
        Ok(CycleSearch { g, ell, budget: u64::MAX, nodes: 0 })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    /// Search nodes visited so far.
    pub fn nodes(&self) -> u64 {
        self.nodes
    }

    /// Visits canonical cycles whose least vertex is at least `from`, in
    /// lexicographic order, until `visit` returns true. Returns whether it stopped early.
    pub fn canonical_from(&mut self, from: Vertex, mut visit: impl FnMut(&[Vertex]) -> bool) -> Result<bool> {
        let n = self.g.n();
        if self.ell > n {
            return Ok(false);
        }
        let words = n.div_ceil(64).max(1);
        for s in from..n {
            for v1 in s + 1..n {
                if self.g.row(s, v1).iter().all(|&w| w == 0) {
                    continue;
                }
                let mut used = vec![0u64; words];
                set(&mut used, s);
                set(&mut used, v1);
                let mut seq = vec![s, v1];
                if self.dfs(&mut seq, &mut used, s + 1, true, &mut visit)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    /// Visits cycles whose first three vertices are `prefix`, until `visit` returns true.
    pub fn through(&mut self, prefix: [Vertex; 3], mut visit: impl FnMut(&[Vertex]) -> bool) -> Result<bool> {
        let n = self.g.n();
        let [a, b, c] = prefix;
        if a == b || b == c || a == c || a.max(b).max(c) >= n || !self.g.contains(a, b, c) || self.ell > n {
            return Ok(false);
        }
        let mut used = vec![0u64; n.div_ceil(64).max(1)];
        for v in prefix {
            set(&mut used, v);
        }
        let mut seq = prefix.to_vec();
        self.dfs(&mut seq, &mut used, 0, false, &mut visit)
    }

    fn dfs(
        &mut self,
        seq: &mut Vec<Vertex>,
        used: &mut [u64],
        lower: Vertex,
        canonical: bool,
        visit: &mut impl FnMut(&[Vertex]) -> bool,
    ) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::IterationBudgetExceeded(self.budget as usize));
        }
        let k = seq.len();
        if k == self.ell {
            return Ok(visit(seq));
        }
        let (s, v1) = (seq[0], seq[1]);
        let mut mask: Vec<u64> = self.g.row(seq[k - 2], seq[k - 1]).to_vec();
        for (m, u) in mask.iter_mut().zip(used.iter()) {
            *m &= !u;
        }
        let last = k == self.ell - 1;
        if last {
            for (m, (r1, r2)) in mask.iter_mut().zip(self.g.row(seq[k - 1], s).iter().zip(self.g.row(s, v1))) {
                *m &= r1 & r2;
            }
        }
        let floor = if canonical && last { lower.max(v1 + 1) } else { lower };
        clear_below(&mut mask, floor);
        let second_last = k == self.ell - 2;
        for x in bits(&mask) {
            if second_last && !intersects(self.g.row(x, s), self.g.row(s, v1)) {
                continue;
            }
            seq.push(x);
            set(used, x);
            let stop = self.dfs(seq, used, lower, canonical, visit)?;
            unset(used, x);
            seq.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn set(w: &mut [u64], v: Vertex) {
    w[v / 64] |= 1 << (v % 64);
}

fn unset(w: &mut [u64], v: Vertex) {
    w[v / 64] &= !(1 << (v % 64));
}

fn clear_below(w: &mut [u64], v: Vertex) {
    for (i, word) in w.iter_mut().enumerate() {
        let base = i * 64;
        if base + 64 <= v {
            *word = 0;
        } else if base < v {
            *word &= !0u64 << (v - base);
        }
    }
}

fn intersects(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).any(|(x, y)| x & y != 0)
}

fn bits(w: &[u64]) -> Vec<Vertex> {
    let mut out = Vec::new();
    for (i, &word) in w.iter().enumerate() {
        let mut x = word;
        while x != 0 {
            out.push(i * 64 + x.trailing_zeros() as usize);
            x &= x - 1;
        }
    }
    out
}

/// All tight `ell`-cycles of `g` up to rotation and reflection, as canonical
/// sequences in lexicographic order. Fails if there are more than `limit`.
pub fn enumerate_cycles(g: &ThreeGraph, ell: usize, limit: usize) -> Result<Vec<WalkSeq>> {
    let mut found = Vec::new();
    let mut over = false;
    CycleSearch::new(g, ell)?.canonical_from(0, |c| {
        if found.len() == limit {
            over = true;
            return true;
        }
        found.push(c.to_vec());
        false
    })?;
    if over {
        return Err(Error::LimitExceeded(limit));
    }
    found.into_iter().map(|c| walks::validate(&c, WalkKind::Cycle, g)).collect()
}

/// The lexicographically first canonical cycle with least vertex at least `from`.
pub fn find_cycle(g: &ThreeGraph, ell: usize, from: Vertex, budget: u64) -> Result<Option<WalkSeq>> {
    let mut hit = None;
    CycleSearch::new(g, ell)?.with_budget(budget).canonical_from(from, |c| {
        hit = Some(c.to_vec());
        true
    })?;
    hit.map(|c| walks::validate(&c, WalkKind::Cycle, g)).transpose()
}

/// Some tight `ell`-cycle of `g` containing the edge `{a, b, c}`, trying each
/// vertex of the edge in the middle position.
pub fn find_cycle_through(g: &ThreeGraph, ell: usize, edge: [Vertex; 3], budget: u64) -> Result<Option<WalkSeq>> {
    let [a, b, c] = edge;
    let mut search = CycleSearch::new(g, ell)?.with_budget(budget);
    for prefix in [[a, b, c], [b, a, c], [a, c, b]] {
        let mut hit = None;
        search.through(prefix, |cyc| {
            hit = Some(cyc.to_vec());
            true
        })?;
        if let Some(cyc) = hit {
            return walks::validate(&cyc, WalkKind::Cycle, g).map(Some);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Permutation-based enumeration: every ordering of every `ell`-subset,
    /// kept when all windows are edges, deduplicated by canonical form.
    fn brute_force(g: &ThreeGraph, ell: usize) -> BTreeSet<Vec<Vertex>> {
        fn orders(pool: &[Vertex], k: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for &v in pool {
                if !cur.contains(&v) {
                    cur.push(v);
                    orders(pool, k, cur, out);
                    cur.pop();
                }
            }
        }
        let pool: Vec<Vertex> = (0..g.n()).collect();
        let mut all = Vec::new();
        orders(&pool, ell, &mut Vec::new(), &mut all);
        all.into_iter()
            .filter(|c| (0..ell).all(|i| g.contains(c[i], c[(i + 1) % ell], c[(i + 2) % ell])))
            .map(|c| walks::canonical_cycle(&c))
            .collect()
    }

    #[test]
    fn complete_graph_counts() {
        assert_eq!(enumerate_cycles(&ThreeGraph::complete(5), 5, 100).unwrap().len(), 12);
        assert_eq!(enumerate_cycles(&ThreeGraph::complete(4), 4, 100).unwrap().len(), 3);
        assert!(enumerate_cycles(&ThreeGraph::build(5, [[0, 1, 2], [2, 3, 4]]).unwrap(), 4, 100)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn matches_brute_force() {
        for seed in 0..6 {
            let g = crate::generate::random_host(7, 0.6, seed);
            for ell in 4..=7 {
                let ours: Vec<Vec<Vertex>> =
                    enumerate_cycles(&g, ell, 1 << 20).unwrap().iter().map(|c| c.vertices().to_vec()).collect();
                let oracle: Vec<Vec<Vertex>> = brute_force(&g, ell).into_iter().collect();
                assert_eq!(ours, oracle, "seed {seed} ell {ell}");
            }
        }
    }

    #[test]
    fn limit_is_enforced() {
        assert!(matches!(enumerate_cycles(&ThreeGraph::complete(5), 5, 11), Err(Error::LimitExceeded(11))));
    }

    #[test]
    fn find_through_edge() {
        let g = ThreeGraph::complete(8);
        let c = find_cycle_through(&g, 7, [5, 1, 3], u64::MAX).unwrap().unwrap();
        assert!(c.edges().contains(&crate::graph::Triple::new(1, 3, 5).unwrap()));
        let sparse = ThreeGraph::build(6, [[0, 1, 2], [1, 2, 3]]).unwrap();
        assert!(find_cycle_through(&sparse, 4, [0, 1, 2], u64::MAX).unwrap().is_none());
        assert!(find_cycle(&sparse, 4, 0, u64::MAX).unwrap().is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let g = ThreeGraph::complete(12);
        let r = CycleSearch::new(&g, 9).unwrap().with_budget(10).canonical_from(0, |_| false);
        assert!(matches!(r, Err(Error::IterationBudgetExceeded(10))));
    }
}
