//! Decomposing a graph into paths with three edges.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::graph::{Graph2, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum P3Outcome {
    /// Each path is `[a, b, c, d]` with edges `ab`, `bc`, `cd`.
    Complete(Vec<[Vertex; 4]>),
    Infeasible,
    BudgetExceeded,
}

fn key(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

struct Search {
    adj: Vec<Vec<Vertex>>,
    left: BTreeSet<(Vertex, Vertex)>,
    paths: Vec<[Vertex; 4]>,
    nodes: u64,
    budget: u64,
}

impl Search {
    fn has(&self, a: Vertex, b: Vertex) -> bool {
        self.left.contains(&key(a, b))
    }

    /// Paths through the unused edge `uv` whose edges are all unused.
    fn candidates(&self, u: Vertex, v: Vertex) -> Vec<[Vertex; 4]> {
        let mut out = Vec::new();
        for &x in &self.adj[u] {
            if x == v || !self.has(x, u) {
                continue;
            }
            for &y in &self.adj[v] {
                if y != u && y != x && self.has(v, y) {
                    out.push([x, u, v, y]);
                }
            }
        }
        for (a, b) in [(u, v), (v, u)] {
            for &y in &self.adj[b] {
                if y == a || !self.has(b, y) {
                    continue;
                }
                for &z in &self.adj[y] {
                    if z != a && z != b && self.has(y, z) {
                        out.push([a, b, y, z]);
                    }
                }
            }
        }
        out
    }

    fn set(&mut self, p: &[Vertex; 4], on: bool) {
        for w in p.windows(2) {
            if on {
                self.left.insert(key(w[0], w[1]));
            } else {
                self.left.remove(&key(w[0], w[1]));
            }
        }
    }

    fn solve(&mut self) -> Option<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let Some(&(u, v)) = self.left.iter().next() else {
            return Some(true);
        };
        for p in self.candidates(u, v) {
            self.set(&p, false);
            self.paths.push(p);
            match self.solve() {
                Some(false) => {
                    self.paths.pop();
                    self.set(&p, true);
                }
                other => return other,
            }
        }
        Some(false)
    }
}

/// Exact backtracking search for a decomposition of `g` into 3-edge paths,
/// giving up after `budget` search nodes.
pub fn p3_decompose(g: &Graph2, budget: u64) -> P3Outcome {
    if g.edge_count() % 3 != 0 {
        return P3Outcome::Infeasible;
    }
    let mut s = Search { adj: g.adjacency(), left: g.edges().collect(), paths: Vec::new(), nodes: 0, budget };
    match s.solve() {
        Some(true) => P3Outcome::Complete(s.paths),
        Some(false) => P3Outcome::Infeasible,
        None => P3Outcome::BudgetExceeded,
    }
}

/// Greedily removes edge-disjoint 3-edge paths until none is left; returns the
/// paths and the remaining edges.
pub fn greedy_p3_paths(g: &Graph2) -> (Vec<[Vertex; 4]>, Graph2) {
    let mut s = Search { adj: g.adjacency(), left: g.edges().collect(), paths: Vec::new(), nodes: 0, budget: 0 };
    let edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    for (u, v) in edges {
        while s.has(u, v) {
            match s.candidates(u, v).first() {
                Some(&p) => {
                    s.set(&p, false);
                    s.paths.push(p);
                }
                None => break,
            }
        }
    }
    let rest = Graph2::build(g.n(), s.left.iter().copied()).expect("subgraph of a valid graph");
    (s.paths, rest)
}
