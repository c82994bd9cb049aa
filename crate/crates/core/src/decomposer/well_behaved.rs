//! Approximate decomposition with a bounded leftover codegree: greedy packing
//! beside a random reserve, then repair of high-degree vertices and pairs by
//! extending short paths through the reserve.

use std::collections::HashSet;

use rand::RngExt;
use serde::{Deserialize, Serialize};

use super::greedy::pack_in_place;
use super::{DEFAULT_SEARCH_BUDGET, DecompositionReport, DecompositionStatus, StageStats, greedy_p3_paths};
use crate::extender::{self, ExtendOptions, SparseFamily};
use crate::graph::{EdgeQuery, Graph2, ThreeGraph, Triple, Vertex};
use crate::rng;
use crate::walks::{self, WalkKind, WalkSeq};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WellBehavedParams {
    /// Target leftover codegree is `gamma * n`; the reserve keeps each edge with probability `gamma / 4`.
    pub gamma: f64,
    /// A vertex is bad when its leftover degree is at least this fraction of `n²`.
    pub bad_vertex_frac: f64,
    /// A pair is bad when its leftover codegree is at least this fraction of `n`.
    pub bad_pair_frac: f64,
    pub search_budget: u64,
}

impl Default for WellBehavedParams {
    fn default() -> Self {
        WellBehavedParams { gamma: 0.1, bad_vertex_frac: 0.25, bad_pair_frac: 0.5, search_budget: DEFAULT_SEARCH_BUDGET }
    }
}

struct State {
    leftover: ThreeGraph,
    reserve: ThreeGraph,
    cycles: Vec<WalkSeq>,
    stages: Vec<StageStats>,
}

impl State {
    fn record(&mut self, name: &str, cycles: usize, note: Option<String>) {
        let rest: Vec<Triple> = self.leftover.edges().chain(self.reserve.edges()).collect();
        log::debug!("{name}: {cycles} cycles, {} edges left", rest.len());
        self.stages.push(StageStats {
            name: name.into(),
            cycles,
            leftover_edges: rest.len(),
            leftover_max_codegree: extender::max_codegree_of(&rest),
            note,
        });
    }

    /// Extends `paths` (edges in the leftover) through the reserve; returns
    /// the number of cycles made and of paths left as they were.
    fn extend(&mut self, paths: Vec<WalkSeq>, ell: usize, seed: u64) -> (usize, usize) {
        if paths.is_empty() || ell < paths[0].len() + 2 {
            return (0, paths.len());
        }
        let Ok(fam) = SparseFamily::new(paths, 1.0) else {
            return (0, 0);
        };
        let opts = ExtendOptions { shuffle: true, best_effort: true };
        let Ok(ext) = extender::extend_family_with(&self.leftover, &self.reserve, &fam, ell, f64::INFINITY, seed, opts)
        else {
            return (0, fam.len());
        };
        for c in &ext.cycles {
            for e in c.edges() {
                if !self.leftover.remove(e) {
                    self.reserve.remove(e);
                }
            }
        }
        let made = ext.cycles.len();
        self.cycles.extend(ext.cycles);
        (made, ext.failed.len())
    }
}

/// Three-stage packing with a final greedy sweep; the report lists the
/// leftover size and codegree after every stage.
pub fn well_behaved_pack(g: &ThreeGraph, ell: usize, params: &WellBehavedParams, seed: u64) -> DecompositionReport {
    let n = g.n();
    let mut rng = rng::stream(seed, rng::streams::RESERVE);
    let p = (params.gamma / 4.0).clamp(0.0, 1.0);
    let mut reserve = ThreeGraph::empty(n);
    let mut main = g.clone();
    for e in g.edges() {
        if rng.random_bool(p) {
            reserve.insert(e);
            main.remove(&e);
        }
    }
    let mut greedy_rng = rng::stream(seed, rng::streams::GREEDY);
    let (first, free) = pack_in_place(&mut main, ell, params.search_budget, &mut greedy_rng).expect("packing");
    let made = first.len();
    let mut st = State { leftover: main, reserve, cycles: first, stages: Vec::new() };
    st.record("greedy", made, Some(format!("leftover cycle-free: {free}")));

    // high-degree vertices: 3-edge paths in their links become tight paths a b v c d
    let nf = n as f64;
    let bad: Vec<Vertex> =
        (0..n).filter(|&v| st.leftover.degrees()[v] as f64 >= params.bad_vertex_frac * nf * nf).collect();
    let bad_set: HashSet<Vertex> = bad.iter().copied().collect();
    let mut paths = Vec::new();
    for &v in &bad {
        let mut link = Graph2::new(n);
        for e in st.leftover.edges().filter(|e| e.contains(v)) {
            let [x, y] = other_two(e, v);
            if !bad_set.contains(&x) && !bad_set.contains(&y) {
                link.insert(x, y);
            }
        }
        for [a, b, c, d] in greedy_p3_paths(&link).0 {
            if let Ok(w) = walks::validate(&[a, b, v, c, d], WalkKind::Path, &st.leftover) {
                paths.push(w);
            }
        }
    }
    let (made, failed) = st.extend(paths, ell, rng::child_seed(seed, 2));
    st.record("bad vertices", made, Some(format!("{} bad vertices, {failed} paths not extended", bad.len())));

    // high-codegree pairs: paths z x y w through the pair
    let threshold = params.bad_pair_frac * nf;
    let mut used: HashSet<Triple> = HashSet::new();
    let mut paths = Vec::new();
    let mut bad_pairs = 0;
    for x in 0..n {
        for y in x + 1..n {
            if (st.leftover.codegree_unchecked(x, y, None) as f64) < threshold {
                continue;
            }
            bad_pairs += 1;
            let nb: Vec<Vertex> = st
                .leftover
                .neighbours(x, y)
                .filter(|&z| !used.has_vertices(x, y, z))
                .collect();
            for pair in nb.chunks_exact(2) {
                let (z, w) = (pair[0], pair[1]);
                let e1 = Triple::new(z, x, y).expect("distinct");
                let e2 = Triple::new(x, y, w).expect("distinct");
                used.insert(e1);
                used.insert(e2);
                paths.push(walks::validate(&[z, x, y, w], WalkKind::Path, &st.leftover).expect("leftover edges"));
            }
        }
    }
    let (made, failed) = st.extend(paths, ell, rng::child_seed(seed, 3));
    st.record("bad pairs", made, Some(format!("{bad_pairs} bad pairs, {failed} paths not extended")));

    // unused reserve edges return to the leftover for a last greedy sweep
    let mut rest = st.leftover.with_edges(&st.reserve.edge_set()).expect("same vertex set");
    st.reserve = ThreeGraph::empty(n);
    let (last, free) = pack_in_place(&mut rest, ell, params.search_budget, &mut greedy_rng).expect("packing");
    let made = last.len();
    st.cycles.extend(last);
    st.leftover = rest;
    st.record("sweep", made, Some(format!("leftover cycle-free: {free}")));

    let mut report = DecompositionReport::from_cycles(g, ell, &st.cycles, DecompositionStatus::Partial)
        .expect("stages keep cycles disjoint");
    if report.leftover.is_empty() {
        report.status = DecompositionStatus::Complete;
    }
    report.stats.seed = seed;
    report.stats.leftover_cycle_free = Some(free);
    report.stats.stages = st.stages;
    report
}

fn other_two(e: Triple, v: Vertex) -> [Vertex; 2] {
    let [a, b, c] = e.vertices();
    if a == v {
        [b, c]
    } else if b == v {
        [a, c]
    } else {
        [a, b]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_host_report() {
        let g = crate::generate::random_host(36, 0.9, 4);
        let r = well_behaved_pack(&g, 9, &WellBehavedParams::default(), 4);
        r.check_accounting(&g).unwrap();
        assert_eq!(r.stats.stages.len(), 4);
        assert_eq!(r.stats.leftover_cycle_free, Some(true));
    }

    #[test]
    fn low_thresholds_run_repairs() {
        let g = crate::generate::random_host(30, 0.9, 5);
        let params = WellBehavedParams { gamma: 0.4, bad_vertex_frac: 0.03, bad_pair_frac: 0.05, ..Default::default() };
        let r = well_behaved_pack(&g, 9, &params, 5);
        r.check_accounting(&g).unwrap();
        assert_eq!(r.stats.stages[1].name, "bad vertices");
    }

    #[test]
    fn sparse_input_degrades() {
        let g = ThreeGraph::build(8, [[0, 1, 2], [1, 2, 3], [4, 5, 6]]).unwrap();
        let r = well_behaved_pack(&g, 9, &WellBehavedParams::default(), 1);
        assert_eq!(r.status, DecompositionStatus::Partial);
        r.check_accounting(&g).unwrap();
    }
}
