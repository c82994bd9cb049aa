//! Vortex, absorbers for the last vortex set, iterated cover-down and a final
//! absorption step, with every edge accounted for.

use serde::{Deserialize, Serialize};

use super::{
    CoverDownParams, DEFAULT_EXACT_BUDGET, DecompositionReport, DecompositionStatus, StageStats, Vortex, build_vortex,
    cover_down, exact_decompose,
};
use crate::error::{Error, Result};
use crate::gadgets::{self, Absorber};
use crate::graph::{DivisibilityKind, EdgeSet, ThreeGraph, Triple, VertexSet};
use crate::rng;
use crate::walks::WalkSeq;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub xi: f64,
    pub m_prime: usize,
    pub cover: CoverDownParams,
    pub exact_budget: u64,
    /// Absorbers are only built when the last vortex set has at most this many vertices.
    pub absorber_max_vertices: usize,
    /// At most this many absorber constructions are attempted.
    pub max_absorbers: usize,
    pub vortex_retries: usize,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams {
            xi: 0.25,
            m_prime: 20,
            cover: CoverDownParams::default(),
            exact_budget: DEFAULT_EXACT_BUDGET,
            absorber_max_vertices: 5,
            max_absorbers: 64,
            vortex_retries: 20,
        }
    }
}

/// Edge sets of the nonempty `ell`-divisible subgraphs of `g[u]`, in order of
/// their bitmask over the sorted edges. `None` when `g[u]` has over 20 edges.
fn divisible_subgraphs(g: &ThreeGraph, u: &VertexSet, ell: usize) -> Option<Vec<EdgeSet>> {
    let inside: Vec<Triple> = g.edges().filter(|e| e.vertices().iter().all(|&v| u.contains(v))).collect();
    if inside.len() > 20 {
        return None;
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << inside.len()) {
        if mask.count_ones() as usize % ell != 0 {
            continue;
        }
        let mut deg = vec![0usize; g.n()];
        let mut edges = EdgeSet::new();
        for (i, e) in inside.iter().enumerate() {
            if mask >> i & 1 == 1 {
                edges.insert(*e);
                for v in e.vertices() {
                    deg[v] += 1;
                }
            }
        }
        if deg.iter().all(|d| d % 3 == 0) {
            out.push(edges);
        }
    }
    Some(out)
}

fn stage(name: &str, cycles: usize, rest: &ThreeGraph, note: String) -> StageStats {
    StageStats {
        name: name.into(),
        cycles,
        leftover_edges: rest.edge_count(),
        leftover_max_codegree: rest.max_codegree(),
        note: Some(note),
    }
}

/// Runs the whole iterative absorption scheme on an `ell`-divisible `g`.
///
/// Every stage is best effort. Whatever no stage manages to cover is reported
/// as leftover and the status is `Partial`.
pub fn full_pipeline(g: &ThreeGraph, ell: usize, params: &PipelineParams, seed: u64) -> Result<DecompositionReport> {
    let check = g.check_divisibility(DivisibilityKind::Cycle(ell))?;
    if !check.divisible {
        return Err(Error::Precondition(format!("graph is not {ell}-divisible: {:?}", check.violation)));
    }
    let n = g.n();
    let mut stages = Vec::new();
    let delta = if n == 0 { 0.0 } else { g.min_codegree() as f64 / n as f64 };

    let vortex = if n < params.m_prime.max(1) {
        Vortex::trivial(n, delta, params.xi)
    } else {
        match build_vortex(g, delta, params.xi, params.m_prime, rng::child_seed(seed, 0), params.vortex_retries) {
            Ok(v) => v,
            Err(Error::VortexFailed(level)) => {
                stages.push(stage("vortex", 0, g, format!("level {level} failed, using the trivial vortex")));
                Vortex::trivial(n, delta, params.xi)
            }
            Err(e) => return Err(e),
        }
    };
    let sizes = vortex.sizes();
    stages.push(stage("vortex", 0, g, format!("sizes {sizes:?}")));
    let last = vortex.last().clone();

    // absorbers live outside H[U_1] and are pairwise edge-disjoint
    let mut absorbers: Vec<(EdgeSet, Absorber)> = Vec::new();
    let mut used = EdgeSet::new();
    if vortex.sets.len() > 1 && last.len() <= params.absorber_max_vertices {
        let u1 = &vortex.sets[1];
        let inner: EdgeSet = g.edges().filter(|e| e.vertices().iter().all(|&v| u1.contains(v))).collect();
        let targets = divisible_subgraphs(g, &last, ell).unwrap_or_default();
        let mut failed = 0;
        for (i, r) in targets.iter().take(params.max_absorbers).enumerate() {
            let host = g.without_edges(inner.iter().chain(used.iter())).with_edges(r.iter())?;
            let rg = ThreeGraph::from_edges(n, r.iter())?;
            match gadgets::build_absorber(&host, &rg, ell, rng::child_seed(seed, 100 + i as u64)) {
                Ok(a) => {
                    used.extend(a.edges.iter().copied());
                    absorbers.push((r.clone(), a));
                }
                Err(e) => {
                    log::info!("absorber {i} failed: {e}");
                    failed += 1;
                }
            }
        }
        let note = format!("{} of {} divisible subgraphs absorbed, {failed} failed", absorbers.len(), targets.len());
        stages.push(stage("absorbers", 0, &g.without_edges(used.iter()), note));
    }

    let mut rest = g.without_edges(used.iter());
    let mut cycles: Vec<WalkSeq> = Vec::new();
    for level in 0..vortex.sets.len().saturating_sub(1) {
        let (outer, inner) = (&vortex.sets[level], &vortex.sets[level + 1]);
        let within: Vec<Triple> =
            rest.edges().filter(|e| e.vertices().iter().all(|&v| outer.contains(v))).collect();
        let sub = ThreeGraph::from_edges(n, within.iter())?;
        let seed_i = rng::child_seed(seed, 1 + level as u64);
        match cover_down(&sub, inner, ell, &params.cover, seed_i) {
            Ok(out) => {
                let made = out.report.walks(g)?;
                for c in &made {
                    for e in c.edges() {
                        rest.remove(e);
                    }
                }
                let note = format!(
                    "{} edges outside U_{} uncovered, inside codegree {}",
                    out.uncovered_outside,
                    level + 1,
                    out.inside_max_codegree
                );
                stages.push(stage(&format!("cover-down {level}"), made.len(), &rest, note));
                cycles.extend(made);
            }
            Err(Error::Precondition(msg)) => {
                stages.push(stage(&format!("cover-down {level}"), 0, &rest, format!("stopped: {msg}")));
                break;
            }
            Err(e) => return Err(e),
        }
    }

    // final leftover: absorbed if some absorber was built for exactly this graph
    let leftover: EdgeSet = rest.edge_set();
    let mut absorbed = false;
    for (r, a) in &absorbers {
        if !absorbed && *r == leftover {
            cycles.extend(a.absorbed_certificate.iter().cloned());
            absorbed = true;
        } else {
            cycles.extend(a.certificate.iter().cloned());
        }
    }
    if absorbed {
        stages.push(stage("absorb", 0, &ThreeGraph::empty(n), "leftover matched an absorber".into()));
    } else if !leftover.is_empty() {
        let exact = exact_decompose(&rest, ell, params.exact_budget);
        let note = format!("exact search: {:?} after {} nodes", exact.status, exact.stats.iterations);
        if exact.status == DecompositionStatus::Complete {
            let made = exact.walks(g)?;
            for c in &made {
                for e in c.edges() {
                    rest.remove(e);
                }
            }
            stages.push(stage("final", made.len(), &rest, note));
            cycles.extend(made);
        } else {
            stages.push(stage("final", 0, &rest, note));
        }
    }

    let mut report = DecompositionReport::from_cycles(g, ell, &cycles, DecompositionStatus::Partial)?;
    if report.leftover.is_empty() {
        report.status = DecompositionStatus::Complete;
    }
    report.stats.seed = seed;
    report.stats.stages = stages;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_graph_matches_exact_solver() {
        let g = ThreeGraph::complete(5);
        let r = full_pipeline(&g, 5, &PipelineParams::default(), 1).unwrap();
        r.check_accounting(&g).unwrap();
        assert_eq!(r.status, DecompositionStatus::Complete);
        assert_eq!(r.cycles.len(), 2);
    }

    #[test]
    fn tight_c8_stays_partial() {
        let g = ThreeGraph::build(8, (0..8).map(|i| [i, (i + 1) % 8, (i + 2) % 8])).unwrap();
        let r = full_pipeline(&g, 4, &PipelineParams::default(), 1).unwrap();
        r.check_accounting(&g).unwrap();
        assert_eq!(r.status, DecompositionStatus::Partial);
        assert_eq!(r.leftover.len(), 8);
    }

    #[test]
    fn non_divisible_is_rejected() {
        let g = ThreeGraph::complete(6);
        assert!(matches!(full_pipeline(&g, 4, &PipelineParams::default(), 1), Err(Error::Precondition(_))));
    }

    #[test]
    fn divisible_subgraphs_of_k5() {
        let g = ThreeGraph::complete(5);
        let subs = divisible_subgraphs(&g, &VertexSet::full(5), 5).unwrap();
        // the two edge-disjoint 5-cycles of one decomposition are among them, and K5 itself
        assert!(subs.iter().any(|s| s.len() == 10));
        assert!(subs.iter().all(|s| s.len() % 5 == 0));
        assert_eq!(divisible_subgraphs(&g, &VertexSet::full(5), 10).unwrap().len(), 1);
    }

    #[test]
    fn random_host_accounting() {
        let g = crate::generate::random_divisible_host(40, Some(9), 0.9, 5).unwrap();
        let params = PipelineParams { m_prime: 12, xi: 0.4, ..Default::default() };
        let r = full_pipeline(&g, 9, &params, 5).unwrap();
        r.check_accounting(&g).unwrap();
        assert!(r.stats.stages.iter().any(|s| s.name.starts_with("cover-down")), "{:?}", r.stats.stages);
    }
}
