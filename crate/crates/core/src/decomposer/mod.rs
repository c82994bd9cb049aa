//! Exact, greedy, fractional and iterative cycle decompositions.

mod cover_down;
mod enumerate;
mod exact;
mod greedy;
mod lp;
mod p3;
mod pipeline;
mod vortex;
mod well_behaved;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeQuery, ThreeGraph, Triple, Vertex};
use crate::walks::{self, WalkKind, WalkSeq};

pub use cover_down::{CoverDownOutcome, CoverDownParams, cover_down};
pub use enumerate::{CycleSearch, enumerate_cycles, find_cycle, find_cycle_through};
pub use exact::{DEFAULT_EXACT_BUDGET, exact_decompose};
pub(crate) use exact::{CoverOutcome, cover_with};
pub use greedy::{DEFAULT_SEARCH_BUDGET, greedy_pack, greedy_pack_within};
pub use lp::{FractionalDecomposition, FractionalStatus, fractional_decompose};
pub use p3::{P3Outcome, greedy_p3_paths, p3_decompose};
pub use pipeline::{PipelineParams, full_pipeline};
pub use vortex::{Vortex, VortexViolation, build_vortex, check_vortex, vortex_sizes};
pub use well_behaved::{WellBehavedParams, well_behaved_pack};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionStatus {
    Complete,
    Partial,
    Infeasible,
    BudgetExceeded,
}

/// Leftover codegree after one stage of a multi-stage run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageStats {
    pub name: String,
    pub cycles: usize,
    pub leftover_edges: usize,
    pub leftover_max_codegree: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DecompositionStats {
    pub covered: usize,
    pub leftover_max_codegree: usize,
    pub iterations: u64,
    pub seed: u64,
    /// Whether a bounded exhaustive search confirmed the leftover has no cycle
    /// of the target length; absent when no such search ran.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub leftover_cycle_free: Option<bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<StageStats>,
}

/// Cycles plus the uncovered edges of an input graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionReport {
    pub ell: usize,
    pub status: DecompositionStatus,
    /// Canonical vertex sequences.
    pub cycles: Vec<Vec<Vertex>>,
    pub leftover: Vec<Triple>,
    pub stats: DecompositionStats,
}

impl DecompositionReport {
    /// Builds a report for `g` from edge-disjoint `cycles`; the leftover is
    /// everything not covered.
    pub fn from_cycles(g: &ThreeGraph, ell: usize, cycles: &[WalkSeq], status: DecompositionStatus) -> Result<Self> {
        let mut covered: HashSet<Triple> = HashSet::new();
        for c in cycles {
            if c.kind() != WalkKind::Cycle || c.len() != ell {
                return Err(Error::Internal(format!("report got a non-{ell}-cycle")));
            }
            for &e in c.edges() {
                if !g.has(&e) || !covered.insert(e) {
                    return Err(Error::Internal(format!("cycle edge {e} is foreign or repeated")));
                }
            }
        }
        let leftover: Vec<Triple> = g.edges().filter(|e| !covered.contains(e)).collect();
        let mut canon: Vec<Vec<Vertex>> = cycles.iter().map(|c| c.canonical()).collect();
        canon.sort();
        let stats = DecompositionStats {
            covered: covered.len(),
            leftover_max_codegree: crate::extender::max_codegree_of(&leftover),
            ..Default::default()
        };
        Ok(DecompositionReport { ell, status, cycles: canon, leftover, stats })
    }

    /// Empty report with the given status and the whole graph as leftover.
    pub fn nothing(g: &ThreeGraph, ell: usize, status: DecompositionStatus) -> Self {
        Self::from_cycles(g, ell, &[], status).expect("no cycles to check")
    }

    /// Checks that the cycles are valid `ell`-cycles of `g`, pairwise
    /// edge-disjoint, and together with the leftover partition `E(g)`.
    pub fn check_accounting(&self, g: &ThreeGraph) -> Result<()> {
        let mut seen: HashSet<Triple> = HashSet::new();
        for c in &self.cycles {
            if c.len() != self.ell {
                return Err(Error::NotADecomposition(format!("cycle of length {}", c.len())));
            }
            let w = walks::validate(c, WalkKind::Cycle, g)?;
            for &e in w.edges() {
                if !seen.insert(e) {
                    return Err(Error::NotADecomposition(format!("edge {e} covered twice")));
                }
            }
        }
        for &e in &self.leftover {
            if !g.has(&e) || !seen.insert(e) {
                return Err(Error::NotADecomposition(format!("leftover edge {e} is foreign or covered")));
            }
        }
        if seen.len() != g.edge_count() {
            return Err(Error::NotADecomposition(format!(
                "{} of {} edges accounted for",
                seen.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }

    /// Cycles as walks over `g`.
    pub fn walks(&self, g: &ThreeGraph) -> Result<Vec<WalkSeq>> {
        self.cycles.iter().map(|c| walks::validate(c, WalkKind::Cycle, g)).collect()
    }
}

/// True iff `cycles` are valid cycles of `g`, pairwise edge-disjoint and cover `E(g)`.
pub fn validate_decomposition(g: &ThreeGraph, cycles: &[Vec<Vertex>]) -> bool {
    let mut seen = HashSet::new();
    for c in cycles {
        let Ok(w) = walks::validate(c, WalkKind::Cycle, g) else {
            return false;
        };
        if !w.edges().iter().all(|&e| seen.insert(e)) {
            return false;
        }
    }
    seen.len() == g.edge_count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_k5_pair() {
        let g = ThreeGraph::complete(5);
        assert!(validate_decomposition(&g, &[vec![0, 1, 2, 3, 4], vec![0, 2, 4, 1, 3]]));
        assert!(!validate_decomposition(&g, &[vec![0, 1, 2, 3, 4]]));
        assert!(!validate_decomposition(&g, &[vec![0, 1, 2, 3, 4], vec![0, 1, 2, 3, 4]]));
    }

    #[test]
    fn report_accounting() {
        let g = ThreeGraph::complete(5);
        let c = walks::validate(&[0, 1, 2, 3, 4], WalkKind::Cycle, &g).unwrap();
        let r = DecompositionReport::from_cycles(&g, 5, &[c], DecompositionStatus::Partial).unwrap();
        assert_eq!(r.leftover.len(), 5);
        r.check_accounting(&g).unwrap();
        let json = serde_json::to_value(&r).unwrap();
        for key in ["ell", "status", "cycles", "leftover", "stats"] {
            assert!(json.get(key).is_some(), "{key}");
        }
        let mut broken = r.clone();
        broken.leftover.pop();
        assert!(broken.check_accounting(&g).is_err());
    }
}
