//! Seeded random hosts, divisible hosts, tripartitioned hosts and random tours.

use rand::RngExt;

use crate::counterexample::Tripartition;
use crate::error::{Error, Result};
use crate::graph::{EdgeQuery, NoEdges, ThreeGraph, Triple, Vertex, VertexSet};
use crate::pathfinder;
use crate::rng::{self, Rng};
use crate::walks::{self, WalkKind, WalkSeq};

/// Keeps each triple of `K_n` independently with probability `p`.
pub fn random_host(n: usize, p: f64, seed: u64) -> ThreeGraph {
    let mut rng = rng::stream(seed, rng::streams::GENERATE);
    let mut g = ThreeGraph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if rng.random_bool(p) {
                    g.insert(Triple::sorted(a, b, c));
                }
            }
        }
    }
    g
}

/// Removes one random tight cycle of length `len` from `g`.
fn remove_random_cycle(g: &mut ThreeGraph, len: usize, rng: &mut Rng) -> Result<()> {
    let n = g.n();
    for _ in 0..64 {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let nb: Vec<Vertex> = g.neighbours(a, b).collect();
        if nb.is_empty() {
            continue;
        }
        let c = nb[rng.random_range(0..nb.len())];
        let p = walks::validate(&[a, b, c], WalkKind::Path, g)?;
        if let Ok(cycle) = pathfinder::extend_to_cycle(g, &p, len, None, None, &NoEdges, rng) {
            for e in cycle.edges() {
                g.remove(e);
            }
            return Ok(());
        }
    }
    Err(Error::ConstructionFailed(format!("no tight {len}-cycle left to remove")))
}

/// A dense host whose degrees are divisible by 3 and, when `ell` is given,
/// whose edge count is divisible by `ell`: `K_n` (minus a perfect matching when
/// `3 | n`) with random tight cycles removed until about `keep` of the triples remain.
pub fn random_divisible_host(n: usize, ell: Option<usize>, keep: f64, seed: u64) -> Result<ThreeGraph> {
    if n < 6 {
        return Err(Error::BadParams("divisible hosts need n ≥ 6".into()));
    }
    let mut rng = rng::stream(seed, rng::streams::GENERATE);
    let mut g = ThreeGraph::complete(n);
    if n % 3 == 0 {
        let mut order: Vec<Vertex> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        for t in order.chunks(3) {
            g.remove(&Triple::sorted(t[0], t[1], t[2]));
        }
    }
    let target = (keep.clamp(0.0, 1.0) * g.edge_count() as f64) as usize;
    while g.edge_count() > target {
        let len = rng.random_range(4..=n.min(12));
        remove_random_cycle(&mut g, len, &mut rng)?;
    }
    if let Some(ell) = ell {
        let r = g.edge_count() % ell;
        if r != 0 {
            let len = if r >= 4 { r } else { r + ell };
            remove_random_cycle(&mut g, len, &mut rng)?;
        }
    }
    Ok(g)
}

/// Random labels with class sizes `sizes` and each non-mixed triple kept with probability `p`.
pub fn random_tripartite_host(sizes: [usize; 3], p: f64, seed: u64) -> Result<(ThreeGraph, Tripartition)> {
    let mut rng = rng::stream(seed, rng::streams::GENERATE);
    let mut labels: Vec<u8> = (0u8..3).flat_map(|l| std::iter::repeat_n(l, sizes[l as usize])).collect();
    let n = labels.len();
    for i in (1..n).rev() {
        labels.swap(i, rng.random_range(0..=i));
    }
    let mut g = ThreeGraph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let mixed = labels[a] != labels[b] && labels[b] != labels[c] && labels[a] != labels[c];
                if !mixed && rng.random_bool(p) {
                    g.insert(Triple::sorted(a, b, c));
                }
            }
        }
    }
    Ok((g, Tripartition::new(labels)?))
}

/// A random trail of at most `max_len - 3` vertices closed into a tour with
/// at most three connector vertices, so the tour has at most `max_len` vertices.
pub fn random_tour(g: &ThreeGraph, max_len: usize, rng: &mut Rng) -> Option<WalkSeq> {
    if g.is_empty() || max_len < 7 {
        return None;
    }
    let edges: Vec<Triple> = g.edges().collect();
    for _ in 0..32 {
        let mut seq = edges[rng.random_range(0..edges.len())].vertices().to_vec();
        for i in (1..3).rev() {
            seq.swap(i, rng.random_range(0..=i));
        }
        let mut used: std::collections::HashSet<Triple> = [Triple::sorted(seq[0], seq[1], seq[2])].into();
        let target = rng.random_range(3..=max_len - 3);
        while seq.len() < target {
            let (a, b) = (seq[seq.len() - 2], seq[seq.len() - 1]);
            let options: Vec<Vertex> = g.neighbours(a, b).filter(|&x| !used.has_vertices(a, b, x)).collect();
            if options.is_empty() {
                break;
            }
            let x = options[rng.random_range(0..options.len())];
            used.insert(Triple::sorted(a, b, x));
            seq.push(x);
        }
        let trail = walks::validate(&seq, WalkKind::Trail, g).ok()?;
        if let Ok(t) = pathfinder::close_to_tour(g, &trail, &NoEdges, rng) {
            return Some(t);
        }
    }
    None
}

/// `count` pairwise edge-disjoint random tight `ell`-cycles of `K_n`, as one graph.
pub fn random_cycle_union(n: usize, ell: usize, count: usize, seed: u64) -> Result<ThreeGraph> {
    let mut rng = rng::stream(seed, rng::streams::GENERATE);
    let host = ThreeGraph::complete(n);
    let mut used = std::collections::HashSet::new();
    let mut g = ThreeGraph::empty(n);
    for _ in 0..count {
        let mut placed = false;
        for _ in 0..64 {
            let mut vs: Vec<Vertex> = Vec::new();
            while vs.len() < 3 {
                let v = rng.random_range(0..n);
                if !vs.contains(&v) {
                    vs.push(v);
                }
            }
            if used.has_vertices(vs[0], vs[1], vs[2]) {
                continue;
            }
            let p = walks::validate(&vs, WalkKind::Path, &host)?;
            if let Ok(c) = pathfinder::extend_to_cycle(&host, &p, ell, None, None, &used, &mut rng) {
                for &e in c.edges() {
                    used.insert(e);
                    g.insert(e);
                }
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::ConstructionFailed("no room for another cycle".into()));
        }
    }
    Ok(g)
}

/// A uniformly random subset of `0..n` of size `k`.
pub fn random_subset(n: usize, k: usize, rng: &mut Rng) -> VertexSet {
    let mut order: Vec<Vertex> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.random_range(0..=i));
    }
    VertexSet::from_vertices(n, order.into_iter().take(k)).expect("in range")
}
