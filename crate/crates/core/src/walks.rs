//! Tight walks, trails, paths, cycles and tours.

use std::collections::HashSet;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{EdgeQuery, ThreeGraph, Triple, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WalkKind {
    Walk,
    ClosedWalk,
    Trail,
    Path,
    Cycle,
    Tour,
}

impl WalkKind {
    pub fn is_closed(self) -> bool {
        matches!(self, WalkKind::ClosedWalk | WalkKind::Cycle | WalkKind::Tour)
    }

    fn distinct_edges(self) -> bool {
        !matches!(self, WalkKind::Walk | WalkKind::ClosedWalk)
    }

    fn distinct_vertices(self) -> bool {
        matches!(self, WalkKind::Path | WalkKind::Cycle)
    }

    fn min_len(self) -> usize {
        if self == WalkKind::Cycle {
            4
        } else {
            3
        }
    }
}

/// A vertex sequence whose consecutive triples (cyclically when closed) are edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkSeq {
    vertices: Vec<Vertex>,
    kind: WalkKind,
    edges: Vec<Triple>,
}

/// An ordered pair of vertices: an end of a trail or an arc of a residual digraph.
pub type Arc = (Vertex, Vertex);

/// How a path meets a pair: the largest overlap of the pair with either end pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PathType(u8);

impl PathType {
    pub fn value(self) -> u8 {
        self.0
    }
}

fn windows(vertices: &[Vertex], closed: bool) -> impl Iterator<Item = (usize, [Vertex; 3])> + '_ {
    let k = vertices.len();
    let count = if closed { k } else { k.saturating_sub(2) };
    (0..count).map(move |i| (i, [vertices[i], vertices[(i + 1) % k], vertices[(i + 2) % k]]))
}

/// Checks `seq` against `host` and records its edges.
pub fn validate<Q: EdgeQuery>(seq: &[Vertex], kind: WalkKind, host: &Q) -> Result<WalkSeq> {
    build(seq, kind, |w| host.has_vertices(w[0], w[1], w[2]))
}

fn build(seq: &[Vertex], kind: WalkKind, is_edge: impl Fn([Vertex; 3]) -> bool) -> Result<WalkSeq> {
    if seq.len() < kind.min_len() {
        return Err(Error::TooShort { len: seq.len(), min: kind.min_len() });
    }
    let mut seen = HashSet::new();
    let mut edges = Vec::with_capacity(seq.len());
    for (i, w) in windows(seq, kind.is_closed()) {
        if !is_edge(w) {
            return Err(Error::NotAnEdge(i));
        }
        let t = Triple::sorted(w[0], w[1], w[2]);
        if !seen.insert(t) && kind.distinct_edges() {
            return Err(Error::RepeatedEdge(i));
        }
        edges.push(t);
    }
    if kind.distinct_vertices() {
        let mut vs = HashSet::new();
        for (i, &v) in seq.iter().enumerate() {
            if !vs.insert(v) {
                return Err(Error::RepeatedVertex(i));
            }
        }
    }
    Ok(WalkSeq { vertices: seq.to_vec(), kind, edges })
}

/// Builds a walk whose windows are known to be host edges (they come from
/// already validated walks); only the structural conditions are rechecked.
pub(crate) fn assemble(seq: &[Vertex], kind: WalkKind) -> Result<WalkSeq> {
    build(seq, kind, |w| w[0] != w[1] && w[1] != w[2] && w[0] != w[2]).map_err(|e| match e {
        Error::RepeatedEdge(_) => Error::EdgeOverlap,
        other => other,
    })
}

impl WalkSeq {
    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn kind(&self) -> WalkKind {
        self.kind
    }

    pub fn is_closed(&self) -> bool {
        self.kind.is_closed()
    }

    /// Edges in traversal order, one per window.
    pub fn edges(&self) -> &[Triple] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn reversed(&self) -> WalkSeq {
        let mut v = self.vertices.clone();
        v.reverse();
        let mut edges = self.edges.clone();
        edges.reverse();
        if self.is_closed() {
            // window j of the reversal is window k-3-j of the original
            let len = edges.len();
            edges.rotate_left(2 % len.max(1));
        }
        WalkSeq { vertices: v, kind: self.kind, edges }
    }

    /// The ends `((u2, u1), (u_{k-1}, u_k))` of an open walk.
    pub fn ends(&self) -> Result<(Arc, Arc)> {
        if self.is_closed() {
            return Err(Error::ClosedWalk);
        }
        let v = &self.vertices;
        let k = v.len();
        Ok(((v[1], v[0]), (v[k - 2], v[k - 1])))
    }

    /// Consecutive unordered pairs, including the wrap-around pair when closed.
    pub fn consecutive_pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.vertices.len();
        let count = if self.is_closed() { k } else { k - 1 };
        (0..count).map(move |i| {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
            (a.min(b), a.max(b))
        })
    }

    /// For cycles: the canonical sequence, otherwise the stored one.
    pub fn canonical(&self) -> Vec<Vertex> {
        if self.kind == WalkKind::Cycle {
            canonical_cycle(&self.vertices)
        } else {
            self.vertices.clone()
        }
    }
}

impl Serialize for WalkSeq {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.canonical().serialize(s)
    }
}

/// Lexicographically least sequence over all rotations and both directions.
pub fn canonical_cycle(vertices: &[Vertex]) -> Vec<Vertex> {
    let k = vertices.len();
    let mut best: Option<Vec<Vertex>> = None;
    let mut rev = vertices.to_vec();
    rev.reverse();
    for seq in [vertices, &rev[..]] {
        for r in 0..k {
            let cand: Vec<Vertex> = (0..k).map(|i| seq[(r + i) % k]).collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// `max(|e ∩ s(P)|, |e ∩ t(P)|)` for an open path `p`.
pub fn classify_type(p: &WalkSeq, e: (Vertex, Vertex)) -> PathType {
    let v = &p.vertices;
    let k = v.len();
    let overlap = |a: Vertex, b: Vertex| [a, b].iter().filter(|&&x| x == e.0 || x == e.1).count() as u8;
    PathType(overlap(v[0], v[1]).max(overlap(v[k - 2], v[k - 1])))
}

/// Inserts `cycle` into `tour` at a shared consecutive pair.
pub fn splice_cycle(tour: &WalkSeq, cycle: &WalkSeq) -> Result<WalkSeq> {
    let t = &tour.vertices;
    let c = &cycle.vertices;
    let (k, m) = (t.len(), c.len());
    for j in 0..k {
        let (v1, v2) = (t[j], t[(j + 1) % k]);
        let Some(p) = c.iter().position(|&x| x == v1) else { continue };
        let oriented: Vec<Vertex> = if c[(p + 1) % m] == v2 {
            (0..m).map(|i| c[(p + i) % m]).collect()
        } else if c[(p + m - 1) % m] == v2 {
            (0..m).map(|i| c[(p + m - i) % m]).collect()
        } else {
            continue;
        };
        let mut seq = oriented;
        seq.push(v1);
        seq.push(v2);
        seq.extend((2..k).map(|i| t[(j + i) % k]));
        return assemble(&seq, WalkKind::Tour);
    }
    Err(Error::NoSharedConsecutivePair)
}

/// Turns a trail whose two ends are opposite into a tour.
pub fn close_trail(t: &WalkSeq) -> Result<WalkSeq> {
    let ((a, b), (c, d)) = t.ends()?;
    if (a, b) != (d, c) {
        return Err(Error::NoOppositeEnds);
    }
    let v = &t.vertices;
    assemble(&v[..v.len() - 2], WalkKind::Tour)
}

/// Merges two trails along an end `arc` of `t1` and the opposite end of `t2`.
pub fn merge_at(t1: &WalkSeq, t2: &WalkSeq, arc: Arc) -> Result<WalkSeq> {
    let (s1, e1) = t1.ends()?;
    let (s2, e2) = t2.ends()?;
    let opposite = (arc.1, arc.0);
    let first = if e1 == arc {
        t1.vertices.clone()
    } else if s1 == arc {
        t1.reversed().vertices
    } else {
        return Err(Error::NoOppositeEnds);
    };
    let second = if s2 == opposite {
        t2.vertices.clone()
    } else if e2 == opposite {
        t2.reversed().vertices
    } else {
        return Err(Error::NoOppositeEnds);
    };
    let mut seq = first;
    seq.extend_from_slice(&second[2..]);
    assemble(&seq, WalkKind::Trail)
}

/// Merges two trails with opposite ends; a trail merged with itself becomes a tour.
pub fn merge_opposite_trails(t1: &WalkSeq, t2: &WalkSeq) -> Result<WalkSeq> {
    if t1.vertices == t2.vertices {
        return close_trail(t1);
    }
    let (s1, e1) = t1.ends()?;
    let (s2, e2) = t2.ends()?;
    for arc in [e1, s1] {
        if s2 == (arc.1, arc.0) || e2 == (arc.1, arc.0) {
            return merge_at(t1, t2, arc);
        }
    }
    Err(Error::NoOppositeEnds)
}

/// Every unordered pair of non-isolated host vertices occurs consecutively in `w`.
pub fn is_spanning_trail(w: &WalkSeq, host: &ThreeGraph) -> bool {
    let support = host.support().to_vec();
    let present: HashSet<(Vertex, Vertex)> = w.consecutive_pairs().collect();
    support
        .iter()
        .enumerate()
        .all(|(i, &a)| support[i + 1..].iter().all(|&b| present.contains(&(a, b))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k(n: usize) -> ThreeGraph {
        ThreeGraph::complete(n)
    }

    #[test]
    fn five_cycle_in_k5() {
        let c = validate(&[0, 1, 2, 3, 4], WalkKind::Cycle, &k(5)).unwrap();
        assert_eq!(c.edges().len(), 5);
        let p = validate(&[0, 1, 2, 3], WalkKind::Path, &k(5)).unwrap();
        assert_eq!(p.edges().len(), 2);
    }

    #[test]
    fn repeated_edge_in_closed_sequence() {
        assert!(matches!(
            validate(&[0, 1, 2, 0, 1, 2], WalkKind::Tour, &k(5)),
            Err(Error::RepeatedEdge(_))
        ));
    }

    #[test]
    fn validation_errors_name_the_index() {
        let g = ThreeGraph::build(5, [[0, 1, 2], [1, 2, 3]]).unwrap();
        assert!(matches!(validate(&[0, 1, 2, 3, 4], WalkKind::Path, &g), Err(Error::NotAnEdge(2))));
        assert!(matches!(validate(&[0, 1], WalkKind::Walk, &g), Err(Error::TooShort { len: 2, min: 3 })));
        assert!(matches!(validate(&[0, 1, 2], WalkKind::Cycle, &g), Err(Error::TooShort { .. })));
        assert!(matches!(
            validate(&[0, 1, 2, 3, 0, 4], WalkKind::Path, &k(5)),
            Err(Error::RepeatedVertex(4))
        ));
        // a trail may revisit vertices
        assert!(validate(&[0, 1, 2, 3, 0, 4], WalkKind::Trail, &k(5)).is_ok());
    }

    #[test]
    fn ends_follow_the_formula() {
        let t = validate(&[7, 8, 9], WalkKind::Trail, &k(10)).unwrap();
        assert_eq!(t.ends().unwrap(), ((8, 7), (8, 9)));
        let p = validate(&[0, 1, 2, 3, 4], WalkKind::Path, &k(5)).unwrap();
        assert_eq!(p.ends().unwrap(), ((1, 0), (3, 4)));
        let (a, b) = p.reversed().ends().unwrap();
        let mut fwd = [(1, 0), (3, 4)];
        let mut back = [a, b];
        fwd.sort();
        back.sort();
        assert_eq!(fwd, back);
        let c = validate(&[0, 1, 2, 3], WalkKind::Cycle, &k(4)).unwrap();
        assert!(matches!(c.ends(), Err(Error::ClosedWalk)));
    }

    #[test]
    fn path_types() {
        let p = validate(&[1, 2, 3, 4, 5], WalkKind::Path, &k(8)).unwrap();
        assert_eq!(classify_type(&p, (1, 2)).value(), 2);
        assert_eq!(classify_type(&p, (2, 1)).value(), 2);
        assert_eq!(classify_type(&p, (1, 7)).value(), 1);
        assert_eq!(classify_type(&p, (3, 6)).value(), 0);
    }

    #[test]
    fn splice_into_tour() {
        let g = k(10);
        let tour = validate(&[0, 1, 2, 3, 4, 8, 9], WalkKind::Tour, &g).unwrap();
        let cycle = validate(&[3, 4, 5, 6, 7], WalkKind::Cycle, &g).unwrap();
        let s = splice_cycle(&tour, &cycle).unwrap();
        let again = validate(s.vertices(), WalkKind::Tour, &g).unwrap();
        let mut want: Vec<Triple> = tour.edges().iter().chain(cycle.edges()).copied().collect();
        let mut got = again.edges().to_vec();
        want.sort();
        got.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn splice_uses_reflection() {
        let g = k(10);
        let tour = validate(&[0, 1, 2, 4, 3, 8, 9], WalkKind::Tour, &g).unwrap();
        let cycle = validate(&[3, 4, 5, 6, 7], WalkKind::Cycle, &g).unwrap();
        let s = splice_cycle(&tour, &cycle).unwrap();
        assert!(validate(s.vertices(), WalkKind::Tour, &g).is_ok());
        assert_eq!(s.edges().len(), 12);
    }

    #[test]
    fn splice_without_shared_pair() {
        let g = k(12);
        let tour = validate(&[0, 1, 2, 3], WalkKind::Tour, &g).unwrap();
        let cycle = validate(&[5, 6, 7, 8, 9], WalkKind::Cycle, &g).unwrap();
        assert!(matches!(splice_cycle(&tour, &cycle), Err(Error::NoSharedConsecutivePair)));
    }

    #[test]
    fn merging_trails() {
        let g = k(10);
        // ends (1,0),(3,4) and (4,3),(6,7)
        let t1 = validate(&[0, 1, 2, 3, 4], WalkKind::Trail, &g).unwrap();
        let t2 = validate(&[3, 4, 5, 6, 7], WalkKind::Trail, &g).unwrap();
        let m = merge_opposite_trails(&t1, &t2).unwrap();
        let m = validate(m.vertices(), WalkKind::Trail, &g).unwrap();
        assert_eq!(m.edges().len(), 6);
        assert_eq!(m.ends().unwrap(), ((1, 0), (6, 7)));
    }

    #[test]
    fn self_merge_closes_tour() {
        let g = k(10);
        let t = validate(&[0, 1, 2, 3, 4, 0, 1], WalkKind::Trail, &g).unwrap();
        let tour = merge_opposite_trails(&t, &t).unwrap();
        assert_eq!(tour.kind(), WalkKind::Tour);
        assert_eq!(tour.vertices(), &[0, 1, 2, 3, 4]);
        assert!(validate(tour.vertices(), WalkKind::Tour, &g).is_ok());
    }

    #[test]
    fn overlapping_trails_rejected() {
        let g = k(10);
        let t1 = validate(&[0, 1, 2, 3, 4], WalkKind::Trail, &g).unwrap();
        let t2 = validate(&[3, 4, 2, 1, 0], WalkKind::Trail, &g).unwrap();
        assert!(matches!(merge_opposite_trails(&t1, &t2), Err(Error::EdgeOverlap)));
        let t3 = validate(&[5, 6, 7], WalkKind::Trail, &g).unwrap();
        assert!(matches!(merge_opposite_trails(&t1, &t3), Err(Error::NoOppositeEnds)));
    }

    #[test]
    fn spanning() {
        let g = ThreeGraph::build(3, [[0, 1, 2]]).unwrap();
        let t = validate(&[0, 1, 2], WalkKind::Trail, &g).unwrap();
        assert!(!is_spanning_trail(&t, &g));
        let closed = validate(&[0, 1, 2, 0, 1], WalkKind::Walk, &g).unwrap();
        assert!(is_spanning_trail(&closed, &g));
        let g6 = k(6);
        let t = validate(&[0, 1, 2, 3, 4, 5], WalkKind::Trail, &g6).unwrap();
        assert!(!is_spanning_trail(&t, &g6));
        assert!(is_spanning_trail(&t, &ThreeGraph::empty(1)));
    }

    #[test]
    fn canonical_form() {
        assert_eq!(canonical_cycle(&[3, 1, 4, 0, 2]), vec![0, 2, 3, 1, 4]);
        assert_eq!(canonical_cycle(&[2, 0, 1]), vec![0, 1, 2]);
    }

    proptest! {
        #[test]
        fn reversal_keeps_edge_set(perm in Just((0..8).collect::<Vec<usize>>()).prop_shuffle(), len in 4usize..8) {
            let g = k(8);
            let seq = &perm[..len];
            for kind in [WalkKind::Path, WalkKind::Cycle] {
                let w = validate(seq, kind, &g).unwrap();
                let mut rev_seq = seq.to_vec();
                rev_seq.reverse();
                let r = validate(&rev_seq, kind, &g).unwrap();
                let mut a = w.edges().to_vec();
                let mut b = r.edges().to_vec();
                a.sort(); b.sort();
                prop_assert_eq!(a, b);
                prop_assert_eq!(w.reversed(), r);
            }
        }

        #[test]
        fn cycles_have_ell_edges_and_degree_three(perm in Just((0..9).collect::<Vec<usize>>()).prop_shuffle(), len in 4usize..10) {
            let c = validate(&perm[..len], WalkKind::Cycle, &k(9)).unwrap();
            prop_assert_eq!(c.edges().len(), len);
            for &v in c.vertices() {
                prop_assert_eq!(c.edges().iter().filter(|t| t.contains(v)).count(), 3);
            }
        }

        #[test]
        fn splicing_preserves_tours(perm in Just((0..11).collect::<Vec<usize>>()).prop_shuffle(), split in 4usize..7) {
            let g = k(11);
            // a cycle and a tour on disjoint-ish vertex sets sharing the pair perm[0], perm[1]
            let tour_v: Vec<usize> = perm[..split].to_vec();
            let mut cyc_v = vec![perm[0], perm[1]];
            cyc_v.extend_from_slice(&perm[split..split + 3]);
            let tour = validate(&tour_v, WalkKind::Tour, &g).unwrap();
            let cycle = validate(&cyc_v, WalkKind::Cycle, &g).unwrap();
            let s = splice_cycle(&tour, &cycle).unwrap();
            let s = validate(s.vertices(), WalkKind::Tour, &g).unwrap();
            prop_assert_eq!(s.edges().len(), tour.edges().len() + cycle.edges().len());
        }
    }
}
