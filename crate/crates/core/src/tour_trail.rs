//! Tour-trail decompositions, residual digraphs and the reduction of a residual
//! to a sea of vertex-disjoint oriented triangles.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gadgets::GadgetBuilder;
use crate::graph::{DivisibilityKind, EdgeQuery, EdgeSet, ThreeGraph, Triple, Vertex, VertexSet};
use crate::walks::{self, Arc, WalkKind, WalkSeq};

/// Edge-disjoint tours and open trails.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TourTrailDecomposition {
    tours: Vec<WalkSeq>,
    trails: Vec<WalkSeq>,
}

impl TourTrailDecomposition {
    /// Checks that the walks have the right kinds and are pairwise edge-disjoint.
    pub fn new(tours: Vec<WalkSeq>, trails: Vec<WalkSeq>) -> Result<Self> {
        if tours.iter().any(|t| !t.is_closed()) || trails.iter().any(|t| t.is_closed()) {
            return Err(Error::Precondition("tours must be closed and trails open".into()));
        }
        let d = TourTrailDecomposition { tours, trails };
        let mut seen = HashSet::new();
        for e in d.walks().flat_map(|w| w.edges()) {
            if !seen.insert(*e) {
                return Err(Error::EdgeOverlap);
            }
        }
        Ok(d)
    }

    pub fn tours(&self) -> &[WalkSeq] {
        &self.tours
    }

    pub fn trails(&self) -> &[WalkSeq] {
        &self.trails
    }

    pub fn walks(&self) -> impl Iterator<Item = &WalkSeq> {
        self.tours.iter().chain(&self.trails)
    }

    pub fn edge_count(&self) -> usize {
        self.walks().map(|w| w.edges().len()).sum()
    }

    pub fn edges(&self) -> EdgeSet {
        self.walks().flat_map(|w| w.edges().iter().copied()).collect()
    }

    pub fn is_tour_decomposition(&self) -> bool {
        self.trails.is_empty()
    }

    /// The decomposition covers exactly the edges of `g`, every walk in `g`.
    pub fn validate(&self, g: &ThreeGraph) -> Result<()> {
        let mut seen = HashSet::new();
        for w in self.walks() {
            let kind = if w.is_closed() { WalkKind::Tour } else { WalkKind::Trail };
            walks::validate(w.vertices(), kind, g)
                .map_err(|e| Error::NotADecomposition(format!("walk {:?}: {e}", w.vertices())))?;
            for e in w.edges() {
                if !seen.insert(*e) {
                    return Err(Error::NotADecomposition(format!("edge {e} is used twice")));
                }
            }
        }
        if seen.len() != g.edge_count() {
            return Err(Error::NotADecomposition(format!(
                "{} of {} edges covered",
                seen.len(),
                g.edge_count()
            )));
        }
        Ok(())
    }

    /// The multiset of trail ends.
    pub fn residual(&self) -> ResidualDigraph {
        let mut d = ResidualDigraph::default();
        for t in &self.trails {
            let (s, e) = t.ends().expect("trails are open");
            d.add(s);
            d.add(e);
        }
        d
    }

    pub fn push_tour(&mut self, t: WalkSeq) {
        debug_assert!(t.is_closed());
        self.tours.push(t);
    }

    pub fn push_trail(&mut self, t: WalkSeq) {
        debug_assert!(!t.is_closed());
        self.trails.push(t);
    }

    /// Adds the walks of an edge-disjoint decomposition.
    pub fn absorb(&mut self, other: TourTrailDecomposition) {
        self.tours.extend(other.tours);
        self.trails.extend(other.trails);
    }

    /// Joins a trail ending in `arc` with a trail ending in the opposite arc,
    /// removing both arcs from the residual. A trail carrying both closes up.
    pub fn merge_arc(&mut self, arc: Arc) -> Result<()> {
        let opposite = (arc.1, arc.0);
        let has = |t: &WalkSeq, a: Arc| {
            let (s, e) = t.ends().expect("trails are open");
            s == a || e == a
        };
        let i = self.trails.iter().position(|t| has(t, arc)).ok_or(Error::NoOppositeEnds)?;
        let j = (0..self.trails.len())
            .find(|&j| j != i && has(&self.trails[j], opposite))
            .or_else(|| has(&self.trails[i], opposite).then_some(i))
            .ok_or(Error::NoOppositeEnds)?;
        if i == j {
            let t = self.trails.swap_remove(i);
            let tour = walks::close_trail(&t)?;
            self.tours.push(tour);
        } else {
            let merged = walks::merge_at(&self.trails[i], &self.trails[j], arc)?;
            let (hi, lo) = (i.max(j), i.min(j));
            self.trails.swap_remove(hi);
            self.trails.swap_remove(lo);
            self.trails.push(merged);
        }
        Ok(())
    }
}

/// Each edge `{a, b, c}` with `a < b < c` as the trail `a b c`.
pub fn trivial_ttd(r: &ThreeGraph) -> TourTrailDecomposition {
    let trails = r
        .edges()
        .map(|t| walks::assemble(&t.vertices(), WalkKind::Trail).expect("an edge is a trail"))
        .collect();
    TourTrailDecomposition { tours: Vec::new(), trails }
}

/// Walks greedily along unused edges, closing a walk into a tour as soon as
/// both closing windows are free, then cancels opposite ends.
pub fn greedy_ttd(r: &ThreeGraph) -> TourTrailDecomposition {
    let mut unused: BTreeSet<Triple> = r.edges().collect();
    let mut d = TourTrailDecomposition::default();
    while let Some(&first) = unused.iter().next() {
        unused.remove(&first);
        let mut seq = first.vertices().to_vec();
        loop {
            let k = seq.len();
            let distinct = |a: Vertex, b: Vertex, c: Vertex| a != b && b != c && a != c;
            let closable = k >= 4
                && distinct(seq[k - 2], seq[k - 1], seq[0])
                && distinct(seq[k - 1], seq[0], seq[1]);
            let close = closable
                .then(|| (Triple::sorted(seq[k - 2], seq[k - 1], seq[0]), Triple::sorted(seq[k - 1], seq[0], seq[1])));
            if let Some(close) = close.filter(|c| c.0 != c.1 && unused.contains(&c.0) && unused.contains(&c.1)) {
                unused.remove(&close.0);
                unused.remove(&close.1);
                d.tours.push(walks::assemble(&seq, WalkKind::Tour).expect("closing windows are fresh"));
                break;
            }
            let (a, b) = (seq[k - 2], seq[k - 1]);
            let next = r.neighbours(a, b).find(|&x| unused.contains(&Triple::sorted(a, b, x)));
            match next {
                Some(x) => {
                    unused.remove(&Triple::sorted(a, b, x));
                    seq.push(x);
                }
                None => {
                    d.trails.push(walks::assemble(&seq, WalkKind::Trail).expect("edges are fresh"));
                    break;
                }
            }
        }
    }
    cancel_opposite(d)
}

/// Merges trails with opposite residual arcs, smallest arc first, until none remain.
pub fn cancel_opposite(mut t: TourTrailDecomposition) -> TourTrailDecomposition {
    while let Some(arc) = t.residual().first_opposite() {
        t.merge_arc(arc).expect("opposite arcs are present");
    }
    t
}

/// Multiset of arcs with multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResidualDigraph {
    mult: BTreeMap<Arc, usize>,
}

impl Serialize for ResidualDigraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.arcs().map(|(a, b)| [a, b]).collect::<Vec<_>>().serialize(s)
    }
}

impl FromIterator<Arc> for ResidualDigraph {
    fn from_iter<I: IntoIterator<Item = Arc>>(iter: I) -> Self {
        let mut d = ResidualDigraph::default();
        for a in iter {
            d.add(a);
        }
        d
    }
}

impl ResidualDigraph {
    pub fn add(&mut self, arc: Arc) {
        *self.mult.entry(arc).or_insert(0) += 1;
    }

    /// Removes one copy of `arc`; false if absent.
    pub fn remove(&mut self, arc: Arc) -> bool {
        match self.mult.get_mut(&arc) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.mult.remove(&arc);
                true
            }
            None => false,
        }
    }

    pub fn mu(&self, u: Vertex, v: Vertex) -> usize {
        self.mult.get(&(u, v)).copied().unwrap_or(0)
    }

    /// Arcs with repetitions, in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        self.mult.iter().flat_map(|(&a, &m)| std::iter::repeat_n(a, m))
    }

    pub fn distinct_arcs(&self) -> impl Iterator<Item = (Arc, usize)> + '_ {
        self.mult.iter().map(|(&a, &m)| (a, m))
    }

    pub fn arc_count(&self) -> usize {
        self.mult.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.mult.is_empty()
    }

    pub fn out_degree(&self, v: Vertex) -> usize {
        self.mult.range((v, 0)..=(v, usize::MAX)).map(|(_, m)| m).sum()
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.mult.iter().filter(|((_, b), _)| *b == v).map(|(_, m)| m).sum()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.mult.keys().flat_map(|&(a, b)| [a, b]).collect()
    }

    /// The smallest arc whose reverse is also present.
    pub fn first_opposite(&self) -> Option<Arc> {
        self.mult.keys().copied().find(|&(a, b)| self.mult.contains_key(&(b, a)))
    }

    /// The maximal triangle lake: components that are exactly one simple
    /// oriented triangle.
    pub fn sea(&self) -> TriangleLake {
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = BTreeMap::new();
        for &(a, b) in self.mult.keys() {
            adj.entry(a).or_default().insert(b);
            adj.entry(b).or_default().insert(a);
        }
        let mut seen = BTreeSet::new();
        let mut triangles = Vec::new();
        for &start in adj.keys() {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut i = 0;
            while i < comp.len() {
                for &u in &adj[&comp[i]] {
                    if seen.insert(u) {
                        comp.push(u);
                    }
                }
                i += 1;
            }
            if comp.len() != 3 {
                continue;
            }
            comp.sort_unstable();
            let [a, b, c] = [comp[0], comp[1], comp[2]];
            let arcs: Vec<(Arc, usize)> =
                self.mult.iter().filter(|((x, _), _)| comp.contains(x)).map(|(&k, &m)| (k, m)).collect();
            let single = |x: Arc| arcs.contains(&(x, 1));
            if arcs.len() != 3 {
                continue;
            }
            if single((a, b)) && single((b, c)) && single((c, a)) {
                triangles.push([a, b, c]);
            } else if single((a, c)) && single((c, b)) && single((b, a)) {
                triangles.push([a, c, b]);
            }
        }
        TriangleLake { triangles }
    }

    pub fn is_sea(&self) -> bool {
        3 * self.sea().triangles.len() == self.arc_count()
    }

    /// Arcs outside the sea of triangles.
    pub fn phi(&self) -> usize {
        self.arc_count() - 3 * self.sea().triangles.len()
    }
}

/// The arcs `(a, b), (b, c), (c, a)`.
pub fn oriented_triangle(t: [Vertex; 3]) -> [Arc; 3] {
    [(t[0], t[1]), (t[1], t[2]), (t[2], t[0])]
}

/// Vertex-disjoint oriented triangles `a → b → c → a`, smallest vertex first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TriangleLake {
    pub triangles: Vec<[Vertex; 3]>,
}

impl TriangleLake {
    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.triangles.iter().flatten().copied().collect()
    }
}

/// Checks `d⁺(x) ≡ d⁻(x) (mod 3)` at every vertex after validating `t` against `host`.
pub fn check_mod3(t: &TourTrailDecomposition, host: &ThreeGraph) -> Result<bool> {
    t.validate(host)?;
    let d = t.residual();
    Ok(d.vertices().into_iter().all(|v| d.out_degree(v) % 3 == d.in_degree(v) % 3))
}

pub fn phi_potential(t: &TourTrailDecomposition) -> usize {
    t.residual().phi()
}

/// The reduction rule applied in one step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SeaCase {
    I,
    II,
    III,
    IV,
    V,
}

/// One step of the reduction, as written to traces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeaStep {
    pub case: SeaCase,
    pub arcs_before: usize,
    pub arcs_after: usize,
    pub phi: usize,
}

/// The state after driving a residual to a sea of triangles.
#[derive(Clone, Debug)]
pub struct SeaOutcome {
    /// Gadget edges added to the input.
    pub added: EdgeSet,
    /// `ℓ`-cycles decomposing `added`.
    pub certificate: Vec<WalkSeq>,
    /// Decomposition of the input together with `added`.
    pub decomposition: TourTrailDecomposition,
    pub trace: Vec<SeaStep>,
    pub reservoir: VertexSet,
}

fn binom3(m: usize) -> usize {
    if m < 3 {
        0
    } else {
        m * (m - 1) * (m - 2) / 6
    }
}

fn expect_residual(predicted: &ResidualDigraph, got: &ResidualDigraph, case: SeaCase) -> Result<()> {
    if predicted != got {
        return Err(Error::Internal(format!("case {case:?} left an unexpected residual")));
    }
    Ok(())
}

/// Adds `ℓ`-decomposable gadgets to `r` until the residual of the decomposition
/// is a sea of triangles. Attachment vertices are taken from `reservoir` in
/// increasing order; gadget interiors never use reservoir vertices.
pub fn reduce_to_sea(
    host: &ThreeGraph,
    r: &ThreeGraph,
    t: TourTrailDecomposition,
    reservoir: &VertexSet,
    ell: usize,
    seed: u64,
) -> Result<SeaOutcome> {
    let mut builder = GadgetBuilder::new(host, ell, seed)?;
    builder.avoid(r.edges());
    reduce_with(&mut builder, r, t, reservoir)
}

pub(crate) fn reduce_with(
    builder: &mut GadgetBuilder<'_>,
    r: &ThreeGraph,
    t: TourTrailDecomposition,
    reservoir: &VertexSet,
) -> Result<SeaOutcome> {
    let host = builder.host();
    if r.edges().any(|e| !host.has(&e)) {
        return Err(Error::Precondition("r must be a subgraph of the host".into()));
    }
    t.validate(r)?;
    let check = r.check_divisibility(DivisibilityKind::Cycle(builder.ell()))?;
    if !check.divisible {
        return Err(Error::Precondition(format!("r is not divisible: {:?}", check.violation)));
    }
    let support = r.support();
    if reservoir.iter().any(|v| support.contains(v)) {
        return Err(Error::Precondition("the reservoir must avoid the vertices of r".into()));
    }
    let budget = 2 * binom3(support.len()) + 1;
    let mut reservoir = reservoir.clone();
    let mut decomposition = t;
    let mut added = EdgeSet::new();
    let mut certificate = Vec::new();
    let mut trace = Vec::new();
    builder.set_forbidden(reservoir.clone());

    loop {
        if trace.len() >= budget {
            return Err(Error::IterationBudgetExceeded(budget));
        }
        let d = decomposition.residual();
        let phi_before = d.phi();
        let lake = d.sea().vertices();
        let (case, removed, gained) = if let Some(arc) = d.first_opposite() {
            decomposition.merge_arc(arc)?;
            (SeaCase::I, vec![arc, (arc.1, arc.0)], vec![])
        } else if let Some(((a, b), _)) = d.distinct_arcs().find(|&(_, m)| m >= 2) {
            let [x, y, z, w] = take_fresh::<4>(&mut reservoir)?;
            builder.set_forbidden(reservoir.clone());
            let s3 = builder.s3([b, x, a])?;
            let p6 = builder.p6([a, x, b, y, z, w])?;
            for g in [s3, p6] {
                added.extend(g.edges().iter().copied());
                certificate.extend(g.certificate().iter().cloned());
                decomposition.absorb(g.into_decomposition());
            }
            for arc in [(b, x), (x, a), (a, b), (a, b)] {
                decomposition.merge_arc(arc)?;
            }
            let mut gain = vec![(b, a)];
            gain.extend(oriented_triangle([y, z, w]));
            (SeaCase::II, vec![(a, b), (a, b)], gain)
        } else if let Some((a, b, c)) = find_path_arcs(&d, &lake) {
            let [x, y, z] = take_fresh::<3>(&mut reservoir)?;
            builder.set_forbidden(reservoir.clone());
            let p6 = builder.p6([c, b, a, x, y, z])?;
            added.extend(p6.edges().iter().copied());
            certificate.extend(p6.certificate().iter().cloned());
            decomposition.absorb(p6.into_decomposition());
            for arc in [(a, b), (b, c)] {
                decomposition.merge_arc(arc)?;
            }
            let mut gain = vec![(a, c)];
            gain.extend(oriented_triangle([x, y, z]));
            (SeaCase::III, vec![(a, b), (b, c)], gain)
        } else if let Some((a, b, c, dd)) = find_out_star(&d) {
            let [x, y, z] = take_fresh::<3>(&mut reservoir)?;
            builder.set_forbidden(reservoir.clone());
            let s3 = builder.s3([c, dd, a])?;
            let p6 = builder.p6([a, c, b, x, y, z])?;
            for g in [s3, p6] {
                added.extend(g.edges().iter().copied());
                certificate.extend(g.certificate().iter().cloned());
                decomposition.absorb(g.into_decomposition());
            }
            for arc in [(a, dd), (a, b), (a, c), (a, c)] {
                decomposition.merge_arc(arc)?;
            }
            let mut gain = vec![(c, b), (c, dd)];
            gain.extend(oriented_triangle([x, y, z]));
            (SeaCase::IV, vec![(a, b), (a, c), (a, dd)], gain)
        } else {
            if !d.is_sea() {
                return Err(Error::Internal("no rule applies but the residual is not a sea".into()));
            }
            trace.push(SeaStep { case: SeaCase::V, arcs_before: d.arc_count(), arcs_after: d.arc_count(), phi: 0 });
            break;
        };
        let after = decomposition.residual();
        let mut predicted = d.clone();
        for a in removed {
            if !predicted.remove(a) {
                return Err(Error::Internal(format!("case {case:?} removes an absent arc")));
            }
        }
        for a in gained {
            predicted.add(a);
        }
        expect_residual(&predicted, &after, case)?;
        let phi = after.phi();
        if phi >= phi_before {
            return Err(Error::Internal(format!("case {case:?} did not decrease the potential")));
        }
        trace.push(SeaStep { case, arcs_before: d.arc_count(), arcs_after: after.arc_count(), phi });
        log::debug!("sea step {case:?}: {} -> {} arcs, phi {phi}", d.arc_count(), after.arc_count());
    }
    Ok(SeaOutcome { added, certificate, decomposition, trace, reservoir })
}

fn take_fresh<const K: usize>(reservoir: &mut VertexSet) -> Result<[Vertex; K]> {
    let picked: Vec<Vertex> = reservoir.iter().take(K).collect();
    if picked.len() < K {
        return Err(Error::GadgetConstructionFailed("the reservoir of fresh vertices is exhausted".into()));
    }
    for &v in &picked {
        reservoir.remove(v);
    }
    Ok(picked.try_into().expect("length checked"))
}

/// Smallest `(a, b), (b, c)` with `a ≠ c`, both arcs outside the lake.
fn find_path_arcs(d: &ResidualDigraph, lake: &BTreeSet<Vertex>) -> Option<(Vertex, Vertex, Vertex)> {
    let free: Vec<Arc> = d.distinct_arcs().map(|(a, _)| a).filter(|(a, _)| !lake.contains(a)).collect();
    for &(a, b) in &free {
        if let Some(&(_, c)) = free.iter().find(|&&(u, c)| u == b && c != a) {
            return Some((a, b, c));
        }
    }
    None
}

/// Smallest `a` with three out-neighbours `b < c < d`, taking the three smallest.
fn find_out_star(d: &ResidualDigraph) -> Option<(Vertex, Vertex, Vertex, Vertex)> {
    let mut outs: BTreeMap<Vertex, Vec<Vertex>> = BTreeMap::new();
    for ((a, b), _) in d.distinct_arcs() {
        outs.entry(a).or_default().push(b);
    }
    outs.into_iter().find(|(_, o)| o.len() >= 3).map(|(a, o)| (a, o[0], o[1], o[2]))
}

/// Result of cancelling a sea of triangles with prisms.
#[derive(Clone, Debug)]
pub struct ToursOutcome {
    /// All gadget edges added to the input, including those of the reduction.
    pub added: EdgeSet,
    pub certificate: Vec<WalkSeq>,
    /// A tour decomposition of the input together with `added`.
    pub decomposition: TourTrailDecomposition,
}

/// Pairs the triangles of the sea and cancels each pair with a prism.
pub fn eliminate_triangles(host: &ThreeGraph, state: SeaOutcome, ell: usize, seed: u64) -> Result<ToursOutcome> {
    let mut builder = GadgetBuilder::new(host, ell, seed)?;
    builder.avoid(state.decomposition.edges().iter());
    eliminate_with(&mut builder, state)
}

pub(crate) fn eliminate_with(builder: &mut GadgetBuilder<'_>, state: SeaOutcome) -> Result<ToursOutcome> {
    let SeaOutcome { mut added, mut certificate, mut decomposition, .. } = state;
    let d = decomposition.residual();
    let lake = d.sea();
    if 3 * lake.triangles.len() != d.arc_count() {
        return Err(Error::Precondition("the residual is not a sea of triangles".into()));
    }
    if lake.triangles.len() % 2 != 0 {
        return Err(Error::Internal("a sea with an odd number of triangles".into()));
    }
    for pair in lake.triangles.chunks(2) {
        let ([a1, b1, c1], [a2, b2, c2]) = (pair[0], pair[1]);
        let p6 = builder.p6([c1, b1, a1, c2, b2, a2])?;
        added.extend(p6.edges().iter().copied());
        certificate.extend(p6.certificate().iter().cloned());
        decomposition.absorb(p6.into_decomposition());
        for t in [[a1, b1, c1], [a2, b2, c2]] {
            for arc in oriented_triangle(t) {
                decomposition.merge_arc(arc)?;
            }
        }
    }
    if !decomposition.is_tour_decomposition() {
        return Err(Error::Internal("trails remain after cancelling the sea".into()));
    }
    Ok(ToursOutcome { added, certificate, decomposition })
}
