//! Cycle-decomposable gadgets: the double step `S3`, the oriented four-cycle
//! `C4`, the prism `P6`, the glued cycles `B(k, ℓ)`, tour merging connectors,
//! transformers and absorbers.
//!
//! All builders share a [`GadgetBuilder`], which threads one growing set of
//! used edges so that successive gadgets are edge-disjoint from each other and
//! from whatever the caller registered up front.

use std::borrow::Borrow;
use std::collections::{BTreeSet, HashSet};

use rand::RngExt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DivisibilityKind, EdgeQuery, EdgeSet, ThreeGraph, Triple, Vertex, VertexSet};
use crate::pathfinder::{self, PathRequest};
use crate::rng::{self, Rng};
use crate::tour_trail::{self, oriented_triangle, ResidualDigraph, TourTrailDecomposition};
use crate::walks::{self, Arc, WalkKind, WalkSeq};

/// Attempts per gadget before giving up.
pub const GADGET_RETRIES: usize = 16;

/// A gadget with its cycle certificate and a tour-trail decomposition of its
/// edges whose residual is the gadget's arc contribution.
#[derive(Clone, Debug)]
pub struct Gadget {
    edges: EdgeSet,
    certificate: Vec<WalkSeq>,
    decomposition: TourTrailDecomposition,
}

#[derive(Serialize)]
struct GadgetJson<'a> {
    edges: &'a EdgeSet,
    certificate_cycles: &'a [WalkSeq],
    residual_delta: ResidualDigraph,
}

impl Serialize for Gadget {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GadgetJson { edges: &self.edges, certificate_cycles: &self.certificate, residual_delta: self.residual_delta() }
            .serialize(s)
    }
}

impl Gadget {
    fn from_cycles(certificate: Vec<WalkSeq>, decomposition: TourTrailDecomposition) -> Self {
        let edges = certificate.iter().flat_map(|c| c.edges().iter().copied()).collect();
        Gadget { edges, certificate, decomposition }
    }

    fn combine(parts: Vec<Gadget>) -> Self {
        let mut g = Gadget { edges: EdgeSet::new(), certificate: Vec::new(), decomposition: Default::default() };
        for p in parts {
            g.edges.extend(p.edges);
            g.certificate.extend(p.certificate);
            g.decomposition.absorb(p.decomposition);
        }
        g
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn certificate(&self) -> &[WalkSeq] {
        &self.certificate
    }

    pub fn decomposition(&self) -> &TourTrailDecomposition {
        &self.decomposition
    }

    pub fn into_decomposition(self) -> TourTrailDecomposition {
        self.decomposition
    }

    /// Arcs contributed to a residual digraph.
    pub fn residual_delta(&self) -> ResidualDigraph {
        self.decomposition.residual()
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.edges.iter().flat_map(|t| t.vertices()).collect()
    }

    /// Certificate cycles are edge-disjoint `ℓ`-cycles of `host` covering the
    /// edges exactly, and the decomposition covers the same edges.
    pub fn validate(&self, host: &ThreeGraph, ell: usize) -> Result<()> {
        check_certificate(host, &self.edges, &self.certificate, ell)?;
        let g = ThreeGraph::from_edges(host.n(), &self.edges)?;
        self.decomposition.validate(&g)
    }
}

/// Checks that `cycles` are pairwise edge-disjoint tight `ell`-cycles of `host`
/// whose union is `edges`.
pub fn check_certificate(host: &ThreeGraph, edges: &EdgeSet, cycles: &[WalkSeq], ell: usize) -> Result<()> {
    let mut seen = EdgeSet::new();
    for c in cycles {
        let c = walks::validate(c.vertices(), WalkKind::Cycle, host)
            .map_err(|e| Error::NotADecomposition(format!("cycle {:?}: {e}", c.vertices())))?;
        if c.len() != ell {
            return Err(Error::NotADecomposition(format!("cycle of length {} in a {ell}-certificate", c.len())));
        }
        for e in c.edges() {
            if !seen.insert(*e) {
                return Err(Error::NotADecomposition(format!("edge {e} lies on two cycles")));
            }
        }
    }
    if &seen != edges {
        return Err(Error::NotADecomposition(format!(
            "cycles cover {} edges, the gadget has {}",
            seen.len(),
            edges.len()
        )));
    }
    Ok(())
}

/// An `(R, C)`-transformer with the two cycle decompositions it certifies.
#[derive(Clone, Debug, Serialize)]
pub struct Transformer {
    pub edges: EdgeSet,
    /// Decomposes `R ∪ L`.
    pub r_side: Vec<WalkSeq>,
    /// Decomposes `C ∪ L`.
    pub c_side: Vec<WalkSeq>,
}

/// A subgraph `A` such that both `A` and `A ∪ R` decompose into `ℓ`-cycles.
#[derive(Clone, Debug, Default, Serialize)]
pub struct Absorber {
    pub edges: EdgeSet,
    /// Decomposes `A`.
    #[serde(rename = "certificate_cycles")]
    pub certificate: Vec<WalkSeq>,
    /// Decomposes `A ∪ R`.
    #[serde(rename = "absorbed_certificate_cycles")]
    pub absorbed_certificate: Vec<WalkSeq>,
}

impl Absorber {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn validate(&self, host: &ThreeGraph, r: &ThreeGraph, ell: usize) -> Result<()> {
        if r.edges().any(|e| self.edges.contains(&e)) {
            return Err(Error::NotADecomposition("the absorber shares an edge with r".into()));
        }
        check_certificate(host, &self.edges, &self.certificate, ell)?;
        let mut with_r = self.edges.clone();
        with_r.extend(r.edges());
        check_certificate(host, &with_r, &self.absorbed_certificate, ell)
    }
}

/// Builds gadgets one after another inside a host, keeping them edge-disjoint.
pub struct GadgetBuilder<'a> {
    host: &'a ThreeGraph,
    ell: usize,
    used: HashSet<Triple>,
    journal: Vec<Triple>,
    forbidden: VertexSet,
    rng: Rng,
}

impl<'a> GadgetBuilder<'a> {
    pub fn new(host: &'a ThreeGraph, ell: usize, seed: u64) -> Result<Self> {
        if ell < 7 {
            return Err(Error::BadParams(format!("gadgets need ℓ ≥ 7, got {ell}")));
        }
        Ok(GadgetBuilder {
            host,
            ell,
            used: HashSet::new(),
            journal: Vec::new(),
            forbidden: VertexSet::empty(host.n()),
            rng: rng::stream(seed, rng::streams::GADGETS),
        })
    }

    pub fn host(&self) -> &'a ThreeGraph {
        self.host
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Registers edges that no later gadget may use.
    pub fn avoid<I>(&mut self, edges: I)
    where
        I: IntoIterator,
        I::Item: Borrow<Triple>,
    {
        for e in edges {
            self.used.insert(*e.borrow());
        }
    }

    /// Vertices that gadget interiors must not use.
    pub fn set_forbidden(&mut self, f: VertexSet) {
        self.forbidden = f;
    }

    pub fn used(&self) -> &HashSet<Triple> {
        &self.used
    }

    fn commit(&mut self, edges: &[Triple]) {
        for &e in edges {
            if self.used.insert(e) {
                self.journal.push(e);
            }
        }
    }

    fn rollback(&mut self, mark: usize) {
        for e in self.journal.drain(mark..) {
            self.used.remove(&e);
        }
    }

    /// Runs `f` up to [`GADGET_RETRIES`] times, undoing partial work between tries.
    fn retry<T>(&mut self, what: &str, mut f: impl FnMut(&mut Self) -> Result<T>) -> Result<T> {
        let mut last = None;
        for _ in 0..GADGET_RETRIES {
            let mark = self.journal.len();
            match f(self) {
                Ok(v) => return Ok(v),
                Err(e) => {
                    self.rollback(mark);
                    last = Some(e);
                }
            }
        }
        Err(Error::GadgetConstructionFailed(format!("{what}: {}", last.map(|e| e.to_string()).unwrap_or_default())))
    }

    /// Runs `f` with `extra` vertices added to the forbidden set.
    fn forbidding<T>(&mut self, extra: impl IntoIterator<Item = Vertex>, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        let saved = self.forbidden.clone();
        for v in extra {
            self.forbidden.insert(v);
        }
        let out = f(self);
        self.forbidden = saved;
        out
    }

    fn check_vertices(&self, vs: &[Vertex]) -> Result<()> {
        for (i, &v) in vs.iter().enumerate() {
            if v >= self.host.n() {
                return Err(Error::OutOfRange { vertex: v, n: self.host.n() });
            }
            if vs[..i].contains(&v) {
                return Err(Error::Precondition(format!("attachment vertices {vs:?} must be distinct")));
            }
        }
        Ok(())
    }

    fn pick(&mut self, c: &VertexSet) -> Option<Vertex> {
        let list = c.to_vec();
        (!list.is_empty()).then(|| list[self.rng.random_range(0..list.len())])
    }

    /// Extends the path `seq` to an `ℓ`-cycle (or `len`-cycle) and commits it.
    fn cycle_through(&mut self, seq: &[Vertex], len: usize, extra: Option<&VertexSet>) -> Result<WalkSeq> {
        let p = walks::validate(seq, WalkKind::Path, self.host)?;
        if p.edges().iter().any(|e| self.used.contains(e)) {
            return Err(Error::EdgeOverlap);
        }
        let mut forbidden = self.forbidden.clone();
        if let Some(x) = extra {
            forbidden.union_with(x);
        }
        let c = pathfinder::extend_to_cycle(self.host, &p, len, None, Some(&forbidden), &self.used, &mut self.rng)?;
        self.commit(c.edges());
        Ok(c)
    }

    fn path(&mut self, start: (Vertex, Vertex), end: (Vertex, Vertex), len: usize, forbidden: &VertexSet) -> Result<WalkSeq> {
        let req = PathRequest::new(start, end, len).forbidden(forbidden);
        let p = self.retry("connector path", |b| pathfinder::find_path(b.host, &req, &b.used, &mut b.rng))?;
        self.commit(p.edges());
        Ok(p)
    }

    /// `S3(v1, v2, v3)`: two `ℓ`-cycles through `v1 v3 x` and `v3 x v2 v1`,
    /// contributing the arcs `(v1,v3)` twice, `(v1,v2)` and `(v2,v3)`.
    pub fn s3(&mut self, v: [Vertex; 3]) -> Result<Gadget> {
        self.check_vertices(&v)?;
        let g = self.retry("S3", |b| b.try_s3(v))?;
        let [v1, v2, v3] = v;
        expect_delta(&g, [(v1, v3), (v1, v3), (v1, v2), (v2, v3)])?;
        Ok(g)
    }

    fn try_s3(&mut self, [v1, v2, v3]: [Vertex; 3]) -> Result<Gadget> {
        let mut cand = self.host.joint_neighbourhood(&[(v1, v2), (v1, v3), (v2, v3)], None)?;
        cand.subtract(&self.forbidden);
        let fresh: Vec<Vertex> = cand
            .iter()
            .filter(|&x| [(v1, v3), (v3, v2), (v2, v1)].iter().all(|&(a, b)| !self.used.has_vertices(a, b, x)))
            .collect();
        let x = self
            .pick(&VertexSet::from_vertices(self.host.n(), fresh)?)
            .ok_or(Error::NoExtensionAvailable(0))?;
        let ell = self.ell;
        let c1 = self.cycle_through(&[v1, v3, x], ell, None)?;
        let c2 = self.cycle_through(&[v3, x, v2, v1], ell, None)?;
        let p1 = walks::assemble(&[v3, v2, x, v1, v3], WalkKind::Trail)?;
        let mut a: Vec<Vertex> = c1.vertices()[1..].to_vec();
        a.extend_from_slice(&c1.vertices()[..2]);
        let mut b: Vec<Vertex> = c2.vertices()[2..].to_vec();
        b.extend_from_slice(&c2.vertices()[..2]);
        let a = walks::assemble(&a, WalkKind::Trail)?;
        let b = walks::assemble(&b, WalkKind::Trail)?;
        let p2 = walks::merge_at(&b, &a, (v3, x))?;
        let d = TourTrailDecomposition::new(vec![], vec![p1, p2])?;
        Ok(Gadget::from_cycles(vec![c1, c2], d))
    }

    /// `C4(v1, …, v4)` = `S3(v1, v2, v3)` and `S3(v3, v4, v1)` with the arcs
    /// between `v1` and `v3` cancelled: the oriented four-cycle.
    pub fn c4(&mut self, v: [Vertex; 4]) -> Result<Gadget> {
        self.check_vertices(&v)?;
        let [v1, v2, v3, v4] = v;
        let mark = self.journal.len();
        let built = self.forbidding(v, |b| {
            let first = b.s3([v1, v2, v3])?;
            let second = b.s3([v3, v4, v1])?;
            Ok(Gadget::combine(vec![first, second]))
        });
        let mut g = match built {
            Ok(g) => g,
            Err(e) => {
                self.rollback(mark);
                return Err(e);
            }
        };
        for _ in 0..2 {
            g.decomposition.merge_arc((v1, v3))?;
        }
        expect_delta(&g, [(v1, v2), (v2, v3), (v3, v4), (v4, v1)])?;
        Ok(g)
    }

    /// The prism `P6(v1, …, v6)`: three four-cycles on its square faces,
    /// leaving the triangles `v1 v2 v3` and `v4 v5 v6`.
    pub fn p6(&mut self, v: [Vertex; 6]) -> Result<Gadget> {
        self.check_vertices(&v)?;
        let [v1, v2, v3, v4, v5, v6] = v;
        let mark = self.journal.len();
        let built = self.forbidding(v, |b| {
            let f1 = b.c4([v1, v2, v5, v6])?;
            let f2 = b.c4([v2, v3, v4, v5])?;
            let f3 = b.c4([v1, v6, v4, v3])?;
            Ok(Gadget::combine(vec![f1, f2, f3]))
        });
        let mut g = match built {
            Ok(g) => g,
            Err(e) => {
                self.rollback(mark);
                return Err(e);
            }
        };
        for arc in [(v2, v5), (v6, v1), (v3, v4)] {
            g.decomposition.merge_arc(arc)?;
        }
        let mut want = oriented_triangle([v1, v2, v3]).to_vec();
        want.extend(oriented_triangle([v4, v5, v6]));
        expect_delta(&g, want)?;
        Ok(g)
    }

    /// `B(k, ℓ)`: `k` vertex-disjoint `ℓ`-cycles glued along one consecutive
    /// pair, stored as a single tour. Interior and pair vertices avoid `extra`.
    pub fn glued_cycles(&mut self, k: usize, extra: &VertexSet) -> Result<Gadget> {
        if k == 0 {
            return Err(Error::BadParams("B(k, ℓ) needs k ≥ 1".into()));
        }
        self.retry("B(k, ℓ)", |b| b.try_glued(k, extra))
    }

    fn try_glued(&mut self, k: usize, extra: &VertexSet) -> Result<Gadget> {
        let mut free = self.forbidden.complement();
        free.subtract(extra);
        let u = self.pick(&free).ok_or(Error::NoExtensionAvailable(0))?;
        free.remove(u);
        let v = self.pick(&free).ok_or(Error::NoExtensionAvailable(0))?;
        let mut taken = extra.clone();
        taken.insert(u);
        taken.insert(v);
        let mut cycles = Vec::with_capacity(k);
        let mut seq = Vec::with_capacity(k * self.ell);
        for _ in 0..k {
            let mut cand = self.host.neighbour_set(u, v)?;
            cand.subtract(&self.forbidden);
            cand.subtract(&taken);
            let w = self.pick(&cand).ok_or(Error::NoExtensionAvailable(1))?;
            let ell = self.ell;
            let c = self.cycle_through(&[u, v, w], ell, Some(&taken))?;
            for &x in c.vertices() {
                taken.insert(x);
            }
            seq.extend_from_slice(c.vertices());
            cycles.push(c);
        }
        let tour = walks::assemble(&seq, WalkKind::Tour)?;
        let d = TourTrailDecomposition::new(vec![tour], vec![])?;
        Ok(Gadget::from_cycles(cycles, d))
    }

    /// A tight cycle of length `len` on vertices outside `extra` and the forbidden set.
    pub fn fresh_cycle(&mut self, len: usize, extra: &VertexSet) -> Result<WalkSeq> {
        if len < 4 {
            return Err(Error::BadParams(format!("cycles need at least 4 vertices, got {len}")));
        }
        self.retry("fresh cycle", |b| {
            let mut free = b.forbidden.complement();
            free.subtract(extra);
            let u = b.pick(&free).ok_or(Error::NoExtensionAvailable(0))?;
            free.remove(u);
            let v = b.pick(&free).ok_or(Error::NoExtensionAvailable(0))?;
            free.remove(v);
            let mut cand = b.host.neighbour_set(u, v)?;
            cand.intersect_with(&free);
            let w = b.pick(&cand).ok_or(Error::NoExtensionAvailable(1))?;
            b.cycle_through(&[u, v, w], len, Some(extra))
        })
    }

    /// Joins two edge-disjoint tours through an `ℓ`-cycle connector. Returns the
    /// connector and the merged tour, which traverses `t1`, the first connector
    /// path, `t2` and the second connector path.
    pub fn merge_tours(&mut self, t1: &WalkSeq, t2: &WalkSeq) -> Result<(Gadget, WalkSeq)> {
        if !t1.is_closed() || !t2.is_closed() || t1.len() < 3 || t2.len() < 3 {
            return Err(Error::Precondition("merge_tours needs two tours".into()));
        }
        if t1.edges().iter().any(|e| t2.edges().contains(e)) {
            return Err(Error::EdgeOverlap);
        }
        self.commit(t1.edges());
        self.commit(t2.edges());
        let (k1, k2) = (t1.len(), t2.len());
        let mut options = Vec::new();
        for i in 0..k1 {
            for j in 0..k2 {
                let (a1, b1) = (t1.vertices()[i], t1.vertices()[(i + 1) % k1]);
                let (a2, b2) = (t2.vertices()[j], t2.vertices()[(j + 1) % k2]);
                if a1 != a2 && a1 != b2 && b1 != a2 && b1 != b2 {
                    options.push((i, j));
                }
            }
        }
        if options.is_empty() {
            return Err(Error::Precondition("the tours have no disjoint consecutive pairs".into()));
        }
        let mut last = None;
        for attempt in 0..GADGET_RETRIES.min(options.len()) {
            let (i, j) = options[(attempt * 7919) % options.len()];
            let r1: Vec<Vertex> = (0..k1).map(|x| t1.vertices()[(i + x) % k1]).collect();
            let r2: Vec<Vertex> = (0..k2).map(|x| t2.vertices()[(j + x) % k2]).collect();
            let mark = self.journal.len();
            match self.try_connector(&r1, &r2) {
                Ok(out) => return Ok(out),
                Err(e) => {
                    self.rollback(mark);
                    last = Some(e);
                }
            }
        }
        Err(Error::GadgetConstructionFailed(format!(
            "tour connector: {}",
            last.map(|e| e.to_string()).unwrap_or_default()
        )))
    }

    fn try_connector(&mut self, r1: &[Vertex], r2: &[Vertex]) -> Result<(Gadget, WalkSeq)> {
        let (a1, b1, a2, b2) = (r1[0], r1[1], r2[0], r2[1]);
        let req = PathRequest::new((a1, b1), (a2, b2), 5).forbidden(&self.forbidden);
        let p1 = pathfinder::find_path(self.host, &req, &self.used, &mut self.rng)?;
        let ell = self.ell;
        let cycle = self.cycle_through(p1.vertices(), ell, None)?;
        let cv = cycle.vertices();
        let mut seq = r1.to_vec();
        seq.extend_from_slice(&cv[..3]);
        seq.extend_from_slice(r2);
        seq.extend_from_slice(&cv[3..]);
        let merged = walks::assemble(&seq, WalkKind::Tour)?;
        let tour = walks::assemble(cv, WalkKind::Tour)?;
        let d = TourTrailDecomposition::new(vec![tour], vec![])?;
        Ok((Gadget::from_cycles(vec![cycle], d), merged))
    }

    /// An `(R, C)`-transformer for a tour `r` and a vertex-disjoint cycle `c`
    /// with the same number of edges.
    pub fn transformer(&mut self, r: &WalkSeq, c: &WalkSeq) -> Result<Transformer> {
        if !r.is_closed() || !c.is_closed() {
            return Err(Error::Precondition("a transformer needs a tour and a cycle".into()));
        }
        let m = r.edges().len();
        if c.edges().len() != m {
            return Err(Error::Precondition(format!(
                "the tour has {m} edges and the cycle {}",
                c.edges().len()
            )));
        }
        if c.vertices().iter().collect::<BTreeSet<_>>().len() != c.len() {
            return Err(Error::Precondition("c must be a cycle".into()));
        }
        let mut outside = VertexSet::from_vertices(self.host.n(), r.vertices().iter().copied())?;
        if c.vertices().iter().any(|&v| outside.contains(v)) {
            return Err(Error::Precondition("the tour and the cycle must be vertex-disjoint".into()));
        }
        for &v in c.vertices() {
            outside.insert(v);
        }
        outside.union_with(&self.forbidden);
        self.commit(r.edges());
        self.commit(c.edges());
        let rv = r.vertices();
        let cv = c.vertices();
        let at = |s: &[Vertex], i: isize| s[i.rem_euclid(m as isize) as usize];
        let mark = self.journal.len();
        let out = (|| {
            let mut p = Vec::with_capacity(m);
            for i in 0..m as isize {
                let path = self.path((at(rv, i), at(rv, i + 1)), (at(cv, i - 1), at(cv, i)), 5, &outside)?;
                p.push(path.vertices()[2]);
            }
            let mut r_side = Vec::with_capacity(m);
            let mut c_side = Vec::with_capacity(m);
            for i in 0..m as isize {
                let mut f = outside.clone();
                f.insert(p[i as usize]);
                f.insert(at(&p, i - 1));
                let q = self.path((at(rv, i), at(rv, i - 1)), (at(cv, i), at(cv, i - 1)), self.ell - 2, &f)?;
                let qv = q.vertices();
                let inner_rev: Vec<Vertex> = qv[2..qv.len() - 2].iter().rev().copied().collect();
                let mut rc = vec![at(rv, i - 1), at(rv, i), at(rv, i + 1), p[i as usize], at(cv, i - 1), at(cv, i)];
                rc.extend_from_slice(&inner_rev);
                let mut cc = vec![at(rv, i - 1), at(rv, i), at(&p, i - 1), at(cv, i - 2), at(cv, i - 1), at(cv, i)];
                cc.extend_from_slice(&inner_rev);
                r_side.push(walks::validate(&rc, WalkKind::Cycle, self.host)?);
                c_side.push(walks::validate(&cc, WalkKind::Cycle, self.host)?);
            }
            Ok((r_side, c_side))
        })();
        let (r_side, c_side) = match out {
            Ok(v) => v,
            Err(e) => {
                self.rollback(mark);
                return Err(e);
            }
        };
        let edges: EdgeSet = self.journal[mark..].iter().copied().collect();
        Ok(Transformer { edges, r_side, c_side })
    }

    /// An absorber for a divisible tour: a cycle `C` of the same size, a copy
    /// `B` of glued cycles and transformers from the tour and from `B` to `C`.
    pub fn absorber_from_tour(&mut self, r: &WalkSeq) -> Result<Absorber> {
        let m = r.edges().len();
        if !r.is_closed() {
            return Err(Error::Precondition("expected a tour".into()));
        }
        if m % self.ell != 0 {
            return Err(Error::Precondition(format!("{m} edges is not a multiple of ℓ = {}", self.ell)));
        }
        let rg = ThreeGraph::from_edges(self.host.n(), r.edges())?;
        let check = rg.check_divisibility(DivisibilityKind::Cycle(self.ell))?;
        if !check.divisible {
            return Err(Error::Precondition(format!("the tour is not divisible: {:?}", check.violation)));
        }
        self.commit(r.edges());
        let mark = self.journal.len();
        let out = (|| {
            let rverts = VertexSet::from_vertices(self.host.n(), r.vertices().iter().copied())?;
            let c = self.fresh_cycle(m, &rverts)?;
            let mut taken = rverts;
            for &v in c.vertices() {
                taken.insert(v);
            }
            let b = self.glued_cycles(m / self.ell, &taken)?;
            let l1 = self.transformer(r, &c)?;
            let btour = b.decomposition().tours()[0].clone();
            let l2 = self.transformer(&btour, &c)?;
            let mut edges: EdgeSet = c.edges().iter().copied().collect();
            edges.extend(b.edges().iter().copied());
            edges.extend(l1.edges.iter().copied());
            edges.extend(l2.edges.iter().copied());
            let mut certificate = l1.c_side;
            certificate.extend(l2.r_side);
            let mut absorbed_certificate = l1.r_side;
            absorbed_certificate.extend(l2.c_side);
            absorbed_certificate.extend(b.certificate);
            Ok(Absorber { edges, certificate, absorbed_certificate })
        })();
        if out.is_err() {
            self.rollback(mark);
        }
        out
    }
}

fn expect_delta(g: &Gadget, want: impl IntoIterator<Item = Arc>) -> Result<()> {
    let want: ResidualDigraph = want.into_iter().collect();
    if g.residual_delta() != want {
        return Err(Error::Internal("gadget residual differs from its defining arcs".into()));
    }
    Ok(())
}

fn builder_with<'a>(host: &'a ThreeGraph, avoid: &EdgeSet, ell: usize, seed: u64) -> Result<GadgetBuilder<'a>> {
    let mut b = GadgetBuilder::new(host, ell, seed)?;
    b.avoid(avoid);
    Ok(b)
}

pub fn build_s3(host: &ThreeGraph, avoid: &EdgeSet, v: [Vertex; 3], ell: usize, seed: u64) -> Result<Gadget> {
    builder_with(host, avoid, ell, seed)?.s3(v)
}

pub fn build_c4(host: &ThreeGraph, avoid: &EdgeSet, v: [Vertex; 4], ell: usize, seed: u64) -> Result<Gadget> {
    builder_with(host, avoid, ell, seed)?.c4(v)
}

pub fn build_p6(host: &ThreeGraph, avoid: &EdgeSet, v: [Vertex; 6], ell: usize, seed: u64) -> Result<Gadget> {
    builder_with(host, avoid, ell, seed)?.p6(v)
}

pub fn build_b(host: &ThreeGraph, avoid: &EdgeSet, k: usize, ell: usize, seed: u64) -> Result<Gadget> {
    builder_with(host, avoid, ell, seed)?.glued_cycles(k, &VertexSet::empty(host.n()))
}

pub fn merge_tours(
    host: &ThreeGraph,
    avoid: &EdgeSet,
    t1: &WalkSeq,
    t2: &WalkSeq,
    ell: usize,
    seed: u64,
) -> Result<(Gadget, WalkSeq)> {
    builder_with(host, avoid, ell, seed)?.merge_tours(t1, t2)
}

pub fn build_transformer(
    host: &ThreeGraph,
    avoid: &EdgeSet,
    r: &WalkSeq,
    c: &WalkSeq,
    ell: usize,
    seed: u64,
) -> Result<Transformer> {
    builder_with(host, avoid, ell, seed)?.transformer(r, c)
}

pub fn build_absorber_from_tour(host: &ThreeGraph, avoid: &EdgeSet, r: &WalkSeq, ell: usize, seed: u64) -> Result<Absorber> {
    builder_with(host, avoid, ell, seed)?.absorber_from_tour(r)
}

/// An absorber for a divisible `r`: gadgets turning `r` into a union of tours,
/// connectors merging those tours into one, and an absorber for that tour.
pub fn build_absorber(host: &ThreeGraph, r: &ThreeGraph, ell: usize, seed: u64) -> Result<Absorber> {
    let mut builder = GadgetBuilder::new(host, ell, seed)?;
    if r.is_empty() {
        return Ok(Absorber::default());
    }
    if r.n() != host.n() || r.edges().any(|e| !host.has(&e)) {
        return Err(Error::Precondition("r must be a subgraph of the host".into()));
    }
    let check = r.check_divisibility(DivisibilityKind::Cycle(ell))?;
    if !check.divisible {
        return Err(Error::Precondition(format!("r is not divisible: {:?}", check.violation)));
    }
    builder.avoid(r.edges());
    let support = r.support();
    let outside: Vec<Vertex> = (0..host.n()).filter(|&v| !support.contains(v)).collect();
    let reservoir = VertexSet::from_vertices(host.n(), outside.iter().copied().step_by(2))?;
    let sea = tour_trail::reduce_with(&mut builder, r, tour_trail::greedy_ttd(r), &reservoir)?;
    builder.set_forbidden(VertexSet::empty(host.n()));
    let tours = tour_trail::eliminate_with(&mut builder, sea)?;
    let mut edges = tours.added;
    let mut certificate = tours.certificate;
    let mut walks_left = tours.decomposition.tours().to_vec().into_iter();
    let mut current = walks_left.next().ok_or_else(|| Error::Internal("no tours".into()))?;
    for next in walks_left {
        let (connector, merged) = builder.merge_tours(&current, &next)?;
        edges.extend(connector.edges().iter().copied());
        certificate.extend(connector.certificate().iter().cloned());
        current = merged;
    }
    let a2 = builder.absorber_from_tour(&current)?;
    edges.extend(a2.edges);
    certificate.extend(a2.certificate);
    log::info!("absorber for {} edges has {} edges", r.edge_count(), edges.len());
    Ok(Absorber { edges, certificate, absorbed_certificate: a2.absorbed_certificate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walks::validate;

    fn host(n: usize) -> ThreeGraph {
        ThreeGraph::complete(n)
    }

    #[test]
    fn s3_on_complete_host() {
        let h = host(40);
        let g = build_s3(&h, &EdgeSet::new(), [0, 1, 2], 7, 1).unwrap();
        g.validate(&h, 7).unwrap();
        assert!(g.edge_count() <= 14);
        let want: ResidualDigraph = [(0, 2), (0, 2), (0, 1), (1, 2)].into_iter().collect();
        assert_eq!(g.residual_delta(), want);
    }

    #[test]
    fn s3_without_room_fails() {
        let h = host(12);
        let all = h.edge_set();
        assert!(matches!(build_s3(&h, &all, [0, 1, 2], 7, 1), Err(Error::GadgetConstructionFailed(_))));
        assert!(build_s3(&h, &EdgeSet::new(), [0, 1, 1], 7, 1).is_err());
        assert!(build_s3(&h, &EdgeSet::new(), [0, 1, 2], 6, 1).is_err());
    }

    #[test]
    fn c4_is_an_oriented_square() {
        let h = host(50);
        let g = build_c4(&h, &EdgeSet::new(), [3, 1, 4, 0], 8, 2).unwrap();
        g.validate(&h, 8).unwrap();
        assert!(g.edge_count() <= 64);
        let want: ResidualDigraph = [(3, 1), (1, 4), (4, 0), (0, 3)].into_iter().collect();
        assert_eq!(g.residual_delta(), want);
    }

    #[test]
    fn p6_leaves_two_triangles() {
        let h = host(80);
        let v = [0, 1, 2, 3, 4, 5];
        let g = build_p6(&h, &EdgeSet::new(), v, 7, 3).unwrap();
        g.validate(&h, 7).unwrap();
        assert!(g.edge_count() <= 12 * 7);
        let fresh = g.vertices().into_iter().filter(|x| !v.contains(x)).count();
        assert!(fresh <= 12 * 7 - 18);
        let want: ResidualDigraph = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)].into_iter().collect();
        assert_eq!(g.residual_delta(), want);
    }

    #[test]
    fn gadgets_respect_avoid() {
        let h = host(40);
        let first = build_p6(&h, &EdgeSet::new(), [0, 1, 2, 3, 4, 5], 7, 4).unwrap();
        let second = build_s3(&h, first.edges(), [0, 1, 2], 7, 4).unwrap();
        assert!(second.edges().iter().all(|e| !first.edges().contains(e)));
    }

    #[test]
    fn glued_cycles() {
        let h = host(40);
        let b1 = build_b(&h, &EdgeSet::new(), 1, 7, 5).unwrap();
        b1.validate(&h, 7).unwrap();
        assert_eq!(b1.edge_count(), 7);
        assert_eq!(b1.certificate().len(), 1);
        let b2 = build_b(&h, &EdgeSet::new(), 2, 7, 5).unwrap();
        b2.validate(&h, 7).unwrap();
        assert_eq!(b2.edge_count(), 14);
        assert_eq!(b2.vertices().len(), 12);
        let tour = &b2.decomposition().tours()[0];
        validate(tour.vertices(), WalkKind::Tour, &h).unwrap();
        let g = ThreeGraph::from_edges(40, b2.edges()).unwrap();
        let (u, v) = (tour.vertices()[0], tour.vertices()[1]);
        assert_eq!(g.codegree(u, v, None).unwrap(), 4);
    }

    #[test]
    fn merging_two_cycles() {
        let h = host(40);
        let t1 = validate(&[0, 1, 2, 3, 4, 5, 6], WalkKind::Tour, &h).unwrap();
        let t2 = validate(&[7, 8, 9, 10, 11, 12, 13], WalkKind::Tour, &h).unwrap();
        let (conn, merged) = merge_tours(&h, &EdgeSet::new(), &t1, &t2, 7, 6).unwrap();
        conn.validate(&h, 7).unwrap();
        let merged = validate(merged.vertices(), WalkKind::Tour, &h).unwrap();
        assert_eq!(merged.edges().len(), 21);
        assert!(conn.edges().iter().all(|e| !t1.edges().contains(e) && !t2.edges().contains(e)));
        let cycle_like = validate(&[0, 1, 2], WalkKind::Trail, &h).unwrap();
        assert!(merge_tours(&h, &EdgeSet::new(), &t1, &cycle_like, 7, 6).is_err());
    }

    #[test]
    fn transformer_certificates() {
        let h = host(60);
        let r = validate(&(0..9).collect::<Vec<_>>(), WalkKind::Tour, &h).unwrap();
        let c = validate(&(9..18).collect::<Vec<_>>(), WalkKind::Cycle, &h).unwrap();
        let t = build_transformer(&h, &EdgeSet::new(), &r, &c, 7, 7).unwrap();
        assert!(t.edges.len() <= 9 * 7);
        let mut with_r = t.edges.clone();
        with_r.extend(r.edges().iter().copied());
        check_certificate(&h, &with_r, &t.r_side, 7).unwrap();
        let mut with_c = t.edges.clone();
        with_c.extend(c.edges().iter().copied());
        check_certificate(&h, &with_c, &t.c_side, 7).unwrap();
        let rv: BTreeSet<_> = (0..18).collect();
        for e in &t.edges {
            assert!(e.vertices().iter().any(|v| !rv.contains(v)));
        }
        let short = validate(&(9..17).collect::<Vec<_>>(), WalkKind::Cycle, &h).unwrap();
        assert!(build_transformer(&h, &EdgeSet::new(), &r, &short, 7, 7).is_err());
    }

    #[test]
    fn absorber_for_a_tour() {
        let h = host(120);
        let c1 = validate(&[0, 1, 2, 3, 4, 5, 6], WalkKind::Cycle, &h).unwrap();
        let c2 = validate(&[0, 1, 7, 8, 9, 10, 11], WalkKind::Cycle, &h).unwrap();
        let base = validate(c1.vertices(), WalkKind::Tour, &h).unwrap();
        let r = walks::splice_cycle(&base, &c2).unwrap();
        assert_eq!(r.edges().len(), 14);
        let a = build_absorber_from_tour(&h, &EdgeSet::new(), &r, 7, 8).unwrap();
        let rg = ThreeGraph::from_edges(120, r.edges()).unwrap();
        a.validate(&h, &rg, 7).unwrap();
        assert!(a.edge_count() <= 4 * 14 * 7 + 28);
        let odd = validate(&(20..28).collect::<Vec<_>>(), WalkKind::Tour, &h).unwrap();
        assert!(build_absorber_from_tour(&h, &EdgeSet::new(), &odd, 7, 8).is_err());
    }

    #[test]
    fn absorber_end_to_end() {
        let h = host(300);
        let c1 = validate(&[0, 1, 2, 3, 4, 5, 6], WalkKind::Cycle, &h).unwrap();
        let c2 = validate(&[7, 8, 9, 10, 11, 12, 13], WalkKind::Cycle, &h).unwrap();
        let r = ThreeGraph::from_edges(300, c1.edges().iter().chain(c2.edges())).unwrap();
        let a = build_absorber(&h, &r, 7, 9).unwrap();
        a.validate(&h, &r, 7).unwrap();
        assert!(build_absorber(&h, &ThreeGraph::empty(300), 7, 9).unwrap().edges.is_empty());
        let bad = ThreeGraph::build(300, [[0, 1, 2]]).unwrap();
        assert!(matches!(build_absorber(&h, &bad, 7, 9), Err(Error::Precondition(_))));
    }

    #[test]
    fn gadget_json_shape() {
        let h = host(40);
        let g = build_s3(&h, &EdgeSet::new(), [0, 1, 2], 7, 1).unwrap();
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(v["certificate_cycles"].as_array().unwrap().len(), 2);
        assert_eq!(v["residual_delta"].as_array().unwrap().len(), 4);
        assert_eq!(v["edges"].as_array().unwrap().len(), 14);
    }
}
