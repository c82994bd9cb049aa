//! Bounded-length tight paths, cycle extensions, tour closing and walk counting.

use rand::RngExt;

use crate::error::{Error, Result};
use crate::graph::{EdgeQuery, Graph2, ThreeGraph, Triple, Vertex, VertexSet};
use crate::rng::Rng;
use crate::walks::{self, WalkKind, WalkSeq};

/// Restarts of the greedy path builder before giving up.
pub const DEFAULT_RESTARTS: usize = 64;

/// A request for a path `v1 v2 … v_{ℓ-1} v_ℓ` with prescribed end pairs.
#[derive(Clone, Debug)]
pub struct PathRequest<'a> {
    pub start: (Vertex, Vertex),
    pub end: (Vertex, Vertex),
    /// Number of vertices, at least 4.
    pub len: usize,
    /// Internal vertices must come from here (all vertices if absent).
    pub allowed: Option<&'a VertexSet>,
    /// Both end pairs must belong to this pair set, when given.
    pub pairs: Option<&'a Graph2>,
    /// Internal vertices must avoid these.
    pub forbidden: Option<&'a VertexSet>,
    pub restarts: usize,
}

impl<'a> PathRequest<'a> {
    pub fn new(start: (Vertex, Vertex), end: (Vertex, Vertex), len: usize) -> Self {
        PathRequest { start, end, len, allowed: None, pairs: None, forbidden: None, restarts: DEFAULT_RESTARTS }
    }

    pub fn allowed(mut self, u: &'a VertexSet) -> Self {
        self.allowed = Some(u);
        self
    }

    pub fn forbidden(mut self, f: &'a VertexSet) -> Self {
        self.forbidden = Some(f);
        self
    }

    pub fn pairs(mut self, g: &'a Graph2) -> Self {
        self.pairs = Some(g);
        self
    }
}

fn candidates(
    g: &ThreeGraph,
    pairs: &[(Vertex, Vertex)],
    req: &PathRequest<'_>,
    used: &VertexSet,
) -> VertexSet {
    // pairs are valid by construction
    let mut c = g.joint_neighbourhood(pairs, req.allowed).expect("valid pairs");
    if let Some(f) = req.forbidden {
        c.subtract(f);
    }
    c.subtract(used);
    c
}

fn pick(c: &VertexSet, rng: &mut Rng, ok: impl Fn(Vertex) -> bool) -> Option<Vertex> {
    let list: Vec<Vertex> = c.iter().filter(|&v| ok(v)).collect();
    if list.is_empty() {
        None
    } else {
        Some(list[rng.random_range(0..list.len())])
    }
}

/// Builds one `(v1, v2, v_{ℓ-1}, v_ℓ)`-path greedily, choosing the last internal
/// vertex as a common neighbour of the three pairs it must close.
pub fn find_path<Q: EdgeQuery>(g: &ThreeGraph, req: &PathRequest<'_>, avoid: &Q, rng: &mut Rng) -> Result<WalkSeq> {
    let (v1, v2) = req.start;
    let (e1, e2) = req.end;
    if req.len < 4 {
        return Err(Error::BadParams(format!("paths need at least 4 vertices, got {}", req.len)));
    }
    let ends = [v1, v2, e1, e2];
    for (i, &a) in ends.iter().enumerate() {
        if a >= g.n() {
            return Err(Error::OutOfRange { vertex: a, n: g.n() });
        }
        if ends[i + 1..].contains(&a) {
            return Err(Error::Precondition("end vertices must be distinct".into()));
        }
    }
    if let Some(pg) = req.pairs {
        if !pg.contains(v1, v2) || !pg.contains(e1, e2) {
            return Err(Error::Precondition("end pairs must lie in the pair set".into()));
        }
    }
    let internal = connect(g, req, req.len - 4, &VertexSet::from_vertices(g.n(), ends)?, avoid, rng)?;
    let mut seq = vec![v1, v2];
    seq.extend(internal);
    seq.push(e1);
    seq.push(e2);
    let p = walks::validate(&seq, WalkKind::Path, g)?;
    debug_assert!(p.edges().iter().all(|t| !avoid.has(t)));
    Ok(p)
}

/// Chooses `internal` vertices `u` so that every window of
/// `start.0 start.1 u… end.0 end.1` is a host edge outside `avoid`. The end pairs
/// may share a vertex (cycle closing); `used` holds vertices the `u` must avoid.
fn connect<Q: EdgeQuery>(
    g: &ThreeGraph,
    req: &PathRequest<'_>,
    internal: usize,
    used: &VertexSet,
    avoid: &Q,
    rng: &mut Rng,
) -> Result<Vec<Vertex>> {
    let (v1, v2) = req.start;
    let (e1, e2) = req.end;
    let fresh = |a: Vertex, b: Vertex, c: Vertex| g.contains(a, b, c) && !avoid.has_vertices(a, b, c);
    if internal == 0 {
        if fresh(v1, v2, e1) && fresh(v2, e1, e2) {
            return Ok(Vec::new());
        }
        return Err(Error::NoExtensionAvailable(1));
    }
    let mut deepest = 0;
    for _ in 0..req.restarts.max(1) {
        let mut seq = vec![v1, v2];
        let mut taken = used.clone();
        let mut failed_at = None;
        for step in 1..=internal {
            let (a, b) = (seq[seq.len() - 2], seq[seq.len() - 1]);
            let next = if step == internal {
                let c = candidates(g, &[(a, b), (b, e1), (e1, e2)], req, &taken);
                pick(&c, rng, |u| fresh(a, b, u) && fresh(b, u, e1) && fresh(u, e1, e2))
            } else {
                let c = candidates(g, &[(a, b)], req, &taken);
                pick(&c, rng, |u| fresh(a, b, u))
            };
            match next {
                Some(u) => {
                    seq.push(u);
                    taken.insert(u);
                }
                None => {
                    failed_at = Some(step);
                    break;
                }
            }
        }
        match failed_at {
            None => return Ok(seq.split_off(2)),
            Some(step) => deepest = deepest.max(step),
        }
    }
    Err(Error::NoExtensionAvailable(deepest))
}

/// Extends the path `p` (on fewer than `ell` vertices) to a tight `ell`-cycle whose
/// new vertices lie in `allowed` and avoid `forbidden`, with new edges outside `avoid`.
pub fn extend_to_cycle<Q: EdgeQuery>(
    g: &ThreeGraph,
    p: &WalkSeq,
    ell: usize,
    allowed: Option<&VertexSet>,
    forbidden: Option<&VertexSet>,
    avoid: &Q,
    rng: &mut Rng,
) -> Result<WalkSeq> {
    let v = p.vertices();
    let k = v.len();
    if p.is_closed() || k < 3 {
        return Err(Error::Precondition("extension needs an open path on at least 3 vertices".into()));
    }
    if k + 1 > ell {
        return Err(Error::Precondition(format!("a path on {k} vertices cannot grow into a {ell}-cycle")));
    }
    for &x in v {
        if x >= g.n() {
            return Err(Error::OutOfRange { vertex: x, n: g.n() });
        }
    }
    let block = VertexSet::from_vertices(g.n(), v.iter().copied())?;
    let mut req = PathRequest::new((v[k - 2], v[k - 1]), (v[0], v[1]), ell - k + 4);
    req.allowed = allowed;
    req.forbidden = forbidden;
    let new = connect(g, &req, ell - k, &block, avoid, rng)?;
    let mut cycle = v.to_vec();
    cycle.extend(new);
    walks::validate(&cycle, WalkKind::Cycle, g)
}

/// Closes an open trail into a tour with at most three connector vertices.
pub fn close_to_tour<Q: EdgeQuery>(g: &ThreeGraph, trail: &WalkSeq, avoid: &Q, rng: &mut Rng) -> Result<WalkSeq> {
    let w = trail.vertices();
    if trail.is_closed() {
        return Err(Error::ClosedWalk);
    }
    let r = w.len();
    let own: std::collections::HashSet<Triple> = trail.edges().iter().copied().collect();
    let head = [w[r - 2], w[r - 1]];
    let tail = [w[0], w[1]];
    for connectors in 0..=3 {
        let mut extra = Vec::new();
        if close_search(g, &head, &tail, connectors, &own, avoid, rng, &mut extra) {
            let mut seq = w.to_vec();
            seq.extend_from_slice(&extra);
            return walks::validate(&seq, WalkKind::Tour, g);
        }
    }
    Err(Error::NoExtensionAvailable(3))
}

#[allow(clippy::too_many_arguments)]
fn close_search<Q: EdgeQuery>(
    g: &ThreeGraph,
    head: &[Vertex; 2],
    tail: &[Vertex; 2],
    remaining: usize,
    own: &std::collections::HashSet<Triple>,
    avoid: &Q,
    rng: &mut Rng,
    extra: &mut Vec<Vertex>,
) -> bool {
    // the last two placed vertices
    let last = |extra: &Vec<Vertex>| -> (Vertex, Vertex) {
        match extra.len() {
            0 => (head[0], head[1]),
            1 => (head[1], extra[0]),
            k => (extra[k - 2], extra[k - 1]),
        }
    };
    let new_edges = |extra: &Vec<Vertex>| -> Vec<Option<Triple>> {
        let mut seq = vec![head[0], head[1]];
        seq.extend_from_slice(extra);
        seq.extend_from_slice(tail);
        seq.windows(3)
            .map(|w| (w[0] != w[1] && w[1] != w[2] && w[0] != w[2]).then(|| Triple::sorted(w[0], w[1], w[2])))
            .collect()
    };
    if remaining == 0 {
        let es = new_edges(extra);
        let mut seen = std::collections::HashSet::new();
        return es.iter().all(|e| match e {
            Some(t) => g.has(t) && !avoid.has(t) && !own.contains(t) && seen.insert(*t),
            None => false,
        });
    }
    let (a, b) = last(extra);
    let mut options: Vec<Vertex> = g.neighbours(a, b).collect();
    // seeded order so repeated calls diversify
    for i in (1..options.len()).rev() {
        let j = rng.random_range(0..=i);
        options.swap(i, j);
    }
    for x in options {
        let t = Triple::sorted(a, b, x);
        if avoid.has(&t) || own.contains(&t) {
            continue;
        }
        extra.push(x);
        if close_search(g, head, tail, remaining - 1, own, avoid, rng, extra) {
            return true;
        }
        extra.pop();
    }
    false
}

/// Number of walks that start with the ordered edge `s` and end with the ordered
/// edge `t` after exactly `steps` further vertices. With `steps = 0` the walk is `s`
/// itself; a walk using `L` edges in total has `steps = L - 1`.
pub fn count_connector_walks(g: &ThreeGraph, s: [Vertex; 3], t: [Vertex; 3], steps: usize) -> Result<u128> {
    if !g.contains(s[0], s[1], s[2]) {
        return Err(Error::NotAnEdge(0));
    }
    if !g.contains(t[0], t[1], t[2]) {
        return Err(Error::NotAnEdge(1));
    }
    if steps == 0 {
        return Ok(u128::from(s == t));
    }
    let n = g.n();
    let mut counts = vec![0u128; n * n];
    counts[s[1] * n + s[2]] = 1;
    for _ in 0..steps - 1 {
        let mut next = vec![0u128; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = counts[a * n + b];
                if c == 0 {
                    continue;
                }
                for x in g.neighbours(a, b) {
                    next[b * n + x] += c;
                }
            }
        }
        counts = next;
    }
    Ok(counts[t[0] * n + t[1]])
}

/// For all distinct `v1, v2, v4, v5`, at least `alpha·n` vertices `v3` make
/// `v1 v2 v3 v4 v5` a walk.
pub fn is_alpha_connected(g: &ThreeGraph, alpha: f64) -> bool {
    let n = g.n();
    let need = alpha * n as f64;
    if need <= 0.0 {
        return true;
    }
    for v1 in 0..n {
        for v2 in 0..n {
            if v2 == v1 {
                continue;
            }
            for v4 in 0..n {
                if v4 == v1 || v4 == v2 {
                    continue;
                }
                for v5 in 0..n {
                    if v5 == v1 || v5 == v2 || v5 == v4 {
                        continue;
                    }
                    let j = g.joint_neighbourhood(&[(v1, v2), (v2, v4), (v4, v5)], None).expect("distinct");
                    if (j.len() as f64) < need {
                        return false;
                    }
                }
            }
        }
    }
    true
}
