//! The three-cluster family with no tour decomposition, its parity certificate,
//! and the dense example that fails the `K4` decomposition threshold.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DivisibilityKind, EdgeSet, ThreeGraph, Triple, Vertex, VertexSet};
use crate::pathfinder;
use crate::rng;
use crate::walks::{self, WalkKind, WalkSeq};

/// A labelling of the vertices by `{0, 1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tripartition {
    labels: Vec<u8>,
}

impl Tripartition {
    pub fn new(labels: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = labels.iter().find(|&&l| l > 2) {
            return Err(Error::BadParams(format!("label {bad} is not in {{0,1,2}}")));
        }
        Ok(Tripartition { labels })
    }

    pub fn label(&self, v: Vertex) -> u8 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn sizes(&self) -> [usize; 3] {
        let mut s = [0; 3];
        for &l in &self.labels {
            s[l as usize] += 1;
        }
        s
    }

    pub fn class(&self, label: u8) -> Vec<Vertex> {
        (0..self.labels.len()).filter(|&v| self.labels[v] == label).collect()
    }

    fn sorted_labels(&self, t: &Triple) -> [u8; 3] {
        let mut l = t.vertices().map(|v| self.labels[v]);
        l.sort_unstable();
        l
    }

    fn is_mixed(&self, t: &Triple) -> bool {
        self.sorted_labels(t) == [0, 1, 2]
    }
}

/// Cluster sizes `6k, 6k-2, 6k+2`.
pub fn cluster_sizes(k: usize) -> [usize; 3] {
    [6 * k, 6 * k - 2, 6 * k + 2]
}

/// The graph on `18k` vertices whose edges are the triples with label sum not divisible by 3.
/// Vertices are numbered cluster by cluster.
pub fn build_hn(k: usize) -> Result<(ThreeGraph, Tripartition)> {
    if k == 0 {
        return Err(Error::BadParams("k must be at least 1".into()));
    }
    let sizes = cluster_sizes(k);
    let labels: Vec<u8> = (0..3u8).flat_map(|l| std::iter::repeat_n(l, sizes[l as usize])).collect();
    let n = labels.len();
    let mut g = ThreeGraph::empty(n);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if (labels[a] + labels[b] + labels[c]) % 3 != 0 {
                    g.insert(Triple::sorted(a, b, c));
                }
            }
        }
    }
    Ok((g, Tripartition { labels }))
}

/// A perfect matching of `H_n` avoiding the `112` and `122` edges, each edge meeting
/// cluster 0 once.
pub fn build_matching_f(part: &Tripartition) -> Result<EdgeSet> {
    let v0 = part.class(0);
    let mut v1 = part.class(1);
    let mut v2 = part.class(2);
    if v0.len() % 6 != 0 || v1.len() + 2 != v0.len() || v2.len() != v0.len() + 2 {
        return Err(Error::Precondition("partition does not have the cluster sizes of the family".into()));
    }
    // move two vertices of cluster 2 to the front of cluster 1
    let moved: Vec<Vertex> = v2.drain(..2).collect();
    v1.splice(0..0, moved);
    let half = v0.len() / 2;
    let mut f = EdgeSet::new();
    for i in 0..half {
        f.insert(Triple::sorted(v1[2 * i], v1[2 * i + 1], v0[2 * i]));
        f.insert(Triple::sorted(v2[2 * i], v2[2 * i + 1], v0[2 * i + 1]));
    }
    Ok(f)
}

/// Evidence that no tour decomposition exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoTourCertificate {
    pub h112_mod3: u8,
    pub h122_mod3: u8,
    pub partition: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certification {
    Certified(NoTourCertificate),
    Inapplicable(String),
}

/// Counts of `112` and `122` edges, or the first mixed edge.
fn label_counts(h: &ThreeGraph, part: &Tripartition) -> std::result::Result<(usize, usize), Triple> {
    let (mut c112, mut c122) = (0, 0);
    for t in h.edges() {
        match part.sorted_labels(&t) {
            [0, 1, 2] => return Err(t),
            [1, 1, 2] => c112 += 1,
            [1, 2, 2] => c122 += 1,
            _ => {}
        }
    }
    Ok((c112, c122))
}

/// Certifies that `h` has no tour decomposition: with no mixed edges every tour has
/// as many `112` windows as `122` windows modulo 3, so the totals would have to agree.
pub fn certify_no_tour(h: &ThreeGraph, part: &Tripartition) -> Certification {
    if part.labels.len() != h.n() {
        return Certification::Inapplicable("partition size differs from vertex count".into());
    }
    match label_counts(h, part) {
        Err(t) => Certification::Inapplicable(format!("mixed edge {t}")),
        Ok((a, b)) if a % 3 == b % 3 => {
            Certification::Inapplicable(format!("112 and 122 counts agree mod 3 ({a}, {b})"))
        }
        Ok((a, b)) => Certification::Certified(NoTourCertificate {
            h112_mod3: (a % 3) as u8,
            h122_mod3: (b % 3) as u8,
            partition: part.labels.clone(),
        }),
    }
}

impl NoTourCertificate {
    /// Recomputes the certificate from `h`.
    pub fn verify(&self, h: &ThreeGraph) -> bool {
        let Ok(part) = Tripartition::new(self.partition.clone()) else { return false };
        certify_no_tour(h, &part) == Certification::Certified(self.clone())
    }
}

/// Output of [`build_counterexample`].
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub graph: ThreeGraph,
    pub partition: Tripartition,
    pub certificate: NoTourCertificate,
    /// Length of the tight cycle added inside cluster 0.
    pub added_cycle_len: usize,
}

/// A `C_ℓ`-divisible graph on `n` vertices with high minimum codegree and no tour
/// decomposition.
pub fn build_counterexample(n: usize, ell: usize) -> Result<Counterexample> {
    if ell < 4 {
        return Err(Error::BadParams(format!("cycle length {ell} is below 4")));
    }
    if n == 0 || n % 18 != 0 {
        return Err(Error::BadParams(format!("n = {n} is not a positive multiple of 18")));
    }
    if n < 3 * (ell + 3) {
        return Err(Error::BadParams(format!("n = {n} is below 3(ℓ+3) = {}", 3 * (ell + 3))));
    }
    let (h, part) = build_hn(n / 18)?;
    let f = build_matching_f(&part)?;
    let mut g = h.without_edges(&f);
    let m = g.edge_count();
    let cycle_len = (4..=ell + 3)
        .find(|c| (m + c) % ell == 0)
        .ok_or_else(|| Error::Internal("no admissible cycle length".into()))?;
    let v0 = part.class(0);
    for i in 0..cycle_len {
        g.insert(Triple::sorted(v0[i], v0[(i + 1) % cycle_len], v0[(i + 2) % cycle_len]));
    }
    debug_assert!(g.check_divisibility(DivisibilityKind::Cycle(ell))?.divisible);
    let certificate = match certify_no_tour(&g, &part) {
        Certification::Certified(c) => c,
        Certification::Inapplicable(why) => return Err(Error::Internal(why)),
    };
    Ok(Counterexample { graph: g, partition: part, certificate, added_cycle_len: cycle_len })
}

/// The family with three Hamilton tight cycles added inside cluster 1 and one inside
/// cluster 2, after removing the matching; every degree becomes equal.
pub fn build_regular_variant(k: usize, seed: u64) -> Result<(ThreeGraph, Tripartition)> {
    let (h, part) = build_hn(k)?;
    let f = build_matching_f(&part)?;
    let mut g = h.without_edges(&f);
    let complete = ThreeGraph::complete(g.n());
    let mut rng = rng::stream(seed, rng::streams::GENERATE);
    let mut added = EdgeSet::new();
    for (label, count) in [(1u8, 3), (2u8, 1)] {
        let cluster = part.class(label);
        if cluster.len() < 5 {
            return Err(Error::ConstructionFailed(format!("cluster {label} is too small for Hamilton cycles")));
        }
        let allowed = VertexSet::from_vertices(g.n(), cluster.iter().copied())?;
        for _ in 0..count {
            let cycle = hamilton_cycle(&complete, &cluster, &allowed, &added, &mut rng)?;
            added.extend(cycle.edges().iter().copied());
        }
    }
    for t in &added {
        g.insert(*t);
    }
    Ok((g, part))
}

fn hamilton_cycle(
    complete: &ThreeGraph,
    cluster: &[Vertex],
    allowed: &VertexSet,
    avoid: &EdgeSet,
    rng: &mut rng::Rng,
) -> Result<WalkSeq> {
    let len = cluster.len();
    for attempt in 0..len {
        let start = [cluster[attempt], cluster[(attempt + 1) % len], cluster[(attempt + 2) % len]];
        let Ok(p) = walks::validate(&start, WalkKind::Path, complete) else { continue };
        if p.edges().iter().any(|t| avoid.contains(t)) {
            continue;
        }
        for _ in 0..32 {
            if let Ok(c) = pathfinder::extend_to_cycle(complete, &p, len, Some(allowed), None, avoid, rng) {
                return Ok(c);
            }
        }
    }
    Err(Error::ConstructionFailed("no edge-disjoint Hamilton cycle found".into()))
}

/// `Φ` of a cyclic word and its numbers of `F1 = {112,121,211}` and
/// `F2 = {122,212,221}` windows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PhiValue {
    pub phi_mod3: u8,
    pub f1_windows: usize,
    pub f2_windows: usize,
}

pub fn phi_cyclic_word(word: &[u8]) -> Result<PhiValue> {
    let k = word.len();
    if k < 3 {
        return Err(Error::TooShort { len: k, min: 3 });
    }
    let (mut phi, mut f1, mut f2) = (0usize, 0, 0);
    for i in 0..k {
        let w = [word[i], word[(i + 1) % k], word[(i + 2) % k]];
        let mut s = w;
        s.sort_unstable();
        match s {
            [1, 1, 2] => f1 += 1,
            [1, 2, 2] => f2 += 1,
            _ => continue,
        }
        phi += w.iter().map(|&x| x as usize).sum::<usize>();
    }
    Ok(PhiValue { phi_mod3: (phi % 3) as u8, f1_windows: f1, f2_windows: f2 })
}

/// Whether `|W[U1,U1,U2]| ≡ |W[U1,U2,U2]| (mod 3)` for the tour `w`.
pub fn check_tour_parity(w: &WalkSeq, part: &Tripartition, host: &ThreeGraph) -> Result<bool> {
    if let Some(t) = host.edges().find(|t| part.is_mixed(t)) {
        return Err(Error::PartitionHasMixedEdge(t.vertices()));
    }
    if w.kind() != WalkKind::Tour && w.kind() != WalkKind::Cycle {
        return Err(Error::Precondition("parity holds for tours".into()));
    }
    let (mut a, mut b) = (0, 0);
    for t in w.edges() {
        match part.sorted_labels(t) {
            [1, 1, 2] => a += 1,
            [1, 2, 2] => b += 1,
            _ => {}
        }
    }
    Ok(a % 3 == b % 3)
}

/// Numbers attached to the `K4` example.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K43Certificate {
    pub d: usize,
    pub n: usize,
    /// Edges available in the link of `x1` outside the universal vertex.
    pub available: usize,
    /// Edges that a decomposition would need there.
    pub required: usize,
}

impl K43Certificate {
    pub fn holds(&self) -> bool {
        self.available < self.required
    }
}

/// The `K4`-divisible graph on `2n + 2` vertices built from two copies of a
/// `d`-regular circulant, with `d = 6k + 2` and `n = 12k + 9`.
pub fn build_k43_example(k: usize) -> Result<(ThreeGraph, K43Certificate)> {
    if k == 0 {
        return Err(Error::BadParams("k must be at least 1".into()));
    }
    let d = 6 * k + 2;
    let n = 12 * k + 9;
    let total = 2 * n + 2;
    let (x1, x2) = (2 * n, 2 * n + 1);
    let circulant = |a: usize, b: usize| {
        let diff = a.abs_diff(b);
        diff.min(n - diff) <= d / 2
    };
    let joined = |a: usize, b: usize| {
        if (a < n) != (b < n) {
            true
        } else {
            circulant(a % n, b % n)
        }
    };
    let mut g = ThreeGraph::empty(total);
    for a in 0..2 * n {
        for b in a + 1..2 * n {
            for c in b + 1..2 * n {
                g.insert(Triple::sorted(a, b, c));
            }
            if joined(a, b) {
                g.insert(Triple::sorted(a, b, x1));
                g.insert(Triple::sorted(a, b, x2));
            }
        }
        g.insert(Triple::sorted(a, x1, x2));
    }
    Ok((g, K43Certificate { d, n, available: d * n, required: n * (n - 1) / 2 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn hn_sizes_and_counts() {
        let (g, part) = build_hn(1).unwrap();
        assert_eq!(g.n(), 18);
        assert_eq!(part.sizes(), [6, 4, 8]);
        let expected = binom(18, 3) - (binom(6, 3) + binom(4, 3) + binom(8, 3)) - 6 * 4 * 8;
        assert_eq!(expected, 544);
        assert_eq!(g.edge_count(), 544);
        assert_eq!(g.min_codegree(), 8);
        assert_eq!(g.codegree(0, 6, None).unwrap(), 8);
        assert_eq!(g.degree(0, None).unwrap(), 94);
        assert!(g.degrees().iter().all(|d| d % 3 == 1));
    }

    #[test]
    fn degrees_mod_three_for_small_k() {
        for k in 1..=5 {
            let (g, part) = build_hn(k).unwrap();
            assert!(g.degrees().iter().all(|d| d % 3 == 1));
            let f = build_matching_f(&part).unwrap();
            let h = g.without_edges(&f);
            assert!(h.degrees().iter().all(|d| d % 3 == 0), "k = {k}");
        }
    }

    #[test]
    fn matching_properties() {
        let (g, part) = build_hn(1).unwrap();
        let f = build_matching_f(&part).unwrap();
        assert_eq!(f.len(), 6);
        let mut covered = [0; 18];
        for t in &f {
            assert!(g.contains(t.vertices()[0], t.vertices()[1], t.vertices()[2]));
            assert_eq!(t.vertices().iter().filter(|&&v| part.label(v) == 0).count(), 1);
            let l = part.sorted_labels(t);
            assert!(l != [1, 1, 2] && l != [1, 2, 2]);
            for v in t.vertices() {
                covered[v] += 1;
            }
        }
        assert!(covered.iter().all(|&c| c == 1));
    }

    #[test]
    fn counterexample_n36() {
        let ce = build_counterexample(36, 4).unwrap();
        assert!(ce.graph.check_divisibility(DivisibilityKind::Cycle(4)).unwrap().divisible);
        assert!(ce.graph.min_codegree() >= (2 * 36 - 15) / 3);
        assert_eq!((ce.certificate.h112_mod3, ce.certificate.h122_mod3), (0, 1));
        assert!(ce.certificate.verify(&ce.graph));
        assert!(matches!(build_counterexample(18, 4), Err(Error::BadParams(_))));
        assert!(matches!(build_counterexample(40, 4), Err(Error::BadParams(_))));
    }

    #[test]
    fn certificate_inapplicable_cases() {
        let k5 = ThreeGraph::complete(5);
        let part = Tripartition::new(vec![0, 1, 2, 0, 1]).unwrap();
        assert!(matches!(certify_no_tour(&k5, &part), Certification::Inapplicable(_)));
        // one 112 edge and one 122 edge: counts agree
        let h = ThreeGraph::build(4, [[0, 1, 2], [0, 2, 3]]).unwrap();
        let part = Tripartition::new(vec![1, 1, 2, 2]).unwrap();
        assert!(matches!(certify_no_tour(&h, &part), Certification::Inapplicable(_)));
    }

    #[test]
    fn regular_variant() {
        let (g, part) = build_regular_variant(2, 0).unwrap();
        let d0 = g.degree(0, None).unwrap();
        assert!(g.degrees().iter().all(|&d| d == d0));
        assert!(matches!(certify_no_tour(&g, &part), Certification::Certified(_)));
        assert!(matches!(build_regular_variant(1, 0), Err(Error::ConstructionFailed(_))));
    }

    #[test]
    fn cluster_degree_gaps() {
        let (g, part) = build_hn(2).unwrap();
        let d = |label: u8| g.degree(part.class(label)[0], None).unwrap();
        assert_eq!(d(1), d(0) - 9);
        assert_eq!(d(2), d(0) - 3);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_cyclic_word(&[1; 9]).unwrap(), PhiValue { phi_mod3: 0, f1_windows: 0, f2_windows: 0 });
        let v = phi_cyclic_word(&[1, 1, 2, 1, 1, 2, 1, 1, 2]).unwrap();
        // windows 112,121,211 repeat three times
        assert_eq!(v.f1_windows, 9);
        assert_eq!(v.f2_windows, 0);
        assert_eq!(v.phi_mod3, 0);
        assert!(phi_cyclic_word(&[1, 2]).is_err());
    }

    #[test]
    fn parity_checks() {
        let (g, part) = build_hn(1).unwrap();
        let v0 = part.class(0);
        let inside = ThreeGraph::build(18, [[v0[0], v0[1], v0[2]], [v0[1], v0[2], v0[3]], [v0[2], v0[3], v0[0]], [v0[3], v0[0], v0[1]]]).unwrap();
        let tour = walks::validate(&v0[..4], WalkKind::Tour, &inside).unwrap();
        assert!(check_tour_parity(&tour, &part, &inside).unwrap());
        let p = Tripartition::new(vec![0, 1, 2, 0, 1]).unwrap();
        let k5 = ThreeGraph::complete(5);
        let t = walks::validate(&[0, 1, 2, 3, 4], WalkKind::Tour, &k5).unwrap();
        assert!(matches!(check_tour_parity(&t, &p, &k5), Err(Error::PartitionHasMixedEdge(_))));
        drop(g);
    }

    #[test]
    fn k43_example() {
        let (g, cert) = build_k43_example(1).unwrap();
        assert_eq!(g.n(), 44);
        assert_eq!(g.min_codegree(), 30);
        assert!(g.check_divisibility(DivisibilityKind::K43).unwrap().divisible);
        assert_eq!((cert.available, cert.required), (168, 210));
        assert!(cert.holds());
        let link = g.link(42, None).unwrap();
        assert_eq!(link.edge_count() % 3, 0);
        // circulant copies, all crossing pairs, and the universal vertex x2
        assert_eq!(link.edge_count(), 8 * 21 + 21 * 21 + 42);
        assert!(link.contains(0, 1) && link.contains(0, 4) && !link.contains(0, 5));
        assert!(link.contains(0, 21 + 10) && link.contains(43, 7));
    }
}
