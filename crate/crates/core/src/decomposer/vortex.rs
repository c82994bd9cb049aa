//! Nested random vertex sets that inherit degree and codegree density.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate;
use crate::graph::{ThreeGraph, Vertex, VertexSet};
use crate::rng;

/// `U_0 ⊇ U_1 ⊇ … ⊇ U_t`, built for density `delta` and ratio `xi`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vortex {
    pub sets: Vec<VertexSet>,
    pub delta: f64,
    pub xi: f64,
    /// Size of the last set.
    pub m: usize,
    /// Samples drawn per level, including the accepted one.
    pub attempts: Vec<usize>,
}

impl Vortex {
    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(VertexSet::len).collect()
    }

    pub fn last(&self) -> &VertexSet {
        self.sets.last().expect("a vortex has at least one set")
    }

    /// The single-level vortex `U_0 = V`.
    pub fn trivial(n: usize, delta: f64, xi: f64) -> Self {
        Vortex { sets: vec![VertexSet::full(n)], delta, xi, m: n, attempts: vec![] }
    }
}

impl Serialize for Vortex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            delta: f64,
            xi: f64,
            m: usize,
            sizes: Vec<usize>,
            attempts: Vec<usize>,
            sets: Vec<Vec<Vertex>>,
        }
        Out {
            delta: self.delta,
            xi: self.xi,
            m: self.m,
            sizes: self.sizes(),
            attempts: self.attempts.clone(),
            sets: self.sets.iter().map(VertexSet::to_vec).collect(),
        }
        .serialize(s)
    }
}

/// The first condition a vortex fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum VortexViolation {
    /// `U_0` is not the whole vertex set.
    NotSpanning,
    /// `|U_i| ≠ ⌊ξ |U_{i-1}|⌋` or `U_i ⊄ U_{i-1}`.
    Size { level: usize, size: usize, expected: usize },
    /// The last set does not have size `m`.
    LastSize { size: usize, m: usize },
    Degree { level: usize, vertex: Vertex, degree: usize, needed: f64 },
    Codegree { level: usize, pair: (Vertex, Vertex), codegree: usize, needed: f64 },
}

fn shrink(size: usize, xi: f64) -> usize {
    // tolerate representation error in products such as 0.1 * 30
    (xi * size as f64 + 1e-9).floor() as usize
}

/// `n_0 = n`, `n_i = ⌊ξ n_{i-1}⌋`, continued while the last size is at least
/// `m_prime`; the final entry is the first size below `m_prime`.
pub fn vortex_sizes(n: usize, xi: f64, m_prime: usize) -> Result<Vec<usize>> {
    if !(xi > 0.0 && xi < 1.0) {
        return Err(Error::BadParams(format!("ratio {xi} must lie strictly between 0 and 1")));
    }
    if m_prime == 0 || n < m_prime {
        return Err(Error::BadParams(format!("need 1 ≤ m' ≤ n, got m' = {m_prime}, n = {n}")));
    }
    let mut sizes = vec![n];
    while let Some(&last) = sizes.last() {
        if last < m_prime {
            break;
        }
        sizes.push(shrink(last, xi));
    }
    Ok(sizes)
}

fn check_level(g: &ThreeGraph, outer: &VertexSet, inner: &VertexSet, level: usize, density: f64) -> Option<VortexViolation> {
    let k = inner.len();
    let pairs_needed = density * (k * k.saturating_sub(1) / 2) as f64;
    let members = outer.to_vec();
    for &x in &members {
        let d = g.degree(x, Some(inner)).expect("vertex in range");
        if (d as f64) < pairs_needed {
            return Some(VortexViolation::Degree { level, vertex: x, degree: d, needed: pairs_needed });
        }
    }
    let needed = density * k as f64;
    for (i, &x) in members.iter().enumerate() {
        for &y in &members[i + 1..] {
            let c = g.codegree_unchecked(x, y, Some(inner));
            if (c as f64) < needed {
                return Some(VortexViolation::Codegree { level, pair: (x, y), codegree: c, needed });
            }
        }
    }
    None
}

/// Checks all five vortex conditions with density `density`.
pub fn check_vortex(g: &ThreeGraph, v: &Vortex, density: f64) -> std::result::Result<(), VortexViolation> {
    let n = g.n();
    if v.sets.first().is_none_or(|u| u.len() != n) {
        return Err(VortexViolation::NotSpanning);
    }
    for i in 1..v.sets.len() {
        let (outer, inner) = (&v.sets[i - 1], &v.sets[i]);
        let expected = shrink(outer.len(), v.xi);
        let nested = inner.iter().all(|x| outer.contains(x));
        if inner.len() != expected || !nested {
            return Err(VortexViolation::Size { level: i, size: inner.len(), expected });
        }
    }
    let last = v.last().len();
    if last != v.m {
        return Err(VortexViolation::LastSize { size: last, m: v.m });
    }
    for i in 1..v.sets.len() {
        if let Some(bad) = check_level(g, &v.sets[i - 1], &v.sets[i], i, density) {
            return Err(bad);
        }
    }
    Ok(())
}

/// Samples a vortex level by level, each `U_i` a uniform subset of `U_{i-1}`,
/// keeping a sample once it meets the degree and codegree conditions with
/// density `delta - xi`. A level failing `retries + 1` samples fails the build.
pub fn build_vortex(g: &ThreeGraph, delta: f64, xi: f64, m_prime: usize, seed: u64, retries: usize) -> Result<Vortex> {
    let sizes = vortex_sizes(g.n(), xi, m_prime)?;
    let mut rng = rng::stream(seed, rng::streams::VORTEX);
    let density = delta - xi;
    let mut sets = vec![VertexSet::full(g.n())];
    let mut attempts = Vec::new();
    for (level, &size) in sizes.iter().enumerate().skip(1) {
        let outer = sets.last().expect("nonempty").to_vec();
        let mut accepted = None;
        for attempt in 0..=retries {
            let pick = generate::random_subset(outer.len(), size, &mut rng);
            let inner = VertexSet::from_vertices(g.n(), pick.iter().map(|i| outer[i]))?;
            let outer_set = sets.last().expect("nonempty");
            if check_level(g, outer_set, &inner, level, density).is_none() {
                accepted = Some(inner);
                attempts.push(attempt + 1);
                break;
            }
        }
        match accepted {
            Some(u) => sets.push(u),
            None => return Err(Error::VortexFailed(level)),
        }
    }
    let m = *sizes.last().expect("nonempty");
    Ok(Vortex { sets, delta, xi, m, attempts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_recurrence() {
        assert_eq!(vortex_sizes(100, 0.25, 20).unwrap(), vec![100, 25, 6]);
        assert_eq!(vortex_sizes(1000, 0.25, 40).unwrap(), vec![1000, 250, 62, 15]);
        assert_eq!(vortex_sizes(30, 0.5, 30).unwrap(), vec![30, 15]);
        assert!(vortex_sizes(10, 0.5, 20).is_err());
        assert!(vortex_sizes(10, 1.0, 5).is_err());
    }

    #[test]
    fn complete_host_vortex() {
        let g = ThreeGraph::complete(60);
        let delta = g.min_codegree() as f64 / 60.0;
        let v = build_vortex(&g, delta, 0.25, 20, 3, 5).unwrap();
        assert_eq!(v.sizes(), vec![60, 15]);
        assert_eq!(v.m, 15);
        check_vortex(&g, &v, delta - 0.25).unwrap();
    }

    #[test]
    fn impossible_density_fails() {
        let g = ThreeGraph::complete(40);
        assert!(matches!(build_vortex(&g, 2.0, 0.25, 10, 1, 3), Err(Error::VortexFailed(1))));
    }

    #[test]
    fn tampered_vortex_is_caught() {
        let g = crate::generate::random_host(40, 0.8, 2);
        let delta = g.min_codegree() as f64 / 40.0;
        let mut v = build_vortex(&g, delta, 0.5, 10, 1, 20).unwrap();
        check_vortex(&g, &v, delta - 0.5).unwrap();
        v.m += 1;
        assert!(matches!(check_vortex(&g, &v, delta - 0.5), Err(VortexViolation::LastSize { .. })));
        v.m -= 1;
        let first = v.sets[1].iter().next().unwrap();
        v.sets[1].remove(first);
        assert!(matches!(check_vortex(&g, &v, delta - 0.5), Err(VortexViolation::Size { level: 1, .. })));
        assert!(matches!(check_vortex(&g, &v, 2.0), Err(VortexViolation::Size { .. })));
        let fresh = build_vortex(&g, delta, 0.5, 10, 1, 20).unwrap();
        assert!(matches!(check_vortex(&g, &fresh, 2.0), Err(VortexViolation::Degree { level: 1, .. })));
    }
}
