//! Fractional decompositions: nonnegative cycle weights summing to one on every edge.
//!
//! Feasibility is decided by a phase-one simplex with Bland's rule, over exact
//! rationals for moderate cycle counts and over `f64` beyond that.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::enumerate_cycles;
use crate::error::Result;
use crate::graph::{ThreeGraph, Triple, Vertex};
use crate::walks::WalkSeq;

/// Up to this many cycles the simplex runs over exact rationals.
const EXACT_CYCLE_LIMIT: usize = 5000;
const FLOAT_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FractionalStatus {
    Feasible,
    Infeasible,
}

#[derive(Clone, Debug, Serialize)]
pub struct FractionalDecomposition {
    pub ell: usize,
    pub status: FractionalStatus,
    /// Cycles with positive weight, canonical and sorted.
    pub cycles: Vec<Vec<Vertex>>,
    pub weights: Vec<f64>,
    /// The same weights as reduced fractions, when solved exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_weights: Option<Vec<String>>,
    /// Largest deviation of an edge's weight sum from one.
    pub max_violation: f64,
    pub cycle_count: usize,
    pub pivots: u64,
}

trait Field: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn less(&self, o: &Self) -> bool;
    fn to_f64(&self) -> f64;
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn less(&self, o: &Self) -> bool {
        self < o
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn is_zero(&self) -> bool {
        self.abs() <= FLOAT_TOL
    }
    fn is_pos(&self) -> bool {
        *self > FLOAT_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -FLOAT_TOL
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn less(&self, o: &Self) -> bool {
        self < o
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Finds `x ≥ 0` with `A x = 1`, where column `j` of `A` has ones at `columns[j]`.
/// Returns the values of the original variables and the pivot count, or `None`.
fn phase_one<T: Field>(rows: usize, columns: &[Vec<usize>]) -> (Option<Vec<T>>, u64) {
    let n = columns.len();
    let width = n + rows + 1;
    let rhs = width - 1;
    let mut tab: Vec<Vec<T>> = vec![vec![T::zero(); width]; rows + 1];
    for (j, col) in columns.iter().enumerate() {
        for &i in col {
            tab[i][j] = T::one();
        }
    }
    for i in 0..rows {
        tab[i][n + i] = T::one();
        tab[i][rhs] = T::one();
    }
    // reduced costs of the artificial objective
    for j in 0..n {
        tab[rows][j] = T::zero().sub(&T::from_count(columns[j].len()));
    }
    tab[rows][rhs] = T::zero().sub(&T::from_count(rows));
    let mut basis: Vec<usize> = (n..n + rows).collect();
    let mut pivots = 0u64;
    loop {
        let Some(enter) = (0..n + rows).find(|&j| tab[rows][j].is_neg()) else {
            break;
        };
        let mut leave: Option<(usize, T)> = None;
        for i in 0..rows {
            if tab[i][enter].is_pos() {
                let ratio = tab[i][rhs].div(&tab[i][enter]);
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio.less(best) || (!best.less(&ratio) && basis[i] < basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((r, _)) = leave else {
            // cannot happen for a bounded phase-one problem
            return (None, pivots);
        };
        pivots += 1;
        let p = tab[r][enter].clone();
        for v in tab[r].iter_mut() {
            *v = v.div(&p);
        }
        let pivot_row = tab[r].clone();
        for (i, row) in tab.iter_mut().enumerate() {
            if i == r || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.sub(&f.mul(pv));
                }
            }
        }
        basis[r] = enter;
    }
    if !tab[rows][rhs].is_zero() {
        return (None, pivots);
    }
    let mut x = vec![T::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = tab[i][rhs].clone();
        }
    }
    (Some(x), pivots)
}

trait FromCount {
    fn from_count(k: usize) -> Self;
}

impl<T: Field> FromCount for T {
    fn from_count(k: usize) -> Self {
        let mut v = T::zero();
        for _ in 0..k {
            v = v.add(&T::one());
        }
        v
    }
}

/// Largest `|Σ_{C ∋ e} w(C) − 1|` over edges of `g`, with weights indexed like `cycles`.
pub fn fractional_violation(g: &ThreeGraph, cycles: &[WalkSeq], weights: &[f64]) -> f64 {
    let mut sums: HashMap<Triple, f64> = g.edges().map(|e| (e, 0.0)).collect();
    for (c, &w) in cycles.iter().zip(weights) {
        for e in c.edges() {
            *sums.entry(*e).or_insert(f64::INFINITY) += w;
        }
    }
    sums.values().map(|s| (s - 1.0).abs()).fold(0.0, f64::max)
}

/// Searches for a fractional decomposition of `g` into tight `ell`-cycles.
/// Fails with `LimitExceeded` when `g` has more than `limit` cycles.
pub fn fractional_decompose(g: &ThreeGraph, ell: usize, limit: usize) -> Result<FractionalDecomposition> {
    let cycles = enumerate_cycles(g, ell, limit)?;
    let edges: Vec<Triple> = g.edges().collect();
    let index: HashMap<Triple, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let columns: Vec<Vec<usize>> = cycles.iter().map(|c| c.edges().iter().map(|e| index[e]).collect()).collect();
    let (weights, exact, pivots) = if cycles.len() <= EXACT_CYCLE_LIMIT {
        let (x, p) = phase_one::<BigRational>(edges.len(), &columns);
        let exact = x.as_ref().map(|x| x.iter().map(|q| q.to_string()).collect::<Vec<_>>());
        (x.map(|x| x.iter().map(Field::to_f64).collect::<Vec<f64>>()), exact, p)
    } else {
        let (x, p) = phase_one::<f64>(edges.len(), &columns);
        (x.map(|x| x.into_iter().map(|w| w.max(0.0)).collect()), None, p)
    };
    let mut out = FractionalDecomposition {
        ell,
        status: FractionalStatus::Infeasible,
        cycles: Vec::new(),
        weights: Vec::new(),
        exact_weights: None,
        max_violation: f64::INFINITY,
        cycle_count: cycles.len(),
        pivots,
    };
    if edges.is_empty() {
        out.status = FractionalStatus::Feasible;
        out.max_violation = 0.0;
        return Ok(out);
    }
    let Some(w) = weights else {
        return Ok(out);
    };
    let violation = fractional_violation(g, &cycles, &w);
    if violation > FLOAT_TOL {
        return Ok(out);
    }
    let keep: Vec<usize> = (0..cycles.len()).filter(|&j| w[j] > 0.0).collect();
    out.status = FractionalStatus::Feasible;
    out.max_violation = violation;
    out.cycles = keep.iter().map(|&j| cycles[j].canonical()).collect();
    out.weights = keep.iter().map(|&j| w[j]).collect();
    out.exact_weights = exact.map(|e| keep.iter().map(|&j| e[j].clone()).collect());
    Ok(out)
}

#[cfg(test)]
fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(num_bigint::BigInt::from(p), num_bigint::BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeQuery;

    #[test]
    fn k5_is_fractionally_decomposable() {
        let g = ThreeGraph::complete(5);
        let f = fractional_decompose(&g, 5, 1000).unwrap();
        assert_eq!(f.status, FractionalStatus::Feasible);
        assert!(f.max_violation <= 1e-9);
        assert_eq!(f.cycle_count, 12);
        // each edge lies in 6 of the 12 cycles, so 1/6 everywhere is a witness
        let cycles = enumerate_cycles(&g, 5, 1000).unwrap();
        for e in g.edges() {
            assert_eq!(cycles.iter().filter(|c| c.edges().contains(&e)).count(), 6);
        }
        assert!(fractional_violation(&g, &cycles, &[1.0 / 6.0; 12]) < 1e-12);
    }

    #[test]
    fn exact_weights_sum_to_one() {
        let g = ThreeGraph::complete(5);
        let f = fractional_decompose(&g, 5, 1000).unwrap();
        let exact: Vec<BigRational> = f.exact_weights.unwrap().iter().map(|s| s.parse().unwrap()).collect();
        for e in g.edges() {
            let mut s = <BigRational as Zero>::zero();
            for (c, w) in f.cycles.iter().zip(&exact) {
                let k = c.len();
                if (0..k).any(|i| crate::graph::Triple::new(c[i], c[(i + 1) % k], c[(i + 2) % k]).unwrap() == e) {
                    s += w;
                }
            }
            assert_eq!(s, ratio(1, 1));
        }
    }

    #[test]
    fn uncoverable_edge_is_infeasible() {
        let mut edges: Vec<[usize; 3]> = ThreeGraph::complete(5).edges().map(|t| t.vertices()).collect();
        edges.push([4, 5, 6]);
        let g = ThreeGraph::build(7, edges).unwrap();
        assert!(g.has(&crate::graph::Triple::new(4, 5, 6).unwrap()));
        assert_eq!(fractional_decompose(&g, 5, 1000).unwrap().status, FractionalStatus::Infeasible);
    }

    #[test]
    fn single_cycle_gets_weight_one() {
        let g = ThreeGraph::build(7, (0..7).map(|i| [i, (i + 1) % 7, (i + 2) % 7])).unwrap();
        let f = fractional_decompose(&g, 7, 1000).unwrap();
        assert_eq!(f.status, FractionalStatus::Feasible);
        assert_eq!(f.weights, vec![1.0]);
        assert_eq!(f.exact_weights.unwrap(), vec!["1".to_string()]);
    }

    #[test]
    fn float_path_agrees() {
        let g = ThreeGraph::complete(5);
        let cycles = enumerate_cycles(&g, 5, 1000).unwrap();
        let edges: Vec<Triple> = g.edges().collect();
        let index: HashMap<Triple, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let cols: Vec<Vec<usize>> = cycles.iter().map(|c| c.edges().iter().map(|e| index[e]).collect()).collect();
        let (x, _) = phase_one::<f64>(edges.len(), &cols);
        assert!(fractional_violation(&g, &cycles, &x.unwrap()) < 1e-9);
    }
}
