use std::collections::BTreeSet;

use proptest::prelude::*;

use h3cycles::decomposer::{self, DecompositionStatus, FractionalStatus};
use h3cycles::euler::{self, EulerOutcome};
use h3cycles::walks::{self, WalkKind};
use h3cycles::{DivisibilityKind, ThreeGraph, generate, io, tour_trail};

fn arb_graph(max_n: usize) -> impl Strategy<Value = ThreeGraph> {
    (5..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n, 0..n), 0..40).prop_map(move |ts| {
            let triples = ts.into_iter().filter(|&(a, b, c)| a != b && b != c && a != c).map(|(a, b, c)| [a, b, c]);
            ThreeGraph::build(n, triples).unwrap()
        })
    })
}

/// All tight `ell`-cycles on the vertices of `g`, as sorted window sets, by brute force.
fn brute_cycles(g: &ThreeGraph, ell: usize) -> BTreeSet<Vec<[usize; 3]>> {
    fn extend(g: &ThreeGraph, ell: usize, seq: &mut Vec<usize>, out: &mut BTreeSet<Vec<[usize; 3]>>) {
        if seq.len() == ell {
            let mut windows: Vec<[usize; 3]> = (0..ell)
                .map(|i| {
                    let mut t = [seq[i], seq[(i + 1) % ell], seq[(i + 2) % ell]];
                    t.sort_unstable();
                    t
                })
                .collect();
            if windows.iter().all(|t| g.contains(t[0], t[1], t[2])) {
                windows.sort_unstable();
                out.insert(windows);
            }
            return;
        }
        for v in 0..g.n() {
            if !seq.contains(&v) {
                seq.push(v);
                extend(g, ell, seq, out);
                seq.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    extend(g, ell, &mut Vec::new(), &mut out);
    out
}

fn brute_decomposable(g: &ThreeGraph, ell: usize) -> bool {
    let edges: Vec<[usize; 3]> = g.edges().map(|t| t.vertices()).collect();
    let masks: Vec<u64> = brute_cycles(g, ell)
        .into_iter()
        .map(|c| c.iter().map(|t| 1u64 << edges.iter().position(|e| e == t).unwrap()).sum())
        .collect();
    fn cover(rest: u64, masks: &[u64]) -> bool {
        rest == 0 || {
            let low = rest & rest.wrapping_neg();
            masks.iter().any(|&m| m & low != 0 && m & !rest == 0 && cover(rest ^ m, masks))
        }
    }
    cover((1u64 << edges.len()) - 1, &masks)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn degree_and_codegree_sums(g in arb_graph(9)) {
        let m = g.edge_count();
        prop_assert_eq!(g.degrees().iter().sum::<usize>(), 3 * m);
        let mut codegrees = 0;
        for x in 0..g.n() {
            for y in x + 1..g.n() {
                codegrees += g.codegree(x, y, None).unwrap();
            }
        }
        prop_assert_eq!(codegrees, 3 * m);
    }

    #[test]
    fn cycle_divisibility_implies_vertex_divisibility(g in arb_graph(8), ell in 4usize..9) {
        if g.check_divisibility(DivisibilityKind::Cycle(ell)).unwrap().divisible {
            prop_assert!(g.check_divisibility(DivisibilityKind::Vertex3).unwrap().divisible);
        }
    }

    #[test]
    fn text_format_round_trip(g in arb_graph(9)) {
        let back = io::parse_3g(&io::write_3g(&g)).unwrap();
        prop_assert_eq!(back.edge_set(), g.edge_set());
        prop_assert_eq!(back.n(), g.n());
    }

    #[test]
    fn cycles_have_walk_degree_three(perm in Just((0..10).collect::<Vec<usize>>()).prop_shuffle(), len in 4usize..=10) {
        let host = ThreeGraph::complete(10);
        let c = walks::validate(&perm[..len], WalkKind::Cycle, &host).unwrap();
        prop_assert_eq!(c.edges().len(), len);
        for &v in &perm[..len] {
            prop_assert_eq!(c.edges().iter().filter(|e| e.contains(v)).count(), 3);
        }
    }

    #[test]
    fn splicing_keeps_a_valid_tour(
        perm in Just((0..14).collect::<Vec<usize>>()).prop_shuffle(),
        tour_len in 4usize..8,
        extra in 2usize..7,
        at in 0usize..8,
    ) {
        let host = ThreeGraph::complete(14);
        let tour = walks::validate(&perm[..tour_len], WalkKind::Tour, &host).unwrap();
        let i = at % tour_len;
        let mut seq = vec![perm[i], perm[(i + 1) % tour_len]];
        seq.extend_from_slice(&perm[tour_len..tour_len + extra]);
        let cycle = walks::validate(&seq, WalkKind::Cycle, &host).unwrap();
        let joined = walks::splice_cycle(&tour, &cycle).unwrap();
        let again = walks::validate(joined.vertices(), WalkKind::Tour, &host).unwrap();
        prop_assert_eq!(again.edges().len(), tour_len + seq.len());
        let want: BTreeSet<_> = tour.edges().iter().chain(cycle.edges()).copied().collect();
        let got: BTreeSet<_> = again.edges().iter().copied().collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn mod3_holds_for_divisible_unions(n in 8usize..14, ell in 4usize..8, count in 1usize..4, seed in any::<u64>()) {
        let Ok(r) = generate::random_cycle_union(n, ell, count, seed) else { return Ok(()) };
        prop_assert!(tour_trail::check_mod3(&tour_trail::trivial_ttd(&r), &r).unwrap());
        prop_assert!(tour_trail::check_mod3(&tour_trail::greedy_ttd(&r), &r).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_solver_matches_brute_force(count in 1usize..4, seed in any::<u64>(), drop in 0usize..4) {
        // unions of 5-cycles on 6 vertices, sometimes with one edge swapped out
        let Ok(g) = generate::random_cycle_union(6, 5, count, seed) else { return Ok(()) };
        let g = if drop > 0 {
            let mut edges: Vec<[usize; 3]> = g.edges().map(|t| t.vertices()).collect();
            let gone = edges.remove(drop % edges.len());
            if let Some(t) = ThreeGraph::complete(6).edges().map(|t| t.vertices()).find(|t| !edges.contains(t) && *t != gone) {
                edges.push(t);
            }
            ThreeGraph::build(6, edges).unwrap()
        } else {
            g
        };
        let truth = brute_decomposable(&g, 5);
        let report = decomposer::exact_decompose(&g, 5, decomposer::DEFAULT_EXACT_BUDGET);
        prop_assert_eq!(report.status == DecompositionStatus::Complete, truth);
        prop_assert!(report.status != DecompositionStatus::BudgetExceeded);
        report.check_accounting(&g).unwrap();
        if truth {
            let f = decomposer::fractional_decompose(&g, 5, 10_000).unwrap();
            prop_assert_eq!(f.status, FractionalStatus::Feasible);
        }
    }

    #[test]
    fn vortex_conditions_hold(n in 40usize..70, keep in 0.8f64..0.95, seed in any::<u64>()) {
        let g = generate::random_host(n, keep, seed);
        let delta = g.min_codegree() as f64 / n as f64;
        let v = decomposer::build_vortex(&g, delta, 0.5, 12, seed, 20).unwrap();
        prop_assert!(decomposer::check_vortex(&g, &v, delta - 0.5).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn euler_search_and_assembly_agree(n in 6usize..9, len in 4usize..7, count in 1usize..3, seed in any::<u64>()) {
        let Ok(g) = generate::random_cycle_union(n, len, count, seed) else { return Ok(()) };
        prop_assume!(g.edge_count() <= 12);
        let exact = euler::exact_euler(&g, euler::DEFAULT_EULER_BUDGET);
        if let EulerOutcome::Tour(w) = &exact {
            prop_assert!(euler::verify_euler(&g, w));
        }
        match euler::assemble_euler(&g, len, seed) {
            Ok(w) => {
                prop_assert!(euler::verify_euler(&g, &w));
                prop_assert!(matches!(exact, EulerOutcome::Tour(_)));
            }
            Err(_) => prop_assert!(!matches!(exact, EulerOutcome::Tour(_)), "assembly missed a tour of {:?}", g.edge_set()),
        }
    }
}
