mod common;

use hcp_core::basis::{adjacent_feasible_bases, initial_feasible_basis, Basis, PivotState};
use hcp_core::census::enumerate_feasible_bases;
use hcp_core::graph::{gen_binomial, gen_hamiltonian_binomial, Arc, DirectedGraph};
use hcp_core::polytope::{build_h, rescale_f_to_h, rescale_h_to_f};
use hcp_core::scalar::ratio;
use hcp_core::structure::structural_verdict;
use hcp_core::{Beta, NumericMode, PolytopeKind, PolytopeSystem};
use proptest::prelude::*;
use proptest::sample::subsequence;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A connected graph on `nodes` with exactly one cycle (random spanning tree
/// plus one arc), each edge randomly oriented. Returns the arcs and the
/// cycle's orientation defect computed by walking the cycle.
fn unicyclic(nodes: &[usize], rng: &mut ChaCha8Rng) -> Option<(Vec<Arc>, i64)> {
    let k = nodes.len();
    let orient = |a: usize, b: usize, rng: &mut ChaCha8Rng| if rng.gen() { (a, b) } else { (b, a) };
    let mut parent = vec![usize::MAX; k];
    let mut tree_arc = vec![(0, 0); k];
    let mut arcs = Vec::new();
    for t in 1..k {
        let p = rng.gen_range(0..t);
        parent[t] = p;
        tree_arc[t] = orient(nodes[t], nodes[p], rng);
        arcs.push(tree_arc[t]);
    }
    let (u, v) = (rng.gen_range(0..k), rng.gen_range(0..k));
    if u == v {
        return None;
    }
    let extra = orient(nodes[u], nodes[v], rng);
    if arcs.contains(&extra) {
        return None;
    }
    arcs.push(extra);
    // Tree path u -> v through the lowest common ancestor, then v -> u on the extra arc.
    let ancestors = |mut x: usize| {
        let mut path = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            path.push(x);
        }
        path
    };
    let (pu, pv) = (ancestors(u), ancestors(v));
    let lca = *pu.iter().find(|x| pv.contains(x)).unwrap();
    let mut walk: Vec<usize> = pu.iter().copied().take_while(|&x| x != lca).collect();
    walk.push(lca);
    let down: Vec<usize> = pv.iter().copied().take_while(|&x| x != lca).collect();
    walk.extend(down.into_iter().rev());
    let mut steps: Vec<(usize, usize, Arc)> = walk
        .windows(2)
        .map(|w| {
            let arc = if parent[w[0]] == w[1] { tree_arc[w[0]] } else { tree_arc[w[1]] };
            (nodes[w[0]], nodes[w[1]], arc)
        })
        .collect();
    steps.push((nodes[v], nodes[u], extra));
    let delta: i64 = steps.iter().map(|&(a, b, arc)| if arc == (a, b) { 1 } else { -1 }).sum();
    Some((arcs, delta))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn unicyclic_dependence_iff_balanced(seed in any::<u64>(), n in 4usize..9, p in 1u64..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pool: Vec<usize> = (2..=n).collect();
        pool.shuffle(&mut rng);
        let k = rng.gen_range(2..n);
        let Some((arcs, delta)) = unicyclic(&pool[..k], &mut rng) else { return Ok(()); };
        let sys = build_h(&DirectedGraph::complete(n), &Beta::rational(p, 10).unwrap(), NumericMode::ExactRational).unwrap();
        let cols: Vec<usize> = arcs.iter().map(|&(i, j)| sys.arc_column(i, j).unwrap()).collect();
        let dependent = common::column_rank(&sys, &cols) < cols.len();
        prop_assert_eq!(dependent, delta == 0, "arcs {:?} delta {}", arcs, delta);
    }

    #[test]
    fn structural_verdict_matches_oracle(seed in any::<u64>(), n in 4usize..7, pick in any::<u64>()) {
        let g = gen_binomial(n, 0.6, seed).unwrap();
        prop_assume!(g.arc_count() > n);
        let sys = build_h(&g, &Beta::rational(7, 9).unwrap(), NumericMode::ExactRational).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(pick);
        let mut idx: Vec<usize> = (0..g.arc_count()).collect();
        idx.shuffle(&mut rng);
        idx.truncate(n + 1);
        idx.sort_unstable();
        let arcs: Vec<Arc> = idx.iter().map(|&c| g.arcs()[c]).collect();
        prop_assert_eq!(
            structural_verdict(n, &arcs).verdict.is_feasible(),
            common::feasible(&sys, &idx),
            "arcs {:?}", arcs
        );
    }

    #[test]
    fn walk_states_solve_the_system(seed in any::<u64>(), n in 5usize..12, wedge in any::<bool>()) {
        let g = gen_hamiltonian_binomial(n, 3.0 / n as f64, seed).unwrap().graph;
        let kind = if wedge { PolytopeKind::WH } else { PolytopeKind::H };
        let sys = PolytopeSystem::build(&g, &Beta::float(0.99).unwrap(), NumericMode::float(), kind).unwrap();
        let start = initial_feasible_basis(&sys, seed).unwrap();
        let mut st = PivotState::new(&sys, &start).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..60 {
            let moves = st.feasible_moves();
            if moves.is_empty() { break; }
            let before = st.columns();
            st.pivot(moves[rng.gen_range(0..moves.len())]);
            let after = st.columns();
            prop_assert_eq!(before.iter().filter(|c| after.binary_search(c).is_ok()).count(), sys.rows() - 1);
            let x = st.values();
            for r in 0..sys.rows() {
                let lhs: f64 = (0..sys.cols()).map(|c| sys.entry(r, c) * x[c]).sum();
                prop_assert!((lhs - sys.rhs()[r]).abs() < 1e-8, "row {} residual {}", r, lhs - sys.rhs()[r]);
            }
            prop_assert!(st.min_value() >= -1e-9);
            prop_assert!(Basis::new(&sys, &after).unwrap().is_feasible(&sys));
        }
    }

    #[test]
    fn rescaling_round_trips(num in 1i64..20, n in 2usize..9, ys in proptest::collection::vec(0i64..50, 1..8)) {
        let beta = ratio(num, 20);
        let y: Vec<_> = ys.iter().map(|&v| ratio(v, 7)).collect();
        let x = rescale_f_to_h(&y, &beta, n).unwrap();
        prop_assert_eq!(rescale_h_to_f(&x, &beta, n).unwrap(), y);
    }

    #[test]
    fn census_partitions_subsets(seed in any::<u64>(), n in 3usize..6) {
        let g = gen_binomial(n, 0.7, seed).unwrap();
        let r = enumerate_feasible_bases(&g, &Beta::rational(1, 2).unwrap(), 1 << 20).unwrap();
        let t = &r.tally;
        prop_assert_eq!(t.subsets, t.singular + t.negative + t.feasible());
        prop_assert_eq!(t.unclassified, 0);
        prop_assert_eq!(t.disagreements, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjacency_is_symmetric(seed in any::<u64>(), keep in subsequence((0..12usize).collect::<Vec<_>>(), 7..=12)) {
        let k4 = DirectedGraph::complete(4);
        let g = DirectedGraph::new(4, keep.iter().map(|&c| k4.arcs()[c])).unwrap();
        let sys = build_h(&g, &Beta::rational(3, 4).unwrap(), NumericMode::ExactRational).unwrap();
        let Ok(start) = initial_feasible_basis(&sys, seed) else { return Ok(()); };
        for nb in adjacent_feasible_bases(&sys, &start).unwrap() {
            prop_assert!(nb.is_feasible(&sys));
            let back = adjacent_feasible_bases(&sys, &nb).unwrap();
            prop_assert!(back.iter().any(|b| b.columns() == start.columns()));
        }
    }
}
