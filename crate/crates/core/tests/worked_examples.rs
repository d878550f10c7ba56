mod common;

use hcp_core::basis::{arc_columns, Basis};
use hcp_core::census::enumerate_feasible_bases;
use hcp_core::graph::DirectedGraph;
use hcp_core::polytope::{build_h, build_wh};
use hcp_core::structure::{classify_basis, is_quasi_hamiltonian, Class, InfeasibleReason};
use hcp_core::{Beta, NumericMode};
use num_rational::BigRational;

use common::beta_pow;

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn exact_values(sys: &hcp_core::PolytopeSystem, arcs: &[(usize, usize)]) -> Vec<BigRational> {
    let cols = arc_columns(sys, arcs).unwrap();
    let b = Basis::new(sys, &cols).unwrap();
    let s = b.solution().solution().expect("nonsingular");
    cols.iter().map(|&c| s.exact.as_ref().unwrap()[c].clone()).collect()
}

#[test]
fn seven_node_type4_basis_values() {
    let (p, qd) = (2, 3);
    let sys = build_h(&DirectedGraph::complete(7), &Beta::rational(p, qd).unwrap(), NumericMode::ExactRational).unwrap();
    let arcs = [(1, 2), (2, 3), (3, 2), (3, 1), (3, 4), (5, 4), (6, 7), (7, 6)];
    let x = exact_values(&sys, &arcs);
    let b = |k| beta_pow(p, qd, k);
    let one_plus_b2 = q(1) + b(2);
    assert_eq!(x[0], q(1));
    assert_eq!(x[1], b(3) * &one_plus_b2 + b(1));
    assert_eq!(x[2], b(2) * &one_plus_b2);
    assert_eq!(x[3], b(6));
    for v in &x[4..] {
        assert_eq!(*v, q(0));
    }
    let c = classify_basis(&sys, &arc_columns(&sys, &arcs).unwrap()).unwrap();
    assert_eq!(c.class, Class::Type4);
    assert_eq!(c.components, 2);
}

#[test]
fn seven_node_dependent_set() {
    let sys = build_h(&DirectedGraph::complete(7), &Beta::rational(9, 10).unwrap(), NumericMode::ExactRational).unwrap();
    let arcs = [(1, 2), (2, 3), (3, 2), (3, 1), (4, 5), (6, 5), (7, 6), (7, 4)];
    let cols = arc_columns(&sys, &arcs).unwrap();
    assert!(Basis::new(&sys, &cols).unwrap().solution().is_singular());
    assert!(common::solve(&sys, &cols).is_none());
    let c = classify_basis(&sys, &cols).unwrap();
    assert_eq!(c.class, Class::Infeasible(InfeasibleReason::BalancedCycle));
}

#[test]
fn noose_point_of_five_node_graph() {
    let edges = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 4)];
    let g = DirectedGraph::new(5, edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)])).unwrap();
    let (p, qd) = (3, 5);
    let sys = build_h(&g, &Beta::rational(p, qd).unwrap(), NumericMode::ExactRational).unwrap();
    let arcs = [(1, 2), (1, 4), (2, 3), (3, 2), (4, 5), (5, 1)];
    let x = exact_values(&sys, &arcs);
    let b = |k| beta_pow(p, qd, k);
    assert_eq!(x, vec![q(1) - b(2), b(2), b(1), b(2), b(3), b(4)]);
    let c = classify_basis(&sys, &arc_columns(&sys, &arcs).unwrap()).unwrap();
    assert_eq!(c.class, Class::Type1);

    let full: Vec<f64> = {
        let cols = arc_columns(&sys, &arcs).unwrap();
        let b = Basis::new(&sys, &cols).unwrap();
        b.solution().solution().unwrap().values.clone()
    };
    assert!(!is_quasi_hamiltonian(&sys, &full));
}

#[test]
fn hamiltonian_point_of_five_node_graph() {
    let edges = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 4)];
    let g = DirectedGraph::new(5, edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)])).unwrap();
    let sys = build_h(&g, &Beta::rational(1, 2).unwrap(), NumericMode::ExactRational).unwrap();
    let x = exact_values(&sys, &[(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 4)]);
    let b = |k| beta_pow(1, 2, k);
    assert_eq!(x, vec![q(1), b(1), b(2), b(3), b(4), q(0)]);
}

#[test]
fn census_does_not_depend_on_beta() {
    for n in [4, 5] {
        let g = DirectedGraph::complete(n);
        let a = enumerate_feasible_bases(&g, &Beta::rational(1, 2).unwrap(), 1 << 20).unwrap();
        let b = enumerate_feasible_bases(&g, &Beta::rational(9, 10).unwrap(), 1 << 20).unwrap();
        assert_eq!(a.tally, b.tally, "n={n}");
    }
}

#[test]
fn directed_cycle_has_no_census() {
    let g = DirectedGraph::cycle(&[1, 2, 3, 4, 5]).unwrap();
    let r = enumerate_feasible_bases(&g, &Beta::rational(1, 2).unwrap(), 10).unwrap();
    assert_eq!(r.tally.subsets, 0);
    assert_eq!(r.tally.feasible(), 0);
}

#[test]
fn wedge_rows_hold_at_the_printed_point() {
    let g = DirectedGraph::complete(6);
    let sys = build_wh(&g, &Beta::float(0.999).unwrap(), NumericMode::float()).unwrap();
    let mut x = vec![0.0; sys.cols()];
    for ((i, j), v) in [
        ((1, 2), 1.0),
        ((2, 6), 0.999000),
        ((3, 4), 0.994013),
        ((3, 6), 0.000997),
        ((4, 5), 0.995010),
        ((5, 1), 0.995010),
        ((5, 4), 0.001993),
        ((6, 3), 0.996006),
        ((6, 5), 0.00299101),
    ] {
        x[sys.arc_column(i, j).unwrap()] = v;
    }
    let b: f64 = 0.999;
    for i in 2..=6 {
        let out: f64 = g.out_neighbors(i).unwrap().iter().map(|&j| x[sys.arc_column(i, j).unwrap()]).sum();
        assert!(out <= b + 1e-5 && out >= b.powi(5) - 1e-5, "node {i}: {out}");
    }
    // Node 2: upper slack 0, lower slack β − β⁵.
    let out2 = x[sys.arc_column(2, 6).unwrap()];
    assert!((b - out2).abs() < 1e-9);
    assert!(((out2 - b.powi(5)) - 0.00399).abs() < 1e-5);
    assert!(is_quasi_hamiltonian(&sys, &x));
}
