//! Bases of a [`PolytopeSystem`]: basic solutions, feasibility, a phase-1
//! starting basis, and one-swap adjacency.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Arc;
use crate::linalg::{self, bareiss_big, bareiss_i128, IntSolution};
use crate::polytope::{PolytopeSystem, PIVOT_TOLERANCE};
use crate::simplex::{phase_one, phase_one_float};

/// Re-invert the basis matrix after this many eta updates.
const REFACTOR_INTERVAL: usize = 64;
const SMALL_PIVOT: f64 = 0.1;
const VERIFY_PIVOT: f64 = 1e-5;

#[derive(Debug, Error, PartialEq)]
pub enum BasisError {
    #[error("basis has {got} columns but the system has {expected} rows")]
    WrongCardinality { expected: usize, got: usize },
    #[error("column {column} out of range (system has {cols} columns)")]
    ColumnOutOfRange { column: usize, cols: usize },
    #[error("column {0} appears twice")]
    DuplicateColumn(usize),
    #[error("arc ({0},{1}) is not a column of the system")]
    MissingArc(usize, usize),
    #[error("the polytope is empty")]
    Infeasible,
    #[error("constraint rows are linearly dependent")]
    RankDeficient,
    #[error("basis is not feasible")]
    NotFeasible,
    #[error("numerical breakdown: {0}")]
    Numerical(String),
}

/// A basic solution expanded to one value per column (non-basic entries 0).
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub values: Vec<f64>,
    /// Exact values when the system is in exact mode.
    pub exact: Option<Vec<BigRational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum BasicSolution {
    Singular,
    Solved(Solution),
}

impl BasicSolution {
    pub fn is_singular(&self) -> bool {
        matches!(self, BasicSolution::Singular)
    }

    pub fn solution(&self) -> Option<&Solution> {
        match self {
            BasicSolution::Singular => None,
            BasicSolution::Solved(s) => Some(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PivotMove {
    pub leaving: usize,
    pub entering: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Basis {
    columns: Vec<usize>,
    solution: BasicSolution,
}

fn check_columns(sys: &PolytopeSystem, cols: &[usize]) -> Result<Vec<usize>, BasisError> {
    if cols.len() != sys.rows() {
        return Err(BasisError::WrongCardinality {
            expected: sys.rows(),
            got: cols.len(),
        });
    }
    let mut sorted = cols.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(BasisError::DuplicateColumn(w[0]));
        }
    }
    if let Some(&c) = sorted.last() {
        if c >= sys.cols() {
            return Err(BasisError::ColumnOutOfRange {
                column: c,
                cols: sys.cols(),
            });
        }
    }
    Ok(sorted)
}

/// Column indices of the given arcs.
pub fn arc_columns(sys: &PolytopeSystem, arcs: &[Arc]) -> Result<Vec<usize>, BasisError> {
    arcs.iter()
        .map(|&(i, j)| sys.arc_column(i, j).ok_or(BasisError::MissingArc(i, j)))
        .collect()
}

impl Basis {
    pub fn new(sys: &PolytopeSystem, columns: &[usize]) -> Result<Self, BasisError> {
        let columns = check_columns(sys, columns)?;
        let solution = solve_sorted(sys, &columns);
        Ok(Basis { columns, solution })
    }

    pub fn from_arcs(sys: &PolytopeSystem, arcs: &[Arc]) -> Result<Self, BasisError> {
        Basis::new(sys, &arc_columns(sys, arcs)?)
    }

    /// Sorted column indices.
    pub fn columns(&self) -> &[usize] {
        &self.columns
    }

    pub fn solution(&self) -> &BasicSolution {
        &self.solution
    }

    pub fn contains(&self, column: usize) -> bool {
        self.columns.binary_search(&column).is_ok()
    }

    pub fn is_feasible(&self, sys: &PolytopeSystem) -> bool {
        match &self.solution {
            BasicSolution::Singular => false,
            BasicSolution::Solved(s) => solution_nonnegative(sys, s),
        }
    }

    /// Arcs among the basic columns (slacks dropped).
    pub fn arcs(&self, sys: &PolytopeSystem) -> Vec<Arc> {
        self.columns
            .iter()
            .filter_map(|&c| sys.column(c).arc())
            .collect()
    }

    pub fn apply(&self, sys: &PolytopeSystem, mv: PivotMove) -> Result<Basis, BasisError> {
        let cols: Vec<usize> = self
            .columns
            .iter()
            .map(|&c| if c == mv.leaving { mv.entering } else { c })
            .collect();
        if !self.contains(mv.leaving) {
            return Err(BasisError::ColumnOutOfRange {
                column: mv.leaving,
                cols: sys.cols(),
            });
        }
        Basis::new(sys, &cols)
    }
}

fn solution_nonnegative(sys: &PolytopeSystem, s: &Solution) -> bool {
    match &s.exact {
        Some(exact) => exact.iter().all(|v| !v.is_negative()),
        None => {
            let tol = sys.tolerance();
            s.values.iter().all(|&v| v >= -tol)
        }
    }
}

/// Integer kernel of an exact system restricted to `cols`.
pub(crate) fn exact_kernel(sys: &PolytopeSystem, cols: &[usize]) -> IntSolution<BigInt> {
    let ex = sys
        .exact_system()
        .expect("exact kernel requires an exact system");
    let m = sys.rows();
    let w = m + 1;
    if let Some(rhs) = &ex.rhs_small {
        let mut aug = vec![0i128; m * w];
        for (k, &c) in cols.iter().enumerate() {
            for &(r, v) in &ex.int_columns[c] {
                aug[r * w + k] = v as i128;
            }
        }
        for r in 0..m {
            aug[r * w + m] = rhs[r];
        }
        if let Some(sol) = bareiss_i128(&mut aug, m) {
            return sol.widen();
        }
    }
    let mut aug = vec![BigInt::from(0); m * w];
    for (k, &c) in cols.iter().enumerate() {
        for &(r, v) in &ex.int_columns[c] {
            aug[r * w + k] = BigInt::from(v);
        }
    }
    for r in 0..m {
        aug[r * w + m] = ex.rhs[r].clone();
    }
    bareiss_big(aug, m)
}

fn solve_sorted(sys: &PolytopeSystem, cols: &[usize]) -> BasicSolution {
    let m = sys.rows();
    let mut values = vec![0.0; sys.cols()];
    if let Some(ex) = sys.exact_system() {
        match exact_kernel(sys, cols) {
            IntSolution::Singular => BasicSolution::Singular,
            IntSolution::Solved { num, det } => {
                let den = det * &ex.solution_scale;
                let mut exact = vec![BigRational::from_integer(0.into()); sys.cols()];
                for (k, &c) in cols.iter().enumerate() {
                    let v = BigRational::new(num[k].clone(), den.clone());
                    values[c] = crate::scalar::Scalar::to_f64(&v);
                    exact[c] = v;
                }
                BasicSolution::Solved(Solution {
                    values,
                    exact: Some(exact),
                })
            }
        }
    } else {
        let mut a = vec![0.0; m * m];
        for (k, &c) in cols.iter().enumerate() {
            for &(r, v) in sys.sparse_column(c) {
                a[r * m + k] = v;
            }
        }
        match linalg::lu_solve(a, sys.rhs().to_vec(), m, PIVOT_TOLERANCE) {
            None => BasicSolution::Singular,
            Some(x) => {
                for (k, &c) in cols.iter().enumerate() {
                    values[c] = x[k];
                }
                BasicSolution::Solved(Solution {
                    values,
                    exact: None,
                })
            }
        }
    }
}

/// Solve `A_B x_B = b`. Non-basic components of the result are zero.
pub fn basic_solution(sys: &PolytopeSystem, cols: &[usize]) -> Result<BasicSolution, BasisError> {
    let sorted = check_columns(sys, cols)?;
    Ok(solve_sorted(sys, &sorted))
}

/// B1 (nonsingular) and B2 (nonnegative basic solution).
pub fn is_feasible_basis(sys: &PolytopeSystem, cols: &[usize]) -> bool {
    Basis::new(sys, cols).is_ok_and(|b| b.is_feasible(sys))
}

/// A feasible basis found by phase-1 simplex; the column order used by
/// Bland's rule is a seeded shuffle, so different seeds give different starts.
pub fn initial_feasible_basis(sys: &PolytopeSystem, seed: u64) -> Result<Basis, BasisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut priority: Vec<usize> = (0..sys.cols()).collect();
    priority.shuffle(&mut rng);
    if let Some((a, b)) = sys.dense_exact() {
        let cols = phase_one(&a, &b, &priority, 0.0)?;
        return Basis::new(sys, &cols);
    }
    let sparse: Vec<Vec<(usize, f64)>> = (0..sys.cols()).map(|c| sys.sparse_column(c).to_vec()).collect();
    // Float phase 1 can stall on an unlucky order; reshuffle a few times.
    let mut last = BasisError::Numerical("phase 1 did not run".into());
    for _ in 0..FLOAT_PHASE_ONE_ATTEMPTS {
        match phase_one_float(&sparse, sys.rhs(), &priority, sys.tolerance()) {
            Ok(cols) => {
                let basis = Basis::new(sys, &cols)?;
                if basis.is_feasible(sys) {
                    return Ok(basis);
                }
                last = BasisError::Numerical("phase-1 basis fails the feasibility re-check".into());
            }
            Err(e @ (BasisError::Infeasible | BasisError::RankDeficient)) => return Err(e),
            Err(e) => last = e,
        }
        priority.shuffle(&mut rng);
    }
    Err(last)
}

const FLOAT_PHASE_ONE_ATTEMPTS: usize = 4;

/// Feasible one-swap moves from `basis`, sorted by (leaving, entering).
pub fn adjacent_moves(sys: &PolytopeSystem, basis: &Basis) -> Result<Vec<PivotMove>, BasisError> {
    if sys.mode().is_exact() {
        let mut moves = Vec::new();
        let mut cols = basis.columns.clone();
        for (pos, &leaving) in basis.columns.iter().enumerate() {
            for entering in 0..sys.cols() {
                if basis.contains(entering) {
                    continue;
                }
                cols[pos] = entering;
                if let IntSolution::Solved { num, det } = exact_kernel(sys, &cols) {
                    if linalg::nonnegative(&num, &det) {
                        moves.push(PivotMove { leaving, entering });
                    }
                }
            }
            cols[pos] = leaving;
        }
        moves.sort_unstable();
        Ok(moves)
    } else {
        Ok(PivotState::new(sys, basis)?.feasible_moves())
    }
}

/// All feasible bases sharing all but one column with `basis`.
pub fn adjacent_feasible_bases(sys: &PolytopeSystem, basis: &Basis) -> Result<Vec<Basis>, BasisError> {
    adjacent_moves(sys, basis)?
        .into_iter()
        .map(|mv| basis.apply(sys, mv))
        .collect()
}

/// Float basis with an explicit inverse, updated in place by pivots.
#[derive(Clone, Debug)]
pub struct PivotState<'a> {
    sys: &'a PolytopeSystem,
    basic: Vec<usize>,
    position: Vec<usize>,
    binv: Vec<f64>,
    x: Vec<f64>,
    since_refactor: usize,
}

const NOT_BASIC: usize = usize::MAX;

impl<'a> PivotState<'a> {
    pub fn new(sys: &'a PolytopeSystem, basis: &Basis) -> Result<Self, BasisError> {
        let mut st = PivotState {
            sys,
            basic: basis.columns.clone(),
            position: vec![NOT_BASIC; sys.cols()],
            binv: Vec::new(),
            x: Vec::new(),
            since_refactor: 0,
        };
        for (k, &c) in st.basic.iter().enumerate() {
            st.position[c] = k;
        }
        if !st.refactor() {
            return Err(BasisError::Numerical("basis matrix is singular".into()));
        }
        Ok(st)
    }

    fn refactor(&mut self) -> bool {
        let m = self.sys.rows();
        let mut a = vec![0.0; m * m];
        for (k, &c) in self.basic.iter().enumerate() {
            for &(r, v) in self.sys.sparse_column(c) {
                a[r * m + k] = v;
            }
        }
        match linalg::invert(a, m, PIVOT_TOLERANCE) {
            Some(inv) => {
                let b = self.sys.rhs();
                self.x = (0..m)
                    .map(|i| (0..m).map(|r| inv[i * m + r] * b[r]).sum())
                    .collect();
                self.binv = inv;
                self.since_refactor = 0;
                true
            }
            None => false,
        }
    }

    fn direction(&self, column: usize, d: &mut [f64]) {
        let m = self.sys.rows();
        d.iter_mut().for_each(|v| *v = 0.0);
        for &(r, v) in self.sys.sparse_column(column) {
            for (i, di) in d.iter_mut().enumerate() {
                *di += self.binv[i * m + r] * v;
            }
        }
    }

    /// Every feasible (leaving, entering) swap, sorted.
    pub fn feasible_moves(&self) -> Vec<PivotMove> {
        let m = self.sys.rows();
        let tol = self.sys.tolerance();
        let mut d = vec![0.0; m];
        let mut moves = Vec::new();
        for entering in 0..self.sys.cols() {
            if self.position[entering] != NOT_BASIC {
                continue;
            }
            self.direction(entering, &mut d);
            // Step lengths keeping every other basic value above -tol.
            let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
            for i in 0..m {
                let di = d[i];
                if di > 1e-12 {
                    hi = hi.min((self.x[i] + tol) / di);
                } else if di < -1e-12 {
                    lo = lo.max((self.x[i] + tol) / di);
                }
            }
            for r in 0..m {
                let dr = d[r];
                if dr.abs() <= PIVOT_TOLERANCE {
                    continue;
                }
                let theta = if self.x[r].abs() <= tol { 0.0 } else { self.x[r] / dr };
                if theta >= -tol
                    && theta >= lo
                    && theta <= hi
                    && (dr.abs() >= VERIFY_PIVOT || self.verify_swap(r, entering))
                {
                    moves.push(PivotMove {
                        leaving: self.basic[r],
                        entering,
                    });
                }
            }
        }
        moves.sort_unstable();
        moves
    }

    /// Fresh solve of the swapped basis. Small pivots computed from the
    /// updated inverse cannot tell a singular swap from a legitimate one on
    /// ill-conditioned bases; a direct factorisation can.
    fn verify_swap(&self, r: usize, entering: usize) -> bool {
        let m = self.sys.rows();
        let mut a = vec![0.0; m * m];
        for (k, &c) in self.basic.iter().enumerate() {
            let c = if k == r { entering } else { c };
            for &(row, v) in self.sys.sparse_column(c) {
                a[row * m + k] = v;
            }
        }
        let tol = self.sys.tolerance();
        linalg::lu_solve(a, self.sys.rhs().to_vec(), m, PIVOT_TOLERANCE)
            .is_some_and(|x| x.iter().all(|&v| v >= -tol))
    }

    /// Replace `mv.leaving` by `mv.entering`; the caller guarantees feasibility.
    pub fn pivot(&mut self, mv: PivotMove) {
        let m = self.sys.rows();
        let r = self.position[mv.leaving];
        assert!(r != NOT_BASIC, "leaving column {} is not basic", mv.leaving);
        let mut d = vec![0.0; m];
        self.direction(mv.entering, &mut d);
        let dr = d[r];
        let theta = self.x[r] / dr;
        for j in 0..m {
            self.binv[r * m + j] /= dr;
        }
        for i in 0..m {
            if i == r || d[i] == 0.0 {
                continue;
            }
            let f = d[i];
            for j in 0..m {
                self.binv[i * m + j] -= f * self.binv[r * m + j];
            }
            self.x[i] -= theta * f;
        }
        self.x[r] = theta;
        self.basic[r] = mv.entering;
        self.position[mv.leaving] = NOT_BASIC;
        self.position[mv.entering] = r;
        self.since_refactor += 1;
        // Eta updates amplify rounding by 1/|pivot|; rebuild after small ones.
        if self.since_refactor >= REFACTOR_INTERVAL || dr.abs() < SMALL_PIVOT {
            // Keep the updated inverse if re-inversion hits a tiny pivot.
            self.refactor();
        }
    }

    pub fn columns(&self) -> Vec<usize> {
        let mut c = self.basic.clone();
        c.sort_unstable();
        c
    }

    pub fn is_basic(&self, column: usize) -> bool {
        self.position[column] != NOT_BASIC
    }

    /// Full-length solution vector.
    pub fn values(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.sys.cols()];
        for (k, &c) in self.basic.iter().enumerate() {
            v[c] = self.x[k];
        }
        v
    }

    pub fn min_value(&self) -> f64 {
        self.x.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn to_basis(&self) -> Basis {
        Basis {
            columns: self.columns(),
            solution: BasicSolution::Solved(Solution {
                values: self.values(),
                exact: None,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_arcs, DirectedGraph};
    use crate::polytope::{build_h, build_wh, Beta, NumericMode};
    use crate::scalar::ratio;

    fn example_graph() -> DirectedGraph {
        let edges = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 4)];
        DirectedGraph::new(5, edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)])).unwrap()
    }

    #[test]
    fn hamiltonian_basis_values() {
        let sys = build_h(&example_graph(), &Beta::rational(1, 3).unwrap(), NumericMode::ExactRational)
            .unwrap();
        let arcs = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 4)];
        let basis = Basis::from_arcs(&sys, &arcs).unwrap();
        let exact = basis.solution().solution().unwrap().exact.clone().unwrap();
        let expected = [ratio(1, 1), ratio(1, 3), ratio(1, 9), ratio(1, 27), ratio(1, 81), ratio(0, 1)];
        for (&(i, j), want) in arcs.iter().zip(expected) {
            assert_eq!(exact[sys.arc_column(i, j).unwrap()], want);
        }
        assert!(basis.is_feasible(&sys));
    }

    #[test]
    fn cardinality_and_duplicates() {
        let sys = build_h(&example_graph(), &Beta::float(0.5).unwrap(), NumericMode::float()).unwrap();
        assert!(matches!(
            basic_solution(&sys, &[0, 1]),
            Err(BasisError::WrongCardinality { expected: 6, got: 2 })
        ));
        assert_eq!(basic_solution(&sys, &[0, 0, 1, 2, 3, 4]), Err(BasisError::DuplicateColumn(0)));
        assert!(!is_feasible_basis(&sys, &[0, 1]));
        assert!(Basis::from_arcs(&sys, &[(1, 3), (1, 2), (2, 3), (3, 4), (4, 5), (5, 1)]).is_err());
    }

    #[test]
    fn float_and_exact_agree_on_small_complete_graphs() {
        let beta = Beta::rational(9, 10).unwrap();
        for n in [4usize, 5] {
            let g = DirectedGraph::complete(n);
            let ex = build_h(&g, &beta, NumericMode::ExactRational).unwrap();
            let fl = build_h(&g, &beta, NumericMode::float()).unwrap();
            let arcs = g.arc_count();
            let m = n + 1;
            let mut idx: Vec<usize> = (0..m).collect();
            loop {
                assert_eq!(is_feasible_basis(&ex, &idx), is_feasible_basis(&fl, &idx), "{idx:?}");
                // next combination
                let mut k = m;
                while k > 0 && idx[k - 1] == arcs - m + k - 1 {
                    k -= 1;
                }
                if k == 0 {
                    break;
                }
                idx[k - 1] += 1;
                for t in k..m {
                    idx[t] = idx[t - 1] + 1;
                }
            }
        }
    }

    #[test]
    fn initial_basis_on_complete_graph() {
        let g = DirectedGraph::complete(5);
        for mode in [NumericMode::ExactRational, NumericMode::float()] {
            let sys = build_h(&g, &Beta::rational(9, 10).unwrap(), mode).unwrap();
            for seed in 0..5 {
                let b = initial_feasible_basis(&sys, seed).unwrap();
                assert!(is_feasible_basis(&sys, b.columns()));
                assert_eq!(initial_feasible_basis(&sys, seed).unwrap(), b);
            }
            let wh = build_wh(&g, &Beta::rational(999, 1000).unwrap(), mode).unwrap();
            let b = initial_feasible_basis(&wh, 3).unwrap();
            assert!(b.is_feasible(&wh));
        }
    }

    #[test]
    fn node_without_out_arcs_is_infeasible() {
        let g = DirectedGraph::new(3, [(1, 2), (1, 3), (3, 1), (3, 2)]).unwrap();
        let sys = build_h(&g, &Beta::rational(1, 2).unwrap(), NumericMode::ExactRational).unwrap();
        assert_eq!(initial_feasible_basis(&sys, 0), Err(BasisError::Infeasible));
        let fl = build_h(&g, &Beta::float(0.5).unwrap(), NumericMode::float()).unwrap();
        assert_eq!(initial_feasible_basis(&fl, 0), Err(BasisError::Infeasible));
    }

    #[test]
    fn hamiltonian_basis_neighbours_keep_the_cycle() {
        let n = 5;
        let g = DirectedGraph::complete(n);
        let sys = build_h(&g, &Beta::rational(9, 10).unwrap(), NumericMode::ExactRational).unwrap();
        let cycle: Vec<_> = cycle_arcs(&[1, 2, 3, 4, 5]).collect();
        let mut arcs = cycle.clone();
        arcs.push((2, 1));
        let basis = Basis::from_arcs(&sys, &arcs).unwrap();
        let extra = sys.arc_column(2, 1).unwrap();
        let cycle_cols = arc_columns(&sys, &cycle).unwrap();
        let neighbours = adjacent_feasible_bases(&sys, &basis).unwrap();
        let sharing = neighbours
            .iter()
            .filter(|b| cycle_cols.iter().all(|&c| b.contains(c)))
            .count();
        assert!(sharing >= g.arc_count() - n - 1);
        for nb in &neighbours {
            assert!(nb.is_feasible(&sys));
            let common = nb.columns().iter().filter(|&&c| basis.contains(c)).count();
            assert_eq!(common, sys.rows() - 1);
        }
        assert!(neighbours.iter().any(|b| !b.contains(extra)));
    }

    #[test]
    fn pivot_state_matches_brute_force() {
        let g = crate::graph::gen_hamiltonian_binomial(6, 0.5, 11).unwrap().graph;
        let beta = Beta::rational(3, 4).unwrap();
        let ex = build_h(&g, &beta, NumericMode::ExactRational).unwrap();
        let fl = build_h(&g, &beta, NumericMode::float()).unwrap();
        let start = initial_feasible_basis(&ex, 1).unwrap();
        let mut state = PivotState::new(&fl, &Basis::new(&fl, start.columns()).unwrap()).unwrap();
        let mut current = start;
        for step in 0..40 {
            let exact_moves = adjacent_moves(&ex, &current).unwrap();
            assert_eq!(state.feasible_moves(), exact_moves, "step {step}");
            let mv = exact_moves[(step * 7) % exact_moves.len()];
            current = current.apply(&ex, mv).unwrap();
            state.pivot(mv);
            assert_eq!(state.columns(), current.columns());
            assert!(state.min_value() >= -1e-9);
        }
    }

    #[test]
    fn adjacency_is_symmetric() {
        let g = crate::graph::gen_hamiltonian_binomial(5, 0.6, 4).unwrap().graph;
        let sys = build_h(&g, &Beta::rational(2, 3).unwrap(), NumericMode::ExactRational).unwrap();
        let start = initial_feasible_basis(&sys, 0).unwrap();
        for nb in adjacent_feasible_bases(&sys, &start).unwrap() {
            let back = adjacent_feasible_bases(&sys, &nb).unwrap();
            assert!(back.iter().any(|b| b.columns() == start.columns()));
        }
    }

    #[test]
    fn isolated_basis_has_no_neighbours() {
        // Only the 3-cycle and nothing else: the single basis of a 4-arc system.
        let g = DirectedGraph::new(3, [(1, 2), (2, 3), (3, 1), (3, 2)]).unwrap();
        let sys = build_h(&g, &Beta::rational(1, 2).unwrap(), NumericMode::ExactRational).unwrap();
        let basis = Basis::new(&sys, &[0, 1, 2, 3]).unwrap();
        assert!(basis.is_feasible(&sys));
        assert!(adjacent_feasible_bases(&sys, &basis).unwrap().is_empty());
    }
}
