//! Constraint systems `A x = b, x >= 0` for `H_β(G)` and its wedge-constrained
//! refinement `WH_β(G)`.
//!
//! Row layout for `H`: rows `0..n` are the discounted flow-conservation rows
//! of nodes `1..=n` (node 1 carries right-hand side `1 - β^n`), row `n` is the
//! unit out-flow row of node 1. `WH` appends `n - 1` upper-bound rows
//! (`Σ_j x_ij + s⁺_i = β`) followed by `n - 1` lower-bound rows
//! (`Σ_j x_ij - s⁻_i = β^{n-1}`), for `i = 2..=n`, and one slack column per
//! wedge row in the same order.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Arc, DirectedGraph, Node};
use crate::scalar::{format_ratio, Scalar};

/// Feasibility tolerance for the float backend.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Smallest admissible pivot magnitude in float factorisations.
pub const PIVOT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum PolytopeError {
    #[error("β = {0} is outside the open interval (0, 1)")]
    BetaOutOfRange(String),
    #[error("cannot parse β from `{0}`")]
    BetaSyntax(String),
    #[error("exact arithmetic needs β given as a ratio p/q, got {0}")]
    ExactNeedsRational(String),
    #[error("float tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("need at least {min} nodes, got {n}")]
    TooFewNodes { n: usize, min: usize },
    #[error("serialised system is inconsistent: {0}")]
    Inconsistent(String),
}

/// Discount factor, optionally carrying an exact ratio `num/den` in lowest terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Beta {
    value: f64,
    ratio: Option<(u64, u64)>,
}

impl Beta {
    pub fn rational(num: u64, den: u64) -> Result<Self, PolytopeError> {
        if num == 0 || den == 0 || num >= den {
            return Err(PolytopeError::BetaOutOfRange(format!("{num}/{den}")));
        }
        let g = num.gcd(&den);
        let (num, den) = (num / g, den / g);
        Ok(Beta {
            value: num as f64 / den as f64,
            ratio: Some((num, den)),
        })
    }

    pub fn float(value: f64) -> Result<Self, PolytopeError> {
        if !(value > 0.0 && value < 1.0) {
            return Err(PolytopeError::BetaOutOfRange(value.to_string()));
        }
        Ok(Beta { value, ratio: None })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn ratio(&self) -> Option<(u64, u64)> {
        self.ratio
    }

    pub fn is_exact(&self) -> bool {
        self.ratio.is_some()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.ratio
            .map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ratio {
            Some((p, q)) => write!(f, "{p}/{q}"),
            None => write!(f, "{}", self.value),
        }
    }
}

/// `p/q` parses as an exact ratio, anything else as a decimal.
impl FromStr for Beta {
    type Err = PolytopeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((p, q)) = s.split_once('/') {
            let p = p
                .trim()
                .parse::<u64>()
                .map_err(|_| PolytopeError::BetaSyntax(s.into()))?;
            let q = q
                .trim()
                .parse::<u64>()
                .map_err(|_| PolytopeError::BetaSyntax(s.into()))?;
            Beta::rational(p, q)
        } else {
            let v = s
                .parse::<f64>()
                .map_err(|_| PolytopeError::BetaSyntax(s.into()))?;
            Beta::float(v)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum NumericMode {
    ExactRational,
    Float { tolerance: f64 },
}

impl NumericMode {
    pub fn float() -> Self {
        NumericMode::Float {
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    /// Zero threshold for basic values (0 in exact mode).
    pub fn tolerance(&self) -> f64 {
        match *self {
            NumericMode::ExactRational => 0.0,
            NumericMode::Float { tolerance } => tolerance,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumericMode::ExactRational)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolytopeKind {
    H,
    WH,
}

/// What a column of `A` stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Column {
    Arc(Node, Node),
    UpperSlack(Node),
    LowerSlack(Node),
}

impl Column {
    pub fn arc(&self) -> Option<Arc> {
        match *self {
            Column::Arc(i, j) => Some((i, j)),
            _ => None,
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Column::Arc(i, j) => write!(f, "x({i},{j})"),
            Column::UpperSlack(i) => write!(f, "s+({i})"),
            Column::LowerSlack(i) => write!(f, "s-({i})"),
        }
    }
}

/// Integer-scaled copy of an exactly specified system.
///
/// With `β = p/q`, the columns hold `q·A` and `rhs` holds `q^n·b`, so that
/// `(q·A) y = q^n b` has solution `y = q^{n-1} x`.
#[derive(Clone, Debug)]
pub struct ExactSystem {
    pub(crate) den: u64,
    pub(crate) int_columns: Vec<Vec<(usize, i64)>>,
    pub(crate) rhs: Vec<BigInt>,
    pub(crate) rhs_small: Option<Vec<i128>>,
    pub(crate) solution_scale: BigInt,
}

#[derive(Clone, Debug)]
pub struct PolytopeSystem {
    kind: PolytopeKind,
    n: usize,
    beta: Beta,
    mode: NumericMode,
    graph: DirectedGraph,
    columns: Vec<Column>,
    rows: usize,
    a: Vec<f64>,
    b: Vec<f64>,
    sparse: Vec<Vec<(usize, f64)>>,
    exact: Option<ExactSystem>,
}

fn validate(g: &DirectedGraph, beta: &Beta, mode: NumericMode) -> Result<(), PolytopeError> {
    if g.node_count() < 2 {
        return Err(PolytopeError::TooFewNodes {
            n: g.node_count(),
            min: 2,
        });
    }
    match mode {
        NumericMode::ExactRational if !beta.is_exact() => {
            Err(PolytopeError::ExactNeedsRational(beta.to_string()))
        }
        NumericMode::Float { tolerance } if !(tolerance > 0.0) => {
            Err(PolytopeError::BadTolerance(tolerance))
        }
        _ => Ok(()),
    }
}

/// Assemble `H_β(G)`.
pub fn build_h(
    g: &DirectedGraph,
    beta: &Beta,
    mode: NumericMode,
) -> Result<PolytopeSystem, PolytopeError> {
    PolytopeSystem::assemble(g, beta, mode, PolytopeKind::H)
}

/// Assemble `WH_β(G)`: `H_β(G)` plus the wedge rows and their slacks.
pub fn build_wh(
    g: &DirectedGraph,
    beta: &Beta,
    mode: NumericMode,
) -> Result<PolytopeSystem, PolytopeError> {
    PolytopeSystem::assemble(g, beta, mode, PolytopeKind::WH)
}

impl PolytopeSystem {
    pub fn build(
        g: &DirectedGraph,
        beta: &Beta,
        mode: NumericMode,
        kind: PolytopeKind,
    ) -> Result<Self, PolytopeError> {
        Self::assemble(g, beta, mode, kind)
    }

    fn assemble(
        g: &DirectedGraph,
        beta: &Beta,
        mode: NumericMode,
        kind: PolytopeKind,
    ) -> Result<Self, PolytopeError> {
        validate(g, beta, mode)?;
        let n = g.node_count();
        let wedge = kind == PolytopeKind::WH;
        let rows = if wedge { 3 * n - 1 } else { n + 1 };
        let mut columns: Vec<Column> = g.arcs().iter().map(|&(i, j)| Column::Arc(i, j)).collect();
        if wedge {
            columns.extend((2..=n).map(Column::UpperSlack));
            columns.extend((2..=n).map(Column::LowerSlack));
        }
        let upper_row = |i: Node| n + 1 + (i - 2);
        let lower_row = |i: Node| n + 1 + (n - 1) + (i - 2);

        // Integer pattern: `unit` multiples of 1 and `disc` multiples of -β.
        let mut pattern: Vec<Vec<(usize, i64, i64)>> = Vec::with_capacity(columns.len());
        for col in &columns {
            let entries = match *col {
                Column::Arc(i, j) => {
                    let mut e = vec![(i - 1, 1, 0), (j - 1, 0, 1)];
                    if i == 1 {
                        e.push((n, 1, 0));
                    } else if wedge {
                        e.push((upper_row(i), 1, 0));
                        e.push((lower_row(i), 1, 0));
                    }
                    e
                }
                Column::UpperSlack(i) => vec![(upper_row(i), 1, 0)],
                Column::LowerSlack(i) => vec![(lower_row(i), -1, 0)],
            };
            let mut entries = entries;
            entries.sort_by_key(|e| e.0);
            pattern.push(entries);
        }

        let bv = beta.value();
        let sparse: Vec<Vec<(usize, f64)>> = pattern
            .iter()
            .map(|e| {
                e.iter()
                    .map(|&(r, unit, disc)| (r, unit as f64 - disc as f64 * bv))
                    .collect()
            })
            .collect();
        let mut a = vec![0.0; rows * columns.len()];
        for (c, entries) in sparse.iter().enumerate() {
            for &(r, v) in entries {
                a[r * columns.len() + c] = v;
            }
        }
        let mut b = vec![0.0; rows];
        b[0] = 1.0 - bv.powi(n as i32);
        b[n] = 1.0;
        if wedge {
            for i in 2..=n {
                b[upper_row(i)] = bv;
                b[lower_row(i)] = bv.powi(n as i32 - 1);
            }
        }

        let exact = match (mode, beta.ratio()) {
            (NumericMode::ExactRational, Some((p, q))) => {
                let (pi, qi) = (p as i64, q as i64);
                let int_columns = pattern
                    .iter()
                    .map(|e| {
                        e.iter()
                            .map(|&(r, unit, disc)| (r, unit * qi - disc * pi))
                            .collect()
                    })
                    .collect();
                let (pb, qb) = (BigInt::from(p), BigInt::from(q));
                let nn = n as u32;
                let mut rhs = vec![BigInt::zero(); rows];
                rhs[0] = Pow::pow(&qb, nn) - Pow::pow(&pb, nn);
                rhs[n] = Pow::pow(&qb, nn);
                if wedge {
                    for i in 2..=n {
                        rhs[upper_row(i)] = &pb * Pow::pow(&qb, nn - 1);
                        rhs[lower_row(i)] = Pow::pow(&pb, nn - 1) * &qb;
                    }
                }
                let rhs_small = rhs
                    .iter()
                    .map(|v| i64::try_from(v).ok().map(i128::from))
                    .collect();
                Some(ExactSystem {
                    den: q,
                    int_columns,
                    rhs_small,
                    rhs,
                    solution_scale: Pow::pow(&qb, nn - 1),
                })
            }
            _ => None,
        };

        Ok(PolytopeSystem {
            kind,
            n,
            beta: beta.clone(),
            mode,
            graph: g.clone(),
            columns,
            rows,
            a,
            b,
            sparse,
            exact,
        })
    }

    pub fn kind(&self) -> PolytopeKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> &Beta {
        &self.beta
    }

    pub fn mode(&self) -> NumericMode {
        self.mode
    }

    /// Working feasibility tolerance: the mode's τ, tightened below the
    /// smallest basic value scale β^n(1−β) so tiny genuine values (small β,
    /// large n) are not read as zero. Zero in exact mode.
    pub fn tolerance(&self) -> f64 {
        let b = self.beta.value();
        let scale = b.powi(self.node_count() as i32) * (1.0 - b);
        self.mode.tolerance().min(1e-3 * scale)
    }

    pub fn graph(&self) -> &DirectedGraph {
        &self.graph
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    /// Number of arc columns; they come first, in the graph's arc order.
    pub fn arc_columns(&self) -> usize {
        self.graph.arc_count()
    }

    pub fn columns(&self) -> &[Column] {
        &self.columns
    }

    pub fn column(&self, c: usize) -> Column {
        self.columns[c]
    }

    /// Column index of arc `(i, j)`, if present.
    pub fn arc_column(&self, i: Node, j: Node) -> Option<usize> {
        self.graph.arc_index(i, j)
    }

    pub fn entry(&self, r: usize, c: usize) -> f64 {
        self.a[r * self.cols() + c]
    }

    pub fn matrix(&self) -> &[f64] {
        &self.a
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    /// Nonzeros of column `c` as `(row, value)`, ascending by row.
    pub fn sparse_column(&self, c: usize) -> &[(usize, f64)] {
        &self.sparse[c]
    }

    pub(crate) fn exact_system(&self) -> Option<&ExactSystem> {
        self.exact.as_ref()
    }

    /// Exact entry of `A` (exact mode only).
    pub fn exact_entry(&self, r: usize, c: usize) -> Option<BigRational> {
        let ex = self.exact.as_ref()?;
        let v = ex.int_columns[c]
            .iter()
            .find(|e| e.0 == r)
            .map_or(0, |e| e.1);
        Some(BigRational::new(BigInt::from(v), BigInt::from(ex.den)))
    }

    /// Exact right-hand side entry (exact mode only).
    pub fn exact_rhs(&self, r: usize) -> Option<BigRational> {
        let ex = self.exact.as_ref()?;
        let scale = Pow::pow(&BigInt::from(ex.den), self.n as u32);
        Some(BigRational::new(ex.rhs[r].clone(), scale))
    }

    /// Dense `A` and `b` over an arbitrary scalar: exact rationals when the
    /// system is exact, floats otherwise.
    pub fn dense_exact(&self) -> Option<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
        self.exact.as_ref()?;
        let a = (0..self.rows)
            .map(|r| (0..self.cols()).map(|c| self.exact_entry(r, c).unwrap()).collect())
            .collect();
        let b = (0..self.rows).map(|r| self.exact_rhs(r).unwrap()).collect();
        Some((a, b))
    }

    /// The `H` system of the same graph, β and mode.
    pub fn h_system(&self) -> PolytopeSystem {
        match self.kind {
            PolytopeKind::H => self.clone(),
            PolytopeKind::WH => build_h(&self.graph, &self.beta, self.mode)
                .expect("parameters were validated when this system was built"),
        }
    }

    pub fn to_document(&self) -> SystemDocument {
        let render = |r: usize, c: Option<usize>| -> String {
            match (&self.exact, c) {
                (Some(_), Some(c)) => format_ratio(&self.exact_entry(r, c).unwrap()),
                (Some(_), None) => format_ratio(&self.exact_rhs(r).unwrap()),
                (None, Some(c)) => self.entry(r, c).to_string(),
                (None, None) => self.b[r].to_string(),
            }
        };
        SystemDocument {
            kind: self.kind,
            beta: self.beta.to_string(),
            numeric_mode: self.mode,
            graph: self.graph.clone(),
            columns: self.columns.iter().map(ToString::to_string).collect(),
            matrix: (0..self.rows)
                .map(|r| (0..self.cols()).map(|c| render(r, Some(c))).collect())
                .collect(),
            rhs: (0..self.rows).map(|r| render(r, None)).collect(),
        }
    }

    /// Rebuild from a serialised document, checking the stored matrix.
    pub fn from_document(doc: &SystemDocument) -> Result<Self, PolytopeError> {
        let beta: Beta = doc.beta.parse()?;
        let sys = Self::assemble(&doc.graph, &beta, doc.numeric_mode, doc.kind)?;
        let fresh = sys.to_document();
        if fresh.matrix != doc.matrix || fresh.rhs != doc.rhs || fresh.columns != doc.columns {
            return Err(PolytopeError::Inconsistent(
                "stored matrix does not match the graph and β".into(),
            ));
        }
        Ok(sys)
    }
}

/// JSON form of a [`PolytopeSystem`]. Exact entries are rendered `p/q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemDocument {
    pub kind: PolytopeKind,
    pub beta: String,
    pub numeric_mode: NumericMode,
    pub graph: DirectedGraph,
    pub columns: Vec<String>,
    pub matrix: Vec<Vec<String>>,
    pub rhs: Vec<String>,
}

fn rescale_factor<T: Scalar>(beta: &T, n: usize) -> Result<T, PolytopeError> {
    if n < 2 {
        return Err(PolytopeError::TooFewNodes { n, min: 2 });
    }
    if !(*beta > T::zero() && *beta < T::one()) {
        return Err(PolytopeError::BetaOutOfRange(format!("{beta:?}")));
    }
    Ok(T::one() - beta.powi(n as u32))
}

/// Map occupational measures `y` of the unscaled polytope to `x = (1 - β^n) y`.
pub fn rescale_f_to_h<T: Scalar>(y: &[T], beta: &T, n: usize) -> Result<Vec<T>, PolytopeError> {
    let f = rescale_factor(beta, n)?;
    Ok(y.iter().map(|v| v.clone() * f.clone()).collect())
}

/// Inverse of [`rescale_f_to_h`].
pub fn rescale_h_to_f<T: Scalar>(x: &[T], beta: &T, n: usize) -> Result<Vec<T>, PolytopeError> {
    let f = rescale_factor(beta, n)?;
    Ok(x.iter().map(|v| v.clone() / f.clone()).collect())
}

/// Lower end of the β interval on which the wedge rows cut every non-Hamiltonian
/// extreme point except those of Type 1: `(1 - 1/(n-2))^{1/(n-2)}`.
pub fn wedge_beta_threshold(n: usize) -> Result<f64, PolytopeError> {
    if n < 4 {
        return Err(PolytopeError::TooFewNodes { n, min: 4 });
    }
    let m = (n - 2) as f64;
    Ok((1.0 - 1.0 / m).powf(1.0 / m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn example_graph() -> DirectedGraph {
        let edges = [(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (1, 4)];
        DirectedGraph::new(5, edges.iter().flat_map(|&(a, b)| [(a, b), (b, a)])).unwrap()
    }

    #[test]
    fn worked_example_matrix() {
        let beta = Beta::rational(1, 3).unwrap();
        let sys = build_h(&example_graph(), &beta, NumericMode::ExactRational).unwrap();
        assert_eq!((sys.rows(), sys.cols()), (6, 12));
        // Columns x12 x14 x15 x21 x23 x32 x34 x41 x43 x45 x51 x54, with β = 1/3.
        let b = -1.0 / 3.0;
        #[rustfmt::skip]
        let expected = [
            [1.0, 1.0, 1.0, b, 0.0, 0.0, 0.0, b, 0.0, 0.0, b, 0.0],
            [b, 0.0, 0.0, 1.0, 1.0, b, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 0.0, b, 1.0, 1.0, 0.0, b, 0.0, 0.0, 0.0],
            [0.0, b, 0.0, 0.0, 0.0, 0.0, b, 1.0, 1.0, 1.0, 0.0, b],
            [0.0, 0.0, b, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, b, 1.0, 1.0],
            [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        ];
        for (r, row) in expected.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert_eq!(sys.entry(r, c), v, "entry ({r},{c})");
            }
        }
        assert_eq!(sys.exact_entry(1, 0).unwrap(), ratio(-1, 3));
        assert_eq!(sys.exact_rhs(0).unwrap(), ratio(242, 243));
        assert_eq!(sys.exact_rhs(5).unwrap(), ratio(1, 1));
        for r in 1..5 {
            assert_eq!(sys.rhs()[r], 0.0);
        }
    }

    #[test]
    fn h_column_structure() {
        let g = crate::graph::gen_binomial(9, 0.5, 2).unwrap();
        let beta = Beta::float(0.8).unwrap();
        let sys = build_h(&g, &beta, NumericMode::float()).unwrap();
        for (c, &(i, j)) in g.arcs().iter().enumerate() {
            let node_rows: Vec<_> = sys.sparse_column(c).iter().filter(|e| e.0 < 9).collect();
            assert_eq!(node_rows.len(), 2);
            assert_eq!(sys.entry(i - 1, c), 1.0);
            assert_eq!(sys.entry(j - 1, c), -0.8);
            assert_eq!(sys.entry(9, c), if i == 1 { 1.0 } else { 0.0 });
            let node_sum: f64 = (0..9).map(|r| sys.entry(r, c)).sum();
            assert!((node_sum - 0.2).abs() < 1e-12);
        }
    }

    #[test]
    fn wedge_layout() {
        let g = DirectedGraph::complete(5);
        let beta = Beta::rational(9, 10).unwrap();
        let wh = build_wh(&g, &beta, NumericMode::ExactRational).unwrap();
        let h = build_h(&g, &beta, NumericMode::ExactRational).unwrap();
        assert_eq!(wh.rows(), 14);
        assert_eq!(wh.cols(), 20 + 8);
        for r in 0..h.rows() {
            for c in 0..h.cols() {
                assert_eq!(wh.entry(r, c), h.entry(r, c));
            }
            assert_eq!(wh.rhs()[r], h.rhs()[r]);
        }
        for (k, r) in (h.rows()..wh.rows()).enumerate() {
            let slack = 20 + k;
            let nz: Vec<_> = (0..wh.rows()).filter(|&rr| wh.entry(rr, slack) != 0.0).collect();
            assert_eq!(nz, vec![r]);
            let expected = if k < 4 { 1.0 } else { -1.0 };
            assert_eq!(wh.entry(r, slack), expected);
            let expected_rhs = if k < 4 { ratio(9, 10) } else { ratio(6561, 10000) };
            assert_eq!(wh.exact_rhs(r).unwrap(), expected_rhs);
        }
    }

    #[test]
    fn wedge_bounds_coincide_only_for_two_nodes() {
        let beta = Beta::float(0.7).unwrap();
        let two = build_wh(&DirectedGraph::complete(2), &beta, NumericMode::float()).unwrap();
        assert_eq!(two.rhs()[3], two.rhs()[4]);
        let three = build_wh(&DirectedGraph::complete(3), &beta, NumericMode::float()).unwrap();
        assert_ne!(three.rhs()[4], three.rhs()[6]);
    }

    #[test]
    fn quasi_hamiltonian_example_satisfies_node_two_wedge() {
        let (beta, n) = (0.999f64, 6);
        let outflow = 0.999000; // x26 is the only positive arc leaving node 2.
        let upper_slack = beta - outflow;
        let lower_slack = outflow - beta.powi(n - 1);
        assert!(upper_slack.abs() < 1e-12);
        assert!((lower_slack - 0.00399).abs() < 1e-5 && lower_slack > 0.0);
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = DirectedGraph::complete(3);
        assert!(Beta::float(1.0).is_err());
        assert!(Beta::float(0.0).is_err());
        assert!(Beta::rational(3, 2).is_err());
        assert!("1.5".parse::<Beta>().is_err());
        assert!("abc".parse::<Beta>().is_err());
        let b = "9/10".parse::<Beta>().unwrap();
        assert!(b.is_exact());
        assert_eq!("18/20".parse::<Beta>().unwrap(), b);
        assert!(!"0.999".parse::<Beta>().unwrap().is_exact());
        let float_beta = Beta::float(0.5).unwrap();
        assert!(matches!(
            build_h(&g, &float_beta, NumericMode::ExactRational),
            Err(PolytopeError::ExactNeedsRational(_))
        ));
        assert!(build_h(&g, &float_beta, NumericMode::Float { tolerance: 0.0 }).is_err());
    }

    #[test]
    fn rescaling() {
        let beta = ratio(9, 10);
        let n = 4;
        let factor = BigRational::from_integer(1.into()) - beta.powi(4);
        // y with unit outflow 1/(1 - β^n) at node 1.
        let y = vec![BigRational::from_integer(1.into()) / factor.clone() / ratio(2, 1); 2];
        let x = rescale_f_to_h(&y, &beta, n).unwrap();
        assert_eq!(x[0].clone() + x[1].clone(), ratio(1, 1));
        assert_eq!(rescale_h_to_f(&x, &beta, n).unwrap(), y);
        let zero = rescale_f_to_h(&[0.0f64; 3], &0.5, 3).unwrap();
        assert_eq!(zero, vec![0.0; 3]);
        assert!(rescale_f_to_h(&[1.0f64], &1.2, 3).is_err());
    }

    #[test]
    fn threshold_values() {
        assert!((wedge_beta_threshold(30).unwrap() - 0.99870).abs() < 5e-6);
        assert!((wedge_beta_threshold(4).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        for n in 4..100 {
            assert!(wedge_beta_threshold(n + 1).unwrap() > wedge_beta_threshold(n).unwrap());
        }
        assert!(wedge_beta_threshold(3).is_err());
    }

    #[test]
    fn document_roundtrip() {
        let g = example_graph();
        let sys = build_wh(&g, &Beta::rational(9, 10).unwrap(), NumericMode::ExactRational).unwrap();
        let doc = sys.to_document();
        assert_eq!(doc.matrix[0][3], "-9/10");
        assert_eq!(doc.rhs[5], "1/1");
        let json = serde_json::to_string(&doc).unwrap();
        let back: SystemDocument = serde_json::from_str(&json).unwrap();
        let rebuilt = PolytopeSystem::from_document(&back).unwrap();
        assert_eq!(rebuilt.to_document(), doc);
        let mut tampered = doc.clone();
        tampered.matrix[0][0] = "2/1".into();
        assert!(PolytopeSystem::from_document(&tampered).is_err());
    }
}
