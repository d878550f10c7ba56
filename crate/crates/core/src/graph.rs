//! Directed graphs on nodes `1..=n`, binomial random generation and the
//! plain-text edge-list format.
//!
//! Arcs are kept sorted lexicographically by `(tail, head)`. That order is
//! also the column order of every constraint matrix built from the graph.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A node label in `1..=n`.
pub type Node = usize;

/// An ordered pair `(tail, head)`.
pub type Arc = (Node, Node);

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node {node} is outside 1..={n}")]
    NodeOutOfRange { node: Node, n: usize },
    #[error("self-loop ({0}, {0}) is not allowed")]
    SelfLoop(Node),
    #[error("arc ({0}, {1}) appears more than once")]
    DuplicateArc(Node, Node),
    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),
    #[error("a graph needs at least {min} nodes, got {n}")]
    TooFewNodes { n: usize, min: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A simple directed graph: no self-loops, no parallel arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct DirectedGraph {
    n: usize,
    arcs: Vec<Arc>,
    out: Vec<Vec<Node>>,
    inc: Vec<Vec<Node>>,
    /// `index[(i - 1) * n + (j - 1)]` is the position of arc `(i, j)` in `arcs`.
    index: Vec<Option<u32>>,
}

#[derive(Serialize, Deserialize)]
struct RawGraph {
    n: usize,
    arcs: Vec<Arc>,
}

impl TryFrom<RawGraph> for DirectedGraph {
    type Error = GraphError;

    fn try_from(raw: RawGraph) -> Result<Self, Self::Error> {
        DirectedGraph::new(raw.n, raw.arcs)
    }
}

impl From<DirectedGraph> for RawGraph {
    fn from(g: DirectedGraph) -> Self {
        RawGraph { n: g.n, arcs: g.arcs }
    }
}

impl DirectedGraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Result<Self, GraphError> {
        let mut arcs: Vec<Arc> = arcs.into_iter().collect();
        for &(i, j) in &arcs {
            for node in [i, j] {
                if node == 0 || node > n {
                    return Err(GraphError::NodeOutOfRange { node, n });
                }
            }
            if i == j {
                return Err(GraphError::SelfLoop(i));
            }
        }
        arcs.sort_unstable();
        if let Some(w) = arcs.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateArc(w[0].0, w[0].1));
        }
        let mut out = vec![Vec::new(); n + 1];
        let mut inc = vec![Vec::new(); n + 1];
        let mut index = vec![None; n * n];
        for (k, &(i, j)) in arcs.iter().enumerate() {
            out[i].push(j);
            inc[j].push(i);
            index[(i - 1) * n + (j - 1)] = Some(k as u32);
        }
        for list in inc.iter_mut() {
            list.sort_unstable();
        }
        Ok(DirectedGraph {
            n,
            arcs,
            out,
            inc,
            index,
        })
    }

    /// Graph on `n` nodes with no arcs.
    pub fn empty(n: usize) -> Self {
        Self::new(n, []).expect("empty graph is valid")
    }

    /// The complete digraph `K_n`: all `n(n-1)` ordered pairs.
    pub fn complete(n: usize) -> Self {
        let arcs = (1..=n).flat_map(|i| (1..=n).filter(move |&j| j != i).map(move |j| (i, j)));
        Self::new(n, arcs).expect("complete graph is valid")
    }

    /// The directed cycle visiting `order[0] -> order[1] -> ... -> order[0]`.
    pub fn cycle(order: &[Node]) -> Result<Self, GraphError> {
        let n = order.len();
        Self::new(n, cycle_arcs(order))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> {
        1..=self.n
    }

    fn check(&self, i: Node) -> Result<(), GraphError> {
        if i == 0 || i > self.n {
            Err(GraphError::NodeOutOfRange { node: i, n: self.n })
        } else {
            Ok(())
        }
    }

    /// `N⁺(i)`, ascending.
    pub fn out_neighbors(&self, i: Node) -> Result<&[Node], GraphError> {
        self.check(i)?;
        Ok(&self.out[i])
    }

    /// `N⁻(i)`, ascending.
    pub fn in_neighbors(&self, i: Node) -> Result<&[Node], GraphError> {
        self.check(i)?;
        Ok(&self.inc[i])
    }

    pub fn out_degree(&self, i: Node) -> Result<usize, GraphError> {
        self.out_neighbors(i).map(<[Node]>::len)
    }

    pub fn in_degree(&self, i: Node) -> Result<usize, GraphError> {
        self.in_neighbors(i).map(<[Node]>::len)
    }

    pub fn degree(&self, i: Node) -> Result<usize, GraphError> {
        Ok(self.in_degree(i)? + self.out_degree(i)?)
    }

    pub fn has_arc(&self, i: Node, j: Node) -> bool {
        self.arc_index(i, j).is_some()
    }

    /// Position of `(i, j)` in [`DirectedGraph::arcs`].
    pub fn arc_index(&self, i: Node, j: Node) -> Option<usize> {
        if i == 0 || j == 0 || i > self.n || j > self.n {
            return None;
        }
        self.index[(i - 1) * self.n + (j - 1)].map(|k| k as usize)
    }

    /// Whether the arc set contains the directed cycle through `order`.
    pub fn contains_cycle(&self, order: &[Node]) -> bool {
        cycle_arcs(order).all(|(i, j)| self.has_arc(i, j))
    }

    /// Serialise to the edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.n);
        for &(i, j) in &self.arcs {
            let _ = writeln!(s, "{i} {j}");
        }
        s
    }

    /// Parse the edge-list text format: first line `n`, then one `i j` pair
    /// per line. Blank lines and lines starting with `#` are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut n: Option<usize> = None;
        let mut arcs = Vec::new();
        let mut seen = std::collections::HashSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| GraphError::Parse {
                line: line_no,
                message,
            };
            let mut fields = line.split_whitespace();
            match n {
                None => {
                    let count = fields.next().unwrap_or_default();
                    let value = count
                        .parse::<usize>()
                        .map_err(|e| parse_err(format!("node count `{count}`: {e}")))?;
                    if fields.next().is_some() {
                        return Err(parse_err("expected a single node count".into()));
                    }
                    n = Some(value);
                }
                Some(n) => {
                    let mut endpoint = || -> Result<Node, GraphError> {
                        let tok = fields
                            .next()
                            .ok_or_else(|| parse_err("expected `i j`".into()))?;
                        let v = tok
                            .parse::<usize>()
                            .map_err(|e| parse_err(format!("endpoint `{tok}`: {e}")))?;
                        if v == 0 || v > n {
                            return Err(parse_err(format!("endpoint {v} is outside 1..={n}")));
                        }
                        Ok(v)
                    };
                    let i = endpoint()?;
                    let j = endpoint()?;
                    if fields.next().is_some() {
                        return Err(parse_err("trailing fields after `i j`".into()));
                    }
                    if i == j {
                        return Err(parse_err(format!("self-loop ({i}, {i})")));
                    }
                    if !seen.insert((i, j)) {
                        return Err(parse_err(format!("duplicate arc ({i}, {j})")));
                    }
                    arcs.push((i, j));
                }
            }
        }
        let n = n.ok_or(GraphError::Parse {
            line: text.lines().count().max(1),
            message: "missing node count".into(),
        })?;
        Self::new(n, arcs)
    }

    pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Self, GraphError> {
        Self::parse_edge_list(&fs::read_to_string(path)?)
    }

    pub fn write_edge_list(&self, path: impl AsRef<Path>) -> Result<(), GraphError> {
        fs::write(path, self.to_edge_list())?;
        Ok(())
    }
}

/// Arcs of the closed walk `order[0] -> ... -> order[last] -> order[0]`.
pub fn cycle_arcs(order: &[Node]) -> impl Iterator<Item = Arc> + '_ {
    let len = order.len();
    (0..len).map(move |k| (order[k], order[(k + 1) % len]))
}

/// A graph with a known Hamiltonian cycle planted in it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedInstance {
    pub graph: DirectedGraph,
    /// Node order of the planted cycle; always starts at node 1.
    pub planted_cycle: Vec<Node>,
}

fn validate(n: usize, p: f64) -> Result<(), GraphError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GraphError::InvalidProbability(p));
    }
    if n < 2 {
        return Err(GraphError::TooFewNodes { n, min: 2 });
    }
    Ok(())
}

/// Draw the arcs of `G_{n,p}` from `rng`.
///
/// Stream layout: one `f64` draw per ordered pair, row-major over
/// `(i, j)` with `i, j` in `1..=n`, `i != j`; the pair is kept iff the draw
/// is `< p`.
fn draw_binomial_arcs(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Vec<Arc> {
    let mut arcs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if i != j && rng.gen::<f64>() < p {
                arcs.push((i, j));
            }
        }
    }
    arcs
}

/// Directed binomial random graph `G_{n,p}` (ChaCha8 stream seeded with `seed`).
pub fn gen_binomial(n: usize, p: f64, seed: u64) -> Result<DirectedGraph, GraphError> {
    validate(n, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DirectedGraph::new(n, draw_binomial_arcs(n, p, &mut rng))
}

/// `Ḡ_{n,p}`: a `G_{n,p}` draw followed, on the same stream, by a uniform
/// cyclic order of the nodes (node 1 first, the rest shuffled) whose arcs are
/// inserted where missing.
pub fn gen_hamiltonian_binomial(
    n: usize,
    p: f64,
    seed: u64,
) -> Result<PlantedInstance, GraphError> {
    validate(n, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = draw_binomial_arcs(n, p, &mut rng);
    let mut order: Vec<Node> = (1..=n).collect();
    order[1..].shuffle(&mut rng);
    arcs.extend(cycle_arcs(&order));
    arcs.sort_unstable();
    arcs.dedup();
    Ok(PlantedInstance {
        graph: DirectedGraph::new(n, arcs)?,
        planted_cycle: order,
    })
}
