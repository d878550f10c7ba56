//! Structural side of the theory: supports, oriented cycles and their
//! defects, 2-cores, the short-cycle-plus-noose-path shape, the purely
//! combinatorial feasibility verdict for `(n+1)`-arc sets, type
//! classification and the quasi-Hamiltonian argmax trace.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::{basic_solution, BasicSolution, BasisError};
use crate::graph::{Arc, DirectedGraph, Node};
use crate::polytope::{PolytopeKind, PolytopeSystem};
use crate::scalar::Scalar;

/// Tie tolerance of the argmax in the quasi-Hamiltonian trace.
pub const TIE_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Error, PartialEq)]
pub enum StructureError {
    #[error("consecutive steps {0} and {1} of the oriented walk do not meet")]
    Disconnected(usize, usize),
    #[error("an oriented walk needs at least one arc")]
    EmptyWalk,
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// Arc set of a subgraph on nodes `1..=n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportGraph {
    n: usize,
    arcs: Vec<Arc>,
}

impl SupportGraph {
    pub fn new(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Self {
        let mut arcs: Vec<Arc> = arcs.into_iter().collect();
        arcs.sort_unstable();
        arcs.dedup();
        SupportGraph { n, arcs }
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Nodes incident to at least one arc, ascending.
    pub fn touched_nodes(&self) -> Vec<Node> {
        let mut v: Vec<Node> = self.arcs.iter().flat_map(|&(i, j)| [i, j]).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Every node `1..=n` is incident to some arc.
    pub fn spans_all_nodes(&self) -> bool {
        self.touched_nodes().len() == self.n
    }
}

/// Arcs whose value is nonzero: `> τ` in float mode, `≠ 0` in exact mode.
/// `x` is indexed by column; only the arc columns are read.
pub fn support<T: Scalar>(x: &[T], sys: &PolytopeSystem) -> SupportGraph {
    let tol = sys.tolerance();
    let arcs = sys
        .graph()
        .arcs()
        .iter()
        .zip(x)
        .filter(|(_, v)| **v > T::zero() && !v.is_negligible(tol))
        .map(|(&a, _)| a);
    SupportGraph::new(sys.node_count(), arcs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Forward,
    Backward,
}

/// An undirected walk over arcs, each traversed forward or backward.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedWalk {
    nodes: Vec<Node>,
    steps: Vec<(Arc, Orientation)>,
}

impl OrientedWalk {
    pub fn new(steps: Vec<(Arc, Orientation)>) -> Result<Self, StructureError> {
        let first = steps.first().ok_or(StructureError::EmptyWalk)?;
        let ends = |&((i, j), o): &(Arc, Orientation)| match o {
            Orientation::Forward => (i, j),
            Orientation::Backward => (j, i),
        };
        let mut nodes = vec![ends(first).0];
        for (k, s) in steps.iter().enumerate() {
            let (from, to) = ends(s);
            if from != *nodes.last().unwrap() {
                return Err(StructureError::Disconnected(k - 1, k));
            }
            nodes.push(to);
        }
        Ok(OrientedWalk { nodes, steps })
    }

    /// Walk along a closed node sequence `v0, v1, ..., v0`, orienting each
    /// step by whichever of `(v_k, v_{k+1})`, `(v_{k+1}, v_k)` is in `arcs`.
    pub fn along(nodes: &[Node], arcs: &[Arc]) -> Option<Self> {
        let steps = nodes
            .windows(2)
            .map(|w| {
                if arcs.contains(&(w[0], w[1])) {
                    Some(((w[0], w[1]), Orientation::Forward))
                } else if arcs.contains(&(w[1], w[0])) {
                    Some(((w[1], w[0]), Orientation::Backward))
                } else {
                    None
                }
            })
            .collect::<Option<Vec<_>>>()?;
        OrientedWalk::new(steps).ok()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn steps(&self) -> &[(Arc, Orientation)] {
        &self.steps
    }

    pub fn arcs(&self) -> Vec<Arc> {
        self.steps.iter().map(|s| s.0).collect()
    }

    pub fn is_cycle(&self) -> bool {
        self.nodes.first() == self.nodes.last()
    }

    pub fn touches(&self, v: Node) -> bool {
        self.nodes.contains(&v)
    }

    /// Forward minus backward arcs. A single arc and a 2-cycle
    /// `{(u,w),(w,u)}` count all their arcs as forward.
    pub fn defect(&self) -> i64 {
        let len = self.steps.len() as i64;
        if self.steps.len() == 1 {
            return 1;
        }
        if self.steps.len() == 2 && self.is_cycle() {
            let ((a, b), _) = self.steps[0];
            if self.steps[1].0 == (b, a) {
                return 2;
            }
        }
        let forward = self
            .steps
            .iter()
            .filter(|s| s.1 == Orientation::Forward)
            .count() as i64;
        2 * forward - len
    }

    pub fn is_balanced(&self) -> bool {
        self.defect() == 0
    }
}

/// Simple cycles of the underlying undirected multigraph of `arcs`, each
/// reported once per traversal direction. Exhaustive; intended for the
/// small arc sets that make up a basis.
pub fn simple_cycles(arcs: &[Arc]) -> Vec<OrientedWalk> {
    let mut adj: BTreeMap<Node, Vec<(Node, usize)>> = BTreeMap::new();
    for (e, &(i, j)) in arcs.iter().enumerate() {
        adj.entry(i).or_default().push((j, e));
        adj.entry(j).or_default().push((i, e));
    }
    let mut out = Vec::new();
    for &s in adj.keys() {
        let mut search = CycleSearch {
            start: s,
            adj: &adj,
            arcs,
            nodes: vec![s],
            edges: Vec::new(),
            out: &mut out,
        };
        search.extend(s);
    }
    out
}

struct CycleSearch<'a> {
    start: Node,
    adj: &'a BTreeMap<Node, Vec<(Node, usize)>>,
    arcs: &'a [Arc],
    nodes: Vec<Node>,
    edges: Vec<usize>,
    out: &'a mut Vec<OrientedWalk>,
}

impl CycleSearch<'_> {
    /// Cycles are reported from their smallest node only.
    fn extend(&mut self, cur: Node) {
        let adj = self.adj;
        for &(next, e) in &adj[&cur] {
            if self.edges.contains(&e) {
                continue;
            }
            if next == self.start && !self.edges.is_empty() {
                self.edges.push(e);
                self.nodes.push(next);
                let w = self.walk();
                self.out.push(w);
                self.nodes.pop();
                self.edges.pop();
            } else if next > self.start && !self.nodes.contains(&next) {
                self.edges.push(e);
                self.nodes.push(next);
                self.extend(next);
                self.nodes.pop();
                self.edges.pop();
            }
        }
    }

    fn walk(&self) -> OrientedWalk {
        let steps = self
            .edges
            .iter()
            .zip(self.nodes.windows(2))
            .map(|(&e, w)| {
                let o = if self.arcs[e] == (w[0], w[1]) {
                    Orientation::Forward
                } else {
                    Orientation::Backward
                };
                (self.arcs[e], o)
            })
            .collect();
        OrientedWalk::new(steps).expect("consecutive steps share endpoints")
    }
}

/// A zero-defect cycle and whether it passes through node 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BalancedCycle {
    pub walk: OrientedWalk,
    pub through_node_one: bool,
}

/// Some balanced oriented cycle of `arcs`, preferring cycles that avoid
/// node 1 (only those certify linear dependence).
pub fn find_balanced_cycle(arcs: &[Arc]) -> Option<BalancedCycle> {
    let mut through_one = None;
    for c in simple_cycles(arcs) {
        if !c.is_balanced() {
            continue;
        }
        if !c.touches(1) {
            return Some(BalancedCycle {
                walk: c,
                through_node_one: false,
            });
        }
        through_one.get_or_insert(c);
    }
    through_one.map(|walk| BalancedCycle {
        walk,
        through_node_one: true,
    })
}

/// Repeatedly delete nodes of (in + out) degree at most one.
pub fn two_core(g: &SupportGraph) -> SupportGraph {
    let top = g.arcs.iter().map(|&(i, j)| i.max(j)).max().unwrap_or(0);
    let mut arcs = g.arcs.clone();
    let mut deg = vec![0usize; top + 1];
    loop {
        deg.iter_mut().for_each(|d| *d = 0);
        for &(i, j) in &arcs {
            deg[i] += 1;
            deg[j] += 1;
        }
        let before = arcs.len();
        arcs.retain(|&(i, j)| deg[i] > 1 && deg[j] > 1);
        if arcs.len() == before {
            break;
        }
    }
    SupportGraph { n: g.n, arcs }
}

/// Connected components (undirected) over all nodes `1..=n`, ordered by their
/// smallest node; isolated nodes form arc-free components.
pub fn components(n: usize, arcs: &[Arc]) -> Vec<(Vec<Node>, Vec<Arc>)> {
    let mut parent: Vec<usize> = (0..=n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for &(i, j) in arcs {
        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    // Roots are the smallest node of each component, so root order is
    // component order.
    let mut slot = vec![usize::MAX; n + 1];
    let mut comps: Vec<(Vec<Node>, Vec<Arc>)> = Vec::new();
    for v in 1..=n {
        let r = find(&mut parent, v);
        if slot[r] == usize::MAX {
            slot[r] = comps.len();
            comps.push((Vec::new(), Vec::new()));
        }
        comps[slot[r]].0.push(v);
    }
    for &a in arcs {
        let r = find(&mut parent, a.0);
        comps[slot[r]].1.push(a);
    }
    comps
}

/// The directed cycle order starting at 1 if `arcs` form exactly one
/// directed cycle through all nodes `1..=n`.
fn single_hamiltonian_cycle(n: usize, arcs: &[Arc]) -> Option<Vec<Node>> {
    if arcs.len() != n {
        return None;
    }
    let mut succ = vec![0usize; n + 1];
    for &(i, j) in arcs {
        if succ[i] != 0 {
            return None;
        }
        succ[i] = j;
    }
    let mut order = Vec::with_capacity(n);
    let mut cur = 1;
    for _ in 0..n {
        if cur == 0 || order.contains(&cur) {
            return None;
        }
        order.push(cur);
        cur = succ[cur];
    }
    (cur == 1).then_some(order)
}

/// A Hamiltonian cycle (node order from 1) contained in `arcs`, if any.
pub fn hamiltonian_cycle_in(n: usize, arcs: &[Arc]) -> Option<Vec<Node>> {
    match arcs.len().cmp(&n) {
        std::cmp::Ordering::Less => None,
        std::cmp::Ordering::Equal => single_hamiltonian_cycle(n, arcs),
        std::cmp::Ordering::Greater if arcs.len() == n + 1 => {
            let (mut outd, mut ind) = (vec![0u8; n + 1], vec![0u8; n + 1]);
            for &(i, j) in arcs {
                outd[i] = outd[i].saturating_add(1);
                ind[j] = ind[j].saturating_add(1);
            }
            if (1..=n).any(|v| outd[v] == 0 || ind[v] == 0) {
                return None;
            }
            (0..arcs.len()).find_map(|skip| {
            let rest: Vec<Arc> = arcs
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &a)| a)
                .collect();
            single_hamiltonian_cycle(n, &rest)
            })
        }
        std::cmp::Ordering::Greater => {
            let mut succ: Vec<Vec<Node>> = vec![Vec::new(); n + 1];
            for &(i, j) in arcs {
                succ[i].push(j);
            }
            let mut path = vec![1];
            let mut on = vec![false; n + 1];
            on[1] = true;
            ham_dfs(n, &succ, &mut path, &mut on).then_some(path)
        }
    }
}

fn ham_dfs(n: usize, succ: &[Vec<Node>], path: &mut Vec<Node>, on: &mut [bool]) -> bool {
    let cur = *path.last().unwrap();
    if path.len() == n {
        return succ[cur].contains(&1);
    }
    for &next in &succ[cur] {
        if on[next] {
            continue;
        }
        on[next] = true;
        path.push(next);
        if ham_dfs(n, succ, path, on) {
            return true;
        }
        path.pop();
        on[next] = false;
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisType {
    Type0,
    Type1,
    Type2,
    Type3,
    Type4,
}

impl BasisType {
    pub const ALL: [BasisType; 5] = [
        BasisType::Type0,
        BasisType::Type1,
        BasisType::Type2,
        BasisType::Type3,
        BasisType::Type4,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

/// A 2-core split into a short cycle through node 1 and a noose path that
/// leaves it at the splitting node and closes on itself (the noose cycle).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NooseDecomposition {
    /// Node order of the short cycle, starting at 1.
    pub short_cycle: Vec<Node>,
    pub splitting_node: Node,
    /// Node sequence from 1 through the splitting node to the closing node.
    pub noose_path: Vec<Node>,
    /// Node order of the noose cycle, starting at its entry node.
    pub noose_cycle: Vec<Node>,
    /// Arcs from the splitting node to the noose cycle; 0 when the two
    /// cycles share a node.
    pub connector_length: usize,
}

impl NooseDecomposition {
    pub fn shares_node(&self) -> bool {
        self.connector_length == 0
    }

    /// Type of a basis whose support is exactly this shape.
    pub fn basis_type(&self) -> BasisType {
        match self.connector_length {
            0 => BasisType::Type3,
            1 => BasisType::Type1,
            _ => BasisType::Type2,
        }
    }
}

enum BranchEnd {
    One,
    Prefix(Node),
    Own(usize),
}

/// Decompose `g` (expected to be a 2-core) into a short cycle through node 1
/// of length below `n_total` plus a noose path, if it has that shape.
pub fn decompose_noose(g: &SupportGraph, n_total: usize) -> Option<NooseDecomposition> {
    let nodes = g.touched_nodes();
    if !nodes.contains(&1) || g.arc_count() != nodes.len() + 1 {
        return None;
    }
    let mut succ: BTreeMap<Node, Vec<Node>> = BTreeMap::new();
    for &(i, j) in &g.arcs {
        succ.entry(i).or_default().push(j);
    }
    if nodes.iter().any(|v| !succ.contains_key(v)) {
        return None;
    }
    let splitters: Vec<Node> = succ
        .iter()
        .filter(|(_, s)| s.len() == 2)
        .map(|(&v, _)| v)
        .collect();
    if splitters.len() != 1 || succ.values().any(|s| s.len() > 2) {
        return None;
    }
    let s = splitters[0];

    let mut prefix = vec![1];
    while *prefix.last().unwrap() != s {
        let next = succ[prefix.last().unwrap()][0];
        if prefix.contains(&next) {
            return None;
        }
        prefix.push(next);
    }

    let trace = |start: Node| -> (Vec<Node>, BranchEnd) {
        let mut local = Vec::new();
        let mut cur = start;
        loop {
            if cur == 1 {
                return (local, BranchEnd::One);
            }
            if prefix.contains(&cur) {
                return (local, BranchEnd::Prefix(cur));
            }
            if let Some(k) = local.iter().position(|&v| v == cur) {
                return (local, BranchEnd::Own(k));
            }
            local.push(cur);
            cur = succ[&cur][0];
        }
    };
    let (a, b) = (trace(succ[&s][0]), trace(succ[&s][1]));
    let ((short, _), (noose, end)) = match (&a.1, &b.1) {
        (BranchEnd::One, BranchEnd::One) => return None,
        (BranchEnd::One, _) => (a, b),
        (_, BranchEnd::One) => (b, a),
        _ => return None,
    };
    if prefix.len() + short.len() + noose.len() != nodes.len() {
        return None;
    }
    let short_cycle: Vec<Node> = prefix.iter().chain(&short).copied().collect();
    if short_cycle.len() >= n_total {
        return None;
    }
    let mut noose_path: Vec<Node> = prefix.iter().chain(&noose).copied().collect();
    let (noose_cycle, connector_length) = match end {
        BranchEnd::Prefix(t) => {
            noose_path.push(t);
            let at = prefix.iter().position(|&v| v == t).unwrap();
            let cycle = prefix[at..].iter().chain(&noose).copied().collect();
            (cycle, 0)
        }
        BranchEnd::Own(k) => {
            noose_path.push(noose[k]);
            (noose[k..].to_vec(), k + 1)
        }
        BranchEnd::One => unreachable!(),
    };
    Some(NooseDecomposition {
        short_cycle,
        splitting_node: s,
        noose_path,
        noose_cycle,
        connector_length,
    })
}

pub fn is_short_cycle_plus_noose_path(g: &SupportGraph, n_total: usize) -> bool {
    decompose_noose(g, n_total).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfeasibleReason {
    /// B1 fails: the basis matrix is singular.
    Singular,
    /// B2 fails: some basic value is negative.
    NegativeSolution,
    /// Arc counts per connected component are wrong.
    ComponentCount,
    /// A component other than node 1's carries a balanced cycle.
    BalancedCycle,
    /// The 2-core of node 1's component is not a short cycle plus a noose path.
    CoreShape,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Feasible(BasisType),
    Infeasible(InfeasibleReason),
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible(_))
    }
}

/// Combinatorial feasibility verdict for an arc set of an `H` basis, with the
/// evidence it was derived from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralVerdict {
    pub verdict: Verdict,
    pub components: usize,
    pub two_core: SupportGraph,
    pub balanced_cycle: Option<OrientedWalk>,
    pub hamiltonian_cycle: Option<Vec<Node>>,
    pub decomposition: Option<NooseDecomposition>,
}

/// Decide feasibility of the `n + 1` arcs `arcs` as a basis of `H_β(G)` from
/// the graph structure alone: Hamiltonian cycle plus one arc, or
/// (i) `|B_1| = |V_1| + 1` and `|B_k| = |V_k|` for the other components,
/// (ii) no other component has a balanced cycle, and
/// (iii) the 2-core of node 1's component is a short cycle plus a noose path.
pub fn structural_verdict(n: usize, arcs: &[Arc]) -> StructuralVerdict {
    let comps = components(n, arcs);
    let mut out = StructuralVerdict {
        verdict: Verdict::Infeasible(InfeasibleReason::ComponentCount),
        components: comps.len(),
        two_core: SupportGraph::new(n, []),
        balanced_cycle: None,
        hamiltonian_cycle: None,
        decomposition: None,
    };
    if arcs.len() != n + 1 {
        return out;
    }
    // A Hamiltonian cycle plus one arc is connected.
    if let Some(cycle) = (comps.len() == 1).then(|| hamiltonian_cycle_in(n, arcs)).flatten() {
        out.two_core = two_core(&SupportGraph::new(n, arcs.iter().copied()));
        out.hamiltonian_cycle = Some(cycle);
        out.verdict = Verdict::Feasible(BasisType::Type0);
        return out;
    }
    let (v1, b1) = &comps[0];
    if b1.len() != v1.len() + 1 || comps[1..].iter().any(|(v, b)| b.len() != v.len()) {
        return out;
    }
    out.two_core = two_core(&SupportGraph::new(n, b1.iter().copied()));
    for (_, b) in &comps[1..] {
        // Unicyclic: the 2-core is the unique cycle.
        let core = two_core(&SupportGraph::new(n, b.iter().copied()));
        if let Some(bc) = find_balanced_cycle(core.arcs()) {
            out.balanced_cycle = Some(bc.walk);
            out.verdict = Verdict::Infeasible(InfeasibleReason::BalancedCycle);
            return out;
        }
    }
    match decompose_noose(&out.two_core, n) {
        None => {
            out.balanced_cycle = find_balanced_cycle(out.two_core.arcs())
                .filter(|bc| !bc.through_node_one)
                .map(|bc| bc.walk);
            out.verdict = Verdict::Infeasible(if out.balanced_cycle.is_some() {
                InfeasibleReason::BalancedCycle
            } else {
                InfeasibleReason::CoreShape
            });
        }
        Some(d) => {
            let ty = if comps.len() > 1 || !out.two_core.spans_all_nodes() {
                BasisType::Type4
            } else {
                d.basis_type()
            };
            out.decomposition = Some(d);
            out.verdict = Verdict::Feasible(ty);
        }
    }
    out
}

/// Class of a basis whose arcs contain no Hamiltonian cycle, read off its support.
/// `None` when the support has none of the known shapes.
pub fn type_from_support(support: &SupportGraph) -> Option<BasisType> {
    if !support.spans_all_nodes() {
        return Some(BasisType::Type4);
    }
    decompose_noose(&two_core(support), support.node_count())
        .filter(|d| {
            let core = two_core(support);
            core.arc_count() == support.arc_count() && d.short_cycle.len() < support.node_count()
        })
        .map(|d| d.basis_type())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Type0,
    Type1,
    Type2,
    Type3,
    Type4,
    /// Feasible wedge-system basis whose support matches none of Types 0–4.
    Unclassified,
    Infeasible(InfeasibleReason),
}

impl From<BasisType> for Class {
    fn from(t: BasisType) -> Self {
        match t {
            BasisType::Type0 => Class::Type0,
            BasisType::Type1 => Class::Type1,
            BasisType::Type2 => Class::Type2,
            BasisType::Type3 => Class::Type3,
            BasisType::Type4 => Class::Type4,
        }
    }
}

impl Class {
    pub fn basis_type(&self) -> Option<BasisType> {
        match self {
            Class::Type0 => Some(BasisType::Type0),
            Class::Type1 => Some(BasisType::Type1),
            Class::Type2 => Some(BasisType::Type2),
            Class::Type3 => Some(BasisType::Type3),
            Class::Type4 => Some(BasisType::Type4),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisClass {
    pub class: Class,
    /// Meaningful for wedge systems; for `H` it is set iff the point is Hamiltonian.
    pub quasi_hamiltonian: bool,
    /// Connected components of the basis arc set.
    pub components: usize,
    /// 2-core of node 1's component.
    pub two_core: SupportGraph,
    pub support: Option<SupportGraph>,
    pub balanced_cycle: Option<OrientedWalk>,
    /// For `H` systems: whether the structural verdict matches linear algebra.
    pub structural_agrees: Option<bool>,
}

/// Classify a basis (column indices) of `sys`. Wedge-system bases are typed by
/// their arc columns and the support of their basic solution.
pub fn classify_basis(sys: &PolytopeSystem, cols: &[usize]) -> Result<BasisClass, StructureError> {
    let n = sys.node_count();
    let solution = basic_solution(sys, cols)?;
    let arcs: Vec<Arc> = cols.iter().filter_map(|&c| sys.column(c).arc()).collect();
    let feasible = match &solution {
        BasicSolution::Singular => Err(InfeasibleReason::Singular),
        BasicSolution::Solved(s) => {
            let ok = match &s.exact {
                Some(ex) => ex.iter().all(|v| *v >= num_traits::Zero::zero()),
                None => s.values.iter().all(|&v| v >= -sys.tolerance()),
            };
            if ok {
                Ok(s)
            } else {
                Err(InfeasibleReason::NegativeSolution)
            }
        }
    };
    let comps = components(n, &arcs);
    let core1 = two_core(&SupportGraph::new(n, comps[0].1.iter().copied()));
    let structural = (sys.kind() == PolytopeKind::H).then(|| structural_verdict(n, &arcs));

    let mut out = BasisClass {
        class: Class::Unclassified,
        quasi_hamiltonian: false,
        components: comps.len(),
        two_core: core1,
        support: None,
        balanced_cycle: structural.as_ref().and_then(|s| s.balanced_cycle.clone()),
        structural_agrees: None,
    };
    match feasible {
        Err(reason) => {
            out.class = match &structural {
                Some(StructuralVerdict {
                    verdict: Verdict::Infeasible(r),
                    ..
                }) => Class::Infeasible(r.clone()),
                _ => Class::Infeasible(reason),
            };
            out.structural_agrees = structural.map(|s| !s.verdict.is_feasible());
        }
        Ok(sol) => {
            let supp = match &sol.exact {
                Some(ex) => support(ex, sys),
                None => support(&sol.values, sys),
            };
            out.class = if hamiltonian_cycle_in(n, &arcs).is_some() {
                Class::Type0
            } else {
                type_from_support(&supp).map_or(Class::Unclassified, Class::from)
            };
            out.quasi_hamiltonian = quasi_hamiltonian_cycle(sys.graph(), &sol.values).is_some();
            out.structural_agrees = structural.map(|s| match (s.verdict, out.class.basis_type()) {
                (Verdict::Feasible(a), Some(b)) => a == b,
                _ => false,
            });
            out.support = Some(supp);
        }
    }
    Ok(out)
}

/// Follow argmax successors from node 1 (values `x` indexed by `g`'s arc
/// order; ties within [`TIE_TOLERANCE`] are all followed). Returns the first
/// traced cycle if every trace is a Hamiltonian cycle.
pub fn quasi_hamiltonian_cycle(g: &DirectedGraph, x: &[f64]) -> Option<Vec<Node>> {
    let n = g.node_count();
    let mut choices: Vec<Vec<Node>> = vec![Vec::new(); n + 1];
    for i in 1..=n {
        let outs = g.out_neighbors(i).ok()?;
        let vals: Vec<f64> = outs
            .iter()
            .map(|&j| x[g.arc_index(i, j).unwrap()])
            .collect();
        let best = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        choices[i] = outs
            .iter()
            .zip(&vals)
            .filter(|(_, &v)| v >= best - TIE_TOLERANCE)
            .map(|(&j, _)| j)
            .collect();
    }
    let mut path = vec![1];
    let mut on = vec![false; n + 1];
    on[1] = true;
    let mut first = None;
    trace_all(n, &choices, &mut path, &mut on, &mut first).then(|| first.unwrap())
}

fn trace_all(
    n: usize,
    choices: &[Vec<Node>],
    path: &mut Vec<Node>,
    on: &mut [bool],
    first: &mut Option<Vec<Node>>,
) -> bool {
    let cur = *path.last().unwrap();
    if choices[cur].is_empty() {
        return false;
    }
    for &next in &choices[cur] {
        if path.len() == n {
            if next != 1 {
                return false;
            }
            first.get_or_insert_with(|| path.clone());
            continue;
        }
        if on[next] {
            return false;
        }
        on[next] = true;
        path.push(next);
        let ok = trace_all(n, choices, path, on, first);
        path.pop();
        on[next] = false;
        if !ok {
            return false;
        }
    }
    true
}

/// Quasi-Hamiltonian test on a solution vector indexed by the columns of `sys`.
pub fn is_quasi_hamiltonian(sys: &PolytopeSystem, x: &[f64]) -> bool {
    quasi_hamiltonian_cycle(sys.graph(), &x[..sys.arc_columns()]).is_some()
}
