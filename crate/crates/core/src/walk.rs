//! Uniform random walks over feasible bases: search until a target basis is
//! met, or count target bases met during a fixed number of moves.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::basis::{initial_feasible_basis, Basis, BasisError, PivotState};
use crate::graph::{Arc, Node};
use crate::linalg;
use crate::polytope::{wedge_beta_threshold, NumericMode, PolytopeKind, PolytopeSystem, PIVOT_TOLERANCE};
use crate::structure::{hamiltonian_cycle_in, quasi_hamiltonian_cycle, type_from_support, BasisType, SupportGraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkTarget {
    /// Quasi-Hamiltonian basis of a wedge system.
    QuasiHamiltonian,
    /// Basis whose arcs contain a Hamiltonian cycle.
    Hamiltonian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub max_step: u64,
    pub seed: u64,
    pub target: WalkTarget,
    pub record_types: bool,
}

impl WalkConfig {
    pub fn new(max_step: u64, seed: u64, target: WalkTarget) -> Self {
        WalkConfig {
            max_step,
            seed,
            target,
            record_types: false,
        }
    }

    pub fn with_types(mut self) -> Self {
        self.record_types = true;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkOutcome {
    /// Target met after `steps` moves (0 if the start basis already was one).
    Found { steps: u64, basis: Vec<usize> },
    /// Target not met: either `max_step` moves were made or the walk got
    /// stuck on a basis without feasible neighbours after `steps` moves.
    Fail { max_step: u64, steps: u64, isolated: bool },
    /// Counting walk that made all of its `steps` moves.
    Completed { steps: u64 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeHistogram {
    /// Visits by Type 0..=4.
    pub types: [u64; 5],
    pub unclassified: u64,
}

impl TypeHistogram {
    pub fn record(&mut self, t: Option<BasisType>) {
        match t {
            Some(t) => self.types[t.index()] += 1,
            None => self.unclassified += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.types.iter().sum::<u64>() + self.unclassified
    }

    pub fn count(&self, t: BasisType) -> u64 {
        self.types[t.index()]
    }

    pub fn share(&self, t: BasisType) -> f64 {
        self.count(t) as f64 / self.total().max(1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkResult {
    pub outcome: WalkOutcome,
    /// Target bases seen after moves (counting walks).
    pub visit_counter: u64,
    pub initial_basis: Vec<usize>,
    /// Class of every visited basis, by the support of its basic solution.
    pub type_histogram: Option<TypeHistogram>,
    /// Wedge systems only: visited points that are also extreme points of
    /// the unwedged polytope, by type.
    pub common_extreme_types: Option<TypeHistogram>,
    pub seed: u64,
}

impl WalkResult {
    pub fn found_steps(&self) -> Option<u64> {
        match self.outcome {
            WalkOutcome::Found { steps, .. } => Some(steps),
            _ => None,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    #[error("quasi-Hamiltonian target needs a wedge system")]
    TargetMismatch,
    #[error(transparent)]
    Basis(#[from] BasisError),
}

fn float_system(sys: &PolytopeSystem) -> PolytopeSystem {
    match sys.mode() {
        NumericMode::Float { .. } => sys.clone(),
        NumericMode::ExactRational => {
            PolytopeSystem::build(sys.graph(), sys.beta(), NumericMode::float(), sys.kind())
                .expect("parameters were validated when the exact system was built")
        }
    }
}

struct Walker<'a> {
    sys: &'a PolytopeSystem,
    target: WalkTarget,
    hist: Option<TypeHistogram>,
    common: Option<TypeHistogram>,
}

impl Walker<'_> {
    fn basic_arcs(&self, st: &PivotState) -> Vec<Arc> {
        (0..self.sys.arc_columns())
            .filter(|&c| st.is_basic(c))
            .map(|c| self.sys.graph().arcs()[c])
            .collect()
    }

    fn is_target(&self, st: &PivotState) -> bool {
        match self.target {
            WalkTarget::Hamiltonian => hamiltonian_cycle_in(self.sys.node_count(), &self.basic_arcs(st)).is_some(),
            WalkTarget::QuasiHamiltonian => {
                let x = st.values();
                quasi_hamiltonian_cycle(self.sys.graph(), &x[..self.sys.arc_columns()]).is_some()
            }
        }
    }

    fn record(&mut self, st: &PivotState) {
        if self.hist.is_none() {
            return;
        }
        let n = self.sys.node_count();
        let x = st.values();
        let tol = self.sys.tolerance();
        let supp_arcs: Vec<(usize, Arc)> = self
            .sys
            .graph()
            .arcs()
            .iter()
            .enumerate()
            .filter(|&(c, _)| x[c] > tol)
            .map(|(c, &a)| (c, a))
            .collect();
        let supp = SupportGraph::new(n, supp_arcs.iter().map(|p| p.1));
        let point_type = || {
            if hamiltonian_cycle_in(n, supp.arcs()).is_some() {
                Some(BasisType::Type0)
            } else {
                type_from_support(&supp)
            }
        };
        let basis_type = if hamiltonian_cycle_in(n, &self.basic_arcs(st)).is_some() {
            Some(BasisType::Type0)
        } else {
            point_type()
        };
        self.hist.as_mut().unwrap().record(basis_type);
        if let Some(common) = self.common.as_mut() {
            // Extreme point of the unwedged polytope iff the support columns
            // restricted to its rows are linearly independent.
            let rows = n + 1;
            let k = supp_arcs.len();
            if k <= rows {
                let mut a = vec![0.0; rows * k];
                for (slot, &(c, _)) in supp_arcs.iter().enumerate() {
                    for &(r, v) in self.sys.sparse_column(c) {
                        if r < rows {
                            a[r * k + slot] = v;
                        }
                    }
                }
                if linalg::rank(a, rows, k, PIVOT_TOLERANCE) == k {
                    common.record(point_type());
                }
            }
        }
    }
}

fn start<'a>(
    sys: &'a PolytopeSystem,
    cfg: &WalkConfig,
) -> Result<(Walker<'a>, PivotState<'a>, ChaCha8Rng, Basis), WalkError> {
    if cfg.target == WalkTarget::QuasiHamiltonian && sys.kind() != PolytopeKind::WH {
        return Err(WalkError::TargetMismatch);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let init = initial_feasible_basis(sys, rng.gen())?;
    let state = PivotState::new(sys, &init)?;
    let walker = Walker {
        sys,
        target: cfg.target,
        hist: cfg.record_types.then(TypeHistogram::default),
        common: (cfg.record_types && sys.kind() == PolytopeKind::WH).then(TypeHistogram::default),
    };
    Ok((walker, state, rng, init))
}

fn check_online(st: &PivotState, sys: &PolytopeSystem) {
    debug_assert!(
        st.min_value() >= -1e3 * sys.tolerance(),
        "walk left the feasible region: min basic value {}",
        st.min_value()
    );
}

/// Walk from a phase-1 start to uniformly random feasible neighbours until
/// the target predicate holds (checked on the start basis too) or
/// `max_step` moves were made.
pub fn walk_until_target(sys: &PolytopeSystem, cfg: &WalkConfig) -> Result<WalkResult, WalkError> {
    let fsys = float_system(sys);
    let (mut walker, mut st, mut rng, init) = start(&fsys, cfg)?;
    let mut steps = 0u64;
    let outcome = loop {
        walker.record(&st);
        if walker.is_target(&st) {
            break WalkOutcome::Found {
                steps,
                basis: st.columns(),
            };
        }
        if steps == cfg.max_step {
            break WalkOutcome::Fail {
                max_step: cfg.max_step,
                steps,
                isolated: false,
            };
        }
        let moves = st.feasible_moves();
        if moves.is_empty() {
            break WalkOutcome::Fail {
                max_step: cfg.max_step,
                steps,
                isolated: true,
            };
        }
        st.pivot(moves[rng.gen_range(0..moves.len())]);
        check_online(&st, &fsys);
        steps += 1;
    };
    Ok(WalkResult {
        outcome,
        visit_counter: 0,
        initial_basis: init.columns().to_vec(),
        type_histogram: walker.hist,
        common_extreme_types: walker.common,
        seed: cfg.seed,
    })
}

/// Make exactly `max_step` random moves, counting the target bases reached
/// after each move.
pub fn walk_count_visits(sys: &PolytopeSystem, cfg: &WalkConfig) -> Result<WalkResult, WalkError> {
    let fsys = float_system(sys);
    let (mut walker, mut st, mut rng, init) = start(&fsys, cfg)?;
    let mut counter = 0u64;
    let mut outcome = WalkOutcome::Completed { steps: cfg.max_step };
    for step in 0..cfg.max_step {
        let moves = st.feasible_moves();
        if moves.is_empty() {
            outcome = WalkOutcome::Fail {
                max_step: cfg.max_step,
                steps: step,
                isolated: true,
            };
            break;
        }
        st.pivot(moves[rng.gen_range(0..moves.len())]);
        check_online(&st, &fsys);
        if walker.is_target(&st) {
            counter += 1;
        }
        walker.record(&st);
    }
    Ok(WalkResult {
        outcome,
        visit_counter: counter,
        initial_basis: init.columns().to_vec(),
        type_histogram: walker.hist,
        common_extreme_types: walker.common,
        seed: cfg.seed,
    })
}

/// Whether the wedge rows are guaranteed to cut every non-Hamiltonian
/// extreme point other than Type 1 at this `β`.
pub fn wedge_filters_types_2_to_4(sys: &PolytopeSystem) -> bool {
    wedge_beta_threshold(sys.node_count()).is_ok_and(|t| sys.beta().value() > t)
}

/// Node order of the cycle traced from a found quasi-Hamiltonian basis.
pub fn traced_cycle(sys: &PolytopeSystem, cols: &[usize]) -> Option<Vec<Node>> {
    let b = Basis::new(sys, cols).ok()?;
    let s = b.solution().solution()?;
    quasi_hamiltonian_cycle(sys.graph(), &s.values[..sys.arc_columns()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_hamiltonian_binomial, DirectedGraph};
    use crate::polytope::{build_h, build_wh, Beta};

    #[test]
    fn chorded_cycle_is_found_immediately() {
        let g = DirectedGraph::new(4, [(1, 2), (2, 3), (3, 4), (4, 1), (2, 4)]).unwrap();
        let sys = build_h(&g, &Beta::float(0.9).unwrap(), NumericMode::float()).unwrap();
        let r = walk_until_target(&sys, &WalkConfig::new(10, 0, WalkTarget::Hamiltonian)).unwrap();
        assert_eq!(r.found_steps(), Some(0));
    }

    #[test]
    fn zero_steps_count_nothing() {
        let g = DirectedGraph::complete(4);
        let sys = build_wh(&g, &Beta::float(0.99).unwrap(), NumericMode::float()).unwrap();
        let r = walk_count_visits(&sys, &WalkConfig::new(0, 3, WalkTarget::QuasiHamiltonian)).unwrap();
        assert_eq!(r.visit_counter, 0);
        assert_eq!(r.outcome, WalkOutcome::Completed { steps: 0 });
    }

    #[test]
    fn target_must_match_kind() {
        let sys = build_h(&DirectedGraph::complete(4), &Beta::float(0.9).unwrap(), NumericMode::float()).unwrap();
        assert_eq!(
            walk_until_target(&sys, &WalkConfig::new(5, 0, WalkTarget::QuasiHamiltonian)),
            Err(WalkError::TargetMismatch)
        );
    }

    #[test]
    fn reproducible_and_one_swap_per_move() {
        let g = gen_hamiltonian_binomial(8, 0.3, 5).unwrap().graph;
        let sys = build_wh(&g, &Beta::float(0.999).unwrap(), NumericMode::float()).unwrap();
        let cfg = WalkConfig::new(300, 17, WalkTarget::QuasiHamiltonian).with_types();
        let a = walk_count_visits(&sys, &cfg).unwrap();
        let b = walk_count_visits(&sys, &cfg).unwrap();
        assert_eq!(a, b);
        assert!(a.visit_counter <= 300);
        assert_eq!(a.type_histogram.as_ref().unwrap().total(), 300);

        // Re-run the moves by hand and check every basis.
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let init = initial_feasible_basis(&sys, rng.gen()).unwrap();
        let mut st = PivotState::new(&sys, &init).unwrap();
        let mut prev = st.columns();
        for _ in 0..300 {
            let moves = st.feasible_moves();
            st.pivot(moves[rng.gen_range(0..moves.len())]);
            let cur = st.columns();
            let common = cur.iter().filter(|c| prev.binary_search(c).is_ok()).count();
            assert_eq!(common, sys.rows() - 1);
            assert!(Basis::new(&sys, &cur).unwrap().is_feasible(&sys));
            prev = cur;
        }
    }

    #[test]
    fn exact_systems_walk_in_floating_point() {
        let g = gen_hamiltonian_binomial(6, 0.4, 2).unwrap().graph;
        let sys = build_wh(&g, &Beta::rational(999, 1000).unwrap(), NumericMode::ExactRational).unwrap();
        let r = walk_until_target(&sys, &WalkConfig::new(2000, 1, WalkTarget::QuasiHamiltonian)).unwrap();
        let steps = r.found_steps().expect("small instance is solved quickly");
        assert!(steps <= 2000);
        let WalkOutcome::Found { basis, .. } = &r.outcome else { unreachable!() };
        let fsys = float_system(&sys);
        assert!(traced_cycle(&fsys, basis).is_some());
    }
}
