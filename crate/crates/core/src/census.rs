//! Exhaustive census of feasible bases of `H_β(G)` and the closed-form
//! counts it is checked against.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{gen_binomial, Arc, DirectedGraph, GraphError};
use crate::linalg::{self, bareiss_i128, IntSolution};
use crate::polytope::{build_h, Beta, NumericMode, PolytopeError, PolytopeSystem};
use crate::structure::{
    hamiltonian_cycle_in, structural_verdict, type_from_support, BasisType, SupportGraph, Verdict,
};

/// Default cap on the number of subsets a census may visit.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Subsets per parallel shard.
const SHARD: u64 = 1 << 15;

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("closed forms need n >= {min}, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("census needs exact arithmetic: β must be a ratio p/q")]
    NotExact,
    #[error("{subsets} subsets exceed the budget of {budget}")]
    BudgetExceeded { subsets: u128, budget: u64 },
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("need at least one trial")]
    NoTrials,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Coefficients of `p^{n+1}` in the expected per-type basis counts of
/// `G_{n,p}`, i.e. the counts for `K_n`. `f4_lower` bounds Type 4 from below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedForm {
    pub n: usize,
    #[serde(with = "biguint_string")]
    pub f0: BigUint,
    #[serde(with = "biguint_string")]
    pub f1: BigUint,
    #[serde(with = "biguint_string")]
    pub f2: BigUint,
    #[serde(with = "biguint_string")]
    pub f3: BigUint,
    #[serde(with = "biguint_string")]
    pub f4_lower: BigUint,
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

impl ClosedForm {
    /// `[f0, f1, f2, f3, f4_lower]`.
    pub fn as_array(&self) -> [&BigUint; 5] {
        [&self.f0, &self.f1, &self.f2, &self.f3, &self.f4_lower]
    }
}

pub fn closed_form_counts(n: usize) -> Result<ClosedForm, CensusError> {
    if n < 4 {
        return Err(CensusError::TooSmall { n, min: 4 });
    }
    let nf = factorial(n);
    let n1f = factorial(n - 1);
    let f0 = &nf * (n - 2);
    let f1 = &nf * (n - 3) / 2u32;
    let f2 = n1f * ((n - 4) * (n - 3) * (n + 1)) / 6u32;
    let f3 = &nf * ((n - 2) * (n - 1)) / 6u32;
    let base = (n - 1) * (n - 2);
    let f4_lower = if n >= 5 {
        BigUint::from(base) * BigUint::from(n - 3).pow((n - 5) as u32) * BigUint::from(2u32).pow((n - 4) as u32)
    } else {
        // (n-3)^{n-5} = 1/1 and 2^{n-4} = 1 at n = 4.
        BigUint::from(base)
    };
    Ok(ClosedForm {
        n,
        f0,
        f1,
        f2,
        f3,
        f4_lower,
    })
}

/// `f_k(n) p^{n+1}` for Types 0–3 and the Type-4 lower bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectedCounts {
    pub n: usize,
    pub p: f64,
    /// Types 0..=3 followed by the Type-4 lower bound.
    pub values: [f64; 5],
}

impl ExpectedCounts {
    /// Share of Hamiltonian bases among the listed expectations.
    pub fn hamiltonian_share(&self) -> f64 {
        let total: f64 = self.values.iter().sum();
        self.values[0] / total
    }
}

fn big_to_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

pub fn expected_counts(n: usize, p: f64) -> Result<ExpectedCounts, CensusError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CensusError::InvalidProbability(p));
    }
    let cf = closed_form_counts(n)?;
    let scale = p.powi(n as i32 + 1);
    let values = cf.as_array().map(|f| big_to_f64(f) * scale);
    Ok(ExpectedCounts { n, p, values })
}

/// Per-class tallies of a (partial) census; merging is associative.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub subsets: u64,
    pub singular: u64,
    pub negative: u64,
    /// Feasible subsets by type 0..=4.
    pub types: [u64; 5],
    /// Feasible subsets whose support matches no type (expected to stay 0).
    pub unclassified: u64,
    /// Subsets where the structural verdict and linear algebra differ.
    pub disagreements: u64,
}

impl Tally {
    pub fn merge(mut self, other: Tally) -> Tally {
        self.subsets += other.subsets;
        self.singular += other.singular;
        self.negative += other.negative;
        for k in 0..5 {
            self.types[k] += other.types[k];
        }
        self.unclassified += other.unclassified;
        self.disagreements += other.disagreements;
        self
    }

    pub fn feasible(&self) -> u64 {
        self.types.iter().sum::<u64>() + self.unclassified
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub n: usize,
    pub beta: String,
    pub arcs: usize,
    pub tally: Tally,
    pub closed_form: Option<ClosedForm>,
}

impl CensusReport {
    pub fn count(&self, t: BasisType) -> u64 {
        self.tally.types[t.index()]
    }

    /// Text table: one row per type with the census count and closed form.
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "census n={} beta={} arcs={} subsets={}\n{:<8}{:>14}{:>22}\n",
            self.n, self.beta, self.arcs, self.tally.subsets, "type", "count", "closed form"
        );
        for t in BasisType::ALL {
            let cf = self.closed_form.as_ref().map_or(String::from("-"), |cf| {
                let v = cf.as_array()[t.index()].to_string();
                if t == BasisType::Type4 {
                    format!(">= {v}")
                } else {
                    v
                }
            });
            s += &format!("{:<8}{:>14}{:>22}\n", format!("{t:?}"), self.count(t), cf);
        }
        s += &format!(
            "singular={} negative={} unclassified={} disagreements={}\n",
            self.tally.singular, self.tally.negative, self.tally.unclassified, self.tally.disagreements
        );
        s
    }
}

/// `C(n, k)` without overflow for the sizes used here.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
pub fn unrank_combination(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        loop {
            let rest = binomial((n - next - 1) as u64, (k - slot - 1) as u64);
            if rank < rest {
                break;
            }
            rank -= rest;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Advance to the lexicographic successor; `false` after the last subset.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 && idx[i - 1] == n - k + i - 1 {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    idx[i - 1] += 1;
    for t in i..k {
        idx[t] = idx[t - 1] + 1;
    }
    true
}

/// Linear-algebra outcome for one subset of arc columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicOutcome {
    Singular,
    Negative,
    /// Feasible; the mask marks basic columns with nonzero value.
    Feasible(Vec<bool>),
}

/// Reusable buffers for [`algebraic_outcome`].
#[derive(Default)]
pub struct Scratch {
    aug: Vec<i128>,
}

/// Exact B1/B2 test of the columns `cols` of an exact system.
pub fn algebraic_outcome(sys: &PolytopeSystem, cols: &[usize], scratch: &mut Scratch) -> AlgebraicOutcome {
    let ex = sys
        .exact_system()
        .expect("census runs on exact systems");
    let m = sys.rows();
    let w = m + 1;
    // A row without any nonzero entry makes the basis matrix singular.
    let mut covered = 0u128;
    for &c in cols {
        for &(r, _) in &ex.int_columns[c] {
            covered |= 1 << r;
        }
    }
    if m <= 128 && covered.count_ones() as usize != m {
        return AlgebraicOutcome::Singular;
    }
    let solved = match &ex.rhs_small {
        Some(rhs) => {
            scratch.aug.clear();
            scratch.aug.resize(m * w, 0);
            for (k, &c) in cols.iter().enumerate() {
                for &(r, v) in &ex.int_columns[c] {
                    scratch.aug[r * w + k] = v as i128;
                }
            }
            for r in 0..m {
                scratch.aug[r * w + m] = rhs[r];
            }
            bareiss_i128(&mut scratch.aug, m).map(IntSolution::widen)
        }
        None => None,
    };
    let solved = solved.unwrap_or_else(|| crate::basis::exact_kernel(sys, cols));
    match solved {
        IntSolution::Singular => AlgebraicOutcome::Singular,
        IntSolution::Solved { num, det } => {
            if linalg::nonnegative(&num, &det) {
                AlgebraicOutcome::Feasible(num.iter().map(|v| v != &0.into()).collect())
            } else {
                AlgebraicOutcome::Negative
            }
        }
    }
}

fn classify_subset(sys: &PolytopeSystem, cols: &[usize], arcs: &[Arc], scratch: &mut Scratch, tally: &mut Tally) {
    let n = sys.node_count();
    tally.subsets += 1;
    let structural = structural_verdict(n, arcs).verdict;
    let algebraic = algebraic_outcome(sys, cols, scratch);
    let la_type = match algebraic {
        AlgebraicOutcome::Singular => {
            tally.singular += 1;
            None
        }
        AlgebraicOutcome::Negative => {
            tally.negative += 1;
            None
        }
        AlgebraicOutcome::Feasible(mask) => {
            let t = if hamiltonian_cycle_in(n, arcs).is_some() {
                Some(BasisType::Type0)
            } else {
                let supp = SupportGraph::new(
                    n,
                    arcs.iter().zip(&mask).filter(|(_, &nz)| nz).map(|(&a, _)| a),
                );
                type_from_support(&supp)
            };
            match t {
                Some(t) => tally.types[t.index()] += 1,
                None => tally.unclassified += 1,
            }
            Some(t)
        }
    };
    let agree = match (&structural, la_type) {
        (Verdict::Infeasible(_), None) => true,
        (Verdict::Feasible(a), Some(Some(b))) => *a == b,
        _ => false,
    };
    if !agree {
        tally.disagreements += 1;
    }
}

/// Census of subsets with lexicographic ranks in `start..start + count`.
pub fn census_range(sys: &PolytopeSystem, start: u128, count: u64) -> Tally {
    let arcs_all = sys.graph().arcs();
    let e = arcs_all.len();
    let k = sys.rows();
    let mut tally = Tally::default();
    if count == 0 || k > e {
        return tally;
    }
    let mut idx = unrank_combination(e, k, start);
    let mut arcs = vec![(0, 0); k];
    let mut scratch = Scratch::default();
    for done in 0..count {
        for (slot, &c) in idx.iter().enumerate() {
            arcs[slot] = arcs_all[c];
        }
        classify_subset(sys, &idx, &arcs, &mut scratch, &mut tally);
        if done + 1 < count && !next_combination(&mut idx, e) {
            break;
        }
    }
    tally
}

/// Visit every `(n+1)`-subset of the arcs of `g`, decide feasibility exactly
/// and by the structural verdict, and tally feasible subsets by type.
pub fn enumerate_feasible_bases(g: &DirectedGraph, beta: &Beta, budget: u64) -> Result<CensusReport, CensusError> {
    if !beta.is_exact() {
        return Err(CensusError::NotExact);
    }
    let sys = build_h(g, beta, NumericMode::ExactRational)?;
    let n = g.node_count();
    let total = binomial(g.arc_count() as u64, (n + 1) as u64);
    if total > budget as u128 {
        return Err(CensusError::BudgetExceeded {
            subsets: total,
            budget,
        });
    }
    let total = total as u64;
    let shards = total.div_ceil(SHARD);
    let tally = (0..shards)
        .into_par_iter()
        .map(|s| {
            let start = s * SHARD;
            census_range(&sys, start as u128, SHARD.min(total - start))
        })
        .reduce(Tally::default, Tally::merge);
    Ok(CensusReport {
        n,
        beta: beta.to_string(),
        arcs: g.arc_count(),
        tally,
        closed_form: closed_form_counts(n).ok(),
    })
}

/// Sample mean and standard error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Estimate {
        let t = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / t;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1.0)
        } else {
            0.0
        };
        Estimate {
            mean,
            std_error: (var / t).sqrt(),
        }
    }

    /// `|mean - target| <= k · SE`.
    pub fn within(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + 1e-12
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub beta: String,
    pub seed: u64,
    /// Per-type estimates of the feasible-basis count of `G_{n,p}`.
    pub types: [Estimate; 5],
    pub expected: ExpectedCounts,
    pub disagreements: u64,
}

/// Seed of trial `t` derived from the run seed (SplitMix64 finaliser).
pub fn trial_seed(seed: u64, t: u64) -> u64 {
    let mut z = seed ^ t.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Average per-type census counts over `trials` independent `G_{n,p}` draws.
pub fn monte_carlo_census(
    n: usize,
    p: f64,
    trials: usize,
    beta: &Beta,
    seed: u64,
) -> Result<MonteCarloReport, CensusError> {
    if trials == 0 {
        return Err(CensusError::NoTrials);
    }
    let expected = expected_counts(n, p)?;
    let tallies = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let g = gen_binomial(n, p, trial_seed(seed, t))?;
            Ok(enumerate_feasible_bases(&g, beta, DEFAULT_BUDGET)?.tally)
        })
        .collect::<Result<Vec<Tally>, CensusError>>()?;
    let types = std::array::from_fn(|k| {
        let xs: Vec<f64> = tallies.iter().map(|t| t.types[k] as f64).collect();
        Estimate::from_samples(&xs)
    });
    Ok(MonteCarloReport {
        n,
        p,
        trials,
        beta: beta.to_string(),
        seed,
        types,
        expected,
        disagreements: tallies.iter().map(|t| t.disagreements).sum(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatioBounds {
    pub n: usize,
    /// `1 - n^{11/2} / (e^n 2^{n-9})`.
    pub type4_share_lower: f64,
    /// `n^{9/2} / (e^{n-1} 2^{n-9})`.
    pub hamiltonian_share_upper: f64,
    /// `f0 / (f0 + f1 + f2 + f3 + f4_lower)`: an upper bound on the true share.
    pub closed_form_hamiltonian_share: f64,
    /// `f4_lower / (f0 + f1 + f2 + f3 + f4_lower)`.
    pub closed_form_type4_share: f64,
}

pub fn ratio_bounds(n: usize) -> Result<RatioBounds, CensusError> {
    if n < 5 {
        return Err(CensusError::TooSmall { n, min: 5 });
    }
    let nf = n as f64;
    let ln2 = std::f64::consts::LN_2;
    let t4 = (5.5 * nf.ln() - nf - (nf - 9.0) * ln2).exp();
    let ham = (4.5 * nf.ln() - (nf - 1.0) - (nf - 9.0) * ln2).exp();
    let cf = closed_form_counts(n)?;
    let total: BigUint = cf.as_array().into_iter().sum();
    let share = |v: &BigUint| {
        BigRational::new(v.clone().into(), total.clone().into())
            .to_f64()
            .unwrap_or(f64::NAN)
    };
    Ok(RatioBounds {
        n,
        type4_share_lower: 1.0 - t4,
        hamiltonian_share_upper: ham,
        closed_form_hamiltonian_share: share(&cf.f0),
        closed_form_type4_share: share(&cf.f4_lower),
    })
}
