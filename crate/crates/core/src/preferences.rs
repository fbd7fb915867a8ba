//! Concrete distributional-preference families: additive, pointwise,
//! matroid-rank, dichotomous and soft floors/ceilings, and diversity-index
//! preferences with a q-ordinal-concavity checker.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::frontier::{frontier, DEFAULT_MAX_SUBSETS};
use crate::matroid::MatroidOracle;
use crate::pref::{Comparison, DistributionalPreference, SCORE_TOLERANCE};
use crate::set::{GroundSet, Student, StudentSet};

/// Per-student real value, one entry per ground-set member.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueFunction {
    values: Vec<f64>,
}

impl ValueFunction {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(values.iter().all(|v| v.is_finite()));
        ValueFunction { values }
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn value(&self, s: Student) -> f64 {
        self.values[s]
    }

    pub fn sum(&self, set: StudentSet) -> f64 {
        set.iter().map(|s| self.values[s]).sum()
    }

    /// Values of the members, highest first.
    pub fn sorted_desc(&self, set: StudentSet) -> Vec<f64> {
        let mut vals: Vec<f64> = set.iter().map(|s| self.values[s]).collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        vals
    }
}

/// Per-student type index into a type list of size `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeAssignment {
    tau: Vec<usize>,
    k: usize,
}

impl TypeAssignment {
    pub fn new(tau: Vec<usize>, k: usize) -> Self {
        assert!(tau.iter().all(|&t| t < k));
        TypeAssignment { tau, k }
    }

    pub fn n(&self) -> usize {
        self.tau.len()
    }

    pub fn type_count(&self) -> usize {
        self.k
    }

    pub fn type_of(&self, s: Student) -> usize {
        self.tau[s]
    }

    /// Count vector `(|S_1|, ..., |S_k|)`.
    pub fn counts(&self, set: StudentSet) -> Vec<usize> {
        let mut counts = vec![0usize; self.k];
        for s in set.iter() {
            counts[self.tau[s]] += 1;
        }
        counts
    }
}

/// Per-type floor and ceiling, with `floor <= ceiling`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds {
    floors: Vec<usize>,
    ceilings: Vec<usize>,
}

impl Bounds {
    pub fn new(floors: Vec<usize>, ceilings: Vec<usize>) -> Result<Self, Error> {
        assert_eq!(floors.len(), ceilings.len());
        for (t, (&r, &p)) in floors.iter().zip(&ceilings).enumerate() {
            if r > p {
                return Err(Error::InvalidBounds {
                    type_index: t,
                    floor: r,
                    ceiling: p,
                });
            }
        }
        Ok(Bounds { floors, ceilings })
    }

    pub fn type_count(&self) -> usize {
        self.floors.len()
    }

    pub fn floor(&self, t: usize) -> usize {
        self.floors[t]
    }

    pub fn ceiling(&self, t: usize) -> usize {
        self.ceilings[t]
    }
}

/// True iff every type count of `set` lies within its floor/ceiling range.
pub fn satisfies_bounds(set: StudentSet, tau: &TypeAssignment, bounds: &Bounds) -> bool {
    tau.counts(set)
        .iter()
        .enumerate()
        .all(|(t, &c)| bounds.floor(t) <= c && c <= bounds.ceiling(t))
}

/// Total order by sum of per-student values; ties are Indifferent.
#[derive(Clone, Debug)]
pub struct AdditivePreference {
    f: ValueFunction,
}

pub fn additive_preference(f: ValueFunction) -> AdditivePreference {
    AdditivePreference { f }
}

impl DistributionalPreference for AdditivePreference {
    fn compare(&self, a: StudentSet, b: StudentSet) -> Comparison {
        Comparison::from_f64(self.f.sum(a), self.f.sum(b), SCORE_TOLERANCE)
    }

    fn is_complete(&self) -> bool {
        true
    }
}

/// Coordinate-wise domination of sorted value profiles; a genuine partial
/// order with incomparable pairs.
#[derive(Clone, Debug)]
pub struct PointwisePreference {
    f: ValueFunction,
}

pub fn pointwise_preference(f: ValueFunction) -> PointwisePreference {
    PointwisePreference { f }
}

impl DistributionalPreference for PointwisePreference {
    fn compare(&self, a: StudentSet, b: StudentSet) -> Comparison {
        let va = self.f.sorted_desc(a);
        let vb = self.f.sorted_desc(b);
        debug_assert_eq!(va.len(), vb.len());
        let a_weak = va
            .iter()
            .zip(&vb)
            .all(|(&x, &y)| x >= y - SCORE_TOLERANCE);
        let b_weak = va
            .iter()
            .zip(&vb)
            .all(|(&x, &y)| y >= x - SCORE_TOLERANCE);
        match (a_weak, b_weak) {
            (true, true) => Comparison::Indifferent,
            (true, false) => Comparison::StrictlyBetter,
            (false, true) => Comparison::StrictlyWorse,
            (false, false) => Comparison::Incomparable,
        }
    }

    fn equal_size_only(&self) -> bool {
        true
    }
}

/// Two indifference classes: sets satisfying the bounds strictly above all
/// sets that do not.
#[derive(Clone, Debug)]
pub struct DichotomousBoundsPreference {
    tau: TypeAssignment,
    bounds: Bounds,
}

pub fn dichotomous_bounds_preference(
    tau: TypeAssignment,
    bounds: Bounds,
) -> DichotomousBoundsPreference {
    assert_eq!(tau.type_count(), bounds.type_count());
    DichotomousBoundsPreference { tau, bounds }
}

impl DichotomousBoundsPreference {
    pub fn is_desirable(&self, set: StudentSet) -> bool {
        satisfies_bounds(set, &self.tau, &self.bounds)
    }
}

impl DistributionalPreference for DichotomousBoundsPreference {
    fn compare(&self, a: StudentSet, b: StudentSet) -> Comparison {
        match (self.is_desirable(a), self.is_desirable(b)) {
            (true, false) => Comparison::StrictlyBetter,
            (false, true) => Comparison::StrictlyWorse,
            _ => Comparison::Indifferent,
        }
    }

    fn is_complete(&self) -> bool {
        true
    }
}

/// Floors/ceilings scored by per-type error terms. A unit of floor violation
/// costs `floor_penalty`, a unit of ceiling violation costs 1, feasible types
/// cost 0; sets compare by total error.
#[derive(Clone, Debug)]
pub struct SoftBoundsPreference {
    tau: TypeAssignment,
    bounds: Bounds,
    floor_penalty: i64,
}

/// The floor penalty defaults to `q + 1`: the total ceiling penalty of a
/// size-`q` set is at most `q`, so a single floor-violation unit outweighs
/// every ceiling penalty and floors are met lexicographically first.
pub fn soft_bounds_preference(
    tau: TypeAssignment,
    bounds: Bounds,
    q: usize,
) -> SoftBoundsPreference {
    assert_eq!(tau.type_count(), bounds.type_count());
    SoftBoundsPreference {
        tau,
        bounds,
        floor_penalty: q as i64 + 1,
    }
}

impl SoftBoundsPreference {
    pub fn with_floor_penalty(mut self, penalty: i64) -> Self {
        assert!(penalty >= 1);
        self.floor_penalty = penalty;
        self
    }

    /// Total error of `set`: non-positive, zero iff the bounds hold.
    pub fn error(&self, set: StudentSet) -> i64 {
        self.tau
            .counts(set)
            .iter()
            .enumerate()
            .map(|(t, &c)| {
                let (r, p) = (self.bounds.floor(t) as i64, self.bounds.ceiling(t) as i64);
                let c = c as i64;
                if c < r {
                    -self.floor_penalty * (r - c)
                } else if c > p {
                    -(c - p)
                } else {
                    0
                }
            })
            .sum()
    }
}

impl DistributionalPreference for SoftBoundsPreference {
    fn compare(&self, a: StudentSet, b: StudentSet) -> Comparison {
        Comparison::from_ord(self.error(a), self.error(b))
    }

    fn is_complete(&self) -> bool {
        true
    }
}

/// Rank-function preference: sets compare by the size of their largest
/// independent subset. Exposes the oracle for the greedy fast path.
pub struct MatroidRankPreference<M: MatroidOracle> {
    oracle: M,
}

pub fn matroid_rank_preference<M: MatroidOracle>(oracle: M) -> MatroidRankPreference<M> {
    MatroidRankPreference { oracle }
}

impl<M: MatroidOracle> MatroidRankPreference<M> {
    pub fn oracle(&self) -> &M {
        &self.oracle
    }
}

impl<M: MatroidOracle> DistributionalPreference for MatroidRankPreference<M> {
    fn compare(&self, a: StudentSet, b: StudentSet) -> Comparison {
        Comparison::from_ord(
            crate::matroid::rank(&self.oracle, a),
            crate::matroid::rank(&self.oracle, b),
        )
    }

    fn is_complete(&self) -> bool {
        true
    }

    fn equal_size_only(&self) -> bool {
        true
    }

    fn matroid_backing(&self) -> Option<&dyn MatroidOracle> {
        Some(&self.oracle)
    }
}

/// A diversity index over type-count vectors, calibrated for capacity `q`.
/// Evaluated on count vectors only, never on raw sets, so type symmetry holds
/// by construction.
pub struct DiversityIndex {
    q: usize,
    eval: Box<dyn Fn(&[usize]) -> f64 + Send + Sync>,
}

impl DiversityIndex {
    pub fn new(q: usize, eval: impl Fn(&[usize]) -> f64 + Send + Sync + 'static) -> Self {
        DiversityIndex {
            q,
            eval: Box::new(eval),
        }
    }

    /// `f(ξ) = Σ log(1 + ξ_i)`: diminishing returns to each type.
    pub fn log(q: usize) -> Self {
        DiversityIndex::new(q, |xi| {
            xi.iter().map(|&c| ((1 + c) as f64).ln()).sum()
        })
    }

    /// `f(ξ) = Σ c_i ξ_i`.
    pub fn linear(q: usize, coefficients: Vec<f64>) -> Self {
        DiversityIndex::new(q, move |xi| {
            xi.iter()
                .zip(&coefficients)
                .map(|(&c, w)| c as f64 * w)
                .sum()
        })
    }

    /// Explicit table of count vector to value; panics on a vector absent
    /// from the table.
    pub fn from_table(q: usize, entries: HashMap<Vec<usize>, f64>) -> Self {
        DiversityIndex::new(q, move |xi| {
            *entries
                .get(xi)
                .unwrap_or_else(|| panic!("diversity table has no entry for {xi:?}"))
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn eval(&self, xi: &[usize]) -> f64 {
        (self.eval)(xi)
    }
}

/// Complete preference on size-`q` sets via a diversity index evaluated at
/// type-count vectors.
pub struct DiversityPreference {
    tau: TypeAssignment,
    index: DiversityIndex,
}

pub fn diversity_preference(tau: TypeAssignment, index: DiversityIndex) -> DiversityPreference {
    DiversityPreference { tau, index }
}

impl DistributionalPreference for DiversityPreference {
    fn compare(&self, a: StudentSet, b: StudentSet) -> Comparison {
        Comparison::from_f64(
            self.index.eval(&self.tau.counts(a)),
            self.index.eval(&self.tau.counts(b)),
            SCORE_TOLERANCE,
        )
    }

    fn is_complete(&self) -> bool {
        true
    }

    fn equal_size_only(&self) -> bool {
        true
    }
}

/// A q-ordinal-concavity failure: for `i` with `xi[i] > xi_tilde[i]`, no
/// index `j` with `xi[j] < xi_tilde[j]` satisfies any of the three clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConcavityViolation {
    pub xi: Vec<usize>,
    pub xi_tilde: Vec<usize>,
    pub i: usize,
}

/// Enumerate all count-vector pairs with total `q` over `k` types and verify
/// the q-ordinal concavity definition clause by clause.
pub fn check_q_ordinal_concavity(
    index: &DiversityIndex,
    k: usize,
    q: usize,
) -> Vec<ConcavityViolation> {
    let domain = compositions(q, k);
    let mut violations = Vec::new();
    for xi in &domain {
        for xi_tilde in &domain {
            for i in 0..k {
                if xi[i] <= xi_tilde[i] {
                    continue;
                }
                let f_xi = index.eval(xi);
                let f_tilde = index.eval(xi_tilde);
                let witnessed = (0..k).any(|j| {
                    if xi[j] >= xi_tilde[j] {
                        return false;
                    }
                    let mut xi_moved = xi.clone();
                    xi_moved[i] -= 1;
                    xi_moved[j] += 1;
                    let mut tilde_moved = xi_tilde.clone();
                    tilde_moved[i] += 1;
                    tilde_moved[j] -= 1;
                    let f_xi_moved = index.eval(&xi_moved);
                    let f_tilde_moved = index.eval(&tilde_moved);
                    f_xi_moved > f_xi + SCORE_TOLERANCE
                        || f_tilde_moved > f_tilde + SCORE_TOLERANCE
                        || ((f_tilde_moved - f_tilde).abs() <= SCORE_TOLERANCE
                            && (f_xi_moved - f_xi).abs() <= SCORE_TOLERANCE)
                });
                if !witnessed {
                    violations.push(ConcavityViolation {
                        xi: xi.clone(),
                        xi_tilde: xi_tilde.clone(),
                        i,
                    });
                }
            }
        }
    }
    violations
}

/// All vectors in ℤ₊^k summing to `total`, in lexicographic order.
pub fn compositions(total: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            go(total - first, k - 1, prefix, out);
            prefix.pop();
        }
    }
    assert!(k >= 1);
    let mut out = Vec::new();
    go(total, k, &mut Vec::new(), &mut out);
    out
}

/// Menus where the additive and pointwise preferences built from the same
/// value function induce different frontiers. Exhaustive for `n <= 12`,
/// sampled with a fixed seed above.
pub fn same_frontier_check(ground: &GroundSet, f: &ValueFunction, q: usize) -> Vec<StudentSet> {
    assert!(q <= ground.n());
    let additive = additive_preference(f.clone());
    let pointwise = pointwise_preference(f.clone());
    let menus: Vec<StudentSet> = if ground.n() <= 12 {
        ground.all().subsets()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xF005);
        let mask = ground.all().bits();
        (0..4096)
            .map(|_| StudentSet::from_bits(rng.gen::<u64>() & mask))
            .collect()
    };
    let mut differing = Vec::new();
    for menu in menus {
        let fa = frontier(&additive, menu, q, DEFAULT_MAX_SUBSETS).unwrap();
        let fp = frontier(&pointwise, menu, q, DEFAULT_MAX_SUBSETS).unwrap();
        if fa.members != fp.members {
            differing.push(menu);
        }
    }
    differing
}
