//! Matroid oracles: partition, transversal, and vector constructions, the
//! greedy rank/basis algorithms, and executable base/independence axioms.

use num_rational::Ratio;
use num_traits::Zero;

use crate::preferences::TypeAssignment;
use crate::set::{PriorityRanking, Student, StudentSet};

/// Independence oracle over a declared ground set.
pub trait MatroidOracle {
    fn ground_size(&self) -> usize;
    fn is_independent(&self, set: StudentSet) -> bool;
}

impl<M: MatroidOracle + ?Sized> MatroidOracle for &M {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn is_independent(&self, set: StudentSet) -> bool {
        (**self).is_independent(set)
    }
}

/// Rank of `set`: size of its largest independent subset. Computed by the
/// greedy scan, which is correct by the matroid exchange property.
pub fn rank(oracle: &dyn MatroidOracle, set: StudentSet) -> usize {
    let mut kept = StudentSet::EMPTY;
    for s in set.iter() {
        if oracle.is_independent(kept.with(s)) {
            kept = kept.with(s);
        }
    }
    kept.len()
}

/// Scan `pool` in priority order, keeping each student whose addition stays
/// independent. Returns a maximal independent subset of `pool`, which
/// priority-dominates every independent subset of `pool`.
pub fn greedy_basis(
    oracle: &dyn MatroidOracle,
    pool: StudentSet,
    pi: &PriorityRanking,
) -> StudentSet {
    let mut kept = StudentSet::EMPTY;
    for s in pi.sort_best_first(pool) {
        if oracle.is_independent(kept.with(s)) {
            kept = kept.with(s);
        }
    }
    kept
}

/// Reserved positions per type: a set is independent iff every type count is
/// within its capacity.
#[derive(Clone, Debug)]
pub struct PartitionMatroid {
    tau: TypeAssignment,
    capacities: Vec<usize>,
}

pub fn partition_matroid(tau: TypeAssignment, capacities: Vec<usize>) -> PartitionMatroid {
    assert_eq!(capacities.len(), tau.type_count());
    PartitionMatroid { tau, capacities }
}

impl PartitionMatroid {
    /// Closed-form rank: sum over types of `min(k_i, type count)`.
    pub fn rank_formula(&self, set: StudentSet) -> usize {
        self.tau
            .counts(set)
            .iter()
            .zip(&self.capacities)
            .map(|(&c, &k)| c.min(k))
            .sum()
    }
}

impl MatroidOracle for PartitionMatroid {
    fn ground_size(&self) -> usize {
        self.tau.n()
    }

    fn is_independent(&self, set: StudentSet) -> bool {
        self.tau
            .counts(set)
            .iter()
            .zip(&self.capacities)
            .all(|(&c, &k)| c <= k)
    }
}

/// Overlapping reserve slots: a set is independent iff it can be matched
/// injectively into the slots it is eligible for.
#[derive(Clone, Debug)]
pub struct TransversalMatroid {
    n: usize,
    slots: Vec<StudentSet>,
}

pub fn transversal_matroid(n: usize, slots: Vec<StudentSet>) -> TransversalMatroid {
    TransversalMatroid { n, slots }
}

impl TransversalMatroid {
    /// Maximum bipartite matching between `set` and the slots, by augmenting
    /// paths. Hopcroft-Karp is unnecessary at desk scale.
    fn max_matching(&self, set: StudentSet) -> usize {
        let students: Vec<Student> = set.iter().collect();
        let mut slot_of = vec![usize::MAX; students.len()];
        let mut student_of = vec![usize::MAX; self.slots.len()];

        fn augment(
            u: usize,
            students: &[Student],
            slots: &[StudentSet],
            slot_of: &mut [usize],
            student_of: &mut [usize],
            visited: &mut [bool],
        ) -> bool {
            for (i, slot) in slots.iter().enumerate() {
                if slot.contains(students[u]) && !visited[i] {
                    visited[i] = true;
                    if student_of[i] == usize::MAX
                        || augment(student_of[i], students, slots, slot_of, student_of, visited)
                    {
                        slot_of[u] = i;
                        student_of[i] = u;
                        return true;
                    }
                }
            }
            false
        }

        let mut matched = 0;
        for u in 0..students.len() {
            let mut visited = vec![false; self.slots.len()];
            if augment(
                u,
                &students,
                &self.slots,
                &mut slot_of,
                &mut student_of,
                &mut visited,
            ) {
                matched += 1;
            }
        }
        matched
    }
}

impl MatroidOracle for TransversalMatroid {
    fn ground_size(&self) -> usize {
        self.n
    }

    fn is_independent(&self, set: StudentSet) -> bool {
        self.max_matching(set) == set.len()
    }
}

/// Attribute diversity: independence of 0/1 attribute vectors over the
/// rationals, via exact Gaussian elimination.
#[derive(Clone, Debug)]
pub struct VectorMatroid {
    vectors: Vec<Vec<u8>>,
    dim: usize,
}

pub fn vector_matroid(vectors: Vec<Vec<u8>>) -> VectorMatroid {
    let dim = vectors.first().map_or(0, |v| v.len());
    assert!(vectors.iter().all(|v| v.len() == dim));
    VectorMatroid { vectors, dim }
}

impl VectorMatroid {
    /// Rank of the span of the attribute vectors of `set`, over ℚ.
    pub fn elimination_rank(&self, set: StudentSet) -> usize {
        let mut rows: Vec<Vec<Ratio<i64>>> = set
            .iter()
            .map(|s| {
                self.vectors[s]
                    .iter()
                    .map(|&x| Ratio::from_integer(i64::from(x)))
                    .collect()
            })
            .collect();
        let mut rank = 0;
        for col in 0..self.dim {
            let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, pivot);
            let inv = rows[rank][col].recip();
            for r in rank + 1..rows.len() {
                if rows[r][col].is_zero() {
                    continue;
                }
                let factor = rows[r][col] * inv;
                for c in col..self.dim {
                    let sub = factor * rows[rank][c];
                    rows[r][c] -= sub;
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }
}

impl MatroidOracle for VectorMatroid {
    fn ground_size(&self) -> usize {
        self.vectors.len()
    }

    fn is_independent(&self, set: StudentSet) -> bool {
        self.elimination_rank(set) == set.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseAxiomViolation {
    /// B1: the collection of bases is empty.
    Empty,
    /// Bases of a matroid are equicardinal.
    UnequalCardinality { a: StudentSet, b: StudentSet },
    /// B2: no one-sided exchange for `s` from `a` toward `b`.
    ExchangeFailure {
        a: StudentSet,
        b: StudentSet,
        s: Student,
    },
    /// No simultaneous exchange for `s` from `a` toward `b`.
    StrongExchangeFailure {
        a: StudentSet,
        b: StudentSet,
        s: Student,
    },
}

/// Verify B1, equicardinality, B2, and the strong exchange property on an
/// explicit collection of candidate bases. Every violation carries a witness.
pub fn check_base_axioms(bases: &[StudentSet]) -> Vec<BaseAxiomViolation> {
    let mut violations = Vec::new();
    if bases.is_empty() {
        violations.push(BaseAxiomViolation::Empty);
        return violations;
    }
    let card = bases[0].len();
    for &b in &bases[1..] {
        if b.len() != card {
            violations.push(BaseAxiomViolation::UnequalCardinality { a: bases[0], b });
        }
    }
    let is_base = |set: StudentSet| bases.contains(&set);
    for &a in bases {
        for &b in bases {
            if a == b {
                continue;
            }
            for s in a.difference(b).iter() {
                let one_sided = b
                    .difference(a)
                    .iter()
                    .any(|t| is_base(a.swap(s, t)));
                if !one_sided {
                    violations.push(BaseAxiomViolation::ExchangeFailure { a, b, s });
                }
                let simultaneous = b
                    .difference(a)
                    .iter()
                    .any(|t| is_base(a.swap(s, t)) && is_base(b.swap(t, s)));
                if !simultaneous {
                    violations.push(BaseAxiomViolation::StrongExchangeFailure { a, b, s });
                }
            }
        }
    }
    violations
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndependenceViolation {
    EmptySetDependent,
    DownwardClosure { set: StudentSet, subset: StudentSet },
    Augmentation { small: StudentSet, large: StudentSet },
}

/// Exhaustively verify the independence axioms over the whole power set.
/// Certification tool for small ground sets only.
pub fn check_independence_axioms(oracle: &dyn MatroidOracle) -> Vec<IndependenceViolation> {
    let n = oracle.ground_size();
    assert!(n <= 16, "exhaustive axiom check is for small ground sets");
    let all = StudentSet::full(n).subsets();
    let mut violations = Vec::new();
    if !oracle.is_independent(StudentSet::EMPTY) {
        violations.push(IndependenceViolation::EmptySetDependent);
    }
    let independent: Vec<StudentSet> = all
        .iter()
        .copied()
        .filter(|&s| oracle.is_independent(s))
        .collect();
    for &a in &independent {
        for s in a.iter() {
            if !oracle.is_independent(a.without(s)) {
                violations.push(IndependenceViolation::DownwardClosure {
                    set: a,
                    subset: a.without(s),
                });
            }
        }
    }
    for &small in &independent {
        for &large in &independent {
            if small.len() < large.len() {
                let ok = large
                    .difference(small)
                    .iter()
                    .any(|x| oracle.is_independent(small.with(x)));
                if !ok {
                    violations.push(IndependenceViolation::Augmentation { small, large });
                }
            }
        }
    }
    violations
}

/// The max-rank subsets of the ground set, for feeding [`check_base_axioms`].
pub fn bases(oracle: &dyn MatroidOracle) -> Vec<StudentSet> {
    let n = oracle.ground_size();
    let r = rank(oracle, StudentSet::full(n));
    StudentSet::full(n)
        .subsets_of_size(r)
        .into_iter()
        .filter(|&s| oracle.is_independent(s))
        .collect()
}
