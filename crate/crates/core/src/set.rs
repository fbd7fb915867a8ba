//! Ground set, bitmask student sets, and strict priority rankings.
//!
//! The ground set is capped at 64 students so a set of students fits in one
//! machine word and all set algebra is exact and allocation-free.

use std::fmt;

use crate::error::Error;

/// Dense 0-based index into the ground set.
pub type Student = usize;

/// Maximum ground-set size; a [`StudentSet`] is a single `u64`.
pub const MAX_STUDENTS: usize = 64;

/// The universe of students, with optional display labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    n: usize,
    labels: Option<Vec<String>>,
}

impl GroundSet {
    pub fn new(n: usize) -> Self {
        assert!(
            (1..=MAX_STUDENTS).contains(&n),
            "ground set size must be in 1..=64, got {n}"
        );
        GroundSet { n, labels: None }
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self, Error> {
        let n = labels.len();
        if !(1..=MAX_STUDENTS).contains(&n) {
            return Err(Error::InvalidGroundSet(format!(
                "need between 1 and {MAX_STUDENTS} students, got {n}"
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::InvalidGroundSet(format!("duplicate label {a:?}")));
            }
        }
        Ok(GroundSet {
            n,
            labels: Some(labels),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The full set of students.
    pub fn all(&self) -> StudentSet {
        StudentSet::full(self.n)
    }

    pub fn students(&self) -> impl Iterator<Item = Student> {
        0..self.n
    }

    pub fn label(&self, s: Student) -> String {
        match &self.labels {
            Some(ls) if s < ls.len() => ls[s].clone(),
            _ => format!("#{s}"),
        }
    }

    pub fn labels(&self, set: StudentSet) -> Vec<String> {
        set.iter().map(|s| self.label(s)).collect()
    }

    pub fn student_by_label(&self, label: &str) -> Option<Student> {
        self.labels
            .as_ref()
            .and_then(|ls| ls.iter().position(|l| l == label))
    }
}

/// A subset of the ground set, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StudentSet(u64);

impl StudentSet {
    pub const EMPTY: StudentSet = StudentSet(0);

    pub fn from_bits(bits: u64) -> Self {
        StudentSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_STUDENTS);
        if n == MAX_STUDENTS {
            StudentSet(u64::MAX)
        } else {
            StudentSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(s: Student) -> Self {
        StudentSet(1u64 << s)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, s: Student) -> bool {
        self.0 & (1u64 << s) != 0
    }

    #[must_use]
    pub fn with(self, s: Student) -> Self {
        StudentSet(self.0 | (1u64 << s))
    }

    #[must_use]
    pub fn without(self, s: Student) -> Self {
        StudentSet(self.0 & !(1u64 << s))
    }

    /// `(self \ {out}) ∪ {inn}`.
    #[must_use]
    pub fn swap(self, out: Student, inn: Student) -> Self {
        self.without(out).with(inn)
    }

    pub fn union(self, other: Self) -> Self {
        StudentSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        StudentSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        StudentSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in ascending id order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// All size-`k` subsets of `self`, ascending by bitmask value.
    pub fn subsets_of_size(self, k: usize) -> Vec<StudentSet> {
        let members: Vec<Student> = self.iter().collect();
        let m = members.len();
        if k > m {
            return Vec::new();
        }
        if k == 0 {
            return vec![StudentSet::EMPTY];
        }
        // Gosper's hack over a compressed index space, then expand through the
        // member list. Expansion is bit-monotone, so output order is ascending.
        let mut out = Vec::new();
        let mut comb: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        let limit: u64 = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        loop {
            let mut expanded = StudentSet::EMPTY;
            let mut c = comb;
            while c != 0 {
                let i = c.trailing_zeros() as usize;
                expanded = expanded.with(members[i]);
                c &= c - 1;
            }
            out.push(expanded);
            let lo = comb & comb.wrapping_neg();
            let (carry, overflow) = comb.overflowing_add(lo);
            if overflow {
                break;
            }
            let next = carry | (((comb ^ carry) / lo) >> 2);
            if next > limit {
                break;
            }
            comb = next;
        }
        out
    }

    /// All subsets of `self`, ascending by bitmask value.
    pub fn subsets(self) -> Vec<StudentSet> {
        let mut out = Vec::with_capacity(1usize << self.len().min(30));
        let full = self.0;
        let mut sub: u64 = 0;
        loop {
            out.push(StudentSet(sub));
            if sub == full {
                break;
            }
            sub = (sub.wrapping_sub(full)) & full;
        }
        out.sort_unstable();
        out
    }
}

impl FromIterator<Student> for StudentSet {
    fn from_iter<T: IntoIterator<Item = Student>>(iter: T) -> Self {
        let mut set = StudentSet::EMPTY;
        for s in iter {
            set = set.with(s);
        }
        set
    }
}

impl fmt::Debug for StudentSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = Student;

    fn next(&mut self) -> Option<Student> {
        if self.0 == 0 {
            None
        } else {
            let s = self.0.trailing_zeros() as usize;
            self.0 &= self.0 - 1;
            Some(s)
        }
    }
}

/// A strict linear order over the ground set, highest priority first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorityRanking {
    order: Vec<Student>,
    position: Vec<usize>,
}

impl PriorityRanking {
    /// `order` must be a permutation of `0..order.len()`.
    pub fn new(order: Vec<Student>) -> Result<Self, Error> {
        let n = order.len();
        if n == 0 || n > MAX_STUDENTS {
            return Err(Error::InvalidPriority(format!(
                "ranking must cover 1..=64 students, got {n}"
            )));
        }
        let mut position = vec![usize::MAX; n];
        for (rank, &s) in order.iter().enumerate() {
            if s >= n {
                return Err(Error::InvalidPriority(format!(
                    "student {s} out of range for n = {n}"
                )));
            }
            if position[s] != usize::MAX {
                return Err(Error::InvalidPriority(format!("student {s} listed twice")));
            }
            position[s] = rank;
        }
        Ok(PriorityRanking { order, position })
    }

    /// Identity ranking: student 0 highest.
    pub fn identity(n: usize) -> Self {
        PriorityRanking::new((0..n).collect()).unwrap()
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    pub fn order(&self) -> &[Student] {
        &self.order
    }

    /// 0 = highest priority.
    pub fn position(&self, s: Student) -> usize {
        self.position[s]
    }

    /// True iff `a` has strictly higher priority than `b`.
    pub fn prefers(&self, a: Student, b: Student) -> bool {
        self.position[a] < self.position[b]
    }

    /// Members of `set` from highest to lowest priority.
    pub fn sort_best_first(&self, set: StudentSet) -> Vec<Student> {
        let mut members: Vec<Student> = set.iter().collect();
        members.sort_by_key(|&s| self.position[s]);
        members
    }
}

/// Rank-by-rank set comparison under a strict priority order.
///
/// `a` dominates `b` iff `|a| >= |b|` and for every rank `k <= |b|` the k-th
/// highest-priority member of `a` weakly beats the k-th of `b`.
pub fn priority_dominates(pi: &PriorityRanking, a: StudentSet, b: StudentSet) -> bool {
    if a.len() < b.len() {
        return false;
    }
    let best_a = pi.sort_best_first(a);
    let best_b = pi.sort_best_first(b);
    best_a
        .iter()
        .zip(best_b.iter())
        .all(|(&x, &y)| x == y || pi.prefers(x, y))
}
