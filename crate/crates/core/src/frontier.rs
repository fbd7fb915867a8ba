//! Non-wasteful sets, the frontier, and executable checkers for the three
//! structural properties (upper-bound, maximizer, improvement).
//!
//! The checkers quantify over the ground set exhaustively. They are
//! certification tools for small instances; enumeration limits are explicit
//! configuration and overruns are hard errors, never silent truncation.

use crate::error::Error;
use crate::pref::{Comparison, DistributionalPreference};
use crate::set::{GroundSet, Student, StudentSet};

/// Default cap on the number of subsets a single frontier computation may
/// enumerate.
pub const DEFAULT_MAX_SUBSETS: usize = 1 << 22;

/// All subsets of `s` of cardinality `min(q, |s|)`, ascending by bitmask.
pub fn non_wasteful_sets(s: StudentSet, q: usize) -> Vec<StudentSet> {
    assert!(q >= 1);
    s.subsets_of_size(q.min(s.len()))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrontierMethod {
    /// Single-pass max-class scan, valid for complete preferences.
    CompleteFastPath,
    /// Pairwise undominatedness filter.
    Exhaustive,
}

/// The undominated non-wasteful subsets of a menu.
#[derive(Clone, Debug)]
pub struct FrontierResult {
    pub input: StudentSet,
    pub target_size: usize,
    pub members: Vec<StudentSet>,
    pub method: FrontierMethod,
}

/// Compute the frontier of `s` at capacity `q`. Nonempty whenever `s` is
/// nonempty, since the ground set is finite.
pub fn frontier(
    pref: &dyn DistributionalPreference,
    s: StudentSet,
    q: usize,
    max_subsets: usize,
) -> Result<FrontierResult, Error> {
    assert!(q >= 1);
    let target_size = q.min(s.len());
    let required = binomial(s.len(), target_size);
    if required > max_subsets as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget: max_subsets,
        });
    }
    let candidates = non_wasteful_sets(s, q);
    let (members, method) = if pref.is_complete() {
        let mut best: Vec<StudentSet> = Vec::new();
        for &c in &candidates {
            match best.first() {
                None => best.push(c),
                Some(&rep) => match pref.compare(c, rep) {
                    Comparison::StrictlyBetter => {
                        best.clear();
                        best.push(c);
                    }
                    Comparison::Indifferent => best.push(c),
                    Comparison::StrictlyWorse => {}
                    Comparison::Incomparable => {
                        debug_assert!(false, "complete preference returned Incomparable");
                    }
                },
            }
        }
        (best, FrontierMethod::CompleteFastPath)
    } else {
        let members = candidates
            .iter()
            .copied()
            .filter(|&c| {
                candidates
                    .iter()
                    .all(|&other| pref.compare(other, c) != Comparison::StrictlyBetter)
            })
            .collect();
        (members, FrontierMethod::Exhaustive)
    };
    Ok(FrontierResult {
        input: s,
        target_size,
        members,
        method,
    })
}

/// Frontier by the pairwise filter regardless of declared completeness; used
/// to cross-check the fast path.
pub fn frontier_pairwise(
    pref: &dyn DistributionalPreference,
    s: StudentSet,
    q: usize,
    max_subsets: usize,
) -> Result<Vec<StudentSet>, Error> {
    let target_size = q.min(s.len());
    let required = binomial(s.len(), target_size);
    if required > max_subsets as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget: max_subsets,
        });
    }
    let candidates = non_wasteful_sets(s, q);
    Ok(candidates
        .iter()
        .copied()
        .filter(|&c| {
            candidates
                .iter()
                .all(|&other| pref.compare(other, c) != Comparison::StrictlyBetter)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StructuralProperty {
    UpperBound,
    Maximizer,
    Improvement,
}

/// A pair (and, for the improvement property, a student) witnessing a
/// structural-property failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyViolation {
    pub s: StudentSet,
    pub s_prime: StudentSet,
    pub student: Option<Student>,
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub property: StructuralProperty,
    pub checked_pairs: usize,
    /// False when the property's hypotheses never fired, i.e. the pass is
    /// vacuous.
    pub substantive: bool,
    pub violations: Vec<PropertyViolation>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Upper-bound property: incomparable size-q pairs must be dominated through
/// their union.
pub fn check_upper_bound_property(
    pref: &dyn DistributionalPreference,
    ground: &GroundSet,
    q: usize,
) -> PropertyReport {
    let family = ground.all().subsets_of_size(q);
    let mut report = PropertyReport {
        property: StructuralProperty::UpperBound,
        checked_pairs: 0,
        substantive: false,
        violations: Vec::new(),
    };
    for &s in &family {
        for &s_prime in &family {
            if s >= s_prime {
                continue;
            }
            report.checked_pairs += 1;
            if pref.compare(s, s_prime) != Comparison::Incomparable {
                continue;
            }
            report.substantive = true;
            let union = s.union(s_prime);
            let dominated = non_wasteful_sets(union, q).iter().any(|&w| {
                pref.compare(w, s) == Comparison::StrictlyBetter
                    || pref.compare(w, s_prime) == Comparison::StrictlyBetter
            });
            if !dominated {
                report.violations.push(PropertyViolation {
                    s,
                    s_prime,
                    student: None,
                });
            }
        }
    }
    report
}

/// Maximizer property: two size-q maximizers of their union admit a
/// symmetric indifference-preserving swap.
pub fn check_maximizer_property(
    pref: &dyn DistributionalPreference,
    ground: &GroundSet,
    q: usize,
) -> PropertyReport {
    let family = ground.all().subsets_of_size(q);
    let mut report = PropertyReport {
        property: StructuralProperty::Maximizer,
        checked_pairs: 0,
        substantive: false,
        violations: Vec::new(),
    };
    for &s in &family {
        for &s_prime in &family {
            if s >= s_prime {
                continue;
            }
            report.checked_pairs += 1;
            let union = s.union(s_prime);
            let both_maximal = non_wasteful_sets(union, q).iter().all(|&w| {
                pref.compare(s, w).weakly_better() && pref.compare(s_prime, w).weakly_better()
            });
            if !both_maximal {
                continue;
            }
            report.substantive = true;
            let swap_found = s.difference(s_prime).iter().any(|x| {
                s_prime.difference(s).iter().any(|y| {
                    pref.compare(s.swap(x, y), s) == Comparison::Indifferent
                        && pref.compare(s_prime.swap(y, x), s_prime) == Comparison::Indifferent
                })
            });
            if !swap_found {
                report.violations.push(PropertyViolation {
                    s,
                    s_prime,
                    student: None,
                });
            }
        }
    }
    report
}

/// Improvement property: a student crucial for the optimality of `S` over
/// the union must strictly improve `S'` through some swap.
pub fn check_improvement_property(
    pref: &dyn DistributionalPreference,
    ground: &GroundSet,
    q: usize,
) -> PropertyReport {
    let family = ground.all().subsets_of_size(q);
    let mut report = PropertyReport {
        property: StructuralProperty::Improvement,
        checked_pairs: 0,
        substantive: false,
        violations: Vec::new(),
    };
    for &s in &family {
        for &s_prime in &family {
            if s == s_prime {
                continue;
            }
            report.checked_pairs += 1;
            let union = s.union(s_prime);
            let nw = non_wasteful_sets(union, q);
            for x in s.difference(s_prime).iter() {
                let hypotheses = nw.iter().all(|&w| {
                    if w == s {
                        true
                    } else if w.contains(x) {
                        pref.compare(s, w).weakly_better()
                    } else {
                        pref.compare(s, w) == Comparison::StrictlyBetter
                    }
                });
                if !hypotheses {
                    continue;
                }
                report.substantive = true;
                let improved = s_prime.difference(s).iter().any(|y| {
                    pref.compare(s_prime.swap(y, x), s_prime) == Comparison::StrictlyBetter
                });
                if !improved {
                    report.violations.push(PropertyViolation {
                        s,
                        s_prime,
                        student: Some(x),
                    });
                }
            }
        }
    }
    report
}

/// Result of running all three structural-property checkers.
#[derive(Clone, Debug)]
pub struct Certification {
    pub upper_bound: PropertyReport,
    pub maximizer: PropertyReport,
    pub improvement: PropertyReport,
}

impl Certification {
    /// Upper-bound and maximizer hold: the frontier forms matroid bases and
    /// the greedy characterization theorems apply.
    pub fn exchange_certified(&self) -> bool {
        self.upper_bound.passed() && self.maximizer.passed()
    }

    /// All three properties hold: path independence of the greedy rule and
    /// the deferred-acceptance characterization apply.
    pub fn fully_certified(&self) -> bool {
        self.exchange_certified() && self.improvement.passed()
    }
}

pub fn certify(
    pref: &dyn DistributionalPreference,
    ground: &GroundSet,
    q: usize,
) -> Certification {
    Certification {
        upper_bound: check_upper_bound_property(pref, ground, q),
        maximizer: check_maximizer_property(pref, ground, q),
        improvement: check_improvement_property(pref, ground, q),
    }
}
