//! The distributional-preference interface: four-valued set comparisons and
//! a sampling validator for the preorder contract.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::matroid::MatroidOracle;
use crate::set::{GroundSet, StudentSet};

/// Verdict of comparing two student sets under a preorder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Comparison {
    StrictlyBetter,
    StrictlyWorse,
    Indifferent,
    Incomparable,
}

impl Comparison {
    /// The verdict of the arguments swapped.
    pub fn flip(self) -> Comparison {
        match self {
            Comparison::StrictlyBetter => Comparison::StrictlyWorse,
            Comparison::StrictlyWorse => Comparison::StrictlyBetter,
            other => other,
        }
    }

    /// Weak preference: strictly better or indifferent.
    pub fn weakly_better(self) -> bool {
        matches!(self, Comparison::StrictlyBetter | Comparison::Indifferent)
    }

    pub fn from_f64(a: f64, b: f64, tol: f64) -> Comparison {
        if (a - b).abs() <= tol {
            Comparison::Indifferent
        } else if a > b {
            Comparison::StrictlyBetter
        } else {
            Comparison::StrictlyWorse
        }
    }

    pub fn from_ord<T: Ord>(a: T, b: T) -> Comparison {
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => Comparison::StrictlyBetter,
            std::cmp::Ordering::Less => Comparison::StrictlyWorse,
            std::cmp::Ordering::Equal => Comparison::Indifferent,
        }
    }
}

/// Absolute tolerance for real-valued score comparisons. Ties within the
/// tolerance are Indifferent, so frontier membership is deterministic.
pub const SCORE_TOLERANCE: f64 = 1e-9;

/// A preorder over sets of students.
///
/// Implementations must be pure functions of the two arguments: stateless or
/// internally synchronized, and safe to call concurrently.
pub trait DistributionalPreference {
    /// Compare two sets. Callers must respect [`equal_size_only`] themselves;
    /// the checked entry point is the free function [`compare`].
    ///
    /// [`equal_size_only`]: DistributionalPreference::equal_size_only
    fn compare(&self, a: StudentSet, b: StudentSet) -> Comparison;

    /// Declared capability: the comparator never returns `Incomparable`.
    fn is_complete(&self) -> bool {
        false
    }

    /// Declared capability: the comparator is defined only for `|a| = |b|`.
    fn equal_size_only(&self) -> bool {
        false
    }

    /// When the preference is backed by a matroid rank function, expose the
    /// oracle so the choice rule can take the greedy fast path.
    fn matroid_backing(&self) -> Option<&dyn MatroidOracle> {
        None
    }
}

impl<P: DistributionalPreference + ?Sized> DistributionalPreference for &P {
    fn compare(&self, a: StudentSet, b: StudentSet) -> Comparison {
        (**self).compare(a, b)
    }
    fn is_complete(&self) -> bool {
        (**self).is_complete()
    }
    fn equal_size_only(&self) -> bool {
        (**self).equal_size_only()
    }
    fn matroid_backing(&self) -> Option<&dyn MatroidOracle> {
        (**self).matroid_backing()
    }
}

/// Compare two sets, enforcing the preference's size precondition.
pub fn compare(
    pref: &dyn DistributionalPreference,
    a: StudentSet,
    b: StudentSet,
) -> Result<Comparison, Error> {
    if pref.equal_size_only() && a.len() != b.len() {
        return Err(Error::SizeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(pref.compare(a, b))
}

/// A transitivity failure: `a ≿ b` and `b ≿ c` but not `a ≿ c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitivityViolation {
    pub a: StudentSet,
    pub b: StudentSet,
    pub c: StudentSet,
}

/// A mirror-consistency failure: `compare(a, b)` and `compare(b, a)` are not
/// flipped verdicts, or `compare(a, a)` is not Indifferent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorViolation {
    pub a: StudentSet,
    pub b: StudentSet,
    pub forward: Comparison,
    pub backward: Comparison,
}

#[derive(Clone, Debug, Default)]
pub struct TransitivityReport {
    pub exhaustive: bool,
    pub checked_triples: usize,
    pub violations: Vec<TransitivityViolation>,
    pub mirror_violations: Vec<MirrorViolation>,
    /// Pairs on which a preference declared complete returned Incomparable.
    pub completeness_violations: Vec<(StudentSet, StudentSet)>,
}

impl TransitivityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
            && self.mirror_violations.is_empty()
            && self.completeness_violations.is_empty()
    }
}

fn weakly(pref: &dyn DistributionalPreference, a: StudentSet, b: StudentSet) -> bool {
    pref.compare(a, b).weakly_better()
}

/// Validate the preorder contract on size-`size` subsets of the ground set.
///
/// Runs exhaustively when the number of triples fits in `budget`, otherwise
/// samples `budget` triples with a fixed seed. User-supplied preferences are
/// arbitrary code, so the contract is checked rather than assumed.
pub fn transitivity_check(
    pref: &dyn DistributionalPreference,
    ground: &GroundSet,
    size: usize,
    budget: usize,
) -> TransitivityReport {
    assert!(size <= ground.n());
    let family = ground.all().subsets_of_size(size);
    let m = family.len();
    let mut report = TransitivityReport::default();

    let check_pair = |report: &mut TransitivityReport, a: StudentSet, b: StudentSet| {
        let fwd = pref.compare(a, b);
        let bwd = pref.compare(b, a);
        let consistent = if a == b {
            fwd == Comparison::Indifferent && bwd == Comparison::Indifferent
        } else {
            fwd == bwd.flip()
        };
        if !consistent {
            report.mirror_violations.push(MirrorViolation {
                a,
                b,
                forward: fwd,
                backward: bwd,
            });
        }
        if pref.is_complete() && fwd == Comparison::Incomparable {
            report.completeness_violations.push((a, b));
        }
    };

    let check_triple =
        |report: &mut TransitivityReport, a: StudentSet, b: StudentSet, c: StudentSet| {
            if weakly(pref, a, b) && weakly(pref, b, c) && !weakly(pref, a, c) {
                report.violations.push(TransitivityViolation { a, b, c });
            }
        };

    let total_triples = (m as u128).pow(3);
    if total_triples <= budget as u128 {
        report.exhaustive = true;
        for &a in &family {
            for &b in &family {
                check_pair(&mut report, a, b);
                for &c in &family {
                    check_triple(&mut report, a, b, c);
                    report.checked_triples += 1;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD15C);
        for _ in 0..budget {
            let a = family[rng.gen_range(0..m)];
            let b = family[rng.gen_range(0..m)];
            let c = family[rng.gen_range(0..m)];
            check_pair(&mut report, a, b);
            check_triple(&mut report, a, b, c);
            report.checked_triples += 1;
        }
    }
    report
}
