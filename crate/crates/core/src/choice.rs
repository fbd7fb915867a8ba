//! The greedy distributional choice rule, choice-axiom checkers, the
//! trichotomy comparator for alternative rules, and revealed-priority
//! extraction with cycle detection.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use crate::error::Error;
use crate::frontier::{frontier, non_wasteful_sets, Certification, DEFAULT_MAX_SUBSETS};
use crate::matroid::rank;
use crate::pref::{Comparison, DistributionalPreference};
use crate::set::{priority_dominates, GroundSet, PriorityRanking, Student, StudentSet};

/// A capacity-constrained chooser. Implementations must return a subset of
/// the menu of size at most `q`.
pub trait ChoiceRule {
    fn q(&self) -> usize;
    fn choose(&self, menu: StudentSet) -> StudentSet;
}

impl<R: ChoiceRule + ?Sized> ChoiceRule for &R {
    fn q(&self) -> usize {
        (**self).q()
    }
    fn choose(&self, menu: StudentSet) -> StudentSet {
        (**self).choose(menu)
    }
}

/// A choice rule from a closure, for alternative rules in tests and reports.
pub struct FnRule<F: Fn(StudentSet) -> StudentSet> {
    q: usize,
    f: F,
}

pub fn fn_rule<F: Fn(StudentSet) -> StudentSet>(q: usize, f: F) -> FnRule<F> {
    FnRule { q, f }
}

impl<F: Fn(StudentSet) -> StudentSet> ChoiceRule for FnRule<F> {
    fn q(&self) -> usize {
        self.q
    }
    fn choose(&self, menu: StudentSet) -> StudentSet {
        let out = (self.f)(menu);
        debug_assert!(out.is_subset_of(menu) && out.len() <= self.q);
        out
    }
}

/// Greedy choice for a distributional preference: scan the menu in priority
/// order and keep each student whose inclusion still extends to a frontier
/// member of the menu.
pub fn distributional_choice(
    pref: &dyn DistributionalPreference,
    pi: &PriorityRanking,
    q: usize,
    menu: StudentSet,
    max_subsets: usize,
) -> Result<StudentSet, Error> {
    assert!(q >= 1);
    if menu.is_empty() {
        return Ok(StudentSet::EMPTY);
    }
    if let Some(oracle) = pref.matroid_backing() {
        // The frontier is the size-k sets of maximum rank m. A tentative set T
        // extends to one iff |T| <= k and its rank deficiency |T| - r(T) fits
        // in the slack k - m, by the augmentation property.
        let k = q.min(menu.len());
        let m = k.min(rank(oracle, menu));
        let mut kept = StudentSet::EMPTY;
        for s in pi.sort_best_first(menu) {
            let t = kept.with(s);
            if t.len() <= k && t.len() - rank(oracle, t) <= k - m {
                kept = t;
            }
        }
        return Ok(kept);
    }
    let f = frontier(pref, menu, q, max_subsets)?;
    let mut kept = StudentSet::EMPTY;
    for s in pi.sort_best_first(menu) {
        let t = kept.with(s);
        if f.members.iter().any(|&w| t.is_subset_of(w)) {
            kept = t;
        }
    }
    Ok(kept)
}

/// The greedy rule packaged as a [`ChoiceRule`].
///
/// `choose` panics on [`Error::BudgetExceeded`]; construct with a budget that
/// covers the intended menus.
pub struct DistributionalChoiceRule<'a> {
    pref: &'a dyn DistributionalPreference,
    pi: PriorityRanking,
    q: usize,
    max_subsets: usize,
}

pub fn distributional_choice_rule<'a>(
    pref: &'a dyn DistributionalPreference,
    pi: PriorityRanking,
    q: usize,
) -> DistributionalChoiceRule<'a> {
    DistributionalChoiceRule {
        pref,
        pi,
        q,
        max_subsets: DEFAULT_MAX_SUBSETS,
    }
}

impl DistributionalChoiceRule<'_> {
    pub fn with_max_subsets(mut self, max_subsets: usize) -> Self {
        self.max_subsets = max_subsets;
        self
    }

    pub fn priority(&self) -> &PriorityRanking {
        &self.pi
    }
}

impl ChoiceRule for DistributionalChoiceRule<'_> {
    fn q(&self) -> usize {
        self.q
    }

    fn choose(&self, menu: StudentSet) -> StudentSet {
        distributional_choice(self.pref, &self.pi, self.q, menu, self.max_subsets).unwrap()
    }
}

/// Evaluate `rule` on every subset of the ground set, keyed by menu.
pub fn choice_table(rule: &dyn ChoiceRule, ground: &GroundSet) -> HashMap<StudentSet, StudentSet> {
    ground
        .all()
        .subsets()
        .into_iter()
        .map(|menu| (menu, rule.choose(menu)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonWastefulViolation {
    pub menu: StudentSet,
    pub chosen: StudentSet,
}

/// Non-wastefulness: `|Ch(S)| = min(q, |S|)` and `Ch(S) ⊆ S` on every menu.
pub fn check_non_wasteful(rule: &dyn ChoiceRule, ground: &GroundSet) -> Vec<NonWastefulViolation> {
    let mut violations = Vec::new();
    for menu in ground.all().subsets() {
        let chosen = rule.choose(menu);
        if !chosen.is_subset_of(menu) || chosen.len() != rule.q().min(menu.len()) {
            violations.push(NonWastefulViolation { menu, chosen });
        }
    }
    violations
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromotesViolation {
    pub menu: StudentSet,
    pub chosen: StudentSet,
    pub better: StudentSet,
}

/// Promotion of the preference: no same-size subset of the menu is strictly
/// better than the chosen set.
pub fn check_promotes(
    rule: &dyn ChoiceRule,
    pref: &dyn DistributionalPreference,
    ground: &GroundSet,
) -> Vec<PromotesViolation> {
    let mut violations = Vec::new();
    for menu in ground.all().subsets() {
        let chosen = rule.choose(menu);
        for alt in menu.subsets_of_size(chosen.len()) {
            if pref.compare(alt, chosen) == Comparison::StrictlyBetter {
                violations.push(PromotesViolation {
                    menu,
                    chosen,
                    better: alt,
                });
            }
        }
    }
    violations
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvyViolation {
    pub menu: StudentSet,
    pub chosen: Student,
    pub rejected: Student,
}

/// No justified envy: whenever swapping a chosen student for a rejected one
/// is weakly preferred, the chosen student has the higher priority.
pub fn check_no_justified_envy(
    rule: &dyn ChoiceRule,
    pref: &dyn DistributionalPreference,
    pi: &PriorityRanking,
    ground: &GroundSet,
) -> Vec<EnvyViolation> {
    let mut violations = Vec::new();
    for menu in ground.all().subsets() {
        let chosen = rule.choose(menu);
        for s in chosen.iter() {
            for r in menu.difference(chosen).iter() {
                let swapped = chosen.swap(s, r);
                if pref.compare(swapped, chosen).weakly_better() && !pi.prefers(s, r) {
                    violations.push(EnvyViolation {
                        menu,
                        chosen: s,
                        rejected: r,
                    });
                }
            }
        }
    }
    violations
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathIndependenceViolation {
    pub s: StudentSet,
    pub s_prime: StudentSet,
    pub joint: StudentSet,
    pub sequential: StudentSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyViolation {
    pub menu: StudentSet,
    pub removed: Student,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutabilityViolation {
    pub menu: StudentSet,
    pub kept: Student,
    pub removed: Student,
}

#[derive(Clone, Debug, Default)]
pub struct PathIndependenceReport {
    /// Pairs with `Ch(S ∪ S') ≠ Ch(Ch(S) ∪ S')`.
    pub direct: Vec<PathIndependenceViolation>,
    /// Menus where removing an unchosen student changes the choice.
    pub consistency: Vec<ConsistencyViolation>,
    /// Menus where removing one student evicts another chosen student.
    pub substitutability: Vec<SubstitutabilityViolation>,
}

impl PathIndependenceReport {
    pub fn passed(&self) -> bool {
        self.direct.is_empty()
    }
}

/// Check path independence directly over all menu pairs, plus its two-part
/// decomposition into consistency and substitutability. The decomposition is
/// equivalent to the direct identity, and the report asserts that the three
/// checks agree.
pub fn check_path_independence(rule: &dyn ChoiceRule, ground: &GroundSet) -> PathIndependenceReport {
    let table = choice_table(rule, ground);
    let menus = ground.all().subsets();
    let mut report = PathIndependenceReport::default();
    for &s in &menus {
        for &s_prime in &menus {
            let joint = table[&s.union(s_prime)];
            let sequential = table[&table[&s].union(s_prime)];
            if joint != sequential {
                report.direct.push(PathIndependenceViolation {
                    s,
                    s_prime,
                    joint,
                    sequential,
                });
            }
        }
    }
    for &menu in &menus {
        let chosen = table[&menu];
        for removed in menu.iter() {
            let after = table[&menu.without(removed)];
            if !chosen.contains(removed) && after != chosen {
                report.consistency.push(ConsistencyViolation { menu, removed });
            }
            for kept in chosen.without(removed).iter() {
                if !after.contains(kept) {
                    report.substitutability.push(SubstitutabilityViolation {
                        menu,
                        kept,
                        removed,
                    });
                }
            }
        }
    }
    assert_eq!(
        report.direct.is_empty(),
        report.consistency.is_empty() && report.substitutability.is_empty(),
        "path independence must fail exactly when its decomposition fails"
    );
    report
}

/// Which escape clause a divergence of an alternative rule satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrichotomyClause {
    Wastefulness,
    DistributionalInferiority,
    PriorityDomination,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrichotomyViolation {
    pub menu: StudentSet,
    pub greedy: StudentSet,
    pub alternative: StudentSet,
}

#[derive(Clone, Debug, Default)]
pub struct TrichotomyReport {
    pub divergences: usize,
    pub clause_counts: [usize; 3],
    pub violations: Vec<TrichotomyViolation>,
}

impl TrichotomyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Whenever an alternative rule diverges from the greedy rule, verify that
/// its output is strictly smaller, strictly worse, or priority-dominated.
/// Requires the preference to have passed the upper-bound and maximizer
/// checks, since the claim is only a theorem under those hypotheses.
pub fn check_trichotomy(
    alt: &dyn ChoiceRule,
    pref: &dyn DistributionalPreference,
    pi: &PriorityRanking,
    q: usize,
    ground: &GroundSet,
    cert: &Certification,
) -> Result<TrichotomyReport, Error> {
    if !cert.exchange_certified() {
        return Err(Error::PreferenceNotCertified);
    }
    let mut report = TrichotomyReport::default();
    for menu in ground.all().subsets() {
        let greedy = distributional_choice(pref, pi, q, menu, DEFAULT_MAX_SUBSETS)?;
        let alternative = alt.choose(menu);
        if alternative == greedy {
            continue;
        }
        report.divergences += 1;
        let clause = if greedy.len() > alternative.len() {
            Some(TrichotomyClause::Wastefulness)
        } else if greedy.len() == alternative.len()
            && pref.compare(greedy, alternative) == Comparison::StrictlyBetter
        {
            Some(TrichotomyClause::DistributionalInferiority)
        } else if priority_dominates(pi, greedy, alternative) {
            Some(TrichotomyClause::PriorityDomination)
        } else {
            None
        };
        match clause {
            Some(c) => report.clause_counts[c as usize] += 1,
            None => report.violations.push(TrichotomyViolation {
                menu,
                greedy,
                alternative,
            }),
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniquenessViolation {
    pub menu: StudentSet,
    pub greedy: StudentSet,
    /// All menu outputs passing non-wastefulness, promotion, and no justified
    /// envy; a violation is any menu where this is not exactly the greedy set.
    pub valid_outputs: Vec<StudentSet>,
}

/// The greedy rule is the unique one satisfying all three choice axioms.
/// All axioms are per-menu conditions, so quantifying over rules reduces to
/// quantifying over outputs menu by menu.
pub fn check_unique_characterization(
    pref: &dyn DistributionalPreference,
    pi: &PriorityRanking,
    q: usize,
    ground: &GroundSet,
    cert: &Certification,
) -> Result<Vec<UniquenessViolation>, Error> {
    if !cert.exchange_certified() {
        return Err(Error::PreferenceNotCertified);
    }
    let mut violations = Vec::new();
    for menu in ground.all().subsets() {
        if menu.is_empty() {
            continue;
        }
        let greedy = distributional_choice(pref, pi, q, menu, DEFAULT_MAX_SUBSETS)?;
        let candidates = non_wasteful_sets(menu, q);
        let valid_outputs: Vec<StudentSet> = candidates
            .iter()
            .copied()
            .filter(|&c| {
                let undominated = candidates
                    .iter()
                    .all(|&other| pref.compare(other, c) != Comparison::StrictlyBetter);
                undominated
                    && c.iter().all(|s| {
                        menu.difference(c).iter().all(|r| {
                            !pref.compare(c.swap(s, r), c).weakly_better() || pi.prefers(s, r)
                        })
                    })
            })
            .collect();
        if valid_outputs != vec![greedy] {
            violations.push(UniquenessViolation {
                menu,
                greedy,
                valid_outputs,
            });
        }
    }
    Ok(violations)
}

/// A cycle in the revealed priority relation: each student is revealed prior
/// to the next, wrapping around.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleWitness {
    pub students: Vec<Student>,
}

#[derive(Debug)]
pub enum Revealed {
    Ranking(PriorityRanking),
    Cycle(CycleWitness),
}

/// Extract the priorities a choice rule reveals: an edge `s → s'` whenever
/// some menu shows `s` chosen over a rejected `s'` despite the swap being
/// weakly preferred. A cycle refutes greedy rationalizability and is returned
/// as a minimal witness; otherwise the relation is completed to a ranking by
/// Kahn's algorithm with ties broken by ascending student id.
pub fn reveal_priorities(
    rule: &dyn ChoiceRule,
    pref: &dyn DistributionalPreference,
    ground: &GroundSet,
) -> Revealed {
    let n = ground.n();
    let mut edges = vec![vec![false; n]; n];
    for menu in ground.all().subsets() {
        let chosen = rule.choose(menu);
        for s in chosen.iter() {
            for r in menu.difference(chosen).iter() {
                if pref.compare(chosen.swap(s, r), chosen).weakly_better() {
                    edges[s][r] = true;
                }
            }
        }
    }
    if let Some(cycle) = shortest_cycle(&edges) {
        return Revealed::Cycle(cycle);
    }
    let mut indegree = vec![0usize; n];
    for s in 0..n {
        for r in 0..n {
            if edges[s][r] {
                indegree[r] += 1;
            }
        }
    }
    let mut heap: BinaryHeap<Reverse<Student>> = (0..n)
        .filter(|&s| indegree[s] == 0)
        .map(Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse(s)) = heap.pop() {
        order.push(s);
        for r in 0..n {
            if edges[s][r] {
                indegree[r] -= 1;
                if indegree[r] == 0 {
                    heap.push(Reverse(r));
                }
            }
        }
    }
    debug_assert_eq!(order.len(), n, "acyclic relation must top-sort fully");
    Revealed::Ranking(PriorityRanking::new(order).unwrap())
}

/// Shortest directed cycle by BFS from each vertex; ties broken by lowest
/// starting id, so the witness is deterministic.
fn shortest_cycle(edges: &[Vec<bool>]) -> Option<CycleWitness> {
    let n = edges.len();
    let mut best: Option<Vec<Student>> = None;
    for start in 0..n {
        let mut parent = vec![usize::MAX; n];
        let mut queue = std::collections::VecDeque::from([start]);
        let mut seen = vec![false; n];
        seen[start] = true;
        'bfs: while let Some(u) = queue.pop_front() {
            for v in 0..n {
                if !edges[u][v] {
                    continue;
                }
                if v == start {
                    let mut path = vec![u];
                    let mut cur = u;
                    while cur != start {
                        cur = parent[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                        best = Some(path);
                    }
                    break 'bfs;
                }
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
    }
    best.map(|students| CycleWitness { students })
}
