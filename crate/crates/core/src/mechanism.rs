//! Two-sided matching: markets of schools with distributional preferences,
//! student-proposing deferred acceptance with a round trace, matching-level
//! axiom checkers, and a brute-force strategy-proofness tester.

use itertools::Itertools;

use crate::choice::distributional_choice;
use crate::error::Error;
use crate::frontier::DEFAULT_MAX_SUBSETS;
use crate::pref::DistributionalPreference;
use crate::set::{GroundSet, PriorityRanking, Student, StudentSet};

pub type SchoolId = usize;

pub struct School {
    pub capacity: usize,
    pub priority: PriorityRanking,
    pub pref: Box<dyn DistributionalPreference>,
}

impl School {
    pub fn new(
        capacity: usize,
        priority: PriorityRanking,
        pref: Box<dyn DistributionalPreference>,
    ) -> Self {
        assert!(capacity >= 1);
        School {
            capacity,
            priority,
            pref,
        }
    }
}

/// A strict ranking of acceptable schools, best first; anything unlisted is
/// worse than the outside option.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StudentPreference {
    ranked: Vec<SchoolId>,
}

impl StudentPreference {
    pub fn new(ranked: Vec<SchoolId>) -> Self {
        for (i, c) in ranked.iter().enumerate() {
            assert!(!ranked[..i].contains(c), "duplicate school {c}");
        }
        StudentPreference { ranked }
    }

    pub fn ranked(&self) -> &[SchoolId] {
        &self.ranked
    }

    pub fn accepts(&self, c: SchoolId) -> bool {
        self.ranked.contains(&c)
    }

    /// Rank of an assignment: listed schools by position, the outside option
    /// after them, unlisted schools last.
    fn rank_of(&self, a: Option<SchoolId>) -> usize {
        match a {
            None => self.ranked.len(),
            Some(c) => self
                .ranked
                .iter()
                .position(|&x| x == c)
                .unwrap_or(self.ranked.len() + 1),
        }
    }

    pub fn prefers(&self, a: Option<SchoolId>, b: Option<SchoolId>) -> bool {
        self.rank_of(a) < self.rank_of(b)
    }

    pub fn weakly_prefers(&self, a: Option<SchoolId>, b: Option<SchoolId>) -> bool {
        self.rank_of(a) <= self.rank_of(b) || a == b
    }
}

pub struct Market {
    pub ground: GroundSet,
    pub schools: Vec<School>,
    pub prefs: Vec<StudentPreference>,
}

impl Market {
    pub fn new(ground: GroundSet, schools: Vec<School>, prefs: Vec<StudentPreference>) -> Self {
        assert_eq!(prefs.len(), ground.n());
        for school in &schools {
            assert_eq!(school.priority.n(), ground.n());
        }
        for p in &prefs {
            for &c in p.ranked() {
                assert!(c < schools.len(), "unknown school {c}");
            }
        }
        Market {
            ground,
            schools,
            prefs,
        }
    }
}

/// Per-student school assignment; `None` is the outside option.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub assignment: Vec<Option<SchoolId>>,
}

impl Matching {
    pub fn assigned_to(&self, c: SchoolId) -> StudentSet {
        self.assignment
            .iter()
            .enumerate()
            .filter(|(_, &a)| a == Some(c))
            .map(|(s, _)| s)
            .collect()
    }

    pub fn of(&self, s: Student) -> Option<SchoolId> {
        self.assignment[s]
    }
}

#[derive(Clone, Debug)]
pub struct Round {
    pub proposals: Vec<(Student, SchoolId)>,
    /// Tentatively held students per school, after this round's choices.
    pub held: Vec<StudentSet>,
    pub rejections: Vec<(Student, SchoolId)>,
}

#[derive(Clone, Debug)]
pub struct DaOutcome {
    pub matching: Matching,
    pub trace: Vec<Round>,
}

/// Student-proposing deferred acceptance, run to quiescence. Within a round
/// every active student proposes to their best remaining school, each school
/// re-chooses from its held set plus new proposers, and all rejections are
/// processed simultaneously.
pub fn deferred_acceptance(market: &Market, max_subsets: usize) -> Result<DaOutcome, Error> {
    deferred_acceptance_with(market, &market.prefs, max_subsets)
}

/// Deferred acceptance under a reported profile that may differ from the
/// market's true one; the strategy-proofness tester feeds deviations here.
pub fn deferred_acceptance_with(
    market: &Market,
    reported: &[StudentPreference],
    max_subsets: usize,
) -> Result<DaOutcome, Error> {
    let n = market.ground.n();
    assert_eq!(reported.len(), n);
    let mut next_idx = vec![0usize; n];
    let mut held: Vec<StudentSet> = vec![StudentSet::EMPTY; market.schools.len()];
    let mut trace = Vec::new();
    loop {
        let held_union: StudentSet = held
            .iter()
            .fold(StudentSet::EMPTY, |acc, &h| acc.union(h));
        let mut proposals: Vec<(Student, SchoolId)> = Vec::new();
        for s in 0..n {
            if !held_union.contains(s) && next_idx[s] < reported[s].ranked().len() {
                proposals.push((s, reported[s].ranked()[next_idx[s]]));
            }
        }
        if proposals.is_empty() {
            break;
        }
        let mut rejections = Vec::new();
        for (c, school) in market.schools.iter().enumerate() {
            let new: StudentSet = proposals
                .iter()
                .filter(|&&(_, t)| t == c)
                .map(|&(s, _)| s)
                .collect();
            if new.is_empty() {
                continue;
            }
            let pool = held[c].union(new);
            let kept = distributional_choice(
                school.pref.as_ref(),
                &school.priority,
                school.capacity,
                pool,
                max_subsets,
            )?;
            for s in pool.difference(kept).iter() {
                rejections.push((s, c));
                if new.contains(s) {
                    next_idx[s] += 1;
                }
            }
            // a student rejected from the tentative hold resumes proposing at
            // the school after this one in their list
            for s in held[c].difference(kept).iter() {
                next_idx[s] = reported[s]
                    .ranked()
                    .iter()
                    .position(|&x| x == c)
                    .map_or(next_idx[s], |p| p + 1);
            }
            held[c] = kept;
        }
        trace.push(Round {
            proposals,
            held: held.clone(),
            rejections,
        });
    }
    let mut assignment = vec![None; n];
    for (c, h) in held.iter().enumerate() {
        for s in h.iter() {
            assignment[s] = Some(c);
        }
    }
    Ok(DaOutcome {
        matching: Matching { assignment },
        trace,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WastefulnessViolation {
    pub student: Student,
    pub school: SchoolId,
}

/// Non-wastefulness: a student never prefers a school with a spare seat to
/// their own assignment.
pub fn check_matching_non_wasteful(market: &Market, mu: &Matching) -> Vec<WastefulnessViolation> {
    let mut violations = Vec::new();
    for s in 0..market.ground.n() {
        for (c, school) in market.schools.iter().enumerate() {
            if market.prefs[s].prefers(Some(c), mu.of(s)) && mu.assigned_to(c).len() < school.capacity
            {
                violations.push(WastefulnessViolation { student: s, school: c });
            }
        }
    }
    violations
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingPromotesViolation {
    pub school: SchoolId,
    pub assigned: StudentSet,
    pub better: StudentSet,
}

/// Each school's assignment is undominated among same-size subsets of its
/// demand set (students weakly preferring the school to their assignment).
pub fn check_matching_promotes(market: &Market, mu: &Matching) -> Vec<MatchingPromotesViolation> {
    let mut violations = Vec::new();
    for (c, school) in market.schools.iter().enumerate() {
        let assigned = mu.assigned_to(c);
        let demand: StudentSet = (0..market.ground.n())
            .filter(|&s| market.prefs[s].weakly_prefers(Some(c), mu.of(s)))
            .collect();
        for alt in demand.subsets_of_size(assigned.len()) {
            if school.pref.compare(alt, assigned) == crate::pref::Comparison::StrictlyBetter {
                violations.push(MatchingPromotesViolation {
                    school: c,
                    assigned,
                    better: alt,
                });
            }
        }
    }
    violations
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingEnvyViolation {
    pub school: SchoolId,
    pub assigned: Student,
    pub envious: Student,
}

/// No justified envy: an envious student replaces an assigned one only if the
/// school weakly gains, and then the assigned student must have priority.
pub fn check_matching_no_justified_envy(
    market: &Market,
    mu: &Matching,
) -> Vec<MatchingEnvyViolation> {
    let mut violations = Vec::new();
    for (c, school) in market.schools.iter().enumerate() {
        let assigned = mu.assigned_to(c);
        for s in assigned.iter() {
            for e in 0..market.ground.n() {
                if assigned.contains(e) || !market.prefs[e].prefers(Some(c), mu.of(e)) {
                    continue;
                }
                let swapped = assigned.swap(s, e);
                if school.pref.compare(swapped, assigned).weakly_better()
                    && !school.priority.prefers(s, e)
                {
                    violations.push(MatchingEnvyViolation {
                        school: c,
                        assigned: s,
                        envious: e,
                    });
                }
            }
        }
    }
    violations
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalityViolation {
    pub student: Student,
    pub school: SchoolId,
}

/// Every student is matched to a listed school or the outside option.
pub fn check_individual_rationality(market: &Market, mu: &Matching) -> Vec<RationalityViolation> {
    (0..market.ground.n())
        .filter_map(|s| match mu.of(s) {
            Some(c) if !market.prefs[s].accepts(c) => {
                Some(RationalityViolation { student: s, school: c })
            }
            _ => None,
        })
        .collect()
}

/// Every strict preference report over every subset of the schools.
pub fn all_reports(school_count: usize) -> Vec<StudentPreference> {
    let mut out = Vec::new();
    for k in 0..=school_count {
        for perm in (0..school_count).permutations(k) {
            out.push(StudentPreference::new(perm));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Deviation {
    pub student: Student,
    pub report: StudentPreference,
    pub truthful_outcome: Option<SchoolId>,
    pub deviant_outcome: Option<SchoolId>,
}

/// Brute-force strategy-proofness of deferred acceptance on this market:
/// every student tries every alternative report, and a deviation is reported
/// when the resulting assignment beats the truthful one under the student's
/// true preference.
pub fn check_strategy_proofness(market: &Market, max_runs: usize) -> Result<Vec<Deviation>, Error> {
    let reports = all_reports(market.schools.len());
    let required = (market.ground.n() * reports.len()) as u128;
    if required > max_runs as u128 {
        return Err(Error::BudgetExceeded {
            required,
            budget: max_runs,
        });
    }
    let truthful = deferred_acceptance(market, DEFAULT_MAX_SUBSETS)?.matching;
    let mut deviations = Vec::new();
    for s in 0..market.ground.n() {
        for report in &reports {
            if *report == market.prefs[s] {
                continue;
            }
            let mut profile = market.prefs.clone();
            profile[s] = report.clone();
            let outcome = deferred_acceptance_with(market, &profile, DEFAULT_MAX_SUBSETS)?.matching;
            if market.prefs[s].prefers(outcome.of(s), truthful.of(s)) {
                deviations.push(Deviation {
                    student: s,
                    report: report.clone(),
                    truthful_outcome: truthful.of(s),
                    deviant_outcome: outcome.of(s),
                });
            }
        }
    }
    Ok(deviations)
}

/// Immediate-acceptance ("Boston") control: each round, schools choose from
/// the round's proposers at remaining capacity and assignments are permanent.
/// Known to be manipulable; it exists as a contrast for the tester above.
pub fn immediate_acceptance(market: &Market, max_subsets: usize) -> Result<Matching, Error> {
    immediate_acceptance_with(market, &market.prefs, max_subsets)
}

pub fn immediate_acceptance_with(
    market: &Market,
    reported: &[StudentPreference],
    max_subsets: usize,
) -> Result<Matching, Error> {
    let n = market.ground.n();
    let mut next_idx = vec![0usize; n];
    let mut assignment: Vec<Option<SchoolId>> = vec![None; n];
    let mut remaining: Vec<usize> = market.schools.iter().map(|c| c.capacity).collect();
    loop {
        let mut proposals: Vec<(Student, SchoolId)> = Vec::new();
        for s in 0..n {
            if assignment[s].is_none() && next_idx[s] < reported[s].ranked().len() {
                proposals.push((s, reported[s].ranked()[next_idx[s]]));
            }
        }
        if proposals.is_empty() {
            break;
        }
        for (c, school) in market.schools.iter().enumerate() {
            let proposers: StudentSet = proposals
                .iter()
                .filter(|&&(_, t)| t == c)
                .map(|&(s, _)| s)
                .collect();
            if proposers.is_empty() {
                continue;
            }
            let accepted = if remaining[c] == 0 {
                StudentSet::EMPTY
            } else {
                distributional_choice(
                    school.pref.as_ref(),
                    &school.priority,
                    remaining[c],
                    proposers,
                    max_subsets,
                )?
            };
            for s in accepted.iter() {
                assignment[s] = Some(c);
            }
            remaining[c] -= accepted.len();
            for s in proposers.difference(accepted).iter() {
                next_idx[s] += 1;
            }
        }
    }
    Ok(Matching { assignment })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preferences::{
        additive_preference, soft_bounds_preference, Bounds, TypeAssignment, ValueFunction,
    };

    fn zero_pref(n: usize) -> Box<dyn DistributionalPreference> {
        Box::new(additive_preference(ValueFunction::new(vec![0.0; n])))
    }

    fn single_school_market() -> Market {
        let tau = TypeAssignment::new(vec![1, 1, 1, 0, 0], 2);
        let bounds = Bounds::new(vec![2, 0], vec![3, 3]).unwrap();
        let school = School::new(
            3,
            PriorityRanking::identity(5),
            Box::new(soft_bounds_preference(tau, bounds, 3)),
        );
        let prefs = vec![StudentPreference::new(vec![0]); 5];
        Market::new(GroundSet::new(5), vec![school], prefs)
    }

    #[test]
    fn everyone_unacceptable_means_outside_option() {
        let market = Market::new(
            GroundSet::new(3),
            vec![School::new(2, PriorityRanking::identity(3), zero_pref(3))],
            vec![StudentPreference::new(vec![]); 3],
        );
        let out = deferred_acceptance(&market, DEFAULT_MAX_SUBSETS).unwrap();
        assert!(out.trace.is_empty());
        assert_eq!(out.matching.assignment, vec![None, None, None]);
    }

    #[test]
    fn single_school_reduces_to_one_choice() {
        let market = single_school_market();
        let out = deferred_acceptance(&market, DEFAULT_MAX_SUBSETS).unwrap();
        let expected: StudentSet = [0usize, 3, 4].into_iter().collect();
        assert_eq!(out.matching.assigned_to(0), expected);
        assert!(check_matching_non_wasteful(&market, &out.matching).is_empty());
        assert!(check_matching_promotes(&market, &out.matching).is_empty());
        assert!(check_matching_no_justified_envy(&market, &out.matching).is_empty());
        assert!(check_individual_rationality(&market, &out.matching).is_empty());
    }

    fn micro_market() -> Market {
        // 2 schools x 4 students with a common injective additive preference
        // and aligned priorities, so exactly one matching survives the
        // checkers and the brute-force comparison is meaningful
        let ground = GroundSet::new(4);
        let schools = vec![
            School::new(
                2,
                PriorityRanking::new(vec![0, 1, 2, 3]).unwrap(),
                Box::new(additive_preference(ValueFunction::new(vec![
                    4.0, 3.0, 2.0, 1.0,
                ]))),
            ),
            School::new(
                2,
                PriorityRanking::new(vec![0, 1, 2, 3]).unwrap(),
                Box::new(additive_preference(ValueFunction::new(vec![
                    4.0, 3.0, 2.0, 1.0,
                ]))),
            ),
        ];
        let prefs = vec![
            StudentPreference::new(vec![1, 0]),
            StudentPreference::new(vec![0, 1]),
            StudentPreference::new(vec![0, 1]),
            StudentPreference::new(vec![1, 0]),
        ];
        Market::new(ground, schools, prefs)
    }

    /// All capacity-respecting matchings of a market.
    fn all_matchings(market: &Market) -> Vec<Matching> {
        let n = market.ground.n();
        let m = market.schools.len();
        let mut out = Vec::new();
        let mut assignment: Vec<Option<SchoolId>> = vec![None; n];
        fn go(
            s: usize,
            n: usize,
            m: usize,
            market: &Market,
            assignment: &mut Vec<Option<SchoolId>>,
            out: &mut Vec<Matching>,
        ) {
            if s == n {
                out.push(Matching {
                    assignment: assignment.clone(),
                });
                return;
            }
            for a in std::iter::once(None).chain((0..m).map(Some)) {
                if let Some(c) = a {
                    let used = assignment[..s].iter().filter(|&&x| x == Some(c)).count();
                    if used >= market.schools[c].capacity {
                        continue;
                    }
                }
                assignment[s] = a;
                go(s + 1, n, m, market, assignment, out);
            }
            assignment[s] = None;
        }
        go(0, n, m, market, &mut assignment, &mut out);
        out
    }

    fn passes_all(market: &Market, mu: &Matching) -> bool {
        check_individual_rationality(market, mu).is_empty()
            && check_matching_non_wasteful(market, mu).is_empty()
            && check_matching_promotes(market, mu).is_empty()
            && check_matching_no_justified_envy(market, mu).is_empty()
    }

    #[test]
    fn micro_market_da_matches_brute_force_unique_solution() {
        let market = micro_market();
        let da = deferred_acceptance(&market, DEFAULT_MAX_SUBSETS).unwrap().matching;
        let valid: Vec<Matching> = all_matchings(&market)
            .into_iter()
            .filter(|mu| passes_all(&market, mu))
            .collect();
        assert_eq!(valid, vec![da]);
    }

    #[test]
    fn planted_matching_violations_are_caught() {
        let market = single_school_market();
        let everyone_out = Matching {
            assignment: vec![None; 5],
        };
        assert!(!check_matching_non_wasteful(&market, &everyone_out).is_empty());

        let market2 = Market::new(
            GroundSet::new(2),
            vec![School::new(1, PriorityRanking::identity(2), zero_pref(2))],
            vec![
                StudentPreference::new(vec![0]),
                StudentPreference::new(vec![]),
            ],
        );
        let irrational = Matching {
            assignment: vec![None, Some(0)],
        };
        assert_eq!(
            check_individual_rationality(&market2, &irrational),
            vec![RationalityViolation { student: 1, school: 0 }]
        );

        // lowest-priority student seated while a higher one envies, under a
        // totally indifferent school preference
        let market3 = Market::new(
            GroundSet::new(2),
            vec![School::new(1, PriorityRanking::identity(2), zero_pref(2))],
            vec![StudentPreference::new(vec![0]); 2],
        );
        let unfair = Matching {
            assignment: vec![None, Some(0)],
        };
        assert_eq!(
            check_matching_no_justified_envy(&market3, &unfair),
            vec![MatchingEnvyViolation {
                school: 0,
                assigned: 1,
                envious: 0,
            }]
        );
    }

    fn contested_2x3_market() -> Market {
        let ground = GroundSet::new(3);
        let schools = vec![
            School::new(1, PriorityRanking::new(vec![0, 1, 2]).unwrap(), zero_pref(3)),
            School::new(1, PriorityRanking::new(vec![1, 2, 0]).unwrap(), zero_pref(3)),
        ];
        let prefs = vec![StudentPreference::new(vec![0, 1]); 3];
        Market::new(ground, schools, prefs)
    }

    #[test]
    fn da_is_strategy_proof_on_micro_markets() {
        for market in [micro_market(), contested_2x3_market()] {
            let deviations = check_strategy_proofness(&market, 10_000).unwrap();
            assert!(deviations.is_empty(), "{deviations:?}");
        }
    }

    #[test]
    fn immediate_acceptance_is_manipulable() {
        let market = contested_2x3_market();
        let truthful = immediate_acceptance(&market, DEFAULT_MAX_SUBSETS).unwrap();
        // truthfully, s2 loses c0 to s0 and arrives at c1 after it is filled
        assert_eq!(truthful.of(2), None);
        let mut profile = market.prefs.clone();
        profile[2] = StudentPreference::new(vec![1, 0]);
        let deviant = immediate_acceptance_with(&market, &profile, DEFAULT_MAX_SUBSETS).unwrap();
        assert_eq!(deviant.of(2), Some(1));
        assert!(market.prefs[2].prefers(deviant.of(2), truthful.of(2)));
    }

    #[test]
    fn strategy_proofness_budget_is_enforced() {
        let market = contested_2x3_market();
        assert!(matches!(
            check_strategy_proofness(&market, 2),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn school_processing_order_does_not_matter() {
        // relabel the schools of the contested market and check the matching
        // transports along the relabeling
        let market = contested_2x3_market();
        let swapped = Market::new(
            GroundSet::new(3),
            vec![
                School::new(1, PriorityRanking::new(vec![1, 2, 0]).unwrap(), zero_pref(3)),
                School::new(1, PriorityRanking::new(vec![0, 1, 2]).unwrap(), zero_pref(3)),
            ],
            vec![StudentPreference::new(vec![1, 0]); 3],
        );
        let a = deferred_acceptance(&market, DEFAULT_MAX_SUBSETS).unwrap().matching;
        let b = deferred_acceptance(&swapped, DEFAULT_MAX_SUBSETS).unwrap().matching;
        let relabeled: Vec<Option<SchoolId>> = b
            .assignment
            .iter()
            .map(|a| a.map(|c| 1 - c))
            .collect();
        assert_eq!(a.assignment, relabeled);
    }

    #[test]
    fn desk_scale_mechanism_uniqueness() {
        // 2 schools with capacity 1 and opposed priorities, 2 students, fully
        // indifferent distributional preferences. Over all 25 preference
        // profiles, enumerate every profile -> matching table whose entries
        // pass the four matching checkers, then filter by strategy-proofness
        // under the true profile semantics; exactly the deferred-acceptance
        // table survives.
        let make_market = |prefs: Vec<StudentPreference>| {
            Market::new(
                GroundSet::new(2),
                vec![
                    School::new(1, PriorityRanking::new(vec![0, 1]).unwrap(), zero_pref(2)),
                    School::new(1, PriorityRanking::new(vec![1, 0]).unwrap(), zero_pref(2)),
                ],
                prefs,
            )
        };
        let reports = all_reports(2);
        let profiles: Vec<Vec<StudentPreference>> = reports
            .iter()
            .cartesian_product(&reports)
            .map(|(a, b)| vec![a.clone(), b.clone()])
            .collect();
        let mut valid_per_profile: Vec<Vec<Matching>> = Vec::new();
        let mut da_table: Vec<Matching> = Vec::new();
        for profile in &profiles {
            let market = make_market(profile.clone());
            let da = deferred_acceptance(&market, DEFAULT_MAX_SUBSETS).unwrap().matching;
            let valid: Vec<Matching> = all_matchings(&market)
                .into_iter()
                .filter(|mu| passes_all(&market, mu))
                .collect();
            assert!(valid.contains(&da));
            valid_per_profile.push(valid);
            da_table.push(da);
        }
        let table_count: usize = valid_per_profile.iter().map(Vec::len).product();
        assert!(table_count < 1 << 16, "table space unexpectedly large");
        let profile_index = |profile: &[StudentPreference]| {
            profiles.iter().position(|p| p == profile).unwrap()
        };
        let strategy_proof = |table: &[&Matching]| {
            for (i, profile) in profiles.iter().enumerate() {
                for s in 0..2 {
                    for report in &reports {
                        let mut deviant = profile.clone();
                        deviant[s] = report.clone();
                        let j = profile_index(&deviant);
                        if profile[s].prefers(table[j].of(s), table[i].of(s)) {
                            return false;
                        }
                    }
                }
            }
            true
        };
        let mut survivors = 0;
        let mut table: Vec<&Matching> = Vec::new();
        fn search<'a>(
            i: usize,
            valid: &'a [Vec<Matching>],
            table: &mut Vec<&'a Matching>,
            check: &dyn Fn(&[&Matching]) -> bool,
            survivors: &mut usize,
            da: &[Matching],
        ) {
            if i == valid.len() {
                if check(table) {
                    *survivors += 1;
                    for (t, d) in table.iter().zip(da) {
                        assert_eq!(**t, *d, "a non-DA table passed all checks");
                    }
                }
                return;
            }
            for mu in &valid[i] {
                table.push(mu);
                search(i + 1, valid, table, check, survivors, da);
                table.pop();
            }
        }
        search(
            0,
            &valid_per_profile,
            &mut table,
            &strategy_proof,
            &mut survivors,
            &da_table,
        );
        assert_eq!(survivors, 1);
    }
}
