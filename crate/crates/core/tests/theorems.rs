//! End-to-end suites tying the preference families to the structural
//! properties, the choice axioms, and the matching guarantees, at sizes
//! where exhaustive verification is feasible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use distchoice::choice::{
    check_no_justified_envy, check_non_wasteful, check_path_independence, check_promotes,
    distributional_choice_rule, reveal_priorities, ChoiceRule, Revealed,
};
use distchoice::frontier::{certify, frontier, DEFAULT_MAX_SUBSETS};
use distchoice::matroid::check_base_axioms;
use distchoice::mechanism::{
    check_individual_rationality, check_matching_no_justified_envy, check_matching_non_wasteful,
    check_matching_promotes, check_strategy_proofness, deferred_acceptance, Market, School,
    StudentPreference,
};
use distchoice::pref::DistributionalPreference;
use distchoice::preferences::{
    additive_preference, dichotomous_bounds_preference, diversity_preference,
    matroid_rank_preference, pointwise_preference, soft_bounds_preference, Bounds, DiversityIndex,
    TypeAssignment, ValueFunction,
};
use distchoice::set::{GroundSet, PriorityRanking, StudentSet};
use distchoice::{partition_matroid, transversal_matroid, vector_matroid};

/// Deterministic pseudo-random values so the family instances are fixed
/// across runs without hand-maintaining tables.
fn seeded_values(n: usize, seed: u64) -> ValueFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ValueFunction::new((0..n).map(|_| rng.gen_range(-5.0..5.0)).collect())
}

fn seeded_tau(n: usize, k: usize, seed: u64) -> TypeAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    TypeAssignment::new((0..n).map(|_| rng.gen_range(0..k)).collect(), k)
}

/// The well-behaved preference families over `n` students at capacity `q`.
fn certified_families(n: usize, q: usize) -> Vec<(&'static str, Box<dyn DistributionalPreference>)> {
    let tau = seeded_tau(n, 3, 7 * n as u64 + q as u64);
    let slots: Vec<StudentSet> = (0..3)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(100 + i + n as u64);
            (0..n).filter(|_| rng.gen_bool(0.6)).collect()
        })
        .collect();
    let vectors: Vec<Vec<u8>> = {
        let mut rng = ChaCha8Rng::seed_from_u64(200 + n as u64);
        (0..n)
            .map(|_| (0..3).map(|_| rng.gen_range(0..2)).collect())
            .collect()
    };
    vec![
        (
            "additive",
            Box::new(additive_preference(seeded_values(n, 1))),
        ),
        (
            "pointwise",
            Box::new(pointwise_preference(seeded_values(n, 2))),
        ),
        (
            "partition-rank",
            Box::new(matroid_rank_preference(partition_matroid(
                tau.clone(),
                vec![1, 2, 1],
            ))),
        ),
        (
            "transversal-rank",
            Box::new(matroid_rank_preference(transversal_matroid(n, slots))),
        ),
        (
            "vector-rank",
            Box::new(matroid_rank_preference(vector_matroid(vectors))),
        ),
        (
            "soft-bounds",
            Box::new(soft_bounds_preference(
                tau.clone(),
                Bounds::new(vec![1, 0, 0], vec![2, 1, 2]).unwrap(),
                q,
            )),
        ),
        (
            "log-diversity",
            Box::new(diversity_preference(tau, DiversityIndex::log(q))),
        ),
    ]
}

#[test]
fn certified_families_pass_all_structural_properties() {
    for n in 4..=6 {
        for q in 2..=3 {
            let ground = GroundSet::new(n);
            for (name, pref) in certified_families(n, q) {
                let cert = certify(pref.as_ref(), &ground, q);
                assert!(
                    cert.fully_certified(),
                    "{name} n={n} q={q}: {:?} {:?} {:?}",
                    cert.upper_bound.violations,
                    cert.maximizer.violations,
                    cert.improvement.violations
                );
            }
        }
    }
}

#[test]
fn frontier_members_form_matroid_bases_for_certified_families() {
    let n = 6;
    let ground = GroundSet::new(n);
    for q in 2..=3 {
        for (name, pref) in certified_families(n, q) {
            for menu in ground.all().subsets() {
                if menu.is_empty() {
                    continue;
                }
                let members = frontier(pref.as_ref(), menu, q, DEFAULT_MAX_SUBSETS)
                    .unwrap()
                    .members;
                let violations = check_base_axioms(&members);
                assert!(violations.is_empty(), "{name} q={q} menu {menu:?}: {violations:?}");
            }
        }
    }
}

#[test]
fn greedy_rule_satisfies_all_axioms_for_certified_families() {
    let n = 6;
    let ground = GroundSet::new(n);
    let pi = PriorityRanking::new(vec![3, 0, 5, 1, 4, 2]).unwrap();
    for q in 2..=3 {
        for (name, pref) in certified_families(n, q) {
            let rule = distributional_choice_rule(pref.as_ref(), pi.clone(), q);
            assert!(check_non_wasteful(&rule, &ground).is_empty(), "{name} q={q}");
            assert!(
                check_promotes(&rule, pref.as_ref(), &ground).is_empty(),
                "{name} q={q}"
            );
            assert!(
                check_no_justified_envy(&rule, pref.as_ref(), &pi, &ground).is_empty(),
                "{name} q={q}"
            );
            let report = check_path_independence(&rule, &ground);
            assert!(report.passed(), "{name} q={q}: {:?}", report.direct.first());
        }
    }
}

#[test]
fn dichotomous_bounds_pass_two_properties_and_fail_improvement() {
    let n = 6;
    let q = 3;
    let ground = GroundSet::new(n);
    let tau = seeded_tau(n, 2, 42);
    let bounds = Bounds::new(vec![2, 0], vec![3, 3]).unwrap();
    let pref = dichotomous_bounds_preference(tau, bounds);
    let cert = certify(&pref, &ground, q);
    assert!(cert.exchange_certified());
    assert!(!cert.improvement.passed());
}

#[test]
fn revealed_priorities_reproduce_the_rule_for_random_priorities() {
    let ground = GroundSet::new(6);
    let mut rng = ChaCha8Rng::seed_from_u64(0xBEEF);
    for q in [2, 3] {
        for (name, pref) in certified_families(6, q) {
            let mut order: Vec<usize> = (0..6).collect();
            for i in (1..6).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let pi = PriorityRanking::new(order).unwrap();
            let rule = distributional_choice_rule(pref.as_ref(), pi, q);
            let Revealed::Ranking(pi_prime) = reveal_priorities(&rule, pref.as_ref(), &ground)
            else {
                panic!("{name}: revealed relation unexpectedly cyclic");
            };
            let rederived = distributional_choice_rule(pref.as_ref(), pi_prime, q);
            for menu in ground.all().subsets() {
                assert_eq!(rederived.choose(menu), rule.choose(menu), "{name} {menu:?}");
            }
        }
    }
}

/// Deterministic random micro-market with certified school preferences.
fn random_market(rng: &mut ChaCha8Rng) -> Market {
    let n = rng.gen_range(3..=6);
    let school_count = rng.gen_range(2..=3);
    let ground = GroundSet::new(n);
    let schools = (0..school_count)
        .map(|_| {
            let mut order: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let pref: Box<dyn DistributionalPreference> = match rng.gen_range(0..3) {
                0 => Box::new(additive_preference(ValueFunction::new(
                    (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect(),
                ))),
                1 => Box::new(additive_preference(ValueFunction::new(vec![0.0; n]))),
                _ => {
                    let tau =
                        TypeAssignment::new((0..n).map(|_| rng.gen_range(0..2)).collect(), 2);
                    let floors = vec![rng.gen_range(0..2), 0];
                    let ceilings = vec![floors[0] + rng.gen_range(0..2) + 1, n];
                    Box::new(soft_bounds_preference(
                        tau,
                        Bounds::new(floors, ceilings).unwrap(),
                        3,
                    ))
                }
            };
            School::new(rng.gen_range(1..=2), PriorityRanking::new(order).unwrap(), pref)
        })
        .collect();
    let prefs = (0..n)
        .map(|_| {
            let mut listed: Vec<usize> = (0..school_count).filter(|_| rng.gen_bool(0.8)).collect();
            for i in (1..listed.len()).rev() {
                listed.swap(i, rng.gen_range(0..=i));
            }
            StudentPreference::new(listed)
        })
        .collect();
    Market::new(ground, schools, prefs)
}

#[test]
fn deferred_acceptance_guarantees_hold_on_random_micro_markets() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDA_2024);
    for i in 0..40 {
        let market = random_market(&mut rng);
        let mu = deferred_acceptance(&market, DEFAULT_MAX_SUBSETS).unwrap().matching;
        assert!(check_individual_rationality(&market, &mu).is_empty(), "market {i}");
        assert!(check_matching_non_wasteful(&market, &mu).is_empty(), "market {i}");
        assert!(check_matching_promotes(&market, &mu).is_empty(), "market {i}");
        assert!(
            check_matching_no_justified_envy(&market, &mu).is_empty(),
            "market {i}"
        );
        if i % 8 == 0 {
            let deviations = check_strategy_proofness(&market, 100_000).unwrap();
            assert!(deviations.is_empty(), "market {i}: {deviations:?}");
        }
    }
}
