//! Property-based invariants across randomly generated instances: set
//! algebra, comparator contracts, frontier/choice coherence, and matroid
//! rank laws.

use proptest::prelude::{Rng, *};

use distchoice::choice::distributional_choice;
use distchoice::frontier::{frontier, DEFAULT_MAX_SUBSETS};
use distchoice::matroid::{partition_matroid, rank, transversal_matroid, vector_matroid, MatroidOracle};
use distchoice::pref::{Comparison, DistributionalPreference};
use distchoice::preferences::{
    additive_preference, pointwise_preference, soft_bounds_preference, Bounds, TypeAssignment,
    ValueFunction,
};
use distchoice::set::{priority_dominates, PriorityRanking, StudentSet};

const N: usize = 7;

fn subset() -> impl Strategy<Value = StudentSet> {
    (0u64..(1 << N)).prop_map(StudentSet::from_bits)
}

fn values() -> impl Strategy<Value = ValueFunction> {
    proptest::collection::vec(-10.0f64..10.0, N).prop_map(ValueFunction::new)
}

fn ranking() -> impl Strategy<Value = PriorityRanking> {
    Just(()).prop_perturb(|_, mut rng| {
        let mut order: Vec<usize> = (0..N).collect();
        for i in (1..N).rev() {
            order.swap(i, rng.gen_range(0..=i));
        }
        PriorityRanking::new(order).unwrap()
    })
}

fn soft_pref() -> impl Strategy<Value = distchoice::preferences::SoftBoundsPreference> {
    (
        proptest::collection::vec(0usize..3, N),
        proptest::collection::vec(0usize..3, 3),
        proptest::collection::vec(0usize..3, 3),
    )
        .prop_map(|(tau, floors, extra)| {
            let ceilings: Vec<usize> = floors.iter().zip(&extra).map(|(&f, &e)| f + e).collect();
            soft_bounds_preference(
                TypeAssignment::new(tau, 3),
                Bounds::new(floors, ceilings).unwrap(),
                3,
            )
        })
}

proptest! {
    #[test]
    fn set_algebra_laws(a in subset(), b in subset()) {
        prop_assert_eq!(a.union(b).len() + a.intersection(b).len(), a.len() + b.len());
        prop_assert!(a.union(b).difference(b).is_subset_of(a));
        prop_assert!(a.intersection(b).is_subset_of(a));
        prop_assert_eq!(a.difference(b).union(a.intersection(b)), a);
    }

    #[test]
    fn subsets_of_size_is_exactly_the_k_subsets(a in subset(), k in 0usize..=N) {
        let subs = a.subsets_of_size(k);
        let expected: Vec<StudentSet> = a
            .subsets()
            .into_iter()
            .filter(|s| s.len() == k)
            .collect();
        prop_assert_eq!(subs, expected);
    }

    #[test]
    fn comparisons_mirror(f in values(), a in subset(), b in subset()) {
        let prefs: Vec<Box<dyn DistributionalPreference>> = vec![
            Box::new(additive_preference(f.clone())),
            Box::new(pointwise_preference(f)),
        ];
        for p in &prefs {
            if p.equal_size_only() && a.len() != b.len() {
                continue;
            }
            prop_assert_eq!(p.compare(a, b), p.compare(b, a).flip());
            prop_assert_eq!(p.compare(a, a), Comparison::Indifferent);
        }
    }

    #[test]
    fn soft_bounds_weak_preference_is_transitive(
        pref in soft_pref(),
        a in subset(),
        b in subset(),
        c in subset(),
    ) {
        if pref.compare(a, b).weakly_better() && pref.compare(b, c).weakly_better() {
            prop_assert!(pref.compare(a, c).weakly_better());
        }
    }

    #[test]
    fn choice_lands_on_frontier_and_is_idempotent(
        f in values(),
        pi in ranking(),
        menu in subset(),
        q in 1usize..=3,
    ) {
        let pref = pointwise_preference(f);
        let out = distributional_choice(&pref, &pi, q, menu, DEFAULT_MAX_SUBSETS).unwrap();
        prop_assert_eq!(out.len(), q.min(menu.len()));
        if !menu.is_empty() {
            let members = frontier(&pref, menu, q, DEFAULT_MAX_SUBSETS).unwrap().members;
            prop_assert!(members.contains(&out));
        }
        let again = distributional_choice(&pref, &pi, q, out, DEFAULT_MAX_SUBSETS).unwrap();
        prop_assert_eq!(again, out);
    }

    #[test]
    fn priority_domination_is_transitive(
        pi in ranking(),
        a in subset(),
        b in subset(),
        c in subset(),
    ) {
        if priority_dominates(&pi, a, b) && priority_dominates(&pi, b, c) {
            prop_assert!(priority_dominates(&pi, a, c));
        }
    }

    #[test]
    fn matroid_ranks_are_monotone_and_submodular(
        tau in proptest::collection::vec(0usize..3, N),
        caps in proptest::collection::vec(0usize..3, 3),
        slots in proptest::collection::vec(0u64..(1 << N), 0..4),
        vectors in proptest::collection::vec(proptest::collection::vec(0u8..2, 3), N),
        a in subset(),
        b in subset(),
    ) {
        let oracles: Vec<Box<dyn MatroidOracle>> = vec![
            Box::new(partition_matroid(TypeAssignment::new(tau, 3), caps)),
            Box::new(transversal_matroid(N, slots.into_iter().map(StudentSet::from_bits).collect())),
            Box::new(vector_matroid(vectors)),
        ];
        for m in &oracles {
            let (ra, rb) = (rank(m.as_ref(), a), rank(m.as_ref(), b));
            prop_assert!(rank(m.as_ref(), a.union(b)) >= ra.max(rb));
            prop_assert!(
                rank(m.as_ref(), a.union(b)) + rank(m.as_ref(), a.intersection(b)) <= ra + rb
            );
        }
    }
}
