//! Distributional preferences over sets of students, the greedy priority
//! choice rule they induce, matroid oracles, frontier computation, and
//! deferred-acceptance matching, together with executable checkers for the
//! axioms the theory rests on.

pub mod choice;
pub mod error;
pub mod frontier;
pub mod matroid;
pub mod mechanism;
pub mod pref;
pub mod preferences;
pub mod set;

pub use choice::{
    check_no_justified_envy, check_non_wasteful, check_path_independence, check_promotes,
    check_trichotomy, check_unique_characterization, choice_table, distributional_choice,
    distributional_choice_rule, fn_rule, reveal_priorities, ChoiceRule, CycleWitness,
    DistributionalChoiceRule, Revealed,
};
pub use error::Error;
pub use frontier::{
    certify, check_improvement_property, check_maximizer_property, check_upper_bound_property,
    frontier, non_wasteful_sets, Certification, FrontierResult, PropertyReport,
    DEFAULT_MAX_SUBSETS,
};
pub use matroid::{
    bases, check_base_axioms, check_independence_axioms, greedy_basis, partition_matroid, rank,
    transversal_matroid, vector_matroid, MatroidOracle,
};
pub use mechanism::{
    check_individual_rationality, check_matching_no_justified_envy, check_matching_non_wasteful,
    check_matching_promotes, check_strategy_proofness, deferred_acceptance,
    deferred_acceptance_with, immediate_acceptance, immediate_acceptance_with, Market, Matching,
    School, StudentPreference,
};
pub use pref::{compare, transitivity_check, Comparison, DistributionalPreference, SCORE_TOLERANCE};
pub use preferences::{
    additive_preference, check_q_ordinal_concavity, dichotomous_bounds_preference,
    diversity_preference, matroid_rank_preference, pointwise_preference, same_frontier_check,
    satisfies_bounds, soft_bounds_preference, Bounds, DiversityIndex, TypeAssignment,
    ValueFunction,
};
pub use set::{priority_dominates, GroundSet, PriorityRanking, Student, StudentSet, MAX_STUDENTS};
