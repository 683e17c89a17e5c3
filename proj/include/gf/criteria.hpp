#pragma once

#include "gf/experiments.hpp"

#include <cstdint>
#include <vector>

namespace gf {

// One evaluator per acceptance criterion; each returns pass/fail plus the
// measured numbers. The acceptance test binary and `verify --level full`
// both run these.
CheckResult criterion_small_instances_exact();
CheckResult criterion_fixed_structure(std::uint64_t seed);
CheckResult criterion_gf_cost_formula();
CheckResult criterion_promotion_formula();
CheckResult criterion_f_tree_pair();
CheckResult criterion_multiplicative_ratio(std::uint64_t max_queries);
CheckResult criterion_additive_gap(std::uint64_t max_queries);
CheckResult criterion_wilber_sandwich(std::uint64_t seed);
CheckResult criterion_opt_sandwich();
CheckResult criterion_enforcement(std::uint64_t seed);
CheckResult criterion_subsequence_reversal(std::uint64_t max_queries);
CheckResult criterion_recurrence_solver(std::uint64_t seed);

std::vector<CheckResult> all_criteria(std::uint64_t max_queries, std::uint64_t seed);

// Hand-built reference instances shared by the criteria and the test suites.
StabilityTree strong3_tree();   // 3 keys, strong root
StabilityTree weak5_tree();   // 5 keys, weak right-biased root
StabilityTree strong7_tree();    // 7 keys, all strong
Tree strong3_promoted();        // 1(-,3(2,-))
Tree enforce11_tree();             // 11-key enforcement example

// Seeded corpus of random stability trees; instances whose atomic period
// exceeds `atomic_cap` are resampled to keep runs inside the time budgets.
std::vector<StabilityTree> stable_corpus(int count, int max_leaves, std::uint64_t atomic_cap,
                                         std::mt19937_64& rng);

}  // namespace gf
