// Acceptance suite: one test per criterion, each printing a PASS/FAIL line
// with the measured values. Run via `ctest -R acceptance` or directly.

#include "gf/criteria.hpp"

#include <doctest.h>

#include <cstdio>

namespace {

constexpr std::uint64_t kSeed = 20250809;
// Criterion 6 serves 3^8 * 10^4 queries plus the enforcement prefix, above
// the CLI default; the suite pins its own budget.
constexpr std::uint64_t kBudget = 1ull << 27;

void report(const gf::CheckResult& result) {
  std::printf("[%s] %s: %s\n", result.pass ? "PASS" : "FAIL", result.name.c_str(),
              result.detail.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(result.pass, result.name, ": ", result.detail);
}

}  // namespace

TEST_CASE("criterion 1: smallest instances, exact costs") { report(gf::criterion_small_instances_exact()); }

TEST_CASE("criterion 2: stable sequences are served statically") { report(gf::criterion_fixed_structure(kSeed)); }

TEST_CASE("criterion 3: GF cost formula") { report(gf::criterion_gf_cost_formula()); }

TEST_CASE("criterion 4: promotion formula") { report(gf::criterion_promotion_formula()); }

TEST_CASE("criterion 5: F-tree weakly-stable pair") { report(gf::criterion_f_tree_pair()); }

TEST_CASE("criterion 6: multiplicative convergence") {
  report(gf::criterion_multiplicative_ratio(kBudget));
}

TEST_CASE("criterion 7: additive gap") { report(gf::criterion_additive_gap(kBudget)); }

TEST_CASE("criterion 8: wilber sandwich") { report(gf::criterion_wilber_sandwich(kSeed)); }

TEST_CASE("criterion 9: exact OPT sandwich") { report(gf::criterion_opt_sandwich()); }

TEST_CASE("criterion 10: enforcement") { report(gf::criterion_enforcement(kSeed)); }

TEST_CASE("criterion 11: subsequence and reversal ratios") {
  report(gf::criterion_subsequence_reversal(kBudget));
}

TEST_CASE("criterion 12: recurrence solver") { report(gf::criterion_recurrence_solver(kSeed)); }
