#pragma once

#include "gf/bounds.hpp"
#include "gf/enforce.hpp"
#include "gf/engine.hpp"
#include "gf/opt_oracle.hpp"
#include "gf/patterns.hpp"
#include "gf/stability.hpp"

#include <json.hpp>

#include <random>
#include <string>
#include <vector>

namespace gf {

using Json = nlohmann::json;

inline constexpr std::uint64_t kDefaultMaxQueries = 1ull << 25;
inline constexpr const char* kToolVersion = "0.1.0";

Tree balanced_tree(Key n);                       // midpoint-rooted complete tree
Tree random_bst(Key n, std::mt19937_64& rng);    // uniform over the Catalan(n) shapes, n <= 512

// Total static serving cost with depths resolved once.
std::uint64_t static_total(const Tree& t, std::span<const Key> x);

// Average GF cost per query on the weakly-stable F_r sequence and the
// average promotion of its optimized tree: 6(1-(2/3)^r)+(2/3)^r and
// 3(1-(2/3)^r).
Fraction predicted_gf_cost_weak_f(int r);
Fraction predicted_promotion_weak_f(int r);

struct RatioRow {
  int r = 0;
  std::uint64_t reps = 0;
  Key n = 0;
  std::uint64_t m_total = 0, m_z = 0, prefix_len = 0;
  std::uint64_t gf_total = 0, gf_z_total = 0, promoted_total = 0;
  Fraction gf_avg, gf_z_avg, promoted_avg;
  Fraction wilber_z_per_query;
  Fraction predicted_gf, predicted_opt_upper, ratio_limit;
  double ratio_measured = 0;  // gf_total / promoted_total, prefix included
  bool boundary_matches_target = false;
};

RatioRow ratio_row(int r, std::uint64_t reps, std::uint64_t max_queries);
std::string ratio_table_csv(std::span<const int> r_values, std::uint64_t reps, std::uint64_t max_queries);

struct GapRow {
  int k = 0, r = 0;
  Int n, m;
  bool measured = false;
  std::uint64_t gf_total = 0, promoted_total = 0;
  Fraction gf_avg, promoted_avg, gap_measured;
  Fraction predicted_gap_value;
  double lglg_n = 0, gap_over_lglgn = 0;
};

// Measured when k*r <= 24 and 2^{kr} fits the budget; closed-form only
// otherwise.
GapRow gap_row(int k, int r, std::uint64_t max_queries);
std::string gap_table_csv(std::span<const int> k_values, int fixed_r, bool rule_two_pow_k,
                          std::uint64_t max_queries);

Json ratio_table_json(std::span<const int> r_values, std::uint64_t reps, std::uint64_t max_queries);
Json gap_table_json(std::span<const int> k_values, int fixed_r, bool rule_two_pow_k,
                    std::uint64_t max_queries);

// Parses the {"k": ..., "r": ..., "mode": "all-strong"|"weak-trunk-roots"}
// descriptor used by configs.
KrTreeSpec kr_spec_from_json(const Json& j);

// Lower/upper bound report, one row per instance:
// instance-id,m,n,gf_cost,wilber_bound,static_opt_cost,promoted_tree_cost.
// Instances are stability trees (text form or a kr descriptor) served for
// `reps` atomic periods; promoted_tree_cost is empty for non-(k,r) shapes.
std::string bound_report_csv(const Json& instances, std::uint64_t max_queries);

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::vector<CheckResult> run_verify(VerifyLevel level, std::uint64_t max_queries, std::uint64_t seed);

// Config-file entry point: {"cmd": "gf"|"enforce"|"opt"|"generate"|"wilber"|
// "static-opt", ...}. Pure: returns the result document, no files written.
Json dispatch_run(const Json& config, std::uint64_t max_queries);

std::string format_double(double v);  // shortest round-trip form
std::string csv_escape(const std::string& cell);

}  // namespace gf
