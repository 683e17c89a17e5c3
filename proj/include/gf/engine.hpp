#pragma once

#include "gf/tree.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace gf {

// Tie-break between equal first-access times. SmallerDepth (shallower node
// wins the treap root) is the default; the fixed-structure behaviour of
// stable sequences depends on it.
enum class TieBreakPolicy { SmallerDepth, SmallerValue };

inline constexpr std::uint64_t kTauNever = std::numeric_limits<std::uint64_t>::max();

// tau(v_i) = 1-based index into `future` of the first query with a value in
// the open interval (v_{i-1}, v_{i+1}), with -inf/+inf sentinels at the ends;
// kTauNever if no such query exists. `path_keys` must be strictly increasing.
std::vector<std::uint64_t> tau_priorities(std::span<const Key> path_keys, std::span<const Key> future);

struct TreapPriority {
  std::uint64_t tau;
  std::int64_t tie;
  auto operator<=>(const TreapPriority&) const = default;
};

// The unique BST over `sorted_keys` that is a min-heap on the priorities.
// Priorities must be pairwise distinct.
LocalShape build_treap(std::span<const Key> sorted_keys, std::span<const TreapPriority> priorities);

struct GfOptions {
  TieBreakPolicy policy = TieBreakPolicy::SmallerDepth;
  bool record_per_step = true;
  bool record_trace = false;  // per-step fingerprints are O(n) each
};

struct GfStep {
  std::uint64_t t = 0;  // 1-based step index
  Key query = 0;
  std::uint32_t path_len = 0;
  bool restructured = false;
  std::uint64_t tree_fingerprint = 0;  // only filled when tracing
};

struct GfTrace {
  std::vector<GfStep> steps;
};

struct GfResult {
  CostReport report;
  GfTrace trace;
  Tree tree;
};

namespace detail {

class MinSegTree {
 public:
  void build(std::span<const std::uint32_t> leaf_values);
  void set(std::uint32_t pos, std::uint32_t value);
  std::uint32_t range_min(std::uint32_t lo, std::uint32_t hi) const;  // inclusive; lo>hi => UINT32_MAX

 private:
  std::uint32_t size_ = 1;
  std::vector<std::uint32_t> node_;
};

}  // namespace detail

// Incremental GreedyFuture run: after each served query the search path is
// rebuilt as a treap keyed by first future access, and the hanging subtrees
// reattach in their key gaps. Only path-node links (and the parents of
// hanging subtree roots) ever change, so the per-step cost |P u U| equals
// the path length.
class GfEngine {
 public:
  GfEngine(Tree t0, std::vector<Key> queries, GfOptions options = {});

  bool done() const { return t_ == queries_.size(); }
  std::uint64_t position() const { return t_; }
  GfStep step();

  const Tree& tree() const { return tree_; }
  Tree take_tree() { return std::move(tree_); }
  const CostReport& report() const { return report_; }
  GfTrace& trace() { return trace_; }

 private:
  Tree tree_;
  std::vector<Key> queries_;
  GfOptions options_;
  std::vector<std::uint32_t> next_same_;  // next occurrence of the same value, m if none
  detail::MinSegTree occurrences_;        // per value: earliest remaining occurrence time
  std::uint64_t t_ = 0;
  CostReport report_;
  GfTrace trace_;

  // per-step scratch, reused across steps
  std::vector<Key> sorted_keys_;
  std::vector<std::int32_t> sorted_depth_;
  std::vector<Key> high_side_;
  std::vector<std::int32_t> high_depth_;
  std::vector<TreapPriority> priorities_;
  std::vector<std::int32_t> treap_left_, treap_right_, treap_stack_;
  std::vector<Key> old_left_, old_right_, hang_roots_;
};

GfResult gf_serve(const Tree& t0, std::span<const Key> x, GfOptions options = {});

// True iff GreedyFuture with SmallerDepth tie-breaking leaves the tree
// untouched on every step.
bool gf_is_static(const Tree& t0, std::span<const Key> x);

}  // namespace gf
