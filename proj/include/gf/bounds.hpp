#pragma once

#include "gf/fraction.hpp"
#include "gf/tree.hpp"

#include <map>
#include <span>

namespace gf {

struct WilberResult {
  std::map<Key, std::uint64_t> alt_per_inner_node;
  Fraction bound;  // m + (1/2) sum ALT(u); cost(OPT, x) is at least this
};

// Wilber's first bound with `ref` as the fixed reference tree. Every query
// must be a leaf of `ref`; anything else is rejected, not approximated. The
// first visit to an inner node counts as no alternation.
WilberResult wilber1(std::span<const Key> x, const Tree& ref);

struct StaticDpResult {
  Tree tree;
  std::uint64_t cost;  // sum over keys of count * (depth + 1)
};

// Optimal static BST over keys 1..n for the given access counts (indexed by
// key; zero-count keys still occupy tree slots). Interval DP with the Knuth
// root-monotonicity window, O(n^2).
StaticDpResult static_opt(std::span<const std::uint64_t> counts, Key n);

double entropy_bits(std::span<const Fraction> frequencies);

}  // namespace gf
