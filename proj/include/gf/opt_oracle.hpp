#pragma once

#include "gf/tree.hpp"

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

namespace gf {

using ShapeId = std::int32_t;

struct ShapeCatalog {
  Key n = 0;
  std::vector<Tree> shapes;  // all BSTs over 1..n, canonically ordered
  std::unordered_map<std::string, ShapeId> id_by_serialization;

  ShapeId id_of(const Tree& t) const;
};

ShapeCatalog enumerate_shapes(Key n);  // 1 <= n <= 8

// How the per-step rebuild region U of the cost |P u U| may be chosen.
// Permissive: any connected region, including one detached from the search
// path (the region's hull is what the cost model charges, so a single
// connected region loses no generality). RootedRestricted: the region must
// contain both the root and the queried key, and then P subset U.
enum class RegionSemantics { Permissive, RootedRestricted };

struct Transition {
  ShapeId to = 0;
  std::uint32_t cost = 0;  // |P u U|; dominated (same target, higher cost) pruned
};

struct BruteForceOpt {
  std::uint64_t cost = 0;
  std::vector<ShapeId> trajectory;  // tree after each step, length m
};

// Exact dynamic OPT over all shape trajectories; transition lists are
// memoized per (shape, query) so many instances can share one oracle.
class OptOracle {
 public:
  OptOracle(Key n, RegionSemantics semantics = RegionSemantics::Permissive);

  const ShapeCatalog& catalog() const { return catalog_; }
  const std::vector<Transition>& transitions_for(ShapeId from, Key query);

  // Guards: n <= 6, |x| <= 14.
  BruteForceOpt solve(const Tree& t0, std::span<const Key> x);

 private:
  ShapeCatalog catalog_;
  RegionSemantics semantics_;
  std::vector<std::vector<Transition>> memo_;  // indexed by from * n + (query-1)
  std::vector<char> ready_;
};

std::vector<Transition> transitions(const ShapeCatalog& catalog, ShapeId from, Key query,
                                    RegionSemantics semantics = RegionSemantics::Permissive);

BruteForceOpt brute_force_opt(const Tree& t0, std::span<const Key> x,
                              RegionSemantics semantics = RegionSemantics::Permissive);

}  // namespace gf
