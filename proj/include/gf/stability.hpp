#pragma once

#include "gf/fraction.hpp"
#include "gf/tree.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gf {

// Per-inner-node access pattern. Strong nodes alternate sides starting from
// their initial side; weak nodes cycle [L,L,R] (left bias) or [R,R,L] (right
// bias), with the doubled side leading to the favored child.
enum class StabilityKind : std::uint8_t { None, StrongL, StrongR, WeakLeft, WeakRight };

using SidePattern = std::span<const bool>;  // false = left, true = right
SidePattern side_pattern(StabilityKind kind);

struct StabilityTree {
  Tree tree;
  std::vector<StabilityKind> kind;      // by key; None for leaves
  std::vector<std::uint8_t> cursor0;    // initial cursor per key, < pattern length
};

enum class StabilityClass { Strong, Weak, Mixed };

struct StabilityValidation {
  bool ok = true;
  StabilityClass cls = StabilityClass::Strong;
  std::string first_violation;
  explicit operator bool() const { return ok; }
};

StabilityValidation validate_stability(const StabilityTree& st);

// Cursor-driven query stream: each emitted query walks root to leaf taking
// every visited inner node's current pattern element and advancing only the
// visited cursors.
class SequenceGenerator {
 public:
  explicit SequenceGenerator(const StabilityTree& st);
  Key next();
  void reset();

 private:
  const StabilityTree* st_;
  std::vector<std::uint8_t> cursor_;
};

std::vector<Key> generate(const StabilityTree& st, std::uint64_t count);
// Queries of one atomic period accumulated into per-key counts.
std::vector<std::uint64_t> atomic_counts(const StabilityTree& st);

// 2^max(a) * 3^max(b) over the leaves; throws if it does not fit in 64 bits.
std::uint64_t atomic_length(const StabilityTree& st);

struct LeafProfile {
  Key leaf = 0;
  int a = 0;  // strongly-stable ancestors that are not favored children
  int b = 0;  // weakly-stable ancestors
  Fraction frequency;
};

std::vector<LeafProfile> leaf_profiles(const StabilityTree& st);

// Independent verification: per inner node, the subsequence of x restricted
// to that node's subtree must follow the node's declared pattern from its
// declared cursor. Also rejects queries that are not leaves.
bool check_stability(std::span<const Key> x, const StabilityTree& st);

// Tree serialization extended with per-inner-node tags !S_L, !S_R, !WL, !WR.
std::string serialize_stability(const StabilityTree& st);
StabilityTree parse_stability(const std::string& text);

// Test corpus: uniform full tree shape with `leaves` leaves, each eligible
// inner node independently weak with probability `weak_prob` (eligible when
// the would-be favored child is inner); favored children are forced strong
// with the matching initial side.
StabilityTree random_stability_tree(int leaves, double weak_prob, std::mt19937_64& rng);

}  // namespace gf
