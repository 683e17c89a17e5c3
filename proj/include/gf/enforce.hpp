#pragma once

#include "gf/patterns.hpp"
#include "gf/tree.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gf {

// The enforcing prefix S(T): layer i queries the non-leaf nodes of the
// i-times leaf-stripped target, each twice then once, ascending. Serving the
// prefix forces GreedyFuture's tree to equal the target at the boundary,
// whatever the initial tree and suffix.
struct EnforcePlan {
  std::vector<std::vector<Key>> layers;  // R_0..R_{h-1}, non-empty ones only
  std::vector<Key> sequence;
};

EnforcePlan enforce_prefix(const Tree& target);

struct InstancePart {
  std::string name;
  std::vector<Key> seq;
  std::uint64_t reps = 1;
  bool marked = false;  // part of the designated subsequence X'
};

struct GapInstance {
  Key n = 0;
  std::vector<InstancePart> parts;

  std::uint64_t length() const;
  std::uint64_t marked_length() const;
  std::vector<Key> expand() const;         // the full sequence X
  std::vector<Key> expand_marked() const;  // the subsequence X'
};

std::vector<Key> rev(std::vector<Key> s);

// Shared ingredients of the F-tree constructions at recursion depth r.
struct FTreePieces {
  StabilityTree stable;       // T_P with its weak annotations
  Tree promoted;              // T_Q
  std::vector<Key> atomic;    // Z, one atomic weakly-stable period (3^r)
  EnforcePlan enforce_p;      // enforces T_P
  EnforcePlan enforce_q;      // enforces T_Q
};

FTreePieces make_f_tree_pieces(int r);

// P ∘ Z^reps from the canonical right-spine initial tree.
GapInstance build_multiplicative_instance(int r, std::uint64_t reps);

// X = P ∘ Q ∘ Z^reps with X' = P ∘ Z^reps marked.
GapInstance build_subsequence_instance(int r, std::uint64_t reps);

// X = Q ∘ rev(Z)^{reps+1} ∘ rev(P); its reversal is P ∘ Z^{reps+1} ∘ rev(Q).
GapInstance build_reversal_instance(int r, std::uint64_t reps);

}  // namespace gf
