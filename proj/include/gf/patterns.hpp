#pragma once

#include "gf/fraction.hpp"
#include "gf/stability.hpp"
#include "gf/tree.hpp"

#include <vector>

namespace gf {

// b_r = alpha * b_{r-1} + beta + gamma * r / 2^r
struct RecurrenceParams {
  Fraction b0, alpha, beta, gamma;
};

// Exact closed form
//   b_r = beta/(1-alpha) (1-alpha^r) + alpha^r b0
//       + 2 alpha gamma/(2 alpha - 1)^2 (alpha^r - 2^-r)
//       - gamma/(2 alpha - 1) * r 2^-r.
// alpha must avoid 1 (and 1/2 whenever gamma != 0).
Fraction closed_form(const RecurrenceParams& p, int r);

// Literal unrolling; the reference route the closed form is checked against.
Fraction iterate_recurrence(const RecurrenceParams& p, int r);

enum class KrAnnotation { AllStrong, WeakTrunkRoots };

struct KrTreeSpec {
  int k = 2;
  int r = 0;
  KrAnnotation mode = KrAnnotation::AllStrong;
};

// Recursive tree of depth r whose template is a k-node trunk (root plus a
// left-chain starting at the root's right child), one actual leaf under the
// deepest trunk node, and (k,r-1)-subtrees on the remaining template leaves.
// Keys are 1..n by in-order position. WeakTrunkRoots (k=2 only) marks every
// recursive root weakly stable with a right bias, giving the F-tree family.
StabilityTree build_kr_tree(const KrTreeSpec& spec);

Int kr_tree_size(int k, int r);  // (2 + 2/(k-1)) k^r - (1 + 2/(k-1)), exact

// Strongly-stable chain over odd leaves 1,3,...,2p+1 with the even keys as
// the inner right-spine.
StabilityTree build_chain_tree(int n_param);

struct PromotionEntry {
  Key leaf = 0;
  int old_depth = 0;
  int new_depth = 0;
  Fraction frequency;
};

struct PromotionReport {
  std::vector<PromotionEntry> per_leaf;
  Fraction average;  // sum of frequency * (old_depth - new_depth)
};

struct PromoteResult {
  Tree tree;
  PromotionReport report;
};

// Order-preserving static optimization of a (k,r)-tree: the actual leaf of
// every recursion level moves to that level's root, its sibling subtree
// rises one step, the remaining hanging subtrees keep their root depths and
// are optimized recursively, and the vacated trunk nodes are demoted into
// never-queried slots. The achieved frequency-weighted average promotion is
// exactly (k+1)(1 - (1-2^-k)^r) under strongly-stable frequencies.
PromoteResult promote_kr(const StabilityTree& st);

// Average GF cost per query on the atomic strongly-stable (k,r) sequence:
// 2^k beta (1 - alpha^r) + alpha^r with alpha = 1-2^-k and
// beta = sum_{j=1..k} j/2^j + (k+1)/2^k.
Fraction predicted_gf_cost_strong(int k, int r);
Fraction gf_cost_beta(int k);  // the beta above; equals 2 - 2^-k

// The promotion recurrence value (k+1)(1-alpha^r) + delta, following the
// recurrence p_r = (1-2^-k) p_{r-1} + (k+1)/2^k + (r/2^r)(1/2)(1-2^(2-k)).
Fraction predicted_promotion_strong(int k, int r);

enum class GapMode { Strong, Mixed };

// Guaranteed GF-minus-OPT per-query gap: (k+1)(1-(1-2^-k)^r) for strongly
// stable sequences, k(1-(1-3^-k)^r) for any mixed-stable ones.
Fraction predicted_gap(int k, int r, GapMode mode);

}  // namespace gf
