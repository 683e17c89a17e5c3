#include "gf/patterns.hpp"

#include <algorithm>

namespace gf {

Fraction iterate_recurrence(const RecurrenceParams& p, int r) {
  Fraction b = p.b0;
  Fraction pow2 = 1;
  for (int i = 1; i <= r; ++i) {
    pow2 *= 2;
    b = p.alpha * b + p.beta + p.gamma * Fraction(i) / pow2;
  }
  return b;
}

Fraction closed_form(const RecurrenceParams& p, int r) {
  if (r < 0) throw Error("closed_form: r must be non-negative");
  if (p.alpha == 1 || (p.gamma != 0 && p.alpha == Fraction(1, 2)))
    throw Error("closed_form: alpha in {1/2, 1} is outside the formula's domain");
  const Fraction alpha_r = frac_pow(p.alpha, static_cast<unsigned>(r));
  const Fraction inv2_r = Fraction(1, int_pow(2, static_cast<unsigned>(r)));
  Fraction b = p.beta / (1 - p.alpha) * (1 - alpha_r) + alpha_r * p.b0;
  if (p.gamma != 0) {
    const Fraction two_alpha_m1 = 2 * p.alpha - 1;
    b += 2 * p.alpha * p.gamma / (two_alpha_m1 * two_alpha_m1) * (alpha_r - inv2_r);
    b -= p.gamma / two_alpha_m1 * Fraction(r) * inv2_r;
  }
  return b;
}

Int kr_tree_size(int k, int r) {
  if (k < 2 || r < 0) throw Error("kr_tree_size: need k >= 2, r >= 0");
  Int s = 1;
  for (int i = 0; i < r; ++i) s = (k + 1) + k * s;
  return s;
}

namespace {

// Sizes per recursion level, checked against the Key range.
std::vector<Key> kr_sizes(int k, int r) {
  std::vector<Key> s{1};
  for (int i = 1; i <= r; ++i) {
    Int next = Int(k + 1) + Int(k) * s.back();
    if (next > std::numeric_limits<Key>::max()) throw Error("build_kr_tree: tree too large for the key space");
    s.push_back(next.convert_to<Key>());
  }
  return s;
}

struct KrBuilder {
  int k;
  KrAnnotation mode;
  const std::vector<Key>& size;
  StabilityTree& st;

  // Builds the (k,r)-subtree over keys [lo, lo+size[r]-1], returns its root.
  Key build(Key lo, int r) const {
    if (r == 0) return lo;
    const Key sub = size[static_cast<size_t>(r - 1)];
    // In-order layout: [A] g1 [leaf] gk [B_k] g_{k-1} [B_{k-1}] ... g2 [B_2]
    const Key g1 = lo + sub;
    const Key leaf = g1 + 1;
    st.tree.set_left(g1, build(lo, r - 1));

    std::vector<Key> trunk{g1};  // g1..gk
    Key pos = leaf + 1;
    std::vector<Key> chain_nodes;  // gk, g_{k-1}, ..., g2 with their B subtrees
    for (int i = k; i >= 2; --i) {
      const Key gi = pos;
      st.tree.set_right(gi, build(gi + 1, r - 1));
      chain_nodes.push_back(gi);
      pos = gi + 1 + sub;
    }
    // chain_nodes holds gk..g2 bottom-up; link g_{i}.left = g_{i+1}, gk.left = leaf.
    st.tree.set_left(chain_nodes.front(), leaf);
    for (size_t i = 0; i + 1 < chain_nodes.size(); ++i)
      st.tree.set_left(chain_nodes[i + 1], chain_nodes[i]);
    st.tree.set_right(g1, chain_nodes.back());

    trunk.insert(trunk.end(), chain_nodes.rbegin(), chain_nodes.rend());
    if (mode == KrAnnotation::AllStrong) {
      for (Key g : trunk) st.kind[static_cast<size_t>(g)] = StabilityKind::StrongL;
    } else {
      // F-tree: the level root is weakly right-biased toward the trunk head.
      st.kind[static_cast<size_t>(g1)] = StabilityKind::WeakRight;
      st.kind[static_cast<size_t>(trunk[1])] = StabilityKind::StrongR;
    }
    return g1;
  }
};

}  // namespace

StabilityTree build_kr_tree(const KrTreeSpec& spec) {
  if (spec.k < 2 || spec.r < 0) throw Error("build_kr_tree: need k >= 2, r >= 0");
  if (spec.mode == KrAnnotation::WeakTrunkRoots && spec.k != 2)
    throw Error("build_kr_tree: WeakTrunkRoots is defined only for k = 2");
  const auto sizes = kr_sizes(spec.k, spec.r);
  StabilityTree st;
  st.tree = Tree(sizes.back());
  st.kind.assign(static_cast<size_t>(sizes.back()) + 1, StabilityKind::None);
  st.cursor0.assign(st.kind.size(), 0);
  KrBuilder builder{spec.k, spec.mode, sizes, st};
  st.tree.set_root(builder.build(1, spec.r));
  return st;
}

StabilityTree build_chain_tree(int n_param) {
  if (n_param < 1) throw Error("build_chain_tree: n_param must be >= 1");
  const Key n = static_cast<Key>(2 * n_param + 1);
  StabilityTree st;
  st.tree = Tree(n);
  st.kind.assign(static_cast<size_t>(n) + 1, StabilityKind::None);
  st.cursor0.assign(st.kind.size(), 0);
  st.tree.set_root(2);
  for (Key inner = 2; inner < n; inner += 2) {
    st.tree.set_left(inner, inner - 1);
    st.tree.set_right(inner, inner + 2 <= n - 1 ? inner + 2 : n);
    st.kind[static_cast<size_t>(inner)] = StabilityKind::StrongL;
  }
  return st;
}

namespace {

struct KrShape {
  Key g1 = 0;
  std::vector<Key> trunk;  // g1..gk
  Key leaf = 0;
  Key a_subtree = 0;               // left child of g1
  std::vector<Key> b_subtrees;     // right children of g2..gk, in that order
};

// Decomposes the subtree at `root` as one (k,?)-template level or throws.
KrShape decompose_level(const Tree& t, Key root, int k_expected) {
  KrShape shape;
  shape.g1 = root;
  if (t.left(root) == 0 || t.right(root) == 0) throw Error("promote_kr: not a (k,r)-tree (unary trunk root)");
  shape.a_subtree = t.left(root);
  shape.trunk.push_back(root);
  Key g = t.right(root);
  while (true) {
    shape.trunk.push_back(g);
    if (t.left(g) == 0 || t.right(g) == 0) throw Error("promote_kr: not a (k,r)-tree (unary trunk node)");
    shape.b_subtrees.push_back(t.right(g));
    const Key next = t.left(g);
    const bool next_is_leaf = t.left(next) == 0 && t.right(next) == 0;
    if (next_is_leaf) {
      shape.leaf = next;
      break;
    }
    g = next;
  }
  const int k = static_cast<int>(shape.trunk.size());
  if (k < 2) throw Error("promote_kr: not a (k,r)-tree");
  if (k_expected > 0 && k != k_expected)
    throw Error("promote_kr: trunk size varies across recursion levels");
  return shape;
}

struct Promoter {
  const Tree& in;
  Tree& out;
  int k = -1;  // inferred at the first inner level

  struct Built {
    Key root, leftmost, rightmost;
    int r;
  };

  // The construction: the actual leaf becomes the level root; the optimized
  // A-subtree is its left child with the old root demoted to the right of
  // A's maximum; on the right side the old chain g2..g_{k-1} keeps the
  // remaining B-subtrees at their old root depths while promote(B_k) takes
  // the slot vacated by g_k, which is demoted below B_k's minimum.
  Built promote(Key root) {
    if (in.left(root) == 0 && in.right(root) == 0) return {root, root, root, 0};
    KrShape shape = decompose_level(in, root, k);
    if (k < 0) k = static_cast<int>(shape.trunk.size());

    Built a = promote(shape.a_subtree);
    std::vector<Built> b;
    for (Key sub : shape.b_subtrees) b.push_back(promote(sub));
    for (size_t i = 0; i + 1 < b.size(); ++i)
      if (b[i].r != b[i + 1].r || b[i].r != a.r)
        throw Error("promote_kr: recursion depth varies across subtrees");

    const Key ell = shape.leaf;
    out.set_left(ell, a.root);
    out.set_right(a.rightmost, shape.g1);
    Built& bk = b.back();
    out.set_left(bk.leftmost, shape.trunk.back());
    Key right_side = bk.root;
    // Wrap the remaining blocks outward: g_{k-1}, ..., g2.
    for (size_t i = b.size() - 1; i-- > 0;) {
      const Key gi = shape.trunk[i + 1];  // g_{i+2} in 1-based trunk terms
      out.set_left(gi, right_side);
      out.set_right(gi, b[i].root);
      right_side = gi;
    }
    out.set_right(ell, right_side);
    return {ell, a.leftmost, b.front().rightmost, a.r + 1};
  }
};

}  // namespace

PromoteResult promote_kr(const StabilityTree& st) {
  PromoteResult result;
  result.tree = Tree(st.tree.n());
  Promoter promoter{st.tree, result.tree};
  auto built = promoter.promote(st.tree.root());
  result.tree.set_root(built.root);

  const auto old_depths = all_depths(st.tree);
  const auto new_depths = all_depths(result.tree);
  result.report.average = 0;
  for (const auto& profile : leaf_profiles(st)) {
    PromotionEntry e;
    e.leaf = profile.leaf;
    e.old_depth = old_depths[static_cast<size_t>(profile.leaf)];
    e.new_depth = new_depths[static_cast<size_t>(profile.leaf)];
    e.frequency = profile.frequency;
    result.report.average += e.frequency * Fraction(e.old_depth - e.new_depth);
    result.report.per_leaf.push_back(std::move(e));
  }
  return result;
}

Fraction gf_cost_beta(int k) {
  Fraction beta = 0;
  Fraction pow2 = 1;
  for (int j = 1; j <= k; ++j) {
    pow2 *= 2;
    beta += Fraction(j) / pow2;
  }
  beta += Fraction(k + 1) / pow2;
  return beta;
}

Fraction predicted_gf_cost_strong(int k, int r) {
  if (k < 2 || r < 0) throw Error("predicted_gf_cost_strong: need k >= 2, r >= 0");
  const Int two_k = int_pow(2, static_cast<unsigned>(k));
  const Fraction alpha = 1 - Fraction(1, two_k);
  const Fraction alpha_r = frac_pow(alpha, static_cast<unsigned>(r));
  return Fraction(two_k) * gf_cost_beta(k) * (1 - alpha_r) + alpha_r;
}

Fraction predicted_promotion_strong(int k, int r) {
  if (k < 2 || r < 0) throw Error("predicted_promotion_strong: need k >= 2, r >= 0");
  const Int two_k = int_pow(2, static_cast<unsigned>(k));
  RecurrenceParams p;
  p.b0 = 0;
  p.alpha = 1 - Fraction(1, two_k);
  p.beta = Fraction(k + 1, two_k);
  p.gamma = Fraction(1, 2) * (1 - Fraction(4, two_k));
  return closed_form(p, r);
}

Fraction predicted_gap(int k, int r, GapMode mode) {
  if (k < 2 || r < 0) throw Error("predicted_gap: need k >= 2, r >= 0");
  if (mode == GapMode::Strong) {
    const Fraction alpha = 1 - Fraction(1, int_pow(2, static_cast<unsigned>(k)));
    return Fraction(k + 1) * (1 - frac_pow(alpha, static_cast<unsigned>(r)));
  }
  const Fraction alpha = 1 - Fraction(1, int_pow(3, static_cast<unsigned>(k)));
  return Fraction(k) * (1 - frac_pow(alpha, static_cast<unsigned>(r)));
}

}  // namespace gf
