#include "gf/enforce.hpp"

#include <algorithm>

namespace gf {

EnforcePlan enforce_prefix(const Tree& target) {
  if (auto v = validate_tree(target); !v) throw Error("enforce_prefix: " + v.first_violation);
  const Key n = target.n();
  std::vector<Key> left(static_cast<size_t>(n) + 1), right(static_cast<size_t>(n) + 1);
  std::vector<Key> parent(static_cast<size_t>(n) + 1, 0);
  std::vector<char> alive(static_cast<size_t>(n) + 1, 1);
  alive[0] = 0;
  for (Key k = 1; k <= n; ++k) {
    left[static_cast<size_t>(k)] = target.left(k);
    right[static_cast<size_t>(k)] = target.right(k);
    for (Key c : {target.left(k), target.right(k)})
      if (c != 0) parent[static_cast<size_t>(c)] = k;
  }

  EnforcePlan plan;
  while (true) {
    std::vector<Key> non_leaves;
    for (Key k = 1; k <= n; ++k)
      if (alive[static_cast<size_t>(k)] && (left[static_cast<size_t>(k)] != 0 || right[static_cast<size_t>(k)] != 0))
        non_leaves.push_back(k);
    if (non_leaves.empty()) break;
    for (Key k : non_leaves) {
      plan.sequence.push_back(k);
      plan.sequence.push_back(k);
    }
    plan.sequence.insert(plan.sequence.end(), non_leaves.begin(), non_leaves.end());
    plan.layers.push_back(std::move(non_leaves));
    // Strip all current leaves at once.
    std::vector<Key> leaves;
    for (Key k = 1; k <= n; ++k)
      if (alive[static_cast<size_t>(k)] && left[static_cast<size_t>(k)] == 0 && right[static_cast<size_t>(k)] == 0)
        leaves.push_back(k);
    for (Key u : leaves) {
      alive[static_cast<size_t>(u)] = 0;
      const Key p = parent[static_cast<size_t>(u)];
      if (p != 0) {
        if (left[static_cast<size_t>(p)] == u) left[static_cast<size_t>(p)] = 0;
        if (right[static_cast<size_t>(p)] == u) right[static_cast<size_t>(p)] = 0;
      }
    }
  }
  return plan;
}

std::uint64_t GapInstance::length() const {
  std::uint64_t m = 0;
  for (const auto& part : parts) m += part.reps * part.seq.size();
  return m;
}

std::uint64_t GapInstance::marked_length() const {
  std::uint64_t m = 0;
  for (const auto& part : parts)
    if (part.marked) m += part.reps * part.seq.size();
  return m;
}

namespace {

std::vector<Key> expand_parts(const GapInstance& inst, bool marked_only) {
  std::vector<Key> out;
  out.reserve(marked_only ? inst.marked_length() : inst.length());
  for (const auto& part : inst.parts) {
    if (marked_only && !part.marked) continue;
    for (std::uint64_t i = 0; i < part.reps; ++i)
      out.insert(out.end(), part.seq.begin(), part.seq.end());
  }
  return out;
}

}  // namespace

std::vector<Key> GapInstance::expand() const { return expand_parts(*this, false); }
std::vector<Key> GapInstance::expand_marked() const { return expand_parts(*this, true); }

std::vector<Key> rev(std::vector<Key> s) {
  std::reverse(s.begin(), s.end());
  return s;
}

FTreePieces make_f_tree_pieces(int r) {
  if (r < 1) throw Error("make_f_tree_pieces: r must be >= 1");
  FTreePieces pieces;
  pieces.stable = build_kr_tree({2, r, KrAnnotation::WeakTrunkRoots});
  pieces.promoted = promote_kr(pieces.stable).tree;
  pieces.atomic = generate(pieces.stable, atomic_length(pieces.stable));
  pieces.enforce_p = enforce_prefix(pieces.stable.tree);
  pieces.enforce_q = enforce_prefix(pieces.promoted);
  return pieces;
}

GapInstance build_multiplicative_instance(int r, std::uint64_t reps) {
  
  FTreePieces pieces = make_f_tree_pieces(r);
  GapInstance inst;
  inst.n = pieces.stable.tree.n();
  inst.parts.push_back({"P", std::move(pieces.enforce_p.sequence), 1, false});
  inst.parts.push_back({"Z", std::move(pieces.atomic), reps, true});
  return inst;
}

GapInstance build_subsequence_instance(int r, std::uint64_t reps) {
  
  FTreePieces pieces = make_f_tree_pieces(r);
  GapInstance inst;
  inst.n = pieces.stable.tree.n();
  inst.parts.push_back({"P", std::move(pieces.enforce_p.sequence), 1, true});
  inst.parts.push_back({"Q", std::move(pieces.enforce_q.sequence), 1, false});
  inst.parts.push_back({"Z", std::move(pieces.atomic), reps, true});
  return inst;
}

GapInstance build_reversal_instance(int r, std::uint64_t reps) {
  
  FTreePieces pieces = make_f_tree_pieces(r);
  GapInstance inst;
  inst.n = pieces.stable.tree.n();
  inst.parts.push_back({"Q", std::move(pieces.enforce_q.sequence), 1, false});
  inst.parts.push_back({"revZ", rev(std::move(pieces.atomic)), reps + 1, false});
  inst.parts.push_back({"revP", rev(std::move(pieces.enforce_p.sequence)), 1, false});
  return inst;
}

}  // namespace gf
