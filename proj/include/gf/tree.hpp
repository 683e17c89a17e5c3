#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gf {

// Keys live in 1..n; 0 is the null link.
using Key = std::int32_t;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ValidationResult {
  bool ok = true;
  std::string first_violation;  // empty when ok
  explicit operator bool() const { return ok; }
};

// Binary search tree over the full universe 1..n. Node records are indexed
// by key, so restructuring moves links, never payloads. Every traversal in
// this module is iterative; chains may be millions of nodes deep.
class Tree {
 public:
  Tree() = default;
  explicit Tree(Key n) : n_(n), left_(static_cast<size_t>(n) + 1, 0), right_(static_cast<size_t>(n) + 1, 0) {}

  static Tree right_spine(Key n);  // 1 at the root, i+1 the right child of i

  Key n() const { return n_; }
  Key root() const { return root_; }
  Key left(Key k) const { return left_[static_cast<size_t>(k)]; }
  Key right(Key k) const { return right_[static_cast<size_t>(k)]; }

  void set_root(Key k) { root_ = k; }
  void set_left(Key k, Key c) { left_[static_cast<size_t>(k)] = c; }
  void set_right(Key k, Key c) { right_[static_cast<size_t>(k)] = c; }

  bool operator==(const Tree& o) const = default;

 private:
  Key n_ = 0;
  Key root_ = 0;
  std::vector<Key> left_, right_;
};

// BST over an explicit strictly-increasing key list. Used for path treaps
// and region rebuilds; whole-universe trees use Tree.
struct LocalShape {
  std::vector<Key> keys;            // strictly increasing
  std::vector<std::int32_t> left;   // indices into keys, -1 = none
  std::vector<std::int32_t> right;
  std::int32_t root = -1;
};

struct CostReport {
  std::uint64_t total = 0;
  std::vector<std::uint32_t> per_step;  // empty when per-step recording is off
  std::uint64_t restructures = 0;
};

ValidationResult validate_tree(const Tree& t);
ValidationResult validate_shape(const LocalShape& s);

int depth(const Tree& t, Key k);        // edges from the root; throws on absent key
int tree_depth(const Tree& t);          // max over keys, 0 for a single node
std::vector<std::int32_t> all_depths(const Tree& t);  // indexed by key, [0] unused
std::vector<Key> in_order(const Tree& t);

// Static serving: cost d(x)+1 per query, no restructuring.
CostReport serve_static(const Tree& t, std::span<const Key> x);
std::uint64_t static_cost(const Tree& t, std::span<const std::uint64_t> counts);  // counts indexed by key

// Replace a connected region (given by its key set, which must contain the
// region's topmost node) with `shape`, a BST over exactly those keys.
// Hanging subtrees reattach at the slot determined by their key interval.
Tree rebuild_region(const Tree& t, std::span<const Key> region_keys, const LocalShape& shape);

// Canonical newline-free form "key(leftSubtree,rightSubtree)", "-" for an
// absent child, e.g. "2(1(-,-),3(-,-))".
std::string serialize(const Tree& t);
Tree parse_tree(const std::string& text);

std::uint64_t fingerprint(const Tree& t);  // FNV-1a over the canonical serialization

}  // namespace gf
