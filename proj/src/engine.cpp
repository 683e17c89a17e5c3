#include "gf/engine.hpp"

#include <algorithm>
#include <bit>

namespace gf {

std::vector<std::uint64_t> tau_priorities(std::span<const Key> path_keys, std::span<const Key> future) {
  const size_t k = path_keys.size();
  std::vector<std::uint64_t> tau(k, kTauNever);
  for (size_t i = 0; i < k; ++i) {
    Key lo = i > 0 ? path_keys[i - 1] : std::numeric_limits<Key>::min();
    Key hi = i + 1 < k ? path_keys[i + 1] : std::numeric_limits<Key>::max();
    for (size_t j = 0; j < future.size(); ++j) {
      if (future[j] > lo && future[j] < hi) {
        tau[i] = j + 1;
        break;
      }
    }
  }
  return tau;
}

LocalShape build_treap(std::span<const Key> sorted_keys, std::span<const TreapPriority> priorities) {
  const auto k = static_cast<std::int32_t>(sorted_keys.size());
  LocalShape shape;
  shape.keys.assign(sorted_keys.begin(), sorted_keys.end());
  shape.left.assign(sorted_keys.size(), -1);
  shape.right.assign(sorted_keys.size(), -1);
  // Cartesian-tree build over the right spine.
  std::vector<std::int32_t> stack;
  for (std::int32_t i = 0; i < k; ++i) {
    std::int32_t popped = -1;
    while (!stack.empty() && priorities[static_cast<size_t>(stack.back())] > priorities[static_cast<size_t>(i)]) {
      popped = stack.back();
      stack.pop_back();
    }
    shape.left[static_cast<size_t>(i)] = popped;
    if (!stack.empty()) shape.right[static_cast<size_t>(stack.back())] = i;
    stack.push_back(i);
  }
  shape.root = stack.front();
  return shape;
}

namespace detail {

void MinSegTree::build(std::span<const std::uint32_t> leaf_values) {
  size_ = std::bit_ceil(std::max<std::uint32_t>(1, static_cast<std::uint32_t>(leaf_values.size())));
  node_.assign(static_cast<size_t>(size_) * 2, std::numeric_limits<std::uint32_t>::max());
  std::copy(leaf_values.begin(), leaf_values.end(), node_.begin() + size_);
  for (std::uint32_t i = size_ - 1; i >= 1; --i)
    node_[i] = std::min(node_[2 * i], node_[2 * i + 1]);
}

void MinSegTree::set(std::uint32_t pos, std::uint32_t value) {
  std::uint32_t i = pos + size_;
  node_[i] = value;
  for (i >>= 1; i >= 1; i >>= 1)
    node_[i] = std::min(node_[2 * i], node_[2 * i + 1]);
}

std::uint32_t MinSegTree::range_min(std::uint32_t lo, std::uint32_t hi) const {
  std::uint32_t out = std::numeric_limits<std::uint32_t>::max();
  if (lo > hi) return out;
  std::uint32_t l = lo + size_, r = hi + size_ + 1;
  while (l < r) {
    if (l & 1u) out = std::min(out, node_[l++]);
    if (r & 1u) out = std::min(out, node_[--r]);
    l >>= 1;
    r >>= 1;
  }
  return out;
}

}  // namespace detail

GfEngine::GfEngine(Tree t0, std::vector<Key> queries, GfOptions options)
    : tree_(std::move(t0)), queries_(std::move(queries)), options_(options) {
  const auto m = static_cast<std::uint32_t>(queries_.size());
  const auto n = static_cast<size_t>(tree_.n());
  for (Key q : queries_)
    if (q < 1 || q > tree_.n()) throw Error("gf_serve: query " + std::to_string(q) + " is not a key in 1..n");
  next_same_.assign(queries_.size(), m);
  std::vector<std::uint32_t> first(n + 1, std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t t = m; t-- > 0;) {
    Key q = queries_[t];
    next_same_[t] = first[static_cast<size_t>(q)] == std::numeric_limits<std::uint32_t>::max()
                        ? m
                        : first[static_cast<size_t>(q)];
    first[static_cast<size_t>(q)] = t;
  }
  for (auto& v : first)
    if (v == std::numeric_limits<std::uint32_t>::max()) v = m;
  // Leaf `v` of the min-structure holds the earliest remaining occurrence of
  // value v+1 (values are mapped to 0..n-1).
  occurrences_.build(std::span<const std::uint32_t>(first).subspan(1));
  if (options_.record_per_step) report_.per_step.reserve(queries_.size());
}

GfStep GfEngine::step() {
  if (done()) throw Error("gf step past the end of the sequence");
  const Key q = queries_[t_];
  const Key n = tree_.n();

  // Search, keeping the path partitioned into the keys below and above q.
  // Visit order is depth, so depths come for free.
  sorted_keys_.clear();
  sorted_depth_.clear();
  high_side_.clear();
  high_depth_.clear();
  Key v = tree_.root();
  std::int32_t d = 0;
  while (v != q) {
    if (v == 0) throw Error("gf_serve: query " + std::to_string(q) + " is absent from the tree");
    if (q < v) {
      high_side_.push_back(v);
      high_depth_.push_back(d);
      v = tree_.left(v);
    } else {
      sorted_keys_.push_back(v);
      sorted_depth_.push_back(d);
      v = tree_.right(v);
    }
    ++d;
  }
  sorted_keys_.push_back(q);
  sorted_depth_.push_back(d);
  for (size_t i = high_side_.size(); i-- > 0;) {
    sorted_keys_.push_back(high_side_[i]);
    sorted_depth_.push_back(high_depth_[i]);
  }
  const auto k = static_cast<std::int32_t>(sorted_keys_.size());

  // Retire this occurrence before the tau queries: priorities look at the
  // strict suffix x_{t+1..m}.
  occurrences_.set(static_cast<std::uint32_t>(q - 1), next_same_[t_]);

  priorities_.clear();
  for (std::int32_t i = 0; i < k; ++i) {
    Key lo = i > 0 ? sorted_keys_[static_cast<size_t>(i - 1)] : 0;
    Key hi = i + 1 < k ? sorted_keys_[static_cast<size_t>(i + 1)] : n + 1;
    std::uint32_t tau = occurrences_.range_min(static_cast<std::uint32_t>(lo),
                                               static_cast<std::uint32_t>(hi - 2));
    std::int64_t tie = options_.policy == TieBreakPolicy::SmallerDepth
                           ? sorted_depth_[static_cast<size_t>(i)]
                           : sorted_keys_[static_cast<size_t>(i)];
    priorities_.push_back({tau, tie});
  }

  // Hanging subtrees, recorded before the links are overwritten. A child of
  // a path node is on the path iff it is the next node in visit order, so it
  // suffices to collect children that are not path members; path membership
  // is tested against the sorted list (k is tiny compared to n).
  old_left_.clear();
  old_right_.clear();
  hang_roots_.clear();
  auto on_path = [&](Key c) {
    auto it = std::lower_bound(sorted_keys_.begin(), sorted_keys_.end(), c);
    return it != sorted_keys_.end() && *it == c;
  };
  for (std::int32_t i = 0; i < k; ++i) {
    Key p = sorted_keys_[static_cast<size_t>(i)];
    old_left_.push_back(tree_.left(p));
    old_right_.push_back(tree_.right(p));
    for (Key c : {tree_.left(p), tree_.right(p)})
      if (c != 0 && !on_path(c)) hang_roots_.push_back(c);
  }

  // Treap over the path keys (Cartesian build, min priority on top).
  treap_left_.assign(static_cast<size_t>(k), -1);
  treap_right_.assign(static_cast<size_t>(k), -1);
  treap_stack_.clear();
  for (std::int32_t i = 0; i < k; ++i) {
    std::int32_t popped = -1;
    while (!treap_stack_.empty() &&
           priorities_[static_cast<size_t>(treap_stack_.back())] > priorities_[static_cast<size_t>(i)]) {
      popped = treap_stack_.back();
      treap_stack_.pop_back();
    }
    treap_left_[static_cast<size_t>(i)] = popped;
    if (!treap_stack_.empty()) treap_right_[static_cast<size_t>(treap_stack_.back())] = i;
    treap_stack_.push_back(i);
  }
  const std::int32_t treap_root = treap_stack_.front();

  for (std::int32_t i = 0; i < k; ++i) {
    Key key = sorted_keys_[static_cast<size_t>(i)];
    std::int32_t li = treap_left_[static_cast<size_t>(i)], ri = treap_right_[static_cast<size_t>(i)];
    tree_.set_left(key, li >= 0 ? sorted_keys_[static_cast<size_t>(li)] : 0);
    tree_.set_right(key, ri >= 0 ? sorted_keys_[static_cast<size_t>(ri)] : 0);
  }
  for (Key c : hang_roots_) {
    auto gap = static_cast<size_t>(
        std::lower_bound(sorted_keys_.begin(), sorted_keys_.end(), c) - sorted_keys_.begin());
    if (gap == 0) {
      tree_.set_left(sorted_keys_.front(), c);
    } else if (gap == static_cast<size_t>(k)) {
      tree_.set_right(sorted_keys_.back(), c);
    } else if (tree_.right(sorted_keys_[gap - 1]) == 0) {
      tree_.set_right(sorted_keys_[gap - 1], c);
    } else {
      tree_.set_left(sorted_keys_[gap], c);
    }
  }
  tree_.set_root(sorted_keys_[static_cast<size_t>(treap_root)]);

  bool restructured = false;
  for (std::int32_t i = 0; i < k && !restructured; ++i) {
    Key key = sorted_keys_[static_cast<size_t>(i)];
    restructured = tree_.left(key) != old_left_[static_cast<size_t>(i)] ||
                   tree_.right(key) != old_right_[static_cast<size_t>(i)];
  }

  ++t_;
  GfStep out;
  out.t = t_;
  out.query = q;
  out.path_len = static_cast<std::uint32_t>(k);
  out.restructured = restructured;
  report_.total += out.path_len;
  report_.restructures += restructured ? 1 : 0;
  if (options_.record_per_step) report_.per_step.push_back(out.path_len);
  if (options_.record_trace) {
    out.tree_fingerprint = fingerprint(tree_);
    trace_.steps.push_back(out);
  }
  return out;
}

GfResult gf_serve(const Tree& t0, std::span<const Key> x, GfOptions options) {
  GfEngine engine(t0, std::vector<Key>(x.begin(), x.end()), options);
  while (!engine.done()) engine.step();
  GfResult out{engine.report(), std::move(engine.trace()), engine.take_tree()};
  return out;
}

bool gf_is_static(const Tree& t0, std::span<const Key> x) {
  GfOptions options;
  options.policy = TieBreakPolicy::SmallerDepth;
  options.record_per_step = false;
  GfEngine engine(t0, std::vector<Key>(x.begin(), x.end()), options);
  while (!engine.done())
    if (engine.step().restructured) return false;
  return true;
}

}  // namespace gf
