#include "gf/tree.hpp"

#include <algorithm>
#include <charconv>

namespace gf {

Tree Tree::right_spine(Key n) {
  Tree t(n);
  if (n >= 1) {
    t.set_root(1);
    for (Key k = 1; k < n; ++k) t.set_right(k, k + 1);
  }
  return t;
}

ValidationResult validate_tree(const Tree& t) {
  const Key n = t.n();
  if (n <= 0) return {false, "universe must have at least one key"};
  if (t.root() < 1 || t.root() > n) return {false, "root is not a key in 1..n"};

  // Iterative in-order walk. Visiting more than n nodes means a cycle or a
  // node with two parents; both also show up as a non-increasing key order.
  std::vector<std::pair<Key, bool>> stack;
  stack.emplace_back(t.root(), false);
  Key prev = 0;
  std::uint64_t visited = 0;
  while (!stack.empty()) {
    auto [k, expanded] = stack.back();
    stack.pop_back();
    if (k < 1 || k > n) return {false, "child link out of range 1..n"};
    if (expanded) {
      if (k <= prev) return {false, "in-order traversal is not strictly increasing"};
      prev = k;
      continue;
    }
    if (++visited > static_cast<std::uint64_t>(n)) return {false, "structure has a cycle or a shared child"};
    if (t.right(k) != 0) stack.emplace_back(t.right(k), false);
    stack.emplace_back(k, true);
    if (t.left(k) != 0) stack.emplace_back(t.left(k), false);
  }
  if (visited != static_cast<std::uint64_t>(n))
    return {false, "tree does not contain every key 1..n exactly once"};
  return {};
}

ValidationResult validate_shape(const LocalShape& s) {
  const auto k = static_cast<std::int32_t>(s.keys.size());
  if (k == 0) return {false, "shape has no keys"};
  if (s.left.size() != s.keys.size() || s.right.size() != s.keys.size())
    return {false, "link arrays do not match key count"};
  if (!std::is_sorted(s.keys.begin(), s.keys.end()) ||
      std::adjacent_find(s.keys.begin(), s.keys.end()) != s.keys.end())
    return {false, "keys are not strictly increasing"};
  if (s.root < 0 || s.root >= k) return {false, "root index out of range"};
  // In-order over indices must enumerate 0..k-1 in order.
  std::vector<std::pair<std::int32_t, bool>> stack{{s.root, false}};
  std::int32_t expect = 0;
  std::int32_t visited = 0;
  while (!stack.empty()) {
    auto [i, expanded] = stack.back();
    stack.pop_back();
    if (i < 0 || i >= k) return {false, "child index out of range"};
    if (expanded) {
      if (i != expect++) return {false, "shape is not a BST over its key list"};
      continue;
    }
    if (++visited > k) return {false, "shape has a cycle or a shared child"};
    if (s.right[static_cast<size_t>(i)] >= 0) stack.emplace_back(s.right[static_cast<size_t>(i)], false);
    stack.emplace_back(i, true);
    if (s.left[static_cast<size_t>(i)] >= 0) stack.emplace_back(s.left[static_cast<size_t>(i)], false);
  }
  if (visited != k) return {false, "shape does not reach every key"};
  return {};
}

int depth(const Tree& t, Key k) {
  if (k < 1 || k > t.n()) throw Error("depth: key " + std::to_string(k) + " is not in 1..n");
  Key v = t.root();
  int d = 0;
  while (v != 0 && v != k) {
    v = k < v ? t.left(v) : t.right(v);
    ++d;
  }
  if (v == 0) throw Error("depth: key " + std::to_string(k) + " is absent from the tree");
  return d;
}

std::vector<std::int32_t> all_depths(const Tree& t) {
  std::vector<std::int32_t> d(static_cast<size_t>(t.n()) + 1, -1);
  std::vector<Key> stack{t.root()};
  d[static_cast<size_t>(t.root())] = 0;
  while (!stack.empty()) {
    Key k = stack.back();
    stack.pop_back();
    for (Key c : {t.left(k), t.right(k)})
      if (c != 0) {
        d[static_cast<size_t>(c)] = d[static_cast<size_t>(k)] + 1;
        stack.push_back(c);
      }
  }
  return d;
}

int tree_depth(const Tree& t) {
  auto d = all_depths(t);
  return *std::max_element(d.begin() + 1, d.end());
}

std::vector<Key> in_order(const Tree& t) {
  std::vector<Key> out;
  out.reserve(static_cast<size_t>(t.n()));
  std::vector<Key> stack;
  Key v = t.root();
  while (v != 0 || !stack.empty()) {
    while (v != 0) {
      stack.push_back(v);
      v = t.left(v);
    }
    v = stack.back();
    stack.pop_back();
    out.push_back(v);
    v = t.right(v);
  }
  return out;
}

CostReport serve_static(const Tree& t, std::span<const Key> x) {
  CostReport report;
  report.per_step.reserve(x.size());
  for (Key q : x) {
    std::uint32_t cost = static_cast<std::uint32_t>(depth(t, q)) + 1;
    report.total += cost;
    report.per_step.push_back(cost);
  }
  return report;
}

std::uint64_t static_cost(const Tree& t, std::span<const std::uint64_t> counts) {
  auto d = all_depths(t);
  std::uint64_t total = 0;
  for (Key k = 1; k <= t.n(); ++k)
    total += counts[static_cast<size_t>(k)] * static_cast<std::uint64_t>(d[static_cast<size_t>(k)] + 1);
  return total;
}

Tree rebuild_region(const Tree& t, std::span<const Key> region_keys, const LocalShape& shape) {
  if (region_keys.empty()) throw Error("rebuild_region: empty region");
  std::vector<Key> keys(region_keys.begin(), region_keys.end());
  std::sort(keys.begin(), keys.end());
  if (auto v = validate_shape(shape); !v) throw Error("rebuild_region: invalid shape: " + v.first_violation);
  if (shape.keys != keys) throw Error("rebuild_region: shape keys do not match the region");

  std::vector<char> in_region(static_cast<size_t>(t.n()) + 1, 0);
  for (Key k : keys) {
    if (k < 1 || k > t.n()) throw Error("rebuild_region: region key out of range");
    in_region[static_cast<size_t>(k)] = 1;
  }

  // Connectivity: every region node except one (the topmost) must have its
  // parent inside the region, and the topmost must sit above all of them.
  std::vector<Key> parent(static_cast<size_t>(t.n()) + 1, 0);
  {
    std::vector<Key> stack{t.root()};
    while (!stack.empty()) {
      Key k = stack.back();
      stack.pop_back();
      for (Key c : {t.left(k), t.right(k)})
        if (c != 0) {
          parent[static_cast<size_t>(c)] = k;
          stack.push_back(c);
        }
    }
  }
  Key top = 0;
  for (Key k : keys) {
    Key p = parent[static_cast<size_t>(k)];
    if (p == 0 || !in_region[static_cast<size_t>(p)]) {
      if (top != 0) throw Error("rebuild_region: region is not connected");
      top = k;
    }
  }
  if (top == 0) throw Error("rebuild_region: region is not connected");

  // Hanging subtrees: children of region nodes that are outside the region.
  // Each hangs in the unique gap of the sorted key list that brackets it.
  const auto k_count = keys.size();
  std::vector<Key> gap_subtree(k_count + 1, 0);
  for (Key k : keys)
    for (Key c : {t.left(k), t.right(k)})
      if (c != 0 && !in_region[static_cast<size_t>(c)]) {
        size_t gap = static_cast<size_t>(std::lower_bound(keys.begin(), keys.end(), c) - keys.begin());
        if (gap_subtree[gap] != 0) throw Error("rebuild_region: two subtrees in one key gap");
        gap_subtree[gap] = c;
      }

  Tree out = t;
  for (size_t i = 0; i < k_count; ++i) {
    Key k = keys[i];
    std::int32_t li = shape.left[i], ri = shape.right[i];
    out.set_left(k, li >= 0 ? keys[static_cast<size_t>(li)] : 0);
    out.set_right(k, ri >= 0 ? keys[static_cast<size_t>(ri)] : 0);
  }
  // Reattach hanging subtrees. For the gap between keys[i-1] and keys[i]
  // exactly one of (right of keys[i-1], left of keys[i]) is free.
  for (size_t gap = 0; gap <= k_count; ++gap) {
    Key c = gap_subtree[gap];
    if (c == 0) continue;
    if (gap == 0) {
      out.set_left(keys.front(), c);
    } else if (gap == k_count) {
      out.set_right(keys.back(), c);
    } else if (out.right(keys[gap - 1]) == 0) {
      out.set_right(keys[gap - 1], c);
    } else {
      out.set_left(keys[gap], c);
    }
  }
  Key new_top = shape.keys[static_cast<size_t>(shape.root)];
  Key p = parent[static_cast<size_t>(top)];
  if (p == 0) {
    out.set_root(new_top);
  } else if (t.left(p) == top) {
    out.set_left(p, new_top);
  } else {
    out.set_right(p, new_top);
  }
  return out;
}

namespace {

void append_key(std::string& out, Key k) {
  char buf[16];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, k);
  out.append(buf, end);
}

}  // namespace

std::string serialize(const Tree& t) {
  std::string out;
  out.reserve(static_cast<size_t>(t.n()) * 8);
  // Frame: key >0 => emit node then children; 0 => absent child; -1 => ","; -2 => ")".
  std::vector<Key> stack{t.root()};
  while (!stack.empty()) {
    Key f = stack.back();
    stack.pop_back();
    if (f == 0) {
      out.push_back('-');
    } else if (f == -1) {
      out.push_back(',');
    } else if (f == -2) {
      out.push_back(')');
    } else {
      append_key(out, f);
      out.push_back('(');
      stack.push_back(-2);
      stack.push_back(t.right(f));
      stack.push_back(-1);
      stack.push_back(t.left(f));
    }
  }
  return out;
}

namespace {

struct ParsedNode {
  Key key;
  Key left = 0, right = 0;
  std::string tag;  // annotation suffix after '!', empty if none
};

// Shared scaffolding for "key[!TAG](left,right)" texts. The stability module
// reuses it with tags enabled.
std::vector<ParsedNode> parse_nodes(const std::string& text, bool allow_tags, Key& root_out) {
  std::vector<ParsedNode> nodes;
  size_t pos = 0;
  auto fail = [&](const std::string& why) -> Error {
    return Error("parse_tree: " + why + " at offset " + std::to_string(pos));
  };
  // Stack of node indices whose children are being read; second = how many
  // children already attached.
  std::vector<std::pair<size_t, int>> open;
  root_out = 0;
  auto attach = [&](Key child_key) {
    if (open.empty()) {
      if (root_out != 0) throw Error("parse_tree: multiple roots");
      root_out = child_key;
      return;
    }
    auto& [parent_idx, got] = open.back();
    (got == 0 ? nodes[parent_idx].left : nodes[parent_idx].right) = child_key;
  };
  while (pos < text.size()) {
    char c = text[pos];
    if (c == '-') {
      ++pos;
    } else if (c == ',') {
      if (open.empty() || open.back().second != 0) throw fail("unexpected ','");
      open.back().second = 1;
      ++pos;
    } else if (c == ')') {
      if (open.empty() || open.back().second != 1) throw fail("unexpected ')'");
      open.pop_back();
      ++pos;
    } else if (c >= '0' && c <= '9') {
      Key k = 0;
      auto [next, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), k);
      if (ec != std::errc{}) throw fail("bad key");
      pos = static_cast<size_t>(next - text.data());
      ParsedNode node;
      node.key = k;
      if (pos < text.size() && text[pos] == '!') {
        if (!allow_tags) throw fail("annotation tag not allowed here");
        ++pos;
        while (pos < text.size() && text[pos] != '(') node.tag.push_back(text[pos++]);
      }
      if (pos >= text.size() || text[pos] != '(') throw fail("expected '('");
      ++pos;
      attach(k);
      nodes.push_back(std::move(node));
      open.emplace_back(nodes.size() - 1, 0);
    } else {
      throw fail(std::string("unexpected character '") + c + "'");
    }
  }
  if (!open.empty()) throw Error("parse_tree: unbalanced parentheses");
  if (nodes.empty()) throw Error("parse_tree: empty input");
  return nodes;
}

}  // namespace

namespace detail {

// Used by the stability text format; declared here to share the parser.
std::vector<std::pair<Key, std::string>> parse_tagged_tree(const std::string& text, Tree& out) {
  Key root = 0;
  auto nodes = parse_nodes(text, true, root);
  Key n = 0;
  for (const auto& nd : nodes) n = std::max(n, nd.key);
  Tree t(n);
  t.set_root(root);
  std::vector<std::pair<Key, std::string>> tags;
  for (const auto& nd : nodes) {
    t.set_left(nd.key, nd.left);
    t.set_right(nd.key, nd.right);
    if (!nd.tag.empty()) tags.emplace_back(nd.key, nd.tag);
  }
  out = std::move(t);
  return tags;
}

}  // namespace detail

Tree parse_tree(const std::string& text) {
  Key root = 0;
  auto nodes = parse_nodes(text, false, root);
  Key n = 0;
  for (const auto& nd : nodes) n = std::max(n, nd.key);
  Tree t(n);
  t.set_root(root);
  for (const auto& nd : nodes) {
    t.set_left(nd.key, nd.left);
    t.set_right(nd.key, nd.right);
  }
  if (auto v = validate_tree(t); !v) throw Error("parse_tree: " + v.first_violation);
  return t;
}

std::uint64_t fingerprint(const Tree& t) {
  std::string s = serialize(t);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace gf
