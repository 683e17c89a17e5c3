#include "gf/stability.hpp"

#include <algorithm>
#include <array>

namespace gf {

namespace detail {
std::vector<std::pair<Key, std::string>> parse_tagged_tree(const std::string& text, Tree& out);
}

namespace {
constexpr bool L = false, R = true;
constexpr std::array<bool, 2> kStrongL{L, R};
constexpr std::array<bool, 2> kStrongR{R, L};
constexpr std::array<bool, 3> kWeakLeft{L, L, R};
constexpr std::array<bool, 3> kWeakRight{R, R, L};
}  // namespace

SidePattern side_pattern(StabilityKind kind) {
  switch (kind) {
    case StabilityKind::StrongL: return kStrongL;
    case StabilityKind::StrongR: return kStrongR;
    case StabilityKind::WeakLeft: return kWeakLeft;
    case StabilityKind::WeakRight: return kWeakRight;
    case StabilityKind::None: break;
  }
  return {};
}

StabilityValidation validate_stability(const StabilityTree& st) {
  const Tree& t = st.tree;
  if (auto v = validate_tree(t); !v) return {false, StabilityClass::Mixed, "tree: " + v.first_violation};
  if (st.kind.size() != static_cast<size_t>(t.n()) + 1 || st.cursor0.size() != st.kind.size())
    return {false, StabilityClass::Mixed, "annotation arrays must be sized n+1"};

  int inner = 0, weak = 0;
  for (Key k = 1; k <= t.n(); ++k) {
    const bool has_left = t.left(k) != 0, has_right = t.right(k) != 0;
    const auto kind = st.kind[static_cast<size_t>(k)];
    if (has_left != has_right)
      return {false, StabilityClass::Mixed, "node " + std::to_string(k) + " is unary; the tree must be full"};
    if (!has_left) {
      if (kind != StabilityKind::None)
        return {false, StabilityClass::Mixed, "leaf " + std::to_string(k) + " carries an annotation"};
      continue;
    }
    ++inner;
    if (kind == StabilityKind::None)
      return {false, StabilityClass::Mixed, "inner node " + std::to_string(k) + " lacks an annotation"};
    if (st.cursor0[static_cast<size_t>(k)] >= side_pattern(kind).size())
      return {false, StabilityClass::Mixed, "cursor out of range at node " + std::to_string(k)};
    if (kind == StabilityKind::WeakLeft || kind == StabilityKind::WeakRight) {
      ++weak;
      const Key favored = kind == StabilityKind::WeakLeft ? t.left(k) : t.right(k);
      if (t.left(favored) == 0)
        return {false, StabilityClass::Mixed,
                "favored child of weak node " + std::to_string(k) + " must be inner"};
      const auto want = kind == StabilityKind::WeakLeft ? StabilityKind::StrongL : StabilityKind::StrongR;
      if (st.kind[static_cast<size_t>(favored)] != want)
        return {false, StabilityClass::Mixed,
                "favored child of weak node " + std::to_string(k) +
                    " must be strong with the matching initial side"};
    }
  }
  StabilityValidation out;
  out.cls = weak == 0                ? StabilityClass::Strong
            : 2 * weak == inner      ? StabilityClass::Weak
                                     : StabilityClass::Mixed;
  return out;
}

SequenceGenerator::SequenceGenerator(const StabilityTree& st) : st_(&st), cursor_(st.cursor0) {}

void SequenceGenerator::reset() { cursor_ = st_->cursor0; }

Key SequenceGenerator::next() {
  const Tree& t = st_->tree;
  Key v = t.root();
  while (t.left(v) != 0) {
    auto& cur = cursor_[static_cast<size_t>(v)];
    const auto pattern = side_pattern(st_->kind[static_cast<size_t>(v)]);
    const bool side = pattern[cur];
    cur = static_cast<std::uint8_t>((cur + 1) % pattern.size());
    v = side ? t.right(v) : t.left(v);
  }
  return v;
}

std::vector<Key> generate(const StabilityTree& st, std::uint64_t count) {
  SequenceGenerator gen(st);
  std::vector<Key> out;
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.push_back(gen.next());
  return out;
}

std::vector<std::uint64_t> atomic_counts(const StabilityTree& st) {
  SequenceGenerator gen(st);
  std::vector<std::uint64_t> counts(static_cast<size_t>(st.tree.n()) + 1, 0);
  const std::uint64_t period = atomic_length(st);
  for (std::uint64_t i = 0; i < period; ++i) ++counts[static_cast<size_t>(gen.next())];
  return counts;
}

std::vector<LeafProfile> leaf_profiles(const StabilityTree& st) {
  const Tree& t = st.tree;
  struct Item {
    Key node;
    int a, b;
    Fraction freq;
    bool is_favored_child;
  };
  std::vector<LeafProfile> out;
  std::vector<Item> stack{{t.root(), 0, 0, Fraction(1), false}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const Key v = it.node;
    if (t.left(v) == 0) {
      out.push_back({v, it.a, it.b, it.freq});
      continue;
    }
    const auto kind = st.kind[static_cast<size_t>(v)];
    // A strong node halves the frequency toward both children and, unless it
    // is somebody's favored child (counted at its weak parent), bumps a. A
    // weak node sends 2/3 to the favored child and 1/3 to the other, bumping b.
    switch (kind) {
      case StabilityKind::StrongL:
      case StabilityKind::StrongR: {
        const int a = it.a + (it.is_favored_child ? 0 : 1);
        stack.push_back({t.left(v), a, it.b, it.freq / 2, false});
        stack.push_back({t.right(v), a, it.b, it.freq / 2, false});
        break;
      }
      case StabilityKind::WeakLeft:
      case StabilityKind::WeakRight: {
        const Key favored = kind == StabilityKind::WeakLeft ? t.left(v) : t.right(v);
        const Key other = kind == StabilityKind::WeakLeft ? t.right(v) : t.left(v);
        stack.push_back({favored, it.a, it.b + 1, it.freq * Fraction(2, 3), true});
        stack.push_back({other, it.a, it.b + 1, it.freq / 3, false});
        break;
      }
      case StabilityKind::None: break;
    }
  }
  std::sort(out.begin(), out.end(), [](const LeafProfile& x, const LeafProfile& y) { return x.leaf < y.leaf; });
  return out;
}

std::uint64_t atomic_length(const StabilityTree& st) {
  int max_a = 0, max_b = 0;
  for (const auto& p : leaf_profiles(st)) {
    max_a = std::max(max_a, p.a);
    max_b = std::max(max_b, p.b);
  }
  Int period = int_pow(2, static_cast<unsigned>(max_a)) * int_pow(3, static_cast<unsigned>(max_b));
  if (period > Int(std::numeric_limits<std::uint64_t>::max()))
    throw Error("atomic_length exceeds 64 bits");
  return period.convert_to<std::uint64_t>();
}

bool check_stability(std::span<const Key> x, const StabilityTree& st) {
  const Tree& t = st.tree;
  std::vector<std::uint8_t> cursor = st.cursor0;
  for (Key q : x) {
    if (q < 1 || q > t.n()) return false;
    Key v = t.root();
    while (v != q) {
      if (v == 0 || t.left(v) == 0) return false;
      const bool side = q > v;
      auto& cur = cursor[static_cast<size_t>(v)];
      const auto pattern = side_pattern(st.kind[static_cast<size_t>(v)]);
      if (pattern[cur] != side) return false;
      cur = static_cast<std::uint8_t>((cur + 1) % pattern.size());
      v = side ? t.right(v) : t.left(v);
    }
    if (t.left(v) != 0) return false;  // queried an inner node
  }
  return true;
}

namespace {

const char* tag_of(StabilityKind kind) {
  switch (kind) {
    case StabilityKind::StrongL: return "S_L";
    case StabilityKind::StrongR: return "S_R";
    case StabilityKind::WeakLeft: return "WL";
    case StabilityKind::WeakRight: return "WR";
    case StabilityKind::None: break;
  }
  return "";
}

StabilityKind kind_of_tag(const std::string& tag) {
  if (tag == "S_L") return StabilityKind::StrongL;
  if (tag == "S_R") return StabilityKind::StrongR;
  if (tag == "WL") return StabilityKind::WeakLeft;
  if (tag == "WR") return StabilityKind::WeakRight;
  throw Error("unknown stability tag '" + tag + "'");
}

}  // namespace

std::string serialize_stability(const StabilityTree& st) {
  const Tree& t = st.tree;
  std::string out;
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
      out += std::to_string(f);
      if (st.kind[static_cast<size_t>(f)] != StabilityKind::None) {
        out.push_back('!');
        out += tag_of(st.kind[static_cast<size_t>(f)]);
      }
      out.push_back('(');
      stack.push_back(-2);
      stack.push_back(t.right(f));
      stack.push_back(-1);
      stack.push_back(t.left(f));
    }
  }
  return out;
}

StabilityTree parse_stability(const std::string& text) {
  StabilityTree st;
  auto tags = detail::parse_tagged_tree(text, st.tree);
  if (auto v = validate_tree(st.tree); !v) throw Error("parse_stability: " + v.first_violation);
  st.kind.assign(static_cast<size_t>(st.tree.n()) + 1, StabilityKind::None);
  st.cursor0.assign(st.kind.size(), 0);
  for (const auto& [key, tag] : tags) st.kind[static_cast<size_t>(key)] = kind_of_tag(tag);
  return st;
}

namespace {

// Number of full binary trees with `l` leaves is Catalan(l-1); 64 bits cover
// l <= 33, enough for the test corpus.
const std::vector<std::uint64_t>& catalan_table() {
  static const std::vector<std::uint64_t> table = [] {
    std::vector<std::uint64_t> c{1};
    for (int i = 1; i <= 32; ++i) {
      std::uint64_t v = 0;
      for (int j = 0; j < i; ++j) v += c[static_cast<size_t>(j)] * c[static_cast<size_t>(i - 1 - j)];
      c.push_back(v);
    }
    return c;
  }();
  return table;
}

// Builds a uniform full-tree shape over keys [lo, hi] (odd count) and
// returns its root.
Key uniform_full_shape(Tree& t, Key lo, Key hi, std::mt19937_64& rng) {
  const int leaves = static_cast<int>((hi - lo) / 2) + 1;
  if (leaves == 1) return lo;
  const auto& cat = catalan_table();
  std::uint64_t total = cat[static_cast<size_t>(leaves - 1)];
  std::uint64_t pick = rng() % total;
  int left_leaves = 1;
  for (; left_leaves < leaves; ++left_leaves) {
    std::uint64_t w = cat[static_cast<size_t>(left_leaves - 1)] * cat[static_cast<size_t>(leaves - left_leaves - 1)];
    if (pick < w) break;
    pick -= w;
  }
  const Key root = lo + 2 * left_leaves - 1;
  t.set_left(root, uniform_full_shape(t, lo, root - 1, rng));
  t.set_right(root, uniform_full_shape(t, root + 1, hi, rng));
  return root;
}

}  // namespace

StabilityTree random_stability_tree(int leaves, double weak_prob, std::mt19937_64& rng) {
  if (leaves < 1 || leaves > 33) throw Error("random_stability_tree supports 1..33 leaves");
  const Key n = static_cast<Key>(2 * leaves - 1);
  StabilityTree st;
  st.tree = Tree(n);
  st.tree.set_root(uniform_full_shape(st.tree, 1, n, rng));
  st.kind.assign(static_cast<size_t>(n) + 1, StabilityKind::None);
  st.cursor0.assign(st.kind.size(), 0);

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  // Top-down so a favored child is pinned before its own annotation is drawn.
  std::vector<Key> order;
  if (st.tree.left(st.tree.root()) != 0) order.push_back(st.tree.root());
  for (size_t i = 0; i < order.size(); ++i) {
    Key v = order[i];
    for (Key c : {st.tree.left(v), st.tree.right(v)})
      if (c != 0 && st.tree.left(c) != 0) order.push_back(c);
  }
  std::vector<char> pinned(static_cast<size_t>(n) + 1, 0);
  for (Key v : order) {
    if (pinned[static_cast<size_t>(v)]) continue;
    const bool left_inner = st.tree.left(st.tree.left(v)) != 0;
    const bool right_inner = st.tree.left(st.tree.right(v)) != 0;
    const bool eligible = left_inner || right_inner;
    if (eligible && coin(rng) < weak_prob) {
      bool favor_left = left_inner && (!right_inner || coin(rng) < 0.5);
      st.kind[static_cast<size_t>(v)] = favor_left ? StabilityKind::WeakLeft : StabilityKind::WeakRight;
      const Key favored = favor_left ? st.tree.left(v) : st.tree.right(v);
      st.kind[static_cast<size_t>(favored)] = favor_left ? StabilityKind::StrongL : StabilityKind::StrongR;
      pinned[static_cast<size_t>(favored)] = 1;
    } else {
      st.kind[static_cast<size_t>(v)] = coin(rng) < 0.5 ? StabilityKind::StrongL : StabilityKind::StrongR;
    }
  }
  return st;
}

}  // namespace gf
