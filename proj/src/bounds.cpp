#include "gf/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gf {

WilberResult wilber1(std::span<const Key> x, const Tree& ref) {
  const Key n = ref.n();
  std::vector<std::uint8_t> last_side(static_cast<size_t>(n) + 1, 0);  // 0 none, 1 left, 2 right
  std::vector<std::uint64_t> alt(static_cast<size_t>(n) + 1, 0);
  for (Key q : x) {
    if (q < 1 || q > n) throw Error("wilber1: query out of range");
    Key v = ref.root();
    while (v != q) {
      if (v == 0) throw Error("wilber1: query " + std::to_string(q) + " is absent from the reference tree");
      const std::uint8_t side = q < v ? 1 : 2;
      if (last_side[static_cast<size_t>(v)] != 0 && last_side[static_cast<size_t>(v)] != side)
        ++alt[static_cast<size_t>(v)];
      last_side[static_cast<size_t>(v)] = side;
      v = side == 1 ? ref.left(v) : ref.right(v);
    }
    if (ref.left(q) != 0 || ref.right(q) != 0)
      throw Error("wilber1: query " + std::to_string(q) + " is not a leaf of the reference tree");
  }
  WilberResult out;
  std::uint64_t alt_sum = 0;
  for (Key k = 1; k <= n; ++k)
    if (ref.left(k) != 0 || ref.right(k) != 0) {
      out.alt_per_inner_node[k] = alt[static_cast<size_t>(k)];
      alt_sum += alt[static_cast<size_t>(k)];
    }
  out.bound = Fraction(x.size()) + Fraction(alt_sum, 2);
  return out;
}

StaticDpResult static_opt(std::span<const std::uint64_t> counts, Key n) {
  if (n < 1) throw Error("static_opt: n must be >= 1");
  if (n > 4096) throw Error("static_opt: n above the 4096 guard");
  if (counts.size() < static_cast<size_t>(n) + 1) throw Error("static_opt: counts must be indexed 1..n");
  const size_t width = static_cast<size_t>(n) + 2;
  // cost and root over intervals [i, j]; empty intervals cost 0.
  std::vector<std::uint64_t> cost(width * width, 0);
  std::vector<Key> root(width * width, 0);
  auto at = [width](Key i, Key j) { return static_cast<size_t>(i) * width + static_cast<size_t>(j); };

  std::vector<std::uint64_t> prefix(static_cast<size_t>(n) + 1, 0);
  for (Key k = 1; k <= n; ++k) prefix[static_cast<size_t>(k)] = prefix[static_cast<size_t>(k) - 1] + counts[static_cast<size_t>(k)];
  auto weight = [&](Key i, Key j) { return prefix[static_cast<size_t>(j)] - prefix[static_cast<size_t>(i) - 1]; };

  for (Key i = 1; i <= n; ++i) {
    cost[at(i, i)] = counts[static_cast<size_t>(i)];
    root[at(i, i)] = i;
  }
  for (Key len = 2; len <= n; ++len) {
    for (Key i = 1; i + len - 1 <= n; ++i) {
      const Key j = i + len - 1;
      const Key r_lo = root[at(i, j - 1)];
      const Key r_hi = root[at(i + 1, j)];
      std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
      Key best_root = 0;
      for (Key r = r_lo; r <= r_hi; ++r) {
        const std::uint64_t c = (r > i ? cost[at(i, r - 1)] : 0) + (r < j ? cost[at(r + 1, j)] : 0);
        if (c < best) {
          best = c;
          best_root = r;
        }
      }
      cost[at(i, j)] = best + weight(i, j);
      root[at(i, j)] = best_root;
    }
  }

  StaticDpResult out{Tree(n), cost[at(1, n)]};
  std::vector<std::pair<Key, Key>> stack{{1, n}};
  out.tree.set_root(root[at(1, n)]);
  while (!stack.empty()) {
    auto [i, j] = stack.back();
    stack.pop_back();
    const Key r = root[at(i, j)];
    if (r > i) {
      out.tree.set_left(r, root[at(i, r - 1)]);
      stack.emplace_back(i, r - 1);
    }
    if (r < j) {
      out.tree.set_right(r, root[at(r + 1, j)]);
      stack.emplace_back(r + 1, j);
    }
  }
  return out;
}

double entropy_bits(std::span<const Fraction> frequencies) {
  double h = 0;
  for (const Fraction& f : frequencies) {
    if (f <= 0) throw Error("entropy_bits: frequencies must be positive");
    const double p = to_double(f);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace gf
