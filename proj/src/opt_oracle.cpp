#include "gf/opt_oracle.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>

namespace gf {

namespace {

struct Frag {
  Key root = 0;                          // 0 = empty
  std::vector<std::array<Key, 3>> links;  // (key, left, right)
};

void collect_shapes(Key lo, Key hi, std::vector<Frag>& out) {
  if (lo > hi) {
    out.push_back({});
    return;
  }
  for (Key r = lo; r <= hi; ++r) {
    std::vector<Frag> lefts, rights;
    collect_shapes(lo, r - 1, lefts);
    collect_shapes(r + 1, hi, rights);
    for (const auto& lf : lefts)
      for (const auto& rf : rights) {
        Frag f;
        f.root = r;
        f.links = lf.links;
        f.links.insert(f.links.end(), rf.links.begin(), rf.links.end());
        f.links.push_back({r, lf.root, rf.root});
        out.push_back(std::move(f));
      }
  }
}

// All BSTs over j generic slots 0..j-1, as index-based LocalShapes.
const std::vector<LocalShape>& generic_shapes(int j) {
  static std::vector<std::vector<LocalShape>> cache;
  if (cache.size() <= static_cast<size_t>(j)) cache.resize(static_cast<size_t>(j) + 1);
  auto& entry = cache[static_cast<size_t>(j)];
  if (!entry.empty() || j == 0) return entry;
  std::vector<Frag> frags;
  collect_shapes(1, static_cast<Key>(j), frags);
  for (const auto& f : frags) {
    LocalShape s;
    s.keys.resize(static_cast<size_t>(j));
    for (int i = 0; i < j; ++i) s.keys[static_cast<size_t>(i)] = static_cast<Key>(i);
    s.left.assign(static_cast<size_t>(j), -1);
    s.right.assign(static_cast<size_t>(j), -1);
    s.root = f.root - 1;
    for (const auto& [key, l, r] : f.links) {
      s.left[static_cast<size_t>(key - 1)] = l == 0 ? -1 : l - 1;
      s.right[static_cast<size_t>(key - 1)] = r == 0 ? -1 : r - 1;
    }
    entry.push_back(std::move(s));
  }
  return entry;
}

}  // namespace

ShapeId ShapeCatalog::id_of(const Tree& t) const {
  auto it = id_by_serialization.find(serialize(t));
  if (it == id_by_serialization.end()) throw Error("shape catalog: unknown tree");
  return it->second;
}

ShapeCatalog enumerate_shapes(Key n) {
  if (n < 1 || n > 8) throw Error("enumerate_shapes supports 1 <= n <= 8");
  ShapeCatalog catalog;
  catalog.n = n;
  std::vector<Frag> frags;
  collect_shapes(1, n, frags);
  for (const auto& f : frags) {
    Tree t(n);
    t.set_root(f.root);
    for (const auto& [key, l, r] : f.links) {
      t.set_left(key, l);
      t.set_right(key, r);
    }
    catalog.id_by_serialization.emplace(serialize(t), static_cast<ShapeId>(catalog.shapes.size()));
    catalog.shapes.push_back(std::move(t));
  }
  return catalog;
}

std::vector<Transition> transitions(const ShapeCatalog& catalog, ShapeId from, Key query,
                                    RegionSemantics semantics) {
  const Tree& t = catalog.shapes[static_cast<size_t>(from)];
  const Key n = catalog.n;
  if (query < 1 || query > n) throw Error("transitions: query out of range");

  std::uint32_t path_mask = 0;
  for (Key v = t.root(); v != query; v = query < v ? t.left(v) : t.right(v)) {
    path_mask |= 1u << (v - 1);
  }
  path_mask |= 1u << (query - 1);
  const std::uint32_t root_bit = 1u << (t.root() - 1);
  const std::uint32_t query_bit = 1u << (query - 1);

  std::vector<std::uint32_t> parent_bit(static_cast<size_t>(n) + 1, 0);
  for (Key k = 1; k <= n; ++k)
    for (Key c : {t.left(k), t.right(k)})
      if (c != 0) parent_bit[static_cast<size_t>(c)] = 1u << (k - 1);

  std::map<ShapeId, std::uint32_t> best;
  if (semantics == RegionSemantics::Permissive)
    best.emplace(from, std::popcount(path_mask));  // U empty: pure search

  std::vector<Key> keys;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    // Connected iff exactly one member's parent lies outside the set.
    int tops = 0;
    for (std::uint32_t rest = mask; rest;) {
      const int bit = std::countr_zero(rest);
      rest &= rest - 1;
      const std::uint32_t p = parent_bit[static_cast<size_t>(bit) + 1];
      if (p == 0 || !(mask & p)) ++tops;
    }
    if (tops != 1) continue;
    if (semantics == RegionSemantics::RootedRestricted && ((mask & root_bit) == 0 || (mask & query_bit) == 0))
      continue;
    const std::uint32_t cost = semantics == RegionSemantics::Permissive
                                   ? static_cast<std::uint32_t>(std::popcount(path_mask | mask))
                                   : static_cast<std::uint32_t>(std::popcount(mask));
    keys.clear();
    for (std::uint32_t rest = mask; rest;) {
      const int bit = std::countr_zero(rest);
      rest &= rest - 1;
      keys.push_back(static_cast<Key>(bit + 1));
    }
    for (const LocalShape& generic : generic_shapes(static_cast<int>(keys.size()))) {
      LocalShape shape = generic;
      for (size_t i = 0; i < keys.size(); ++i) shape.keys[i] = keys[i];
      const Tree to = rebuild_region(t, keys, shape);
      const ShapeId to_id = catalog.id_of(to);
      auto [it, inserted] = best.emplace(to_id, cost);
      if (!inserted && cost < it->second) it->second = cost;
    }
  }
  std::vector<Transition> out;
  out.reserve(best.size());
  for (const auto& [to, cost] : best) out.push_back({to, cost});
  return out;
}

OptOracle::OptOracle(Key n, RegionSemantics semantics)
    : catalog_(enumerate_shapes(n)), semantics_(semantics) {
  memo_.resize(catalog_.shapes.size() * static_cast<size_t>(n));
  ready_.assign(memo_.size(), 0);
}

const std::vector<Transition>& OptOracle::transitions_for(ShapeId from, Key query) {
  const size_t slot = static_cast<size_t>(from) * static_cast<size_t>(catalog_.n) + static_cast<size_t>(query - 1);
  if (!ready_[slot]) {
    memo_[slot] = transitions(catalog_, from, query, semantics_);
    ready_[slot] = 1;
  }
  return memo_[slot];
}

BruteForceOpt OptOracle::solve(const Tree& t0, std::span<const Key> x) {
  if (catalog_.n > 6) throw Error("brute_force_opt: instance too large (n > 6)");
  if (x.size() > 14) throw Error("brute_force_opt: instance too large (m > 14)");
  const size_t shape_count = catalog_.shapes.size();
  const ShapeId start = catalog_.id_of(t0);
  constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

  std::vector<std::uint64_t> dist(shape_count, kInf), next(shape_count, kInf);
  std::vector<std::vector<ShapeId>> prev(x.size());
  dist[static_cast<size_t>(start)] = 0;
  for (size_t step = 0; step < x.size(); ++step) {
    std::fill(next.begin(), next.end(), kInf);
    prev[step].assign(shape_count, -1);
    for (size_t s = 0; s < shape_count; ++s) {
      if (dist[s] == kInf) continue;
      for (const Transition& tr : transitions_for(static_cast<ShapeId>(s), x[step])) {
        const std::uint64_t c = dist[s] + tr.cost;
        if (c < next[static_cast<size_t>(tr.to)]) {
          next[static_cast<size_t>(tr.to)] = c;
          prev[step][static_cast<size_t>(tr.to)] = static_cast<ShapeId>(s);
        }
      }
    }
    dist.swap(next);
  }
  BruteForceOpt out;
  ShapeId at = static_cast<ShapeId>(std::min_element(dist.begin(), dist.end()) - dist.begin());
  out.cost = dist[static_cast<size_t>(at)];
  out.trajectory.assign(x.size(), 0);
  for (size_t step = x.size(); step-- > 0;) {
    out.trajectory[step] = at;
    at = prev[step][static_cast<size_t>(at)];
  }
  return out;
}

BruteForceOpt brute_force_opt(const Tree& t0, std::span<const Key> x, RegionSemantics semantics) {
  OptOracle oracle(t0.n(), semantics);
  return oracle.solve(t0, x);
}

}  // namespace gf
