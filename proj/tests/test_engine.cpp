#include "gf/criteria.hpp"
#include "gf/engine.hpp"
#include "gf/stability.hpp"

#include <doctest.h>

#include <random>

using namespace gf;

namespace {

// Per-step oracle assembled from the public primitives: scan taus on the
// materialized suffix, build the treap, splice with rebuild_region. Kept
// here so the test stays independent of the engine's occurrence index.
struct OracleStep {
  Tree tree;
  std::uint32_t cost = 0;
  bool restructured = false;
};

OracleStep oracle_step(const Tree& t, std::span<const Key> x, size_t step, TieBreakPolicy policy) {
  const Key q = x[step];
  std::vector<Key> sorted;
  std::vector<std::int64_t> depths;
  std::vector<std::pair<Key, int>> highs;
  Key v = t.root();
  int d = 0;
  while (v != q) {
    if (q < v) {
      highs.emplace_back(v, d);
      v = t.left(v);
    } else {
      sorted.push_back(v);
      depths.push_back(d);
      v = t.right(v);
    }
    ++d;
  }
  sorted.push_back(q);
  depths.push_back(d);
  for (auto it = highs.rbegin(); it != highs.rend(); ++it) {
    sorted.push_back(it->first);
    depths.push_back(it->second);
  }
  const auto taus = tau_priorities(sorted, x.subspan(step + 1));
  std::vector<TreapPriority> priorities;
  for (size_t i = 0; i < sorted.size(); ++i)
    priorities.push_back(
        {taus[i], policy == TieBreakPolicy::SmallerDepth ? depths[i] : std::int64_t{sorted[i]}});
  OracleStep out;
  out.tree = rebuild_region(t, sorted, build_treap(sorted, priorities));
  out.cost = static_cast<std::uint32_t>(sorted.size());
  out.restructured = !(out.tree == t);
  return out;
}

}  // namespace

TEST_CASE("tau_priorities interval semantics") {
  const auto t1 = tau_priorities(std::vector<Key>{1, 2}, std::vector<Key>{3});
  CHECK(t1 == std::vector<std::uint64_t>{kTauNever, 1});

  const auto t2 = tau_priorities(std::vector<Key>{5}, std::vector<Key>{2, 4});
  CHECK(t2 == std::vector<std::uint64_t>{1});  // the whole line (-inf, +inf)

  const auto t3 = tau_priorities(std::vector<Key>{1, 2, 4}, std::vector<Key>{5, 3, 2});
  CHECK(t3[0] == kTauNever);
  CHECK(t3[1] == 2);  // 3 in (1,4) at index 2
  CHECK(t3[2] == 1);  // 5 in (2,+inf) at index 1

  CHECK(tau_priorities(std::vector<Key>{7}, std::vector<Key>{}) ==
        std::vector<std::uint64_t>{kTauNever});
}

TEST_CASE("build_treap worked examples") {
  const LocalShape single = build_treap(std::vector<Key>{5}, std::vector<TreapPriority>{{3, 0}});
  CHECK(single.root == 0);
  CHECK(single.keys == std::vector<Key>{5});

  const LocalShape pair =
      build_treap(std::vector<Key>{1, 2}, std::vector<TreapPriority>{{2, 1}, {1, 0}});
  CHECK(pair.root == 1);  // key 2 on top
  CHECK(pair.left[1] == 0);

  // Both taus infinite: pre-restructure depths decide, shallower on top.
  const LocalShape tie = build_treap(
      std::vector<Key>{1, 2}, std::vector<TreapPriority>{{kTauNever, 1}, {kTauNever, 0}});
  CHECK(tie.root == 1);
  CHECK(tie.left[1] == 0);
}

TEST_CASE("gf_serve on the smallest stable instances") {
  const Tree t = parse_tree("2(1(-,-),3(-,-))");
  std::vector<Key> x;
  for (int i = 0; i < 2; ++i) {
    x.push_back(1);
    x.push_back(3);
  }
  const GfResult r = gf_serve(t, x);
  CHECK(r.report.total == 8);
  CHECK(r.report.restructures == 0);
  CHECK(r.tree == t);

  const StabilityTree weak5 = weak5_tree();
  const std::vector<Key> xb{5, 3, 1, 5, 3, 1, 5, 3, 1};
  const GfResult rb = gf_serve(weak5.tree, xb);
  CHECK(Fraction(rb.report.total, xb.size()) == Fraction(8, 3));
  CHECK(rb.report.restructures == 0);
}

TEST_CASE("gf_serve promotes a twice-queried key to the root") {
  const GfResult r = gf_serve(parse_tree("2(1(-,-),3(-,-))"), std::vector<Key>{1, 1});
  CHECK(r.report.per_step == std::vector<std::uint32_t>{2, 1});
  CHECK(r.report.restructures == 1);
  CHECK(serialize(r.tree) == "1(-,2(-,3(-,-)))");
}

TEST_CASE("gf_is_static") {
  const Tree t = parse_tree("2(1(-,-),3(-,-))");
  CHECK(gf_is_static(t, std::vector<Key>{1, 3, 1, 3}));
  CHECK_FALSE(gf_is_static(t, std::vector<Key>{1, 1, 3}));
  std::mt19937_64 rng(17);
  for (const StabilityTree& st : stable_corpus(6, 12, 1u << 12, rng))
    CHECK(gf_is_static(st.tree, generate(st, atomic_length(st))));
}

TEST_CASE("engine agrees with the primitive-composed oracle step by step") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const Key n = 1 + static_cast<Key>(rng() % 14);
    const Tree t0 = random_bst(n, rng);
    std::vector<Key> x(1 + rng() % 24);
    for (auto& q : x) q = 1 + static_cast<Key>(rng() % n);
    for (TieBreakPolicy policy : {TieBreakPolicy::SmallerDepth, TieBreakPolicy::SmallerValue}) {
      GfOptions options;
      options.policy = policy;
      GfEngine engine(t0, x, options);
      Tree expected = t0;
      for (size_t step = 0; step < x.size(); ++step) {
        const int want_cost = depth(expected, x[step]) + 1;
        const OracleStep oracle = oracle_step(expected, x, step, policy);
        const GfStep got = engine.step();
        CHECK(got.path_len == oracle.cost);
        CHECK(got.path_len == static_cast<std::uint32_t>(want_cost));
        CHECK(got.restructured == oracle.restructured);
        CHECK(engine.tree() == oracle.tree);
        CHECK(validate_tree(engine.tree()).ok);
        expected = oracle.tree;
      }
    }
  }
}

TEST_CASE("a step only relinks path nodes") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const Key n = 2 + static_cast<Key>(rng() % 20);
    const Tree t0 = random_bst(n, rng);
    std::vector<Key> x(8);
    for (auto& q : x) q = 1 + static_cast<Key>(rng() % n);
    GfEngine engine(t0, x, {});
    Tree before = t0;
    while (!engine.done()) {
      const Key q = x[engine.position()];
      std::vector<char> on_path(static_cast<size_t>(n) + 1, 0);
      for (Key v = before.root();; v = q < v ? before.left(v) : before.right(v)) {
        on_path[static_cast<size_t>(v)] = 1;
        if (v == q) break;
      }
      engine.step();
      const Tree& after = engine.tree();
      for (Key k = 1; k <= n; ++k) {
        if (on_path[static_cast<size_t>(k)]) continue;
        CHECK(before.left(k) == after.left(k));
        CHECK(before.right(k) == after.right(k));
      }
      before = after;
    }
  }
}

TEST_CASE("identical inputs give identical traces") {
  const StabilityTree st = weak5_tree();
  const std::vector<Key> x = generate(st, 30);
  GfOptions options;
  options.record_trace = true;
  const GfResult a = gf_serve(st.tree, x, options);
  const GfResult b = gf_serve(st.tree, x, options);
  REQUIRE(a.trace.steps.size() == b.trace.steps.size());
  for (size_t i = 0; i < a.trace.steps.size(); ++i) {
    CHECK(a.trace.steps[i].tree_fingerprint == b.trace.steps[i].tree_fingerprint);
    CHECK(a.trace.steps[i].path_len == b.trace.steps[i].path_len);
  }
  CHECK(a.tree == b.tree);
}

TEST_CASE("queries outside the key range are rejected") {
  const Tree t = parse_tree("2(1(-,-),3(-,-))");
  CHECK_THROWS_AS(gf_serve(t, std::vector<Key>{4}), Error);
  CHECK_THROWS_AS(gf_serve(t, std::vector<Key>{0}), Error);
}
