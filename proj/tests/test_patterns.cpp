#include "gf/criteria.hpp"
#include "gf/engine.hpp"
#include "gf/experiments.hpp"
#include "gf/patterns.hpp"

#include <doctest.h>

#include <random>

using namespace gf;

TEST_CASE("closed_form worked examples and domain guards") {
  CHECK(closed_form({Fraction(17), Fraction(3), Fraction(1), Fraction(2)}, 0) == 17);
  CHECK(closed_form({Fraction(1), Fraction(2, 3), Fraction(2), Fraction(0)}, 1) == Fraction(8, 3));
  for (int r = 0; r <= 12; ++r) {
    const Fraction q = frac_pow(Fraction(2, 3), static_cast<unsigned>(r));
    CHECK(closed_form({Fraction(1), Fraction(2, 3), Fraction(2), Fraction(0)}, r) == 6 * (1 - q) + q);
  }
  CHECK_THROWS_AS(closed_form({Fraction(0), Fraction(1), Fraction(1), Fraction(0)}, 3), Error);
  CHECK_THROWS_AS(closed_form({Fraction(0), Fraction(1, 2), Fraction(1), Fraction(1)}, 3), Error);
  // alpha = 1/2 is fine when gamma vanishes.
  CHECK(closed_form({Fraction(0), Fraction(1, 2), Fraction(1), Fraction(0)}, 2) == Fraction(3, 2));
}

TEST_CASE("closed_form equals literal iteration on random rationals") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 200; ++trial) {
    RecurrenceParams p;
    auto rnd = [&rng] {
      return Fraction(static_cast<long long>(rng() % 21) - 10, 1 + static_cast<long long>(rng() % 12));
    };
    do {
      p.alpha = rnd();
    } while (p.alpha == 1 || p.alpha == Fraction(1, 2));
    p.b0 = rnd();
    p.beta = rnd();
    p.gamma = rnd();
    const int r = static_cast<int>(rng() % 20);
    CHECK(closed_form(p, r) == iterate_recurrence(p, r));
  }
}

TEST_CASE("build_kr_tree shapes and sizes") {
  const StabilityTree t21 = build_kr_tree({2, 1, KrAnnotation::AllStrong});
  CHECK(serialize(t21.tree) == "2(1(-,-),4(3(-,-),5(-,-)))");
  CHECK(t21.tree.n() == 5);

  CHECK(build_kr_tree({3, 2, KrAnnotation::AllStrong}).tree.n() == 25);
  CHECK(build_kr_tree({4, 0, KrAnnotation::AllStrong}).tree.n() == 1);

  for (int k = 2; k <= 5; ++k)
    for (int r = 0; r <= 4; ++r) {
      const Int size = kr_tree_size(k, r);
      // (2 + 2/(k-1)) k^r - (1 + 2/(k-1)), evaluated exactly.
      const Fraction closed = (Fraction(2) + Fraction(2, k - 1)) * int_pow(k, static_cast<unsigned>(r)) -
                              (Fraction(1) + Fraction(2, k - 1));
      CHECK(Fraction(size) == closed);
      const StabilityTree st = build_kr_tree({k, r, KrAnnotation::AllStrong});
      CHECK(Int(st.tree.n()) == size);
      CHECK(validate_stability(st).ok);
      if (r >= 1) {
        CHECK(tree_depth(st.tree) == k * r);
        CHECK(depth(st.tree, 1) == r);
      }
    }

  CHECK_THROWS_AS(build_kr_tree({3, 2, KrAnnotation::WeakTrunkRoots}), Error);
  CHECK_THROWS_AS(build_kr_tree({1, 2, KrAnnotation::AllStrong}), Error);

  const StabilityTree weak = build_kr_tree({2, 2, KrAnnotation::WeakTrunkRoots});
  const auto v = validate_stability(weak);
  CHECK(v.ok);
  CHECK(v.cls == StabilityClass::Weak);
  CHECK(atomic_length(weak) == 9);  // 3^r
}

TEST_CASE("build_chain_tree") {
  CHECK(serialize(build_chain_tree(1).tree) == "2(1(-,-),3(-,-))");
  CHECK(serialize(build_chain_tree(2).tree) == "2(1(-,-),4(3(-,-),5(-,-)))");
  const StabilityTree chain = build_chain_tree(5);
  CHECK(validate_stability(chain).cls == StabilityClass::Strong);
  const auto profiles = leaf_profiles(chain);
  REQUIRE(profiles.size() == 6);
  for (size_t i = 0; i + 1 < profiles.size(); ++i) {
    CHECK(profiles[i].leaf == static_cast<Key>(2 * i + 1));
    CHECK(profiles[i].frequency == Fraction(1, int_pow(2, static_cast<unsigned>(i + 1))));
  }
  // The deepest leaf repeats the previous frequency.
  CHECK(profiles.back().frequency == profiles[profiles.size() - 2].frequency);
}

TEST_CASE("promote_kr on the strong (2,1)-tree matches the worked example") {
  const StabilityTree st = build_kr_tree({2, 1, KrAnnotation::AllStrong});
  const PromoteResult res = promote_kr(st);
  CHECK(serialize(res.tree) == "3(1(-,2(-,-)),5(4(-,-),-))");
  CHECK(res.report.average == Fraction(3, 4));
  CHECK(validate_tree(res.tree).ok);

  // Serving the atomic sequence on the optimized tree averages 7/4 = 5/2 - 3/4.
  const std::vector<Key> atomic = generate(st, atomic_length(st));
  REQUIRE(atomic == std::vector<Key>{1, 3, 1, 5});
  CHECK(Fraction(static_total(res.tree, atomic), atomic.size()) == Fraction(7, 4));
}

TEST_CASE("promotion averages across the strong grid") {
  for (int k = 2; k <= 5; ++k)
    for (int r = 0; r <= 5; ++r) {
      const StabilityTree st = build_kr_tree({k, r, KrAnnotation::AllStrong});
      const PromoteResult res = promote_kr(st);
      CHECK(validate_tree(res.tree).ok);
      CHECK(in_order(res.tree) == in_order(st.tree));
      CHECK(res.report.average == predicted_gap(k, r, GapMode::Strong));
      for (const PromotionEntry& e : res.report.per_leaf) CHECK(e.new_depth <= e.old_depth);
      if (k == 2) CHECK(res.report.average == predicted_promotion_strong(k, r));
    }
}

TEST_CASE("weak F-tree promotion matches its closed form") {
  for (int r = 1; r <= 6; ++r) {
    const StabilityTree st = build_kr_tree({2, r, KrAnnotation::WeakTrunkRoots});
    const Fraction q = frac_pow(Fraction(2, 3), static_cast<unsigned>(r));
    CHECK(promote_kr(st).report.average == 3 * (1 - q));
    CHECK(promote_kr(st).report.average == predicted_promotion_weak_f(r));
    CHECK(promote_kr(st).report.average > predicted_gap(2, r, GapMode::Mixed));
  }
}

TEST_CASE("promote_kr rejects non-(k,r) inputs") {
  StabilityTree spine;
  spine.tree = Tree::right_spine(4);
  spine.kind.assign(5, StabilityKind::None);
  spine.cursor0.assign(5, 0);
  CHECK_THROWS_AS(promote_kr(spine), Error);

  StabilityTree uneven;
  uneven.tree = parse_tree("2(1(-,-),4(3(-,-),6(5(-,-),7(-,-))))");
  uneven.kind.assign(8, StabilityKind::None);
  uneven.cursor0.assign(8, 0);
  CHECK_THROWS_AS(promote_kr(uneven), Error);
}

TEST_CASE("predicted_gf_cost_strong") {
  CHECK(predicted_gf_cost_strong(2, 0) == 1);
  CHECK(predicted_gf_cost_strong(2, 1) == Fraction(5, 2));

  // Direct serve of the atomic sequence on the 5-node tree.
  const StabilityTree st = build_kr_tree({2, 1, KrAnnotation::AllStrong});
  const std::vector<Key> atomic = generate(st, 4);
  CHECK(Fraction(static_total(st.tree, atomic), 4) == Fraction(5, 2));

  for (int r = 0; r <= 10; ++r) {
    const Fraction q = frac_pow(Fraction(3, 4), static_cast<unsigned>(r));
    CHECK(predicted_gf_cost_strong(2, r) == 7 * (1 - q) + q);
  }
  for (int k = 2; k <= 8; ++k)
    CHECK(gf_cost_beta(k) == 2 - Fraction(1, int_pow(2, static_cast<unsigned>(k))));
}

TEST_CASE("predicted_promotion_strong") {
  for (int r = 0; r <= 8; ++r) {
    const Fraction q = frac_pow(Fraction(3, 4), static_cast<unsigned>(r));
    CHECK(predicted_promotion_strong(2, r) == 3 * (1 - q));
  }
  CHECK(predicted_promotion_strong(4, 0) == 0);
  CHECK(predicted_promotion_strong(3, 1) == Fraction(5, 8));  // 4/8 + (1/2)(1/2)(1/2)
  // The gamma correction stays within [0, alpha^r).
  for (int k = 3; k <= 5; ++k)
    for (int r = 1; r <= 8; ++r) {
      const Fraction delta = predicted_promotion_strong(k, r) - predicted_gap(k, r, GapMode::Strong);
      const Fraction alpha_r =
          frac_pow(1 - Fraction(1, int_pow(2, static_cast<unsigned>(k))), static_cast<unsigned>(r));
      CHECK(delta >= 0);
      CHECK(delta < alpha_r);
    }
}

TEST_CASE("predicted_gap") {
  CHECK(predicted_gap(5, 0, GapMode::Strong) == 0);
  CHECK(predicted_gap(5, 0, GapMode::Mixed) == 0);
  for (int r = 0; r <= 6; ++r)
    CHECK(predicted_gap(2, r, GapMode::Strong) ==
          3 * (1 - frac_pow(Fraction(3, 4), static_cast<unsigned>(r))));
  CHECK(to_double(predicted_gap(3, 8, GapMode::Strong)) == doctest::Approx(2.62556).epsilon(1e-5));
  CHECK(predicted_gap(3, 8, GapMode::Mixed) ==
        3 * (1 - frac_pow(Fraction(26, 27), static_cast<unsigned>(8))));
}

TEST_CASE("measured GF cost equals the strong formula on a small grid") {
  for (auto [k, r] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {4, 1}}) {
    const StabilityTree st = build_kr_tree({k, r, KrAnnotation::AllStrong});
    const std::uint64_t m = atomic_length(st);
    const std::vector<Key> x = generate(st, m);
    GfOptions options;
    options.record_per_step = false;
    const GfResult res = gf_serve(st.tree, x, options);
    CHECK(res.report.restructures == 0);
    CHECK(Fraction(res.report.total, m) == predicted_gf_cost_strong(k, r));
  }
}
