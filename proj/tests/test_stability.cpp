#include "gf/criteria.hpp"
#include "gf/engine.hpp"
#include "gf/patterns.hpp"
#include "gf/stability.hpp"

#include <doctest.h>

#include <random>

using namespace gf;

TEST_CASE("validate_stability classifies the reference trees") {
  const auto a = validate_stability(strong3_tree());
  CHECK(a.ok);
  CHECK(a.cls == StabilityClass::Strong);

  const auto b = validate_stability(weak5_tree());
  CHECK(b.ok);
  CHECK(b.cls == StabilityClass::Weak);

  const auto f1 = validate_stability(strong7_tree());
  CHECK(f1.ok);
  CHECK(f1.cls == StabilityClass::Strong);

  // A weak node whose favored child is a leaf is invalid.
  const StabilityTree bad = parse_stability("2!WR(1(-,-),3(-,-))");
  CHECK_FALSE(validate_stability(bad).ok);

  // The favored child must carry the matching strong side.
  const StabilityTree wrong_side = parse_stability("2!WR(1(-,-),4!S_L(3(-,-),5(-,-)))");
  CHECK_FALSE(validate_stability(wrong_side).ok);

  // Unary nodes break fullness.
  StabilityTree unary;
  unary.tree = parse_tree("1(-,2(-,-))");
  unary.kind.assign(3, StabilityKind::None);
  unary.kind[1] = StabilityKind::StrongL;
  unary.cursor0.assign(3, 0);
  CHECK_FALSE(validate_stability(unary).ok);
}

TEST_CASE("generate reproduces the reference sequences") {
  CHECK(generate(strong3_tree(), 4) == std::vector<Key>{1, 3, 1, 3});
  CHECK(generate(weak5_tree(), 6) == std::vector<Key>{5, 3, 1, 5, 3, 1});
  // The 12141314 leaf-label pattern; leaves 1,2,3,4 sit at keys
  // 1,3,5,7 of the 7-key universe.
  CHECK(generate(strong7_tree(), 8) == std::vector<Key>{1, 3, 1, 7, 1, 5, 1, 7});
}

TEST_CASE("atomic lengths") {
  CHECK(atomic_length(strong3_tree()) == 2);
  CHECK(atomic_length(strong7_tree()) == 8);
  CHECK(atomic_length(weak5_tree()) == 3);
  for (int k = 2; k <= 3; ++k)
    for (int r = 1; r <= 3; ++r)
      CHECK(atomic_length(build_kr_tree({k, r, KrAnnotation::AllStrong})) ==
            (1ull << static_cast<unsigned>(k * r)));
}

TEST_CASE("leaf_profiles match the reference frequencies") {
  const auto b = leaf_profiles(weak5_tree());
  REQUIRE(b.size() == 3);
  for (const LeafProfile& p : b) CHECK(p.frequency == Fraction(1, 3));

  const auto f1 = leaf_profiles(strong7_tree());
  REQUIRE(f1.size() == 4);
  CHECK(f1[0].leaf == 1);
  CHECK(f1[0].frequency == Fraction(1, 2));
  CHECK(f1[1].leaf == 3);
  CHECK(f1[1].frequency == Fraction(1, 8));
  CHECK(f1[2].leaf == 5);
  CHECK(f1[2].frequency == Fraction(1, 8));
  CHECK(f1[3].leaf == 7);
  CHECK(f1[3].frequency == Fraction(1, 4));
}

TEST_CASE("strongly-stable frequencies are exactly 2^-depth") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const StabilityTree st = random_stability_tree(2 + static_cast<int>(rng() % 14), 0.0, rng);
    const auto depths = all_depths(st.tree);
    for (const LeafProfile& p : leaf_profiles(st)) {
      CHECK(p.b == 0);
      CHECK(p.frequency == Fraction(1, int_pow(2, static_cast<unsigned>(
                                            depths[static_cast<size_t>(p.leaf)]))));
    }
  }
}

TEST_CASE("check_stability accepts the references and rejects broken patterns") {
  CHECK(check_stability(std::vector<Key>{1, 3, 1, 3}, strong3_tree()));
  CHECK_FALSE(check_stability(std::vector<Key>{1, 3, 3}, strong3_tree()));
  // Repeated 421-pattern (leaf labels), i.e. keys 7,3,1: node 4 is never
  // stable because its subtree is always entered on the left.
  std::vector<Key> pattern;
  for (int i = 0; i < 3; ++i) {
    pattern.push_back(7);
    pattern.push_back(3);
    pattern.push_back(1);
  }
  CHECK_FALSE(check_stability(pattern, strong7_tree()));
  // Queries must be leaves.
  CHECK_FALSE(check_stability(std::vector<Key>{2}, strong3_tree()));
}

TEST_CASE("generated sequences verify and stay periodic on the random corpus") {
  std::mt19937_64 rng(37);
  for (const StabilityTree& st : stable_corpus(12, 12, 1u << 12, rng)) {
    const std::uint64_t period = atomic_length(st);
    const std::vector<Key> x = generate(st, 2 * period);
    CHECK(check_stability(x, st));
    // Each leaf count over one period is exactly frequency * period.
    const auto counts = atomic_counts(st);
    Fraction sum = 0;
    for (const LeafProfile& p : leaf_profiles(st)) {
      CHECK(Fraction(counts[static_cast<size_t>(p.leaf)]) == p.frequency * Fraction(period));
      // The leaf period 2^a 3^b divides the atomic length.
      const Int leaf_period =
          int_pow(2, static_cast<unsigned>(p.a)) * int_pow(3, static_cast<unsigned>(p.b));
      CHECK(Int(period) % leaf_period == 0);
      sum += p.frequency;
    }
    CHECK(sum == 1);
    CHECK(gf_is_static(st.tree, x));
  }
}

TEST_CASE("frequency range bound for mixed-stable trees") {
  std::mt19937_64 rng(41);
  for (const StabilityTree& st : stable_corpus(10, 12, 1u << 14, rng)) {
    const auto depths = all_depths(st.tree);
    for (const LeafProfile& p : leaf_profiles(st)) {
      const Int three_d = int_pow(3, static_cast<unsigned>(depths[static_cast<size_t>(p.leaf)]));
      CHECK(p.frequency * three_d >= 1);                 // f >= 3^-d
      CHECK(p.frequency * p.frequency * three_d <= 1);   // f <= 3^-(d/2)
    }
  }
}

TEST_CASE("stability text format round-trips") {
  for (const StabilityTree& st : {strong3_tree(), weak5_tree(), strong7_tree(),
                                  build_kr_tree({2, 2, KrAnnotation::WeakTrunkRoots})}) {
    const std::string text = serialize_stability(st);
    const StabilityTree back = parse_stability(text);
    CHECK(back.tree == st.tree);
    CHECK(back.kind == st.kind);
  }
  CHECK(serialize_stability(strong3_tree()) == "2!S_L(1(-,-),3(-,-))");
  CHECK_THROWS_AS(parse_stability("2!BOGUS(1(-,-),3(-,-))"), Error);
}

TEST_CASE("initial cursors shift the sequence cyclically") {
  StabilityTree st = strong3_tree();
  st.cursor0[2] = 1;  // start with the right subtree
  CHECK(generate(st, 4) == std::vector<Key>{3, 1, 3, 1});
  CHECK(check_stability(std::vector<Key>{3, 1, 3, 1}, st));
  CHECK_FALSE(check_stability(std::vector<Key>{1, 3, 1, 3}, st));
  CHECK(gf_is_static(st.tree, generate(st, 8)));

  // A right-biased cycle started mid-pattern keeps working when the favored
  // child's cursor is aligned (one full u-cycle per v-cycle).
  StabilityTree weak = weak5_tree();
  weak.cursor0[2] = 2;  // cycle [R,R,L] from the L step
  CHECK(generate(weak, 3) == std::vector<Key>{1, 5, 3});
  CHECK(gf_is_static(weak.tree, generate(weak, 9)));
}

TEST_CASE("random_stability_tree produces valid annotated trees") {
  std::mt19937_64 rng(43);
  // single-node universe: a bare leaf, no annotations
  const StabilityTree solo = random_stability_tree(1, 0.5, rng);
  CHECK(validate_stability(solo).ok);
  CHECK(atomic_length(solo) == 1);
  CHECK(generate(solo, 3) == std::vector<Key>{1, 1, 1});
  int weak_seen = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const StabilityTree st = random_stability_tree(2 + static_cast<int>(rng() % 15), 1.0 / 3.0, rng);
    const auto v = validate_stability(st);
    CHECK(v.ok);
    for (Key k = 1; k <= st.tree.n(); ++k)
      weak_seen += st.kind[static_cast<size_t>(k)] == StabilityKind::WeakLeft ||
                   st.kind[static_cast<size_t>(k)] == StabilityKind::WeakRight;
  }
  CHECK(weak_seen > 0);
}
