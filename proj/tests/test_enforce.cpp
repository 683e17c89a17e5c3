#include "gf/criteria.hpp"
#include "gf/enforce.hpp"
#include "gf/engine.hpp"
#include "gf/experiments.hpp"

#include <doctest.h>

#include <bit>
#include <random>

using namespace gf;

TEST_CASE("enforce_prefix worked examples") {
  const EnforcePlan three = enforce_prefix(parse_tree("2(1(-,-),3(-,-))"));
  CHECK(three.layers == std::vector<std::vector<Key>>{{2}});
  CHECK(three.sequence == std::vector<Key>{2, 2, 2});

  CHECK(enforce_prefix(parse_tree("1(-,-)")).sequence.empty());

  const EnforcePlan plan11 = enforce_prefix(enforce11_tree());
  CHECK(plan11.layers == std::vector<std::vector<Key>>{{2, 4, 6, 8, 10}, {4, 6, 10}, {6}});
  const std::vector<Key> s0{2, 2, 4, 4, 6, 6, 8, 8, 10, 10, 2, 4, 6, 8, 10};
  const std::vector<Key> s1{4, 4, 6, 6, 10, 10, 4, 6, 10};
  const std::vector<Key> s2{6, 6, 6};
  std::vector<Key> want = s0;
  want.insert(want.end(), s1.begin(), s1.end());
  want.insert(want.end(), s2.begin(), s2.end());
  CHECK(plan11.sequence == want);
}

TEST_CASE("enforcement pins the target from any initial tree and suffix") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 40; ++trial) {
    const Key n = 2 + static_cast<Key>(rng() % 40);
    const Tree t0 = random_bst(n, rng);
    const Tree target = random_bst(n, rng);
    std::vector<Key> x = enforce_prefix(target).sequence;
    const size_t boundary = x.size();
    for (int i = 0; i < 20; ++i) x.push_back(1 + static_cast<Key>(rng() % n));
    GfOptions options;
    options.record_per_step = false;
    GfEngine engine(t0, x, options);
    while (engine.position() < boundary) engine.step();
    CHECK(engine.tree() == target);
    CHECK(fingerprint(engine.tree()) == fingerprint(target));
  }
}

TEST_CASE("prefix length bounds") {
  // 3 sum |R_i| with |R_i| <= n - 1 - i gives the quadratic bound, and the
  // per-layer cap |R_{h-i}| <= 2^i - 1 gives 3n(d - floor(lg n) + 2): the
  // head layers 0..h-floor(lg n)-1 cost at most n each and the remaining
  // floor(lg n)+1 layers total below 2n.
  std::mt19937_64 rng(79);
  for (int trial = 0; trial < 300; ++trial) {
    const Key n = 1 + static_cast<Key>(rng() % 128);
    const Tree target = random_bst(n, rng);
    const auto len = static_cast<std::uint64_t>(enforce_prefix(target).sequence.size());
    const auto d = static_cast<std::uint64_t>(tree_depth(target));
    const auto lg = static_cast<std::uint64_t>(std::bit_width(static_cast<std::uint64_t>(n)) - 1);
    CHECK(len <= 3 * static_cast<std::uint64_t>(n) * (d - lg + 2));
    CHECK(2 * len <= 3 * static_cast<std::uint64_t>(n) * (static_cast<std::uint64_t>(n) - 1));
  }

  // Pinned witness that the tighter 3n(d - floor(lg n) + 1) form is not
  // universal: a depth-3 tree over 8 keys needs 27 queries, above 24. Layer
  // sizes are 5, 3, 1, and 3 * 9 = 27.
  const Tree witness = parse_tree("4(1(-,3(2(-,-),-)),6(5(-,-),7(-,8(-,-))))");
  REQUIRE(tree_depth(witness) == 3);
  const EnforcePlan plan = enforce_prefix(witness);
  CHECK(plan.layers == std::vector<std::vector<Key>>{{1, 3, 4, 6, 7}, {1, 4, 6}, {4}});
  CHECK(plan.sequence.size() == 27);
  CHECK(plan.sequence.size() > 3u * 8u * (3 - 3 + 1));
  // The sequence still enforces the witness from any start.
  GfOptions options;
  options.record_per_step = false;
  std::mt19937_64 rng2(97);
  for (int trial = 0; trial < 5; ++trial) {
    GfEngine engine(random_bst(8, rng2), plan.sequence, options);
    while (!engine.done()) engine.step();
    CHECK(engine.tree() == witness);
  }
}

TEST_CASE("rev is an involution") {
  std::vector<Key> x{1, 5, 2, 2, 9};
  CHECK(rev(rev(x)) == x);
  CHECK(rev(x).size() == x.size());
  CHECK(rev(x) == std::vector<Key>{9, 2, 2, 5, 1});
}

TEST_CASE("multiplicative instance composes prefix and atomic repetitions") {
  const GapInstance inst = build_multiplicative_instance(1, 1);
  REQUIRE(inst.parts.size() == 2);
  CHECK(inst.parts[0].name == "P");
  CHECK(inst.parts[1].seq == std::vector<Key>{5, 3, 1});
  CHECK(inst.n == 5);

  // GF on the repetition part costs exactly the weak closed form.
  const RatioRow row = ratio_row(1, 200, kDefaultMaxQueries);
  CHECK(row.gf_z_avg == Fraction(8, 3));
  CHECK(row.gf_z_avg == predicted_gf_cost_weak_f(1));
  CHECK(row.boundary_matches_target);

  // Static optimum of the repetition counts is at most 3 per query.
  const FTreePieces pieces = make_f_tree_pieces(1);
  std::vector<std::uint64_t> counts(6, 0);
  for (Key q : pieces.atomic) ++counts[static_cast<size_t>(q)];
  const auto static_best = static_opt(counts, 5);
  CHECK(Fraction(static_best.cost, pieces.atomic.size()) <= 3);
  CHECK(Fraction(static_best.cost, pieces.atomic.size()) == Fraction(5, 3));
}

TEST_CASE("subsequence instance marks P and the Z block") {
  const GapInstance inst = build_subsequence_instance(2, 3);
  REQUIRE(inst.parts.size() == 3);
  CHECK(inst.parts[0].marked);
  CHECK_FALSE(inst.parts[1].marked);
  CHECK(inst.parts[2].marked);
  CHECK(inst.length() == inst.parts[0].seq.size() + inst.parts[1].seq.size() + 3 * 9);
  CHECK(inst.marked_length() == inst.parts[0].seq.size() + 3 * 9);

  const std::vector<Key> x = inst.expand();
  const std::vector<Key> marked = inst.expand_marked();
  CHECK(x.size() == inst.length());
  CHECK(marked.size() == inst.marked_length());
  // X' is a subsequence of X with strictly increasing positions.
  size_t at = 0;
  for (Key q : marked) {
    while (at < x.size() && x[at] != q) ++at;
    REQUIRE(at < x.size());
    ++at;
  }

  // The degenerate reps=0 instance is P.Q with X' = P.
  const GapInstance degenerate = build_subsequence_instance(1, 0);
  CHECK(degenerate.length() ==
        degenerate.parts[0].seq.size() + degenerate.parts[1].seq.size());
  CHECK(degenerate.expand_marked() == degenerate.parts[0].seq);
}

TEST_CASE("reversal instance reverses into P then Z repetitions") {
  const int r = 2;
  const GapInstance inst = build_reversal_instance(r, 2);
  const FTreePieces pieces = make_f_tree_pieces(r);
  const std::vector<Key> x = inst.expand();
  const std::vector<Key> reversed = rev(inst.expand());

  // rev(X) = P . Z^{reps+1} . rev(Q): check the P block and the first Z block.
  const std::vector<Key>& p = pieces.enforce_p.sequence;
  REQUIRE(reversed.size() >= p.size() + pieces.atomic.size());
  CHECK(std::equal(p.begin(), p.end(), reversed.begin()));
  CHECK(std::equal(pieces.atomic.begin(), pieces.atomic.end(), reversed.begin() + static_cast<long>(p.size())));

  // Both directions run end to end.
  GfOptions options;
  options.record_per_step = false;
  const std::uint64_t cost_fwd = gf_serve(Tree::right_spine(inst.n), x, options).report.total;
  const std::uint64_t cost_rev = gf_serve(Tree::right_spine(inst.n), reversed, options).report.total;
  CHECK(cost_fwd > 0);
  CHECK(cost_rev > cost_fwd);  // the reversal serves Z on the unpromoted tree

  // cost(GF, rev Z, T_Q) = cost(GF, Z, T_Q): static service by frequencies.
  const std::uint64_t on_q_fwd = static_total(pieces.promoted, pieces.atomic);
  const std::uint64_t on_q_rev = static_total(pieces.promoted, rev(pieces.atomic));
  CHECK(on_q_fwd == on_q_rev);
  CHECK(gf_is_static(pieces.promoted, rev(pieces.atomic)));
}

TEST_CASE("instances stay static through their Z parts") {
  const int r = 3;
  const FTreePieces pieces = make_f_tree_pieces(r);
  const GapInstance sub = build_subsequence_instance(r, 5);
  const std::vector<Key> x = sub.expand();
  GfOptions options;
  options.record_per_step = false;
  GfEngine engine(Tree::right_spine(sub.n), x, options);
  const size_t pq = sub.parts[0].seq.size() + sub.parts[1].seq.size();
  while (engine.position() < pq) engine.step();
  CHECK(engine.tree() == pieces.promoted);
  const std::uint64_t before = engine.report().restructures;
  while (!engine.done()) engine.step();
  CHECK(engine.report().restructures == before);
}

TEST_CASE("subsequence ratio limit closed form") {
  // cost(GF,Z,T_P)/cost(GF,Z,T_Q) = (6-5(2/3)^r)/(3-2(2/3)^r); 4054/2059 at r=6.
  const Fraction c = predicted_gf_cost_weak_f(6);
  const Fraction upper = c - predicted_promotion_weak_f(6);
  CHECK(c / upper == Fraction(4054, 2059));
  CHECK(to_double(c / upper) == doctest::Approx(1.9689).epsilon(1e-4));
}
