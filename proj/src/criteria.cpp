#include "gf/criteria.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace gf {

namespace {

void expect(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

std::string fstr(const Fraction& f) { return fraction_string(f) + " (" + format_double(to_double(f)) + ")"; }

std::vector<Key> repeat(std::span<const Key> block, std::uint64_t reps) {
  std::vector<Key> out;
  out.reserve(block.size() * reps);
  for (std::uint64_t i = 0; i < reps; ++i) out.insert(out.end(), block.begin(), block.end());
  return out;
}

std::uint64_t gf_total_cost(const Tree& t0, std::span<const Key> x) {
  GfOptions options;
  options.record_per_step = false;
  return gf_serve(t0, x, options).report.total;
}

}  // namespace

StabilityTree strong3_tree() { return parse_stability("2!S_L(1(-,-),3(-,-))"); }

StabilityTree weak5_tree() { return parse_stability("2!WR(1(-,-),4!S_R(3(-,-),5(-,-)))"); }

StabilityTree strong7_tree() {
  return parse_stability("2!S_L(1(-,-),6!S_L(4!S_L(3(-,-),5(-,-)),7(-,-)))");
}

Tree strong3_promoted() { return parse_tree("1(-,3(2(-,-),-))"); }

Tree enforce11_tree() {
  return parse_tree("6(4(2(1(-,-),3(-,-)),5(-,-)),10(8(7(-,-),9(-,-)),11(-,-)))");
}

std::vector<StabilityTree> stable_corpus(int count, int max_leaves, std::uint64_t atomic_cap,
                                         std::mt19937_64& rng) {
  std::vector<StabilityTree> out;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 100 * count) throw Error("stable_corpus: too many resamples");
    const int leaves = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_leaves - 1));
    StabilityTree st = random_stability_tree(leaves, 1.0 / 3.0, rng);
    if (atomic_length(st) > atomic_cap) continue;
    expect(static_cast<bool>(validate_stability(st)), "stable_corpus produced an invalid tree");
    out.push_back(std::move(st));
  }
  return out;
}

CheckResult criterion_small_instances_exact() {
  CheckResult res{"criterion-1 small-instances-exact-costs", false, ""};
  try {
    const StabilityTree a = strong3_tree();
    const std::vector<Key> xa = repeat(std::vector<Key>{1, 3}, 50);
    const std::uint64_t gf_a = gf_total_cost(a.tree, xa);
    expect(gf_a == 200, "gf on the 3-key instance expected 200, got " + std::to_string(gf_a));
    const std::uint64_t promoted_a = static_total(strong3_promoted(), xa);
    expect(promoted_a == 150, "promoted static expected 150, got " + std::to_string(promoted_a));

    const StabilityTree b = weak5_tree();
    const std::vector<Key> xb = repeat(std::vector<Key>{5, 3, 1}, 50);
    const std::uint64_t gf_b = gf_total_cost(b.tree, xb);
    expect(Fraction(gf_b, xb.size()) == Fraction(8, 3),
           "gf average on the 5-key instance expected 8/3, got " + std::to_string(gf_b) + "/150");

    std::vector<std::uint64_t> counts(6, 0);
    counts[1] = counts[3] = counts[5] = 50;
    const StaticDpResult opt = static_opt(counts, 5);
    expect(Fraction(opt.cost, xb.size()) <= Fraction(5, 3),
           "static_opt per query above 5/3: " + std::to_string(opt.cost) + "/150");
    res.pass = true;
    res.detail = "gf(strong3)=200, promoted=150, gf(weak5)=400/150=8/3, static_opt=" +
                 std::to_string(opt.cost) + "/150";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

CheckResult criterion_fixed_structure(std::uint64_t seed) {
  CheckResult res{"criterion-2 stable-sequences-static", false, ""};
  try {
    std::mt19937_64 rng(seed);
    std::vector<StabilityTree> instances = stable_corpus(50, 32, 1u << 16, rng);
    instances.push_back(strong7_tree());
    instances.push_back(strong3_tree());
    instances.push_back(weak5_tree());
    instances.push_back(build_kr_tree({3, 2, KrAnnotation::AllStrong}));
    instances.push_back(build_kr_tree({2, 3, KrAnnotation::WeakTrunkRoots}));
    std::uint64_t steps = 0;
    for (const StabilityTree& st : instances) {
      const std::uint64_t period = atomic_length(st);
      const std::vector<Key> x = generate(st, 2 * period);
      steps += x.size();
      expect(gf_is_static(st.tree, x),
             "gf restructured a stable instance (n=" + std::to_string(st.tree.n()) + ")");
    }
    res.pass = true;
    res.detail = std::to_string(instances.size()) + " instances, " + std::to_string(steps) +
                 " total queries, zero restructures";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

namespace {
const std::vector<std::pair<int, int>>& criterion_grid() {
  static const std::vector<std::pair<int, int>> grid{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2},
                                                     {3, 3}, {4, 1}, {4, 2}, {4, 3}, {3, 5},
                                                     {2, 8}};
  return grid;
}
}  // namespace

CheckResult criterion_gf_cost_formula() {
  CheckResult res{"criterion-3 gf-cost-formula", false, ""};
  try {
    for (auto [k, r] : criterion_grid()) {
      const StabilityTree st = build_kr_tree({k, r, KrAnnotation::AllStrong});
      const std::uint64_t m = atomic_length(st);
      const std::vector<Key> x = generate(st, m);
      const std::uint64_t total = gf_total_cost(st.tree, x);
      const Fraction predicted = predicted_gf_cost_strong(k, r);
      expect(Fraction(total, m) == predicted,
             "(k=" + std::to_string(k) + ",r=" + std::to_string(r) + ") measured " +
                 std::to_string(total) + "/" + std::to_string(m) + " != " + fraction_string(predicted));
    }
    res.pass = true;
    res.detail = "exact on all 11 grid points, largest m=65536";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

CheckResult criterion_promotion_formula() {
  CheckResult res{"criterion-4 promotion-formula", false, ""};
  try {
    for (auto [k, r] : criterion_grid()) {
      const StabilityTree st = build_kr_tree({k, r, KrAnnotation::AllStrong});
      const PromoteResult promoted = promote_kr(st);
      const Fraction base = predicted_gap(k, r, GapMode::Strong);  // (k+1)(1-alpha^r)
      const Fraction delta = promoted.report.average - base;
      const Fraction alpha_r =
          frac_pow(1 - Fraction(1, int_pow(2, static_cast<unsigned>(k))), static_cast<unsigned>(r));
      if (k == 2)
        expect(delta == 0 && promoted.report.average == predicted_promotion_strong(k, r),
               "k=2 promotion must equal the closed form with delta=0");
      expect(delta >= 0 && delta < alpha_r,
             "(k=" + std::to_string(k) + ",r=" + std::to_string(r) + ") delta " + fraction_string(delta) +
                 " outside [0, alpha^r)");
    }
    res.pass = true;
    res.detail = "average = (k+1)(1-alpha^r)+delta with delta=0 at k=2, 0<=delta<alpha^r at k>=3";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

CheckResult criterion_f_tree_pair() {
  CheckResult res{"criterion-5 f-tree-weakly-stable-pair", false, ""};
  try {
    for (int r = 1; r <= 6; ++r) {
      const StabilityTree st = build_kr_tree({2, r, KrAnnotation::WeakTrunkRoots});
      const std::uint64_t period = atomic_length(st);
      const std::uint64_t reps = r == 6 ? 1000 : 100;
      const std::vector<Key> x = generate(st, period * reps);
      const std::uint64_t total = gf_total_cost(st.tree, x);
      expect(Fraction(total, period * reps) == predicted_gf_cost_weak_f(r),
             "r=" + std::to_string(r) + " measured gf average is off the closed form");
      expect(promote_kr(st).report.average == predicted_promotion_weak_f(r),
             "r=" + std::to_string(r) + " measured promotion is off the closed form");
    }
    const Fraction c40 = predicted_gf_cost_weak_f(40);
    const Fraction p40 = predicted_promotion_weak_f(40);
    const Fraction ratio = c40 / (c40 - p40);
    expect(ratio > Fraction(19999, 10000), "r=40 ratio certificate failed");
    expect(c40 - p40 < 3, "r=40 difference certificate failed");
    res.pass = true;
    res.detail = "r=1..6 exact; r=40 ratio " + format_double(to_double(ratio)) + " > 1.9999, difference " +
                 fstr(c40 - p40) + " < 3";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

CheckResult criterion_multiplicative_ratio(std::uint64_t max_queries) {
  CheckResult res{"criterion-6 multiplicative-convergence", false, ""};
  try {
    const RatioRow row6 = ratio_row(6, 10000, max_queries);
    const RatioRow row8 = ratio_row(8, 10000, max_queries);
    expect(row6.boundary_matches_target && row8.boundary_matches_target,
           "enforcement prefix failed to pin the F-tree");
    expect(row6.ratio_measured >= 1.85,
           "r=6 ratio " + format_double(row6.ratio_measured) + " below 1.85");
    expect(row8.ratio_measured >= 1.90,
           "r=8 ratio " + format_double(row8.ratio_measured) + " below 1.90");
    res.pass = true;
    res.detail = "r=6 ratio " + format_double(row6.ratio_measured) + " (limit " +
                 format_double(to_double(row6.ratio_limit)) + "), r=8 ratio " +
                 format_double(row8.ratio_measured) + " (limit " +
                 format_double(to_double(row8.ratio_limit)) + "), prefix included";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

CheckResult criterion_additive_gap(std::uint64_t max_queries) {
  CheckResult res{"criterion-7 additive-gap", false, ""};
  try {
    const GapRow main_row = gap_row(3, 8, max_queries);
    expect(main_row.measured, "k=3,r=8 row must be measured (m=2^24)");
    expect(main_row.n == 19681, "expected n=19681");
    expect(main_row.gap_measured == main_row.predicted_gap_value,
           "measured gap " + fraction_string(main_row.gap_measured) + " != formula " +
               fraction_string(main_row.predicted_gap_value));
    std::ostringstream rows;
    for (int k : {2, 3, 4}) {
      const GapRow row = gap_row(k, 1 << k, max_queries);
      expect(k == 4 ? !row.measured : row.measured, "measured-row rule r=2^k mismatch at k=" + std::to_string(k));
      rows << " k=" << k << " r=" << (1 << k) << " gap/lglgn=" << format_double(row.gap_over_lglgn);
    }
    res.pass = true;
    res.detail = "k=3,r=8 gap " + fstr(main_row.gap_measured) + " exact;" + rows.str();
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

CheckResult criterion_wilber_sandwich(std::uint64_t seed) {
  CheckResult res{"criterion-8 wilber-sandwich", false, ""};
  try {
    struct Instance {
      StabilityTree st;
      std::vector<Key> x;
    };
    std::vector<Instance> instances;
    instances.push_back({strong3_tree(), repeat(std::vector<Key>{1, 3}, 50)});
    instances.push_back({weak5_tree(), repeat(std::vector<Key>{5, 3, 1}, 50)});
    for (auto [k, r] : criterion_grid()) {
      StabilityTree st = build_kr_tree({k, r, KrAnnotation::AllStrong});
      std::vector<Key> x = generate(st, atomic_length(st));
      instances.push_back({std::move(st), std::move(x)});
    }
    std::mt19937_64 rng(seed);
    for (StabilityTree& st : stable_corpus(20, 16, 1u << 14, rng)) {
      std::vector<Key> x = generate(st, atomic_length(st));
      instances.push_back({std::move(st), std::move(x)});
    }
    for (const Instance& inst : instances) {
      const auto cls = validate_stability(inst.st).cls;
      const std::uint64_t gf = gf_total_cost(inst.st.tree, inst.x);
      const Fraction wilber = wilber1(inst.x, inst.st.tree).bound;
      expect(wilber <= Fraction(gf), "wilber bound exceeds the GF cost");
      const Fraction limit = cls == StabilityClass::Strong ? Fraction(2) : Fraction(5, 2);
      expect(Fraction(gf) <= limit * wilber, "GF/wilber ratio above the competitiveness limit");
      // wilber per query >= (alpha/2) c(GF) + 1/2 - (n-1)/(4m)
      const Fraction alpha = cls == StabilityClass::Strong ? Fraction(1) : Fraction(4, 5);
      const std::uint64_t m = inst.x.size();
      const Fraction lower = alpha / 2 * Fraction(gf, m) + Fraction(1, 2) -
                             Fraction(inst.st.tree.n() - 1) / Fraction(4 * m);
      expect(wilber / Fraction(m) >= lower, "wilber bound below the competitiveness inequality");
    }
    res.pass = true;
    res.detail = std::to_string(instances.size()) +
                 " instances: wilber <= GF, GF/wilber <= 2 (strong) and <= 5/2 (mixed)";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

CheckResult criterion_opt_sandwich() {
  CheckResult res{"criterion-9 exact-opt-sandwich", false, ""};
  try {
    std::uint64_t checked = 0;
    for (Key n = 1; n <= 4; ++n) {
      OptOracle oracle(n);
      const ShapeCatalog& catalog = oracle.catalog();
      for (const Tree& t0 : catalog.shapes) {
        std::vector<Key> leaves;
        for (Key k = 1; k <= n; ++k)
          if (t0.left(k) == 0 && t0.right(k) == 0) leaves.push_back(k);
        for (size_t len = 1; len <= 6; ++len) {
          std::vector<size_t> odo(len, 0);
          while (true) {
            std::vector<Key> x(len);
            for (size_t i = 0; i < len; ++i) x[i] = leaves[odo[i]];
            const std::uint64_t opt = oracle.solve(t0, x).cost;
            const std::uint64_t gf = gf_total_cost(t0, x);
            const Fraction wilber = wilber1(x, t0).bound;
            expect(wilber <= Fraction(opt), "wilber above OPT");
            expect(opt <= gf, "OPT above GF");
            for (size_t drop = 0; drop < len; ++drop) {
              std::vector<Key> sub;
              for (size_t i = 0; i < len; ++i)
                if (i != drop) sub.push_back(x[i]);
              expect(oracle.solve(t0, sub).cost <= opt, "OPT not monotone under removing a query");
            }
            const std::uint64_t opt_rev = oracle.solve(t0, rev(x)).cost;
            const std::uint64_t diff = opt > opt_rev ? opt - opt_rev : opt_rev - opt;
            expect(diff <= static_cast<std::uint64_t>(n), "reversal changed OPT by more than n");
            ++checked;
            size_t pos = 0;
            while (pos < len && ++odo[pos] == leaves.size()) odo[pos++] = 0;
            if (pos == len) break;
          }
        }
      }
    }
    res.pass = true;
    res.detail = std::to_string(checked) + " exhaustive instances over n<=4, m<=6 leaf queries";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

CheckResult criterion_enforcement(std::uint64_t seed) {
  CheckResult res{"criterion-10 enforcement", false, ""};
  try {
    const EnforcePlan plan11 = enforce_prefix(enforce11_tree());
    const std::vector<std::vector<Key>> want_layers{{2, 4, 6, 8, 10}, {4, 6, 10}, {6}};
    expect(plan11.layers == want_layers, "11-key example layers mismatch");
    const std::vector<Key> want_sequence{2, 2, 4, 4, 6, 6, 8, 8, 10, 10, 2, 4, 6, 8, 10,
                                         4, 4, 6, 6, 10, 10, 4, 6, 10, 6, 6, 6};
    expect(plan11.sequence == want_sequence, "11-key example sequence mismatch");

    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 200; ++trial) {
      const Key n = 2 + static_cast<Key>(rng() % 63);
      const Tree t0 = random_bst(n, rng);
      const Tree target = random_bst(n, rng);
      std::vector<Key> x = enforce_prefix(target).sequence;
      const size_t boundary = x.size();
      for (int i = 0; i < 20; ++i) x.push_back(1 + static_cast<Key>(rng() % n));
      GfOptions options;
      options.record_per_step = false;
      GfEngine engine(t0, x, options);
      while (engine.position() < boundary) engine.step();
      expect(engine.tree() == target, "boundary tree differs from the target (n=" + std::to_string(n) + ")");
    }
    for (int trial = 0; trial < 500; ++trial) {
      const Key n = 1 + static_cast<Key>(rng() % 256);
      const Tree target = random_bst(n, rng);
      const auto len = static_cast<std::uint64_t>(enforce_prefix(target).sequence.size());
      const auto d = static_cast<std::uint64_t>(tree_depth(target));
      const auto lg = static_cast<std::uint64_t>(std::bit_width(static_cast<std::uint64_t>(n)) - 1);
      // The stated log-form constant is not universal: near-balanced trees
      // with d(T) = floor(lg n) can exceed it (see the pinned witness in the
      // enforce unit tests); the provable form adds one more 3n term.
      expect(len <= 3 * static_cast<std::uint64_t>(n) * (d - lg + 1),
             "length above 3n(d - floor(lg n) + 1): n=" + std::to_string(n) + " d=" +
                 std::to_string(d) + " |S|=" + std::to_string(len) +
                 (n <= 16 ? " tree=" + serialize(target) : ""));
      expect(2 * len <= 3 * static_cast<std::uint64_t>(n) * (static_cast<std::uint64_t>(n) - 1),
             "length above (3/2) n (n-1)");
    }
    res.pass = true;
    res.detail = "11-key example byte-exact, 200/200 boundary matches (n<=64), 500/500 length bounds (n<=256)";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

CheckResult criterion_subsequence_reversal(std::uint64_t max_queries) {
  CheckResult res{"criterion-11 subsequence-reversal-ratios", false, ""};
  try {
    const int r = 6;
    const std::uint64_t reps = 10000;
    const FTreePieces pieces = make_f_tree_pieces(r);

    const GapInstance sub = build_subsequence_instance(r, reps);
    if (sub.length() > max_queries) throw Error("subsequence instance exceeds the query budget");
    const std::vector<Key> x = sub.expand();
    const std::vector<Key> x_marked = sub.expand_marked();
    const Tree t0 = Tree::right_spine(sub.n);

    // GF stays on T_Q through the Z part of X and on T_P through X'.
    GfOptions options;
    options.record_per_step = false;
    const size_t pq_len = sub.parts[0].seq.size() + sub.parts[1].seq.size();
    GfEngine engine(t0, x, options);
    while (engine.position() < pq_len) engine.step();
    expect(engine.tree() == pieces.promoted, "tree after P.Q is not T_Q");
    const std::uint64_t restructures_before = engine.report().restructures;
    while (!engine.done()) engine.step();
    expect(engine.report().restructures == restructures_before, "GF restructured during the Z part of X");
    const std::uint64_t cost_x = engine.report().total;

    GfEngine engine_marked(t0, x_marked, options);
    while (engine_marked.position() < sub.parts[0].seq.size()) engine_marked.step();
    expect(engine_marked.tree() == pieces.stable.tree, "tree after P is not T_P");
    const std::uint64_t marked_restructures = engine_marked.report().restructures;
    while (!engine_marked.done()) engine_marked.step();
    expect(engine_marked.report().restructures == marked_restructures,
           "GF restructured during the Z part of X'");
    const std::uint64_t cost_marked = engine_marked.report().total;
    const double sub_ratio = static_cast<double>(cost_marked) / static_cast<double>(cost_x);
    expect(sub_ratio >= 1.8, "subsequence ratio " + format_double(sub_ratio) + " below 1.8");

    const GapInstance rv = build_reversal_instance(r, reps);
    const std::vector<Key> y = rv.expand();
    const std::vector<Key> y_rev = rev(rv.expand());
    const std::uint64_t cost_y = gf_total_cost(Tree::right_spine(rv.n), y);
    const std::uint64_t cost_y_rev = gf_total_cost(Tree::right_spine(rv.n), y_rev);
    const double rev_ratio = static_cast<double>(cost_y_rev) / static_cast<double>(cost_y);
    expect(rev_ratio >= 1.8, "reversal ratio " + format_double(rev_ratio) + " below 1.8");

    const std::vector<Key> rev_z2 = repeat(rev(pieces.atomic), 2);
    expect(gf_is_static(pieces.promoted, rev_z2), "T_Q is not static under rev(Z)");

    res.pass = true;
    res.detail = "cost(GF,X')/cost(GF,X) = " + format_double(sub_ratio) +
                 ", cost(GF,rev X)/cost(GF,X) = " + format_double(rev_ratio) +
                 ", T_Q static under rev(Z)";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

CheckResult criterion_recurrence_solver(std::uint64_t seed) {
  CheckResult res{"criterion-12 recurrence-solver", false, ""};
  try {
    std::mt19937_64 rng(seed);
    auto random_fraction = [&rng]() {
      const std::int64_t num = static_cast<std::int64_t>(rng() % 41) - 20;
      const std::int64_t den = 1 + static_cast<std::int64_t>(rng() % 20);
      return Fraction(num, den);
    };
    for (int trial = 0; trial < 1000; ++trial) {
      RecurrenceParams p;
      do {
        p.alpha = random_fraction();
      } while (p.alpha == 1 || p.alpha == Fraction(1, 2));
      p.b0 = random_fraction();
      p.beta = random_fraction();
      p.gamma = random_fraction();
      const int r = static_cast<int>(rng() % 31);
      const Fraction closed = closed_form(p, r);
      const Fraction iterated = iterate_recurrence(p, r);
      expect(closed == iterated, "closed form disagrees with iteration at trial " + std::to_string(trial));
    }
    res.pass = true;
    res.detail = "1000 random rational parameter tuples, r <= 30, exact equality";
  } catch (const std::exception& e) {
    res.detail = e.what();
  }
  return res;
}

std::vector<CheckResult> all_criteria(std::uint64_t max_queries, std::uint64_t seed) {
  return {criterion_small_instances_exact(),
          criterion_fixed_structure(seed),
          criterion_gf_cost_formula(),
          criterion_promotion_formula(),
          criterion_f_tree_pair(),
          criterion_multiplicative_ratio(max_queries),
          criterion_additive_gap(max_queries),
          criterion_wilber_sandwich(seed),
          criterion_opt_sandwich(),
          criterion_enforcement(seed),
          criterion_subsequence_reversal(max_queries),
          criterion_recurrence_solver(seed)};
}

namespace {

// GF steps composed from the public primitives; deliberately independent of
// the engine's incremental occurrence index.
GfResult reference_gf(const Tree& t0, std::span<const Key> x, TieBreakPolicy policy) {
  Tree t = t0;
  CostReport report;
  for (size_t step = 0; step < x.size(); ++step) {
    const Key q = x[step];
    std::vector<Key> sorted;
    std::vector<std::int64_t> depth_of;
    std::vector<std::pair<Key, int>> highs;
    Key v = t.root();
    int d = 0;
    while (v != q) {
      if (q < v) {
        highs.emplace_back(v, d);
        v = t.left(v);
      } else {
        sorted.push_back(v);
        depth_of.push_back(d);
        v = t.right(v);
      }
      ++d;
    }
    sorted.push_back(q);
    depth_of.push_back(d);
    for (auto it = highs.rbegin(); it != highs.rend(); ++it) {
      sorted.push_back(it->first);
      depth_of.push_back(it->second);
    }
    const auto taus = tau_priorities(sorted, x.subspan(step + 1));
    std::vector<TreapPriority> priorities;
    for (size_t i = 0; i < sorted.size(); ++i)
      priorities.push_back(
          {taus[i], policy == TieBreakPolicy::SmallerDepth ? depth_of[i] : std::int64_t{sorted[i]}});
    const LocalShape shape = build_treap(sorted, priorities);
    Tree next = rebuild_region(t, sorted, shape);
    report.total += sorted.size();
    report.per_step.push_back(static_cast<std::uint32_t>(sorted.size()));
    if (!(next == t)) ++report.restructures;
    t = std::move(next);
  }
  return {report, {}, t};
}

struct Verifier {
  std::vector<CheckResult> results;

  template <class Fn>
  void check(const std::string& name, Fn&& fn) {
    CheckResult r{name, false, ""};
    try {
      r.detail = fn();
      r.pass = true;
    } catch (const std::exception& e) {
      r.detail = e.what();
    }
    results.push_back(std::move(r));
  }
};

}  // namespace

std::vector<CheckResult> run_verify(VerifyLevel level, std::uint64_t max_queries, std::uint64_t seed) {
  const bool full = level == VerifyLevel::Full;
  Verifier v;

  v.check("fraction-arithmetic", [] {
    expect(frac(2, 4) == frac(1, 2), "normalization");
    expect(Fraction(1, 3) + Fraction(1, 6) == Fraction(1, 2), "addition");
    expect(Fraction(2, 3) * Fraction(3, 4) == Fraction(1, 2), "multiplication");
    expect(frac_pow(Fraction(2, 3), 3) == Fraction(8, 27), "power");
    expect(denominator(frac(3, -6)) == 2 && frac(3, -6) == frac(-1, 2), "sign normalization");
    return std::string("exact ops and canonical form hold");
  });

  v.check("tree-roundtrip-and-validate", [seed] {
    std::mt19937_64 rng(seed + 1);
    for (int i = 0; i < 25; ++i) {
      const Key n = 1 + static_cast<Key>(rng() % 64);
      const Tree t = random_bst(n, rng);
      expect(static_cast<bool>(validate_tree(t)), "random tree invalid");
      expect(parse_tree(serialize(t)) == t, "serialize/parse round trip");
      expect(static_cast<int>(all_depths(t)[static_cast<size_t>(t.root())]) == 0, "root depth");
    }
    Tree bad(2);
    bad.set_root(1);
    bad.set_left(1, 2);  // order violation
    expect(!validate_tree(bad), "order violation not caught");
    return std::string("25 random trees round-trip; violations detected");
  });

  v.check("rebuild-region-examples", [] {
    const Tree t = parse_tree("2(1(-,-),3(-,-))");
    LocalShape identity{{2}, {-1}, {-1}, 0};
    expect(rebuild_region(t, std::vector<Key>{2}, identity) == t, "identity rebuild");
    LocalShape rot{{1, 2}, {-1, -1}, {1, -1}, 0};
    expect(serialize(rebuild_region(t, std::vector<Key>{1, 2}, rot)) == "1(-,2(-,3(-,-)))",
           "two-key rebuild");
    const Tree kr = build_kr_tree({2, 1, KrAnnotation::AllStrong}).tree;
    LocalShape mid{{2, 3, 4}, {-1, 0, -1}, {-1, 2, -1}, 1};
    expect(serialize(rebuild_region(kr, std::vector<Key>{2, 4, 3}, mid)) ==
               "3(2(1(-,-),-),4(-,5(-,-)))",
           "path region rebuild");
    return std::string("identity, two-key and path-region rebuilds match");
  });

  v.check("engine-reference-agreement", [seed, full] {
    std::mt19937_64 rng(seed + 2);
    const int trials = full ? 200 : 60;
    for (int trial = 0; trial < trials; ++trial) {
      const Key n = 1 + static_cast<Key>(rng() % 16);
      const Tree t0 = random_bst(n, rng);
      const size_t m = 1 + rng() % 30;
      std::vector<Key> x(m);
      for (auto& q : x) q = 1 + static_cast<Key>(rng() % n);
      for (TieBreakPolicy policy : {TieBreakPolicy::SmallerDepth, TieBreakPolicy::SmallerValue}) {
        GfOptions options;
        options.policy = policy;
        const GfResult fast = gf_serve(t0, x, options);
        const GfResult slow = reference_gf(t0, x, policy);
        expect(fast.report.total == slow.report.total, "totals differ from the reference");
        expect(fast.report.per_step == slow.report.per_step, "per-step costs differ");
        expect(fast.report.restructures == slow.report.restructures, "restructure counts differ");
        expect(fast.tree == slow.tree, "final trees differ");
      }
    }
    return std::to_string(trials) + " random instances match the primitive-composed reference";
  });

  v.check("engine-step-semantics", [] {
    const GfResult r = gf_serve(parse_tree("2(1(-,-),3(-,-))"), std::vector<Key>{1, 1});
    expect(r.report.per_step == std::vector<std::uint32_t>{2, 1}, "[1,1] per-step costs");
    expect(serialize(r.tree) == "1(-,2(-,3(-,-)))", "promoted 1 to the root");
    const auto taus = tau_priorities(std::vector<Key>{1, 2}, std::vector<Key>{3});
    expect(taus[0] == kTauNever && taus[1] == 1, "tau example");
    const auto taus2 = tau_priorities(std::vector<Key>{1, 2, 4}, std::vector<Key>{5, 3});
    expect(taus2[0] == kTauNever && taus2[1] == 2 && taus2[2] == 1, "tau interval example");
    return std::string("path costs, promotion and tau intervals match the hand traces");
  });

  v.check("stable-generation-examples", [] {
    expect(generate(strong3_tree(), 4) == std::vector<Key>({1, 3, 1, 3}), "3-key sequence");
    expect(generate(weak5_tree(), 6) == std::vector<Key>({5, 3, 1, 5, 3, 1}), "5-key sequence");
    expect(generate(strong7_tree(), 8) == std::vector<Key>({1, 3, 1, 7, 1, 5, 1, 7}),
           "7-key pattern (leaf labels 12141314)");
    expect(atomic_length(strong3_tree()) == 2 && atomic_length(strong7_tree()) == 8, "atomic lengths");
    expect(check_stability(std::vector<Key>{1, 3, 1, 3}, strong3_tree()), "alternating pair accepted");
    expect(!check_stability(std::vector<Key>{1, 3, 3}, strong3_tree()), "broken alternation rejected");
    expect(!check_stability(repeat(std::vector<Key>{7, 3, 1}, 3), strong7_tree()),
           "unstable 421-pattern rejected");
    return std::string("reference sequences, atomic lengths and pattern checks agree");
  });

  v.check("stable-corpus-invariants", [seed, full] {
    std::mt19937_64 rng(seed + 3);
    const int count = full ? 40 : 15;
    auto corpus = stable_corpus(count, full ? 32 : 16, full ? 1u << 16 : 1u << 12, rng);
    for (const StabilityTree& st : corpus) {
      const auto profiles = leaf_profiles(st);
      Fraction sum = 0;
      const std::uint64_t period = atomic_length(st);
      const auto counts = atomic_counts(st);
      const auto depths = all_depths(st.tree);
      for (const LeafProfile& p : profiles) {
        sum += p.frequency;
        expect(Fraction(counts[static_cast<size_t>(p.leaf)]) == p.frequency * Fraction(period),
               "occurrence count != frequency * atomic length");
        const int d = depths[static_cast<size_t>(p.leaf)];
        const Int three_d = int_pow(3, static_cast<unsigned>(d));
        expect(p.frequency * three_d >= 1, "frequency below 3^-d");
        expect(p.frequency * p.frequency * three_d <= 1, "frequency above 3^-(d/2)");
      }
      expect(sum == 1, "frequencies do not sum to 1");
      const std::vector<Key> x = generate(st, 2 * period);
      expect(check_stability(x, st), "generated sequence fails its own pattern check");
      expect(gf_is_static(st.tree, x), "GF restructured a stable instance");
    }
    return std::to_string(count) + " random stability trees: frequencies, periods, static service";
  });

  v.check("strong-cost-identity", [seed] {
    std::mt19937_64 rng(seed + 4);
    for (int trial = 0; trial < 10; ++trial) {
      StabilityTree st = random_stability_tree(2 + static_cast<int>(rng() % 12), 0.0, rng);
      const std::uint64_t period = atomic_length(st);
      if (period > (1u << 14)) continue;
      const std::uint64_t total = gf_total_cost(st.tree, generate(st, period));
      Fraction expected = 0;
      const auto depths = all_depths(st.tree);
      for (const LeafProfile& p : leaf_profiles(st))
        expected += Fraction(depths[static_cast<size_t>(p.leaf)] + 1) * p.frequency;
      expect(Fraction(total, period) == expected, "strongly-stable cost formula");
    }
    return std::string("measured cost equals sum (d+1)/2^d on strong instances");
  });

  v.check("treap-heap-property", [seed] {
    std::mt19937_64 rng(seed + 5);
    for (int trial = 0; trial < 50; ++trial) {
      const int k = 1 + static_cast<int>(rng() % 12);
      std::vector<Key> keys;
      for (int i = 0; i < k; ++i) keys.push_back(static_cast<Key>(10 * (i + 1)));
      std::vector<TreapPriority> prio;
      for (int i = 0; i < k; ++i) prio.push_back({rng() % 6, static_cast<std::int64_t>(i)});
      const LocalShape s = build_treap(keys, prio);
      expect(static_cast<bool>(validate_shape(s)), "treap is not a BST over its keys");
      for (int i = 0; i < k; ++i)
        for (std::int32_t c : {s.left[static_cast<size_t>(i)], s.right[static_cast<size_t>(i)]})
          if (c >= 0)
            expect(prio[static_cast<size_t>(i)] < prio[static_cast<size_t>(c)],
                   "min-heap violation in the treap");
    }
    return std::string("50 random treaps satisfy BST order and the min-heap rule");
  });

  v.check("closed-form-vs-iteration", [seed] {
    const CheckResult r = criterion_recurrence_solver(seed);
    expect(r.pass, r.detail);
    expect(closed_form({Fraction(1), Fraction(2, 3), Fraction(2), Fraction(0)}, 1) == Fraction(8, 3),
           "one unrolled step");
    expect(closed_form({Fraction(5), Fraction(3), Fraction(7), Fraction(9)}, 0) == 5, "r=0 is b0");
    bool threw = false;
    try {
      closed_form({Fraction(0), Fraction(1, 2), Fraction(0), Fraction(1)}, 2);
    } catch (const Error&) {
      threw = true;
    }
    expect(threw, "alpha=1/2 with gamma!=0 must be rejected");
    return std::string("1000 tuples exact; domain guard active");
  });

  v.check("kr-structure", [full] {
    for (int k = 2; k <= (full ? 5 : 4); ++k)
      for (int r = 0; r <= (full ? 4 : 3); ++r) {
        const StabilityTree st = build_kr_tree({k, r, KrAnnotation::AllStrong});
        expect(Int(st.tree.n()) == kr_tree_size(k, r), "size formula");
        const Int closed = (Int(2 * k) * int_pow(k, static_cast<unsigned>(r)) - Int(k + 1)) / Int(k - 1);
        expect(Int(st.tree.n()) == closed, "closed-form size");
        expect(static_cast<bool>(validate_stability(st)), "kr tree invalid");
        if (r >= 1) {
          expect(tree_depth(st.tree) == k * r, "depth k*r");
          expect(depth(st.tree, 1) == r, "leftmost depth r");
          expect(atomic_length(st) == (1ull << static_cast<unsigned>(k * r)), "atomic length 2^(kr)");
        }
      }
    const StabilityTree chain2 = build_chain_tree(2);
    expect(serialize(chain2.tree) == "2(1(-,-),4(3(-,-),5(-,-)))", "chain tree shape");
    const auto profiles = leaf_profiles(chain2);
    expect(profiles[0].frequency == Fraction(1, 2) && profiles[1].frequency == Fraction(1, 4) &&
               profiles[2].frequency == Fraction(1, 4),
           "chain tree frequencies");
    return std::string("sizes, depths, atomic lengths and the chain tree check out");
  });

  v.check("promotion-grid", [full] {
    for (int k = 2; k <= (full ? 5 : 4); ++k)
      for (int r = 0; r <= (full ? 6 : 3); ++r) {
        const StabilityTree st = build_kr_tree({k, r, KrAnnotation::AllStrong});
        const PromoteResult promoted = promote_kr(st);
        expect(static_cast<bool>(validate_tree(promoted.tree)), "promoted tree invalid");
        expect(promoted.report.average == predicted_gap(k, r, GapMode::Strong),
               "promotion average != (k+1)(1-alpha^r)");
        for (const PromotionEntry& e : promoted.report.per_leaf)
          expect(e.new_depth <= e.old_depth, "a queried leaf was demoted");
        if (k == 2)
          expect(promoted.report.average == predicted_promotion_strong(k, r), "k=2 delta must vanish");
        const Fraction delta = predicted_promotion_strong(k, r) - predicted_gap(k, r, GapMode::Strong);
        const Fraction alpha_r =
            frac_pow(1 - Fraction(1, int_pow(2, static_cast<unsigned>(k))), static_cast<unsigned>(r));
        expect(delta >= 0 && (r == 0 ? delta == 0 : delta < alpha_r), "delta outside [0, alpha^r)");
        // Any mixed-stable promotion beats the k(1-(1-3^-k)^r) floor.
        if (k == 2 && r >= 1) {
          const StabilityTree weak = build_kr_tree({2, r, KrAnnotation::WeakTrunkRoots});
          const Fraction avg = promote_kr(weak).report.average;
          expect(avg == predicted_promotion_weak_f(r), "weak F-tree promotion closed form");
          expect(avg > predicted_gap(2, r, GapMode::Mixed), "mixed promotion floor");
        }
      }
    return std::string("promotion averages exact; deltas bracketed; mixed floor holds");
  });

  v.check("gf-cost-grid", [full] {
    if (full) return criterion_gf_cost_formula().pass ? std::string("acceptance grid exact")
                                                      : throw Error("gf cost grid failed");
    for (auto [k, r] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
      const StabilityTree st = build_kr_tree({k, r, KrAnnotation::AllStrong});
      const std::uint64_t m = atomic_length(st);
      expect(Fraction(gf_total_cost(st.tree, generate(st, m)), m) == predicted_gf_cost_strong(k, r),
             "measured gf cost off the formula");
    }
    expect(gf_cost_beta(2) == Fraction(7, 4) && gf_cost_beta(5) == Fraction(2) - Fraction(1, 32),
           "beta identity 2 - 2^-k");
    return std::string("small grid exact; beta identity holds");
  });

  v.check("wilber-examples", [] {
    const Tree t = parse_tree("2(1(-,-),3(-,-))");
    const WilberResult w = wilber1(repeat(std::vector<Key>{1, 3}, 4), t);
    expect(w.alt_per_inner_node.at(2) == 7 && w.bound == Fraction(23, 2), "alternating example");
    const WilberResult w2 = wilber1(std::vector<Key>{1, 1, 1, 1}, t);
    expect(w2.alt_per_inner_node.at(2) == 0 && w2.bound == 4, "constant example");
    const StabilityTree f1 = strong7_tree();
    const std::vector<Key> x = generate(f1, atomic_length(f1));
    const WilberResult w3 = wilber1(x, f1.tree);
    const auto counts = atomic_counts(f1);
    for (const auto& [u, alt] : w3.alt_per_inner_node) {
      std::uint64_t visits = 0;
      std::vector<Key> stack{u};
      while (!stack.empty()) {
        Key k = stack.back();
        stack.pop_back();
        if (f1.tree.left(k) == 0) visits += counts[static_cast<size_t>(k)];
        for (Key c : {f1.tree.left(k), f1.tree.right(k)})
          if (c != 0) stack.push_back(c);
      }
      expect(alt == visits - 1, "strongly-stable nodes must fully alternate");
    }
    return std::string("hand examples and full-alternation property hold");
  });

  v.check("static-opt-oracles", [seed] {
    std::mt19937_64 rng(seed + 6);
    for (int trial = 0; trial < 20; ++trial) {
      const Key n = 1 + static_cast<Key>(rng() % 10);
      std::vector<std::uint64_t> counts(static_cast<size_t>(n) + 1, 0);
      for (Key k = 1; k <= n; ++k) counts[static_cast<size_t>(k)] = rng() % 8;
      const StaticDpResult fast = static_opt(counts, n);
      // Oracle 1: plain cubic DP without the root window.
      const size_t width = static_cast<size_t>(n) + 2;
      std::vector<std::uint64_t> cost(width * width, 0);
      std::vector<std::uint64_t> prefix(static_cast<size_t>(n) + 1, 0);
      for (Key k = 1; k <= n; ++k)
        prefix[static_cast<size_t>(k)] = prefix[static_cast<size_t>(k - 1)] + counts[static_cast<size_t>(k)];
      for (Key len = 1; len <= n; ++len)
        for (Key i = 1; i + len - 1 <= n; ++i) {
          const Key j = i + len - 1;
          std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
          for (Key r = i; r <= j; ++r)
            best = std::min(best, (r > i ? cost[static_cast<size_t>(i) * width + static_cast<size_t>(r - 1)] : 0) +
                                      (r < j ? cost[static_cast<size_t>(r + 1) * width + static_cast<size_t>(j)] : 0));
          cost[static_cast<size_t>(i) * width + static_cast<size_t>(j)] =
              best + prefix[static_cast<size_t>(j)] - prefix[static_cast<size_t>(i - 1)];
        }
      expect(fast.cost == cost[1 * width + static_cast<size_t>(n)], "Knuth DP disagrees with the cubic DP");
      expect(static_cost(fast.tree, counts) == fast.cost, "reported tree does not achieve the DP cost");
      // Oracle 2: exhaustive over all shapes for n <= 8.
      if (n <= 8) {
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (const Tree& shape : enumerate_shapes(n).shapes) best = std::min(best, static_cost(shape, counts));
        expect(best == fast.cost, "Knuth DP disagrees with exhaustive enumeration");
      }
    }
    expect(static_opt(std::vector<std::uint64_t>{0, 2, 0, 2}, 3).cost == 6, "counts {1:2,3:2} example");
    expect(static_opt(std::vector<std::uint64_t>{0, 1}, 1).cost == 1, "singleton example");
    return std::string("Knuth DP matches the cubic DP and exhaustive enumeration");
  });

  v.check("entropy-examples", [] {
    const std::vector<Fraction> half{Fraction(1, 2), Fraction(1, 2)};
    expect(std::abs(entropy_bits(half) - 1.0) < 1e-12, "H(1/2,1/2)");
    const std::vector<Fraction> mix{Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)};
    expect(std::abs(entropy_bits(mix) - 1.5) < 1e-12, "H(1/2,1/4,1/4)");
    const std::vector<Fraction> one{Fraction(1)};
    expect(std::abs(entropy_bits(one)) < 1e-12, "H(1)");
    return std::string("entropy values match");
  });

  v.check("opt-oracle-examples", [] {
    const Tree t = parse_tree("2(1(-,-),3(-,-))");
    expect(enumerate_shapes(1).shapes.size() == 1 && enumerate_shapes(3).shapes.size() == 5 &&
               enumerate_shapes(5).shapes.size() == 42,
           "Catalan counts");
    expect(brute_force_opt(t, std::vector<Key>{1}).cost == 2, "single query");
    expect(brute_force_opt(t, std::vector<Key>{1, 3}).cost == 4, "two queries");
    const std::uint64_t six = brute_force_opt(t, repeat(std::vector<Key>{1, 3}, 3)).cost;
    expect(six >= 9 && six <= 11, "OPT([1,3]^3) outside [9,11]");
    return std::string("tiny OPT values: [1]=2, [1,3]=4, [1,3]^3=" + std::to_string(six));
  });

  v.check("opt-region-semantics-agree", [seed, full] {
    for (Key n = 1; n <= 3; ++n) {
      OptOracle permissive(n, RegionSemantics::Permissive);
      OptOracle restricted(n, RegionSemantics::RootedRestricted);
      const size_t max_len = full ? 6 : 4;
      for (const Tree& t0 : permissive.catalog().shapes)
        for (size_t len = 1; len <= max_len; ++len) {
          std::vector<size_t> odo(len, 0);
          while (true) {
            std::vector<Key> x(len);
            for (size_t i = 0; i < len; ++i) x[i] = static_cast<Key>(odo[i] + 1);
            expect(permissive.solve(t0, x).cost == restricted.solve(t0, x).cost,
                   "region semantics disagree");
            size_t pos = 0;
            while (pos < len && ++odo[pos] == static_cast<size_t>(n)) odo[pos++] = 0;
            if (pos == len) break;
          }
        }
    }
    {
      std::mt19937_64 rng(seed + 7);
      OptOracle permissive(4, RegionSemantics::Permissive);
      OptOracle restricted(4, RegionSemantics::RootedRestricted);
      const int trials = full ? 400 : 120;
      for (int trial = 0; trial < trials; ++trial) {
        const Tree t0 = permissive.catalog().shapes[rng() % permissive.catalog().shapes.size()];
        std::vector<Key> x(1 + rng() % 8);
        for (auto& q : x) q = 1 + static_cast<Key>(rng() % 4);
        expect(permissive.solve(t0, x).cost == restricted.solve(t0, x).cost,
               "region semantics disagree at n=4");
      }
    }
    return std::string("permissive and root-restricted OPT agree on every tested instance");
  });

  v.check("gf-vs-opt-ratio-trend", [] {
    const Tree t = parse_tree("2(1(-,-),3(-,-))");
    double prev_gap = 1.0;
    double last = 0;
    for (int s = 1; s <= 5; ++s) {
      const std::vector<Key> x = repeat(std::vector<Key>{1, 3}, static_cast<std::uint64_t>(s));
      const double gf = static_cast<double>(gf_total_cost(t, x));
      const double opt = static_cast<double>(brute_force_opt(t, x).cost);
      last = gf / opt;
      const double gap_to_limit = std::abs(last - 4.0 / 3.0);
      expect(s == 1 || gap_to_limit <= prev_gap + 1e-9, "ratio does not approach 4/3");
      prev_gap = gap_to_limit;
    }
    expect(std::abs(last - 4.0 / 3.0) < 0.2, "ratio far from 4/3 at s=5");
    return std::string("GF/OPT on [1,3]^s approaches 4/3, last ratio " + format_double(last));
  });

  v.check("enforce-examples", [seed, full] {
    expect(enforce_prefix(parse_tree("2(1(-,-),3(-,-))")).sequence == std::vector<Key>({2, 2, 2}),
           "three-key prefix");
    expect(enforce_prefix(parse_tree("1(-,-)")).sequence.empty(), "single node prefix");
    std::mt19937_64 rng(seed + 8);
    const int trials = full ? 60 : 20;
    for (int trial = 0; trial < trials; ++trial) {
      const Key n = 2 + static_cast<Key>(rng() % 31);
      const Tree t0 = random_bst(n, rng);
      const Tree target = random_bst(n, rng);
      std::vector<Key> x = enforce_prefix(target).sequence;
      const size_t boundary = x.size();
      for (int i = 0; i < 20; ++i) x.push_back(1 + static_cast<Key>(rng() % n));
      GfOptions options;
      options.record_per_step = false;
      GfEngine engine(t0, x, options);
      while (engine.position() < boundary) engine.step();
      expect(engine.tree() == target, "boundary tree mismatch");
    }
    return std::to_string(trials) + " random boundary checks pass";
  });

  v.check("gap-instances-static", [] {
    const int r = 2;
    const FTreePieces pieces = make_f_tree_pieces(r);
    const GapInstance sub = build_subsequence_instance(r, 4);
    const std::vector<Key> x = sub.expand();
    expect(rev(rev(x)) == x && rev(x).size() == x.size(), "reversal involution");
    GfOptions options;
    options.record_per_step = false;
    GfEngine engine(Tree::right_spine(sub.n), x, options);
    const size_t pq_len = sub.parts[0].seq.size() + sub.parts[1].seq.size();
    while (engine.position() < pq_len) engine.step();
    expect(engine.tree() == pieces.promoted, "P.Q does not enforce T_Q");
    const std::uint64_t before = engine.report().restructures;
    while (!engine.done()) engine.step();
    expect(engine.report().restructures == before, "Z part restructured T_Q");
    expect(gf_is_static(pieces.promoted, repeat(rev(pieces.atomic), 2)), "T_Q not static under rev(Z)");
    expect(gf_is_static(pieces.stable.tree, repeat(pieces.atomic, 2)), "T_P not static under Z");
    return std::string("instances keep T_P/T_Q static through their Z parts");
  });

  v.check("tie-break-mutation-detected", [] {
    // Weak left-biased instances depend on the smaller-depth rule; the
    // smaller-value rule must be caught by the fixed-structure suite.
    const StabilityTree st = parse_stability("4!WL(2!S_L(1(-,-),3(-,-)),5(-,-))");
    expect(static_cast<bool>(validate_stability(st)), "mirrored weak instance invalid");
    const std::vector<Key> x = generate(st, 2 * atomic_length(st));
    expect(gf_is_static(st.tree, x), "smaller-depth should keep the tree static");
    GfOptions options;
    options.policy = TieBreakPolicy::SmallerValue;
    options.record_per_step = false;
    expect(gf_serve(st.tree, x, options).report.restructures > 0,
           "smaller-value tie-break must restructure the left-biased instance");
    return std::string("inverted tie-break is detected by the stability suite");
  });

  v.check("csv-cells-float-exact", [] {
    const std::string csv = ratio_table_csv(std::vector<int>{1}, 3, kDefaultMaxQueries);
    std::istringstream in(csv);
    std::string header, line;
    std::getline(in, header);
    std::getline(in, line);
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    // gf_avg at column 7 with its float twin at column 8.
    const size_t slash = cells[7].find('/');
    expect(slash != std::string::npos, "fraction cell is not in p/q form");
    const Fraction avg(Int(cells[7].substr(0, slash)), Int(cells[7].substr(slash + 1)));
    expect(std::strtod(cells[8].c_str(), nullptr) == to_double(avg), "float cell != fraction cell");
    return std::string("fraction and float cells agree to the last bit");
  });

  if (full)
    for (CheckResult& c : all_criteria(max_queries, seed)) v.results.push_back(std::move(c));

  return v.results;
}

}  // namespace gf
