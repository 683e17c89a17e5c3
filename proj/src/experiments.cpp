#include "gf/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace gf {

Tree balanced_tree(Key n) {
  if (n < 1) throw Error("balanced_tree: n must be >= 1");
  Tree t(n);
  struct Range {
    Key lo, hi, parent;
    bool left_side;
  };
  std::vector<Range> stack{{1, n, 0, false}};
  while (!stack.empty()) {
    auto [lo, hi, parent, left_side] = stack.back();
    stack.pop_back();
    const Key mid = lo + (hi - lo) / 2;
    if (parent == 0) {
      t.set_root(mid);
    } else if (left_side) {
      t.set_left(parent, mid);
    } else {
      t.set_right(parent, mid);
    }
    if (lo < mid) stack.push_back({lo, static_cast<Key>(mid - 1), mid, true});
    if (mid < hi) stack.push_back({static_cast<Key>(mid + 1), hi, mid, false});
  }
  return t;
}

namespace {

const std::vector<Int>& catalan_big(Key n_max) {
  static std::vector<Int> table{1};
  while (table.size() <= static_cast<size_t>(n_max)) {
    const size_t i = table.size();
    Int v = 0;
    for (size_t j = 0; j < i; ++j) v += table[j] * table[i - 1 - j];
    table.push_back(std::move(v));
  }
  return table;
}

Int random_int_below(const Int& bound, std::mt19937_64& rng) {
  Int v = 0;
  for (int w = 0; w < 9; ++w) v = (v << 64) | Int(rng());
  return v % bound;
}

}  // namespace

Tree random_bst(Key n, std::mt19937_64& rng) {
  if (n < 1 || n > 512) throw Error("random_bst supports 1 <= n <= 512");
  const auto& cat = catalan_big(n);
  Tree t(n);
  struct Range {
    Key lo, hi, parent;
    bool left_side;
  };
  std::vector<Range> stack{{1, n, 0, false}};
  while (!stack.empty()) {
    auto [lo, hi, parent, left_side] = stack.back();
    stack.pop_back();
    if (lo > hi) continue;
    const Key len = hi - lo + 1;
    Int pick = random_int_below(cat[static_cast<size_t>(len)], rng);
    Key root = lo;
    for (; root <= hi; ++root) {
      const Int w = cat[static_cast<size_t>(root - lo)] * cat[static_cast<size_t>(hi - root)];
      if (pick < w) break;
      pick -= w;
    }
    if (parent == 0) {
      t.set_root(root);
    } else if (left_side) {
      t.set_left(parent, root);
    } else {
      t.set_right(parent, root);
    }
    stack.push_back({lo, static_cast<Key>(root - 1), root, true});
    stack.push_back({static_cast<Key>(root + 1), hi, root, false});
  }
  return t;
}

std::uint64_t static_total(const Tree& t, std::span<const Key> x) {
  const auto depths = all_depths(t);
  std::uint64_t total = 0;
  for (Key q : x) {
    if (q < 1 || q > t.n() || depths[static_cast<size_t>(q)] < 0)
      throw Error("static_total: query outside the tree");
    total += static_cast<std::uint64_t>(depths[static_cast<size_t>(q)]) + 1;
  }
  return total;
}

Fraction predicted_gf_cost_weak_f(int r) {
  return closed_form({Fraction(1), Fraction(2, 3), Fraction(2), Fraction(0)}, r);
}

Fraction predicted_promotion_weak_f(int r) {
  return closed_form({Fraction(0), Fraction(2, 3), Fraction(1), Fraction(0)}, r);
}

RatioRow ratio_row(int r, std::uint64_t reps, std::uint64_t max_queries) {
  if (reps < 1) throw Error("ratio_row: needs at least one atomic repetition");
  GapInstance inst = build_multiplicative_instance(r, reps);
  if (inst.length() > max_queries)
    throw Error("ratio_row: instance length " + std::to_string(inst.length()) +
                " exceeds the query budget " + std::to_string(max_queries) +
                " (raise --max-queries)");
  FTreePieces pieces = make_f_tree_pieces(r);

  RatioRow row;
  row.r = r;
  row.reps = reps;
  row.n = inst.n;
  row.prefix_len = inst.parts[0].seq.size();
  row.m_z = inst.parts[1].reps * inst.parts[1].seq.size();
  row.m_total = inst.length();

  const std::vector<Key> seq = inst.expand();
  GfOptions options;
  options.record_per_step = false;
  GfEngine engine(Tree::right_spine(inst.n), seq, options);
  while (engine.position() < row.prefix_len) engine.step();
  row.boundary_matches_target = engine.tree() == pieces.stable.tree;
  const std::uint64_t prefix_cost = engine.report().total;
  while (!engine.done()) engine.step();
  row.gf_total = engine.report().total;
  row.gf_z_total = row.gf_total - prefix_cost;

  row.promoted_total = static_total(pieces.promoted, seq);
  row.gf_avg = Fraction(row.gf_total, row.m_total);
  row.gf_z_avg = Fraction(row.gf_z_total, row.m_z);
  row.promoted_avg = Fraction(row.promoted_total, row.m_total);

  const std::span<const Key> z_part = std::span<const Key>(seq).subspan(row.prefix_len);
  row.wilber_z_per_query = wilber1(z_part, pieces.stable.tree).bound / Fraction(row.m_z);

  row.predicted_gf = predicted_gf_cost_weak_f(r);
  row.predicted_opt_upper = row.predicted_gf - predicted_promotion_weak_f(r);
  row.ratio_limit = row.predicted_gf / row.predicted_opt_upper;
  row.ratio_measured = static_cast<double>(row.gf_total) / static_cast<double>(row.promoted_total);
  return row;
}

GapRow gap_row(int k, int r, std::uint64_t max_queries) {
  GapRow row;
  row.k = k;
  row.r = r;
  row.n = kr_tree_size(k, r);
  row.m = int_pow(2, static_cast<unsigned>(k * r));
  row.predicted_gap_value = predicted_gap(k, r, GapMode::Strong);
  row.lglg_n = row.n <= 2 ? 0.0 : std::log2(std::log2(row.n.convert_to<double>()));
  row.measured = k * r <= 24 && row.m <= Int(max_queries);
  if (row.measured) {
    const StabilityTree st = build_kr_tree({k, r, KrAnnotation::AllStrong});
    const std::uint64_t m = row.m.convert_to<std::uint64_t>();
    const std::vector<Key> seq = generate(st, m);
    GfOptions options;
    options.record_per_step = false;
    GfResult res = gf_serve(st.tree, seq, options);
    row.gf_total = res.report.total;
    const PromoteResult promoted = promote_kr(st);
    row.promoted_total = static_total(promoted.tree, seq);
    row.gf_avg = Fraction(row.gf_total, m);
    row.promoted_avg = Fraction(row.promoted_total, m);
    row.gap_measured = row.gf_avg - row.promoted_avg;
    row.gap_over_lglgn = row.lglg_n > 0 ? to_double(row.gap_measured) / row.lglg_n : 0.0;
  } else {
    row.gap_over_lglgn = row.lglg_n > 0 ? to_double(row.predicted_gap_value) / row.lglg_n : 0.0;
  }
  return row;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::string csv_line(const std::vector<std::string>& cells) {
  std::string out;
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += csv_escape(cells[i]);
  }
  out += '\n';
  return out;
}

void push_fraction_pair(std::vector<std::string>& cells, const Fraction& f) {
  cells.push_back(fraction_string(f));
  cells.push_back(format_double(to_double(f)));
}

}  // namespace

std::string ratio_table_csv(std::span<const int> r_values, std::uint64_t reps, std::uint64_t max_queries) {
  std::string out = csv_line(
      {"r", "n", "reps", "m_total", "m_z", "prefix_len", "gf_total", "gf_avg", "gf_avg_float",
       "gf_z_avg", "gf_z_avg_float", "promoted_total", "promoted_avg", "promoted_avg_float",
       "wilber_z_per_query", "wilber_z_per_query_float", "predicted_gf", "predicted_gf_float",
       "predicted_opt_upper", "predicted_opt_upper_float", "ratio_measured", "ratio_limit",
       "ratio_limit_float"});
  for (int r : r_values) {
    RatioRow row = ratio_row(r, reps, max_queries);
    std::vector<std::string> cells{std::to_string(row.r),     std::to_string(row.n),
                                   std::to_string(row.reps),  std::to_string(row.m_total),
                                   std::to_string(row.m_z),   std::to_string(row.prefix_len),
                                   std::to_string(row.gf_total)};
    push_fraction_pair(cells, row.gf_avg);
    push_fraction_pair(cells, row.gf_z_avg);
    cells.push_back(std::to_string(row.promoted_total));
    push_fraction_pair(cells, row.promoted_avg);
    push_fraction_pair(cells, row.wilber_z_per_query);
    push_fraction_pair(cells, row.predicted_gf);
    push_fraction_pair(cells, row.predicted_opt_upper);
    cells.push_back(format_double(row.ratio_measured));
    push_fraction_pair(cells, row.ratio_limit);
    out += csv_line(cells);
  }
  return out;
}

std::string gap_table_csv(std::span<const int> k_values, int fixed_r, bool rule_two_pow_k,
                          std::uint64_t max_queries) {
  std::vector<std::string> header{"k",       "r",         "n",
                                  "m",       "measured",  "gf_avg",
                                  "gf_avg_float", "promoted_avg", "promoted_avg_float",
                                  "gap",     "gap_float", "predicted_gap",
                                  "predicted_gap_float", "lglg_n"};
  if (rule_two_pow_k) header.push_back("gap_over_lglgn");
  std::string out = csv_line(header);
  for (int k : k_values) {
    const int r = rule_two_pow_k ? (1 << k) : fixed_r;
    GapRow row = gap_row(k, r, max_queries);
    std::vector<std::string> cells{std::to_string(row.k), std::to_string(row.r), row.n.str(),
                                   row.m.str(), row.measured ? "1" : "0"};
    if (row.measured) {
      push_fraction_pair(cells, row.gf_avg);
      push_fraction_pair(cells, row.promoted_avg);
      push_fraction_pair(cells, row.gap_measured);
    } else {
      for (int i = 0; i < 6; ++i) cells.emplace_back();
    }
    push_fraction_pair(cells, row.predicted_gap_value);
    cells.push_back(format_double(row.lglg_n));
    if (rule_two_pow_k) cells.push_back(format_double(row.gap_over_lglgn));
    out += csv_line(cells);
  }
  return out;
}

Json ratio_table_json(std::span<const int> r_values, std::uint64_t reps, std::uint64_t max_queries) {
  Json rows = Json::array();
  for (int r : r_values) {
    const RatioRow row = ratio_row(r, reps, max_queries);
    rows.push_back({{"r", row.r},
                    {"n", row.n},
                    {"reps", row.reps},
                    {"m_total", row.m_total},
                    {"m_z", row.m_z},
                    {"prefix_len", row.prefix_len},
                    {"gf_total", row.gf_total},
                    {"gf_avg", fraction_string(row.gf_avg)},
                    {"gf_avg_float", to_double(row.gf_avg)},
                    {"gf_z_avg", fraction_string(row.gf_z_avg)},
                    {"promoted_total", row.promoted_total},
                    {"promoted_avg", fraction_string(row.promoted_avg)},
                    {"wilber_z_per_query", fraction_string(row.wilber_z_per_query)},
                    {"predicted_gf", fraction_string(row.predicted_gf)},
                    {"predicted_opt_upper", fraction_string(row.predicted_opt_upper)},
                    {"ratio_measured", row.ratio_measured},
                    {"ratio_limit", fraction_string(row.ratio_limit)},
                    {"ratio_limit_float", to_double(row.ratio_limit)}});
  }
  return rows;
}

Json gap_table_json(std::span<const int> k_values, int fixed_r, bool rule_two_pow_k,
                    std::uint64_t max_queries) {
  Json rows = Json::array();
  for (int k : k_values) {
    const int r = rule_two_pow_k ? (1 << k) : fixed_r;
    const GapRow row = gap_row(k, r, max_queries);
    Json j{{"k", row.k},
           {"r", row.r},
           {"n", row.n.str()},
           {"m", row.m.str()},
           {"measured", row.measured},
           {"predicted_gap", fraction_string(row.predicted_gap_value)},
           {"predicted_gap_float", to_double(row.predicted_gap_value)},
           {"lglg_n", row.lglg_n}};
    if (row.measured) {
      j["gf_avg"] = fraction_string(row.gf_avg);
      j["promoted_avg"] = fraction_string(row.promoted_avg);
      j["gap"] = fraction_string(row.gap_measured);
      j["gap_float"] = to_double(row.gap_measured);
    }
    if (rule_two_pow_k) j["gap_over_lglgn"] = row.gap_over_lglgn;
    rows.push_back(std::move(j));
  }
  return rows;
}

KrTreeSpec kr_spec_from_json(const Json& j) {
  KrTreeSpec spec;
  spec.k = j.at("k").get<int>();
  spec.r = j.at("r").get<int>();
  const std::string mode = j.value("mode", "all-strong");
  if (mode == "all-strong") {
    spec.mode = KrAnnotation::AllStrong;
  } else if (mode == "weak-trunk-roots") {
    spec.mode = KrAnnotation::WeakTrunkRoots;
  } else {
    throw Error("unknown kr mode '" + mode + "'");
  }
  return spec;
}

std::string bound_report_csv(const Json& instances, std::uint64_t max_queries) {
  std::string out = csv_line(
      {"instance-id", "m", "n", "gf_cost", "wilber_bound", "static_opt_cost", "promoted_tree_cost"});
  for (const Json& item : instances) {
    const StabilityTree st = item.contains("kr")
                                 ? build_kr_tree(kr_spec_from_json(item["kr"]))
                                 : parse_stability(item.at("stability_tree").get<std::string>());
    if (auto v = validate_stability(st); !v) throw Error("bound-report: " + v.first_violation);
    const std::uint64_t reps = item.value("reps", std::uint64_t{1});
    const std::uint64_t m = atomic_length(st) * reps;
    if (m > max_queries) throw Error("bound-report: instance exceeds the query budget");
    const std::vector<Key> x = generate(st, m);
    GfOptions options;
    options.record_per_step = false;
    const std::uint64_t gf = gf_serve(st.tree, x, options).report.total;
    const Fraction wilber = wilber1(x, st.tree).bound;
    std::vector<std::uint64_t> counts(static_cast<size_t>(st.tree.n()) + 1, 0);
    for (Key q : x) ++counts[static_cast<size_t>(q)];
    const std::uint64_t static_best = static_opt(counts, st.tree.n()).cost;
    std::string promoted_cell;
    try {
      promoted_cell = std::to_string(static_cost(promote_kr(st).tree, counts));
    } catch (const Error&) {
      // not a (k,r)-tree; the promotion scheme does not apply
    }
    out += csv_line({item.value("id", std::string("instance")), std::to_string(m),
                     std::to_string(st.tree.n()), std::to_string(gf), fraction_string(wilber),
                     std::to_string(static_best), promoted_cell});
  }
  return out;
}

namespace {

std::vector<Key> json_to_sequence(const Json& j) {
  std::vector<Key> seq;
  for (const auto& v : j) seq.push_back(v.get<Key>());
  return seq;
}

TieBreakPolicy policy_from(const Json& config) {
  const std::string name = config.value("policy", "smaller-depth");
  if (name == "smaller-depth") return TieBreakPolicy::SmallerDepth;
  if (name == "smaller-value") return TieBreakPolicy::SmallerValue;
  throw Error("unknown tie-break policy '" + name + "'");
}

}  // namespace

Json dispatch_run(const Json& config, std::uint64_t max_queries) {
  if (!config.contains("cmd")) throw Error("run config needs a \"cmd\" field");
  const std::string cmd = config["cmd"].get<std::string>();
  Json out;
  out["cmd"] = cmd;

  if (cmd == "gf") {
    const Tree t0 = parse_tree(config.at("tree").get<std::string>());
    const std::vector<Key> seq = json_to_sequence(config.at("seq"));
    if (seq.size() > max_queries) throw Error("run gf: sequence exceeds the query budget");
    GfOptions options;
    options.policy = policy_from(config);
    options.record_trace = config.value("trace", false);
    GfResult res = gf_serve(t0, seq, options);
    out["total"] = res.report.total;
    out["restructures"] = res.report.restructures;
    out["per_step"] = res.report.per_step;
    out["final_tree"] = serialize(res.tree);
    if (options.record_trace) {
      Json steps = Json::array();
      for (const GfStep& s : res.trace.steps)
        steps.push_back({{"t", s.t},
                         {"query", s.query},
                         {"cost", s.path_len},
                         {"restructured", s.restructured},
                         {"fingerprint", s.tree_fingerprint}});
      out["trace"] = std::move(steps);
    }
  } else if (cmd == "enforce") {
    const Tree target = parse_tree(config.at("target").get<std::string>());
    EnforcePlan plan = enforce_prefix(target);
    out["layers"] = plan.layers;
    out["sequence"] = plan.sequence;
  } else if (cmd == "opt") {
    const std::vector<Key> seq = json_to_sequence(config.at("seq"));
    Tree t0 = config.contains("tree") ? parse_tree(config["tree"].get<std::string>())
                                      : balanced_tree(config.at("n").get<Key>());
    BruteForceOpt res = brute_force_opt(t0, seq);
    out["cost"] = res.cost;
    ShapeCatalog catalog = enumerate_shapes(t0.n());
    Json trajectory = Json::array();
    for (ShapeId id : res.trajectory) trajectory.push_back(serialize(catalog.shapes[static_cast<size_t>(id)]));
    out["trajectory"] = std::move(trajectory);
  } else if (cmd == "generate") {
    const StabilityTree st = config.contains("kr")
                                 ? build_kr_tree(kr_spec_from_json(config["kr"]))
                                 : parse_stability(config.at("stability_tree").get<std::string>());
    if (auto v = validate_stability(st); !v) throw Error("run generate: " + v.first_violation);
    const auto count = config.value("count", std::uint64_t{0});
    if (count > max_queries) throw Error("run generate: count exceeds the query budget");
    out["sequence"] = generate(st, count);
    out["atomic_length"] = atomic_length(st);
    out["stability_tree"] = serialize_stability(st);
  } else if (cmd == "bound-report") {
    out["csv"] = bound_report_csv(config.at("instances"), max_queries);
  } else if (cmd == "wilber") {
    const Tree ref = parse_tree(config.at("tree").get<std::string>());
    const std::vector<Key> seq = json_to_sequence(config.at("seq"));
    WilberResult res = wilber1(seq, ref);
    Json alt = Json::object();
    for (const auto& [key, count] : res.alt_per_inner_node) alt[std::to_string(key)] = count;
    out["alt"] = std::move(alt);
    out["bound"] = fraction_string(res.bound);
    out["bound_float"] = to_double(res.bound);
  } else if (cmd == "static-opt") {
    const Key n = config.at("n").get<Key>();
    std::vector<std::uint64_t> counts(static_cast<size_t>(n) + 1, 0);
    for (const auto& [key, value] : config.at("counts").items()) {
      const Key k = static_cast<Key>(std::stol(key));
      if (k < 1 || k > n) throw Error("run static-opt: count key out of range");
      counts[static_cast<size_t>(k)] = value.get<std::uint64_t>();
    }
    StaticDpResult res = static_opt(counts, n);
    out["cost"] = res.cost;
    out["tree"] = serialize(res.tree);
  } else {
    throw Error("unknown run cmd '" + cmd + "'");
  }
  return out;
}

}  // namespace gf
