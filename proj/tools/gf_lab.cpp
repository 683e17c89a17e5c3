// gf-lab: command-line front end for the GreedyFuture laboratory.

#include "gf/criteria.hpp"
#include "gf/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using gf::Json;

struct CommonOpts {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  std::uint64_t max_queries = gf::kDefaultMaxQueries;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--seed", opts.seed, "RNG seed for randomized corpora");
  cmd->add_option("--out", opts.out, "output file (stdout when omitted)");
  cmd->add_option("--format", opts.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--max-queries", opts.max_queries, "resource guard on total served queries");
}

void emit(const CommonOpts& opts, const std::string& text) {
  if (opts.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(opts.out, std::ios::binary);
  if (!file) throw gf::Error("cannot open output file " + opts.out);
  file << text;
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

std::vector<gf::Key> parse_seq_arg(const std::string& arg) {
  std::vector<gf::Key> seq;
  std::string token;
  std::istringstream in(arg);
  while (std::getline(in, token, ',')) seq.push_back(static_cast<gf::Key>(std::stol(token)));
  return seq;
}

int report_checks(const std::vector<gf::CheckResult>& checks) {
  int failures = 0;
  for (const gf::CheckResult& c : checks) {
    std::cout << (c.pass ? "PASS" : "FAIL") << "  " << c.name;
    if (!c.detail.empty()) std::cout << ": " << c.detail;
    std::cout << "\n";
    failures += c.pass ? 0 : 1;
  }
  std::cout << (failures ? "verify: FAILED (" + std::to_string(failures) + " checks)\n"
                         : "verify: all checks passed\n");
  return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laboratory for the GreedyFuture BST algorithm: adversarial stable sequences, "
               "exact cost accounting, and lower-bound certificates"};
  app.require_subcommand(1);

  CommonOpts opts;

  auto* ratio = app.add_subcommand("ratio-table", "F-tree competitive-ratio rows (ratio approaches 2)");
  std::vector<int> r_values{1, 2, 3, 4, 5, 6};
  std::uint64_t reps = 1000;
  ratio->add_option("--r", r_values, "recursion depths");
  ratio->add_option("--reps", reps, "atomic-sequence repetitions per row");
  add_common(ratio, opts);

  auto* gap = app.add_subcommand("gap-table", "additive-gap rows for (k,r)-trees");
  std::vector<int> k_values{2, 3, 4};
  int fixed_r = 3;
  bool rule_two_pow_k = false;
  gap->add_option("--k", k_values, "trunk sizes");
  gap->add_option("--r", fixed_r, "fixed recursion depth");
  gap->add_flag("--rule-two-pow-k", rule_two_pow_k, "use r = 2^k and report gap / lg lg n");
  add_common(gap, opts);

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  std::string level = "fast";
  verify->add_option("--level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));
  add_common(verify, opts);

  auto* run = app.add_subcommand("run", "execute a JSON experiment config");
  std::string config_path;
  run->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
  add_common(run, opts);

  auto* enforce_cmd = app.add_subcommand("enforce", "enforcing prefix S(T) for a target tree");
  std::string target_text;
  enforce_cmd->add_option("--target", target_text, "target tree serialization")->required();
  add_common(enforce_cmd, opts);

  auto* generate_cmd = app.add_subcommand("generate", "emit a stable sequence from an annotated tree");
  std::string stability_text;
  std::uint64_t gen_count = 0;
  bool binary_keys = false;
  generate_cmd->add_option("--tree", stability_text, "stability tree, e.g. 2!S_L(1(-,-),3(-,-))")->required();
  generate_cmd->add_option("--count", gen_count, "number of queries (default: one atomic period)");
  generate_cmd->add_flag("--binary", binary_keys, "write little-endian 32-bit keys instead of text");
  add_common(generate_cmd, opts);

  auto* opt_cmd = app.add_subcommand("opt", "exact dynamic OPT on a tiny instance");
  std::string opt_tree;
  std::string opt_seq;
  gf::Key opt_n = 0;
  opt_cmd->add_option("--tree", opt_tree, "initial tree serialization");
  opt_cmd->add_option("--n", opt_n, "universe size (balanced initial tree when --tree is omitted)");
  opt_cmd->add_option("--seq", opt_seq, "comma-separated queries")->required();
  add_common(opt_cmd, opts);

  auto* wilber_cmd = app.add_subcommand("wilber", "Wilber's first bound for leaf queries");
  std::string wilber_tree;
  std::string wilber_seq;
  wilber_cmd->add_option("--tree", wilber_tree, "reference tree serialization")->required();
  wilber_cmd->add_option("--seq", wilber_seq, "comma-separated queries")->required();
  add_common(wilber_cmd, opts);

  auto* static_cmd = app.add_subcommand("static-opt", "optimal static BST for access counts");
  gf::Key static_n = 0;
  std::string counts_arg;
  static_cmd->add_option("--n", static_n, "universe size")->required();
  static_cmd->add_option("--counts", counts_arg, "key:count pairs, e.g. 1:2,3:2")->required();
  add_common(static_cmd, opts);

  auto* export_cmd = app.add_subcommand("export-instance", "materialize a gap instance to disk");
  std::string instance_kind = "multiplicative";
  int instance_r = 3;
  std::uint64_t instance_reps = 10;
  export_cmd->add_option("--kind", instance_kind, "multiplicative | subsequence | reversal")
      ->check(CLI::IsMember({"multiplicative", "subsequence", "reversal"}));
  export_cmd->add_option("--r", instance_r, "F-tree recursion depth");
  export_cmd->add_option("--reps", instance_reps, "atomic repetitions");
  add_common(export_cmd, opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ratio) {
      emit(opts, opts.format == "json"
                     ? json_text(gf::ratio_table_json(r_values, reps, opts.max_queries))
                     : gf::ratio_table_csv(r_values, reps, opts.max_queries));
    } else if (*gap) {
      emit(opts, opts.format == "json"
                     ? json_text(gf::gap_table_json(k_values, fixed_r, rule_two_pow_k, opts.max_queries))
                     : gf::gap_table_csv(k_values, fixed_r, rule_two_pow_k, opts.max_queries));
    } else if (*verify) {
      const auto checks = gf::run_verify(level == "full" ? gf::VerifyLevel::Full : gf::VerifyLevel::Fast,
                                         opts.max_queries, opts.seed);
      return report_checks(checks);
    } else if (*run) {
      std::ifstream in(config_path);
      Json config = Json::parse(in);
      Json result = gf::dispatch_run(config, opts.max_queries);
      if (opts.out.empty()) {
        std::cout << json_text(result);
      } else {
        std::filesystem::path dir(opts.out);
        std::filesystem::create_directories(dir);
        Json outputs = Json::array({"result.json"});
        if (result.contains("trace")) {
          // JSON-lines: one record per step.
          std::ofstream trace_file(dir / "trace.jsonl", std::ios::binary);
          for (const Json& step : result["trace"]) trace_file << step.dump() << "\n";
          result.erase("trace");
          outputs.push_back("trace.jsonl");
        }
        if (result.contains("csv")) {
          std::ofstream csv_file(dir / "report.csv", std::ios::binary);
          csv_file << result["csv"].get<std::string>();
          result.erase("csv");
          outputs.push_back("report.csv");
        }
        std::ofstream result_file(dir / "result.json", std::ios::binary);
        result_file << json_text(result);
        Json manifest{{"tool", "gf-lab"},
                      {"version", gf::kToolVersion},
                      {"seed", opts.seed},
                      {"max_queries", opts.max_queries},
                      {"config", config},
                      {"outputs", outputs}};
        std::ofstream manifest_file(dir / "manifest.json", std::ios::binary);
        manifest_file << json_text(manifest);
      }
    } else if (*enforce_cmd) {
      const gf::EnforcePlan plan = gf::enforce_prefix(gf::parse_tree(target_text));
      Json out{{"layers", plan.layers}, {"sequence", plan.sequence}};
      emit(opts, json_text(out));
    } else if (*generate_cmd) {
      const gf::StabilityTree st = gf::parse_stability(stability_text);
      if (auto v = gf::validate_stability(st); !v) throw gf::Error(v.first_violation);
      const std::uint64_t period = gf::atomic_length(st);
      const std::uint64_t count = gen_count == 0 ? period : gen_count;
      if (count > opts.max_queries) throw gf::Error("count exceeds --max-queries");
      const std::vector<gf::Key> seq = gf::generate(st, count);
      if (binary_keys) {
        if (opts.out.empty()) throw gf::Error("--binary requires --out");
        std::ofstream file(opts.out, std::ios::binary);
        for (gf::Key q : seq) {
          const auto u = static_cast<std::uint32_t>(q);
          const char bytes[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                                 static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
          file.write(bytes, 4);
        }
      } else {
        Json out{{"atomic_length", period}, {"sequence", seq}};
        emit(opts, json_text(out));
      }
    } else if (*opt_cmd) {
      Json config{{"cmd", "opt"}, {"seq", parse_seq_arg(opt_seq)}};
      if (!opt_tree.empty()) config["tree"] = opt_tree;
      if (opt_n > 0) config["n"] = opt_n;
      emit(opts, json_text(gf::dispatch_run(config, opts.max_queries)));
    } else if (*wilber_cmd) {
      Json config{{"cmd", "wilber"}, {"tree", wilber_tree}, {"seq", parse_seq_arg(wilber_seq)}};
      emit(opts, json_text(gf::dispatch_run(config, opts.max_queries)));
    } else if (*static_cmd) {
      Json counts = Json::object();
      for (const std::string& pair : [&] {
             std::vector<std::string> items;
             std::string item;
             std::istringstream in(counts_arg);
             while (std::getline(in, item, ',')) items.push_back(item);
             return items;
           }()) {
        const size_t colon = pair.find(':');
        if (colon == std::string::npos) throw gf::Error("counts must be key:count pairs");
        counts[pair.substr(0, colon)] = std::stoull(pair.substr(colon + 1));
      }
      Json config{{"cmd", "static-opt"}, {"n", static_n}, {"counts", counts}};
      emit(opts, json_text(gf::dispatch_run(config, opts.max_queries)));
    } else if (*export_cmd) {
      if (opts.out.empty()) throw gf::Error("export-instance requires --out");
      gf::GapInstance inst = instance_kind == "multiplicative"
                                 ? gf::build_multiplicative_instance(instance_r, instance_reps)
                             : instance_kind == "subsequence"
                                 ? gf::build_subsequence_instance(instance_r, instance_reps)
                                 : gf::build_reversal_instance(instance_r, instance_reps);
      if (inst.length() > opts.max_queries) throw gf::Error("instance exceeds --max-queries");
      std::filesystem::path dir(opts.out);
      std::filesystem::create_directories(dir);
      {
        std::ofstream keys(dir / "instance.keys", std::ios::binary);
        for (gf::Key q : inst.expand()) {
          const auto u = static_cast<std::uint32_t>(q);
          const char bytes[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                                 static_cast<char>((u >> 16) & 0xff), static_cast<char>((u >> 24) & 0xff)};
          keys.write(bytes, 4);
        }
      }
      Json parts = Json::array();
      std::uint64_t offset = 0;
      Json marked = Json::array();
      for (const gf::InstancePart& part : inst.parts) {
        const std::uint64_t part_len = part.reps * part.seq.size();
        parts.push_back({{"name", part.name},
                         {"offset", offset},
                         {"length", part_len},
                         {"reps", part.reps},
                         {"marked", part.marked}});
        if (part.marked) marked.push_back({{"offset", offset}, {"length", part_len}});
        offset += part_len;
      }
      Json sidecar{{"n", inst.n},
                   {"length", inst.length()},
                   {"key_encoding", "little-endian uint32"},
                   {"parts", parts},
                   {"marked_index_ranges", marked}};
      std::ofstream side(dir / "instance.json", std::ios::binary);
      side << json_text(sidecar);
    }
  } catch (const std::exception& e) {
    std::cerr << "gf-lab: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
