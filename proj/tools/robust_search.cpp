// robust-search: measure, search, duel, audit, bench, plot.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "robust_search/adversaries.hpp"
#include "robust_search/bench.hpp"
#include "robust_search/disorder_metrics.hpp"
#include "robust_search/relations_audit.hpp"
#include "robust_search/search_algorithms.hpp"

using namespace robust_search;

namespace {

enum Exit { kOk = 0, kUsage = 1, kBoundMiss = 2, kViolation = 3 };

struct BoundMiss {
  ResultRow row;
};

std::vector<Value> read_array(const std::string& arg) {
  std::string text = arg;
  if (std::filesystem::exists(arg)) {
    std::ifstream in(arg);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  for (char& ch : text)
    if (ch == ',' || ch == '[' || ch == ']' || ch == ';') ch = ' ';
  std::istringstream is(text);
  std::vector<Value> a;
  std::string tok;
  while (is >> tok) {
    std::size_t used = 0;
    Value v = std::stoll(tok, &used);
    if (used != tok.size()) throw std::invalid_argument("bad array entry '" + tok + "'");
    a.push_back(v);
  }
  if (a.empty()) throw std::invalid_argument("empty array");
  return a;
}

int report_rows(const ExperimentResult& res, bool allow_miss) {
  if (res.violations > 0) return kViolation;
  if (res.bound_misses > 0 && !allow_miss) return kBoundMiss;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search under lies, faults and disorder"};
  app.require_subcommand(1);

  // measure
  auto* measure = app.add_subcommand("measure", "Disorder profile of an array");
  std::string array_arg;
  std::optional<Value> target;
  Index block_limit = kBruteLimit;
  measure->add_option("--array", array_arg, "File or inline list, e.g. 3,1,2")->required();
  measure->add_option("--target", target, "Target value for k_faults(e)");
  measure->add_option("--block-limit", block_limit, "Largest n for exact block metrics");

  // search
  auto* search = app.add_subcommand("search", "Run one algorithm on one generated instance");
  ExperimentConfig scfg;
  scfg.experiment = "search";
  std::string algo = "lies-c", gen = "lies";
  Index sn = 1024, sk = 0;
  double sc = 2.0;
  std::uint64_t sseed = 1;
  bool absent = false;
  search->add_option("--algo", algo, "Algorithm id")->check(CLI::IsMember(algorithm_ids()));
  search->add_option("--n", sn)->check(CLI::PositiveNumber);
  search->add_option("--k", sk)->check(CLI::NonNegativeNumber);
  search->add_option("--c", sc)->check(CLI::PositiveNumber);
  search->add_option("--seed", sseed);
  search->add_option("--gen", gen, "sorted | lies | faults | displacement | ainv | ops");
  search->add_option("--op", scfg.generator.op, "Operation kind for --gen ops");
  search->add_flag("--absent", absent, "Draw a target that is not in the array");

  // adversary
  auto* adv = app.add_subcommand("adversary", "Duel an algorithm against an adaptive adversary");
  AdversarySpec aspec;
  std::string aalgo = "lies-basic", amode = "ainv";
  std::uint64_t aseed = 1;
  bool show_instance = false;
  adv->add_option("--strategy", aspec.strategy, "lie | window | kmax | hidden")
      ->required()
      ->check(CLI::IsMember({"lie", "window", "kmax", "hidden"}));
  adv->add_option("--mode", amode, "Hidden-block mode: ainv | rbswap | bswap")->check(CLI::IsMember({"ainv", "rbswap", "bswap"}));
  adv->add_option("--n", aspec.n)->required()->check(CLI::PositiveNumber);
  adv->add_option("--k", aspec.k)->check(CLI::NonNegativeNumber);
  adv->add_option("--c", aspec.c)->check(CLI::PositiveNumber);
  adv->add_option("--algo", aalgo)->check(CLI::IsMember(algorithm_ids()));
  adv->add_option("--seed", aseed, "Accepted for symmetry; adversaries are deterministic");
  adv->add_flag("--show-instance", show_instance, "Print the committed array");

  // relations
  auto* rel = app.add_subcommand("relations", "Audit the relations between disorder measures");
  std::size_t trials = 1000;
  Index nmax = 64, wn = 8;
  std::uint64_t rseed = 1;
  std::string witness, rel_array;
  rel->add_option("--trials", trials)->check(CLI::PositiveNumber);
  rel->add_option("--nmax", nmax)->check(CLI::PositiveNumber);
  rel->add_option("--seed", rseed);
  rel->add_option("--witness", witness, "Witness family")->check(CLI::IsMember(witness_families()));
  rel->add_option("--n", wn, "Witness size");
  rel->add_option("--array", rel_array, "Check one array instead");

  // bench
  auto* bench = app.add_subcommand("bench", "Run an experiment config");
  std::string config_path, out_path;
  bool allow_miss = false;
  bench->add_option("--config", config_path)->required();
  bench->add_option("--out", out_path, "CSV path (overrides the config)");
  bench->add_flag("--allow-bound-miss", allow_miss, "Keep going past rows with bound_ok=false");

  // plot
  auto* plot = app.add_subcommand("plot", "Render a CSV as SVG");
  std::string csv_path, px = "n", py = "queries", pseries = "algorithm", svg_path;
  plot->add_option("--csv", csv_path)->required();
  plot->add_option("--x", px);
  plot->add_option("--y", py);
  plot->add_option("--series", pseries);
  plot->add_option("--out", svg_path, "Defaults to the CSV path with .svg");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*measure) {
      auto a = read_array(array_arg);
      auto p = disorder_profile(a, target, block_limit);
      std::cout << format_profile(p) << profile_csv_header() << '\n' << profile_csv_row(p) << '\n';
      return kOk;
    }

    if (*search) {
      scfg.algorithms = {algo};
      scfg.generator.kind = gen;
      scfg.generator.absent = absent;
      scfg.n_values = {sn};
      scfg.k_values = {sk};
      scfg.c_values = {sc};
      scfg.seed = sseed;
      auto res = run_experiment(scfg);
      const auto& r = res.rows.front();
      std::cout << "algorithm=" << r.algorithm << "\nn=" << r.n << "\nk=" << r.k << "\nc=" << r.c
                << "\nqueries=" << r.queries << "\nbound=" << r.bound << "\nbound_ok=" << (r.bound_ok ? "true" : "false")
                << "\nfound=" << (r.found ? "true" : "false") << '\n';
      if (!r.note.empty()) std::cout << "note=" << r.note << '\n';
      return report_rows(res, false);
    }

    if (*adv) {
      aspec.mode = hidden_mode_from_string(amode);
      AlgoParams params;
      params.c = aspec.c;
      params.k = aspec.k;
      auto d = duel(aalgo, aspec, params);
      std::cout << duel_csv_header() << '\n' << duel_csv_row(d) << '\n';
      if (show_instance) std::cout << format_instance(d.committed) << '\n';
      if (!d.consistent || !d.budget_ok) return kViolation;
      return d.bound_ok ? kOk : kBoundMiss;
    }

    if (*rel) {
      if (!rel_array.empty()) {
        auto r = check_relations(read_array(rel_array));
        std::cout << relations_csv_header() << '\n' << relations_csv_rows(r);
        return r.all_hold() ? kOk : kViolation;
      }
      if (!witness.empty()) {
        auto w = witness_family(witness, wn);
        std::cout << "family=" << w.family << '\n' << format_instance(w.instance) << '\n';
        std::cout << "fact,holds\n";
        for (const auto& f : w.facts) std::cout << f.description << ',' << (f.holds ? "true" : "false") << '\n';
        return w.all_hold() ? kOk : kViolation;
      }
      auto s = audit_random(trials, nmax, rseed);
      std::cout << "trials=" << s.trials << "\nblock_checked=" << s.block_checked
                << "\nrelations_checked=" << s.relations_checked << "\nviolations=" << s.violations << '\n';
      if (!s.failing.empty()) {
        std::cout << relations_csv_header() << '\n';
        for (const auto& r : s.failing) std::cout << relations_csv_rows(r);
      }
      return s.violations == 0 ? kOk : kViolation;
    }

    if (*bench) {
      auto cfg = load_config(config_path);
      std::string path = out_path.empty() ? cfg.output : out_path;
      if (path.empty()) path = cfg.experiment + ".csv";
      std::ofstream out(path);
      if (!out) {
        std::cerr << "cannot write '" << path << "'\n";
        return kUsage;
      }
      out << kCsvVersionLine << '\n' << csv_header() << '\n';
      std::string body = std::string(kCsvVersionLine) + "\n" + csv_header() + "\n";
      ExperimentResult res;
      try {
        res = run_experiment(cfg, [&](const ResultRow& r) {
          out << csv_row(r) << '\n';
          body += csv_row(r) + "\n";
          if (!r.bound_ok && !allow_miss) throw BoundMiss{r};
        });
      } catch (const BoundMiss& m) {
        out.flush();
        std::cerr << "bound miss: " << csv_row(m.row) << "\n(rerun with --allow-bound-miss to continue)\n";
        return kBoundMiss;
      }
      out.flush();
      std::cout << format_summary(res);
      std::cout << "csv=" << path << "\nhash=" << hash_hex(determinism_hash(body)) << '\n';
      for (const auto& r : res.rows)
        if (r.violation) std::cerr << "violation: " << csv_row(r) << " " << r.note << '\n';
      return report_rows(res, allow_miss);
    }

    if (*plot) {
      std::string dst = svg_path;
      if (dst.empty()) dst = std::filesystem::path(csv_path).replace_extension(".svg").string();
      emit_plot(csv_path, px, py, pseries, dst);
      std::cout << "svg=" << dst << '\n';
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
