#include "robust_search/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "robust_search/adversaries.hpp"
#include "robust_search/disorder_metrics.hpp"
#include "robust_search/search_algorithms.hpp"

namespace robust_search {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

Index parse_int(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

// "2^a" or a plain integer.
Index parse_term(const std::string& s, bool* power = nullptr) {
  if (s.rfind("2^", 0) == 0) {
    Index e = parse_int(s.substr(2));
    if (e < 0 || e > 62) throw ConfigError("exponent out of range: '" + s + "'");
    if (power) *power = true;
    return Index{1} << e;
  }
  if (power) *power = false;
  return parse_int(s);
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("not a boolean: '" + s + "'");
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::set<std::string>& generator_kinds() {
  static const std::set<std::string> k{"sorted", "lies", "faults", "displacement", "ainv", "ops", "duel"};
  return k;
}

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

constexpr std::uint64_t kFnvBasis = 1469598103934665603ULL;

// ---------------------------------------------------------------------------
// One trial of a non-duel experiment: the instance and answer model shared by
// every algorithm in the trial.

struct Trial {
  Instance inst;
  std::vector<std::size_t> lie_plan;
  std::map<Index, Outcome> faults;
  Index budget = 0;
};

Trial make_trial(const ExperimentConfig& cfg, Index n, Index k, double c, std::uint64_t seed) {
  const auto& g = cfg.generator;
  Trial t;
  Rng rng(splitmix64(seed));
  if (g.kind == "sorted" || g.kind == "lies" || g.kind == "faults") {
    t.inst = gen_sorted_instance(n, seed, g.absent);
  } else if (g.kind == "displacement") {
    t.inst = gen_bounded_displacement(n, std::min(k, n - 1), seed);
  } else if (g.kind == "ainv") {
    t.inst = gen_ainv_instance(n, k, seed);
  } else {
    t.inst = gen_random_ops(n, op_kind_from_string(g.op), static_cast<std::size_t>(k), seed).instance;
  }
  if (g.kind == "lies") {
    double horizon = std::max(bound_lies_basic(n, static_cast<double>(k)), bound_lies_tunable(n, static_cast<double>(k), c));
    auto h = static_cast<Index>(std::min(horizon, static_cast<double>(n)));
    for (Index j = 0; j < k; ++j) t.lie_plan.push_back(static_cast<std::size_t>(rng.uniform(0, std::max<Index>(h - 1, 0))));
    t.budget = k;
  } else if (g.kind == "faults") {
    Index room = n - (t.inst.pos ? 1 : 0);
    Index want = std::min(k, room);
    while (static_cast<Index>(t.faults.size()) < want) {
      Index i = rng.uniform(0, n - 1);
      if (t.inst.pos && *t.inst.pos == i) continue;
      t.faults.emplace(i, opposite(t.inst.truth(i)));
    }
    t.budget = want;
  }
  return t;
}

std::unique_ptr<Oracle> make_oracle(const ExperimentConfig& cfg, const Trial& t) {
  if (cfg.generator.kind == "lies")
    return std::make_unique<ScriptedLiesOracle>(t.inst, t.lie_plan, static_cast<std::size_t>(t.budget));
  if (cfg.generator.kind == "faults")
    return std::make_unique<FaultSetOracle>(t.inst, t.faults, static_cast<std::size_t>(t.budget));
  return std::make_unique<TruthfulOracle>(t.inst);
}

// Bound formula for `algo` in this setting, or nullopt when the algorithm
// carries no guarantee here (the row then uses the trivial bound n).
std::optional<double> formula(const std::string& algo, const std::string& gen, Index n, double c,
                              double lies, const Instance& inst, const GridSummary& g) {
  bool truthful = gen != "lies" && gen != "faults";
  if (algo == "linear") return static_cast<double>(n);
  if (algo == "faults-c") return bound_lies_tunable(n, lies, c);
  if (algo == "edit-c") {
    if (!truthful) return bound_lies_tunable(n, lies, c);
    return bound_edit(n, c, metric_rep(inst.values), metric_swap(inst.values), metric_mov(inst.values));
  }
  if (gen == "faults") return std::nullopt;
  if (algo == "lies-basic") return bound_lies_basic(n, lies);
  if (algo == "lies-c") return bound_lies_tunable(n, lies, c);
  if (!truthful) return std::nullopt;
  if (algo == "binary") return gen == "sorted" ? std::optional<double>(ceil_log2(n + 1)) : std::nullopt;
  if (algo == "disp-sum") return bound_disp_sum(n, static_cast<double>(metric_sum(inst.values)));
  if (algo == "disp-max") return bound_disp_max(n, static_cast<double>(metric_max(inst.values)));
  if (algo == "grid-ainv" || algo == "grid-bmov") return bound_grid(n, g.m, g);
  return std::nullopt;
}

ResultRow run_one(const ExperimentConfig& cfg, const Trial& t, const std::string& algo, Index n, Index k,
                  double c) {
  ResultRow row;
  row.algorithm = algo;
  auto oracle = make_oracle(cfg, t);
  QuerySession session(t.inst, *oracle);
  AlgoParams params;
  params.c = c;
  params.k = k;
  GridSummary g;
  auto t0 = std::chrono::steady_clock::now();
  SearchReport r = run_algorithm(algo, session, params, &g);
  row.runtime_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
  row.queries = session.count();
  row.found = r.found() && t.inst.pos && r.index == *t.inst.pos;

  double lies = 0;
  if (auto* s = dynamic_cast<ScriptedLiesOracle*>(oracle.get())) lies = static_cast<double>(s->lies_told().size());
  if (cfg.generator.kind == "faults") lies = static_cast<double>(t.faults.size());
  auto f = formula(algo, cfg.generator.kind, n, c, lies, t.inst, g);
  row.bound = std::min(f.value_or(static_cast<double>(n)), static_cast<double>(n));
  row.bound_ok = static_cast<double>(row.queries) <= row.bound + 1e-9;
  if (f) {
    bool present = t.inst.pos.has_value();
    if (present && !row.found) row.violation = true, row.note = "target missed";
    if (!present && r.found()) row.violation = true, row.note = "reported an absent target";
  }
  return row;
}

ResultRow run_duel(const ExperimentConfig& cfg, const std::string& algo, Index n, Index k, double c) {
  AdversarySpec spec;
  spec.strategy = cfg.generator.adversary;
  spec.n = n;
  spec.k = k;
  spec.c = std::max(1, static_cast<int>(std::lround(c)));
  spec.mode = hidden_mode_from_string(cfg.generator.mode);
  AlgoParams params;
  params.c = c;
  params.k = k;
  auto t0 = std::chrono::steady_clock::now();
  DuelReport d = duel(algo, spec, params);
  ResultRow row;
  row.runtime_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
  row.algorithm = algo;
  row.queries = d.queries;
  row.bound = d.forced_min;
  row.bound_ok = d.bound_ok;
  row.found = d.found;
  row.violation = !d.consistent || !d.budget_ok;
  row.note = d.detail;
  return row;
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Index> parse_index_list(const std::string& s) {
  std::vector<Index> out;
  for (const auto& item : split(s, ',')) {
    if (item.empty()) throw ConfigError("empty list item in '" + s + "'");
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_term(item));
      continue;
    }
    std::string a = trim(item.substr(0, dots)), b = trim(item.substr(dots + 2));
    bool pa = false, pb = false;
    Index lo = parse_term(a, &pa), hi = parse_term(b, &pb);
    if (pa != pb) throw ConfigError("mixed range '" + item + "'");
    if (lo > hi) throw ConfigError("empty range '" + item + "'");
    if (pa) {
      for (Index v = lo; v <= hi; v *= 2) out.push_back(v);
    } else {
      if (hi - lo > 10'000'000) throw ConfigError("range too long '" + item + "'");
      for (Index v = lo; v <= hi; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  std::set<std::string> seen;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    auto eqpos = line.find('=');
    if (eqpos == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eqpos)), val = trim(line.substr(eqpos + 1));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    try {
      if (key == "experiment") cfg.experiment = val;
      else if (key == "algo" || key == "algorithms") cfg.algorithms = split(val, ',');
      else if (key == "generator") cfg.generator.kind = val;
      else if (key == "op") cfg.generator.op = val;
      else if (key == "adversary") cfg.generator.adversary = val;
      else if (key == "mode") cfg.generator.mode = val;
      else if (key == "absent") cfg.generator.absent = parse_bool(val);
      else if (key == "n") cfg.n_values = parse_index_list(val);
      else if (key == "k") cfg.k_values = parse_index_list(val);
      else if (key == "c") {
        cfg.c_values.clear();
        for (const auto& item : split(val, ',')) cfg.c_values.push_back(parse_double(item));
      } else if (key == "trials") {
        Index t = parse_int(val);
        if (t < 1) throw ConfigError("trials must be >= 1");
        cfg.trials = static_cast<std::size_t>(t);
      } else if (key == "seed") {
        cfg.seed = static_cast<std::uint64_t>(parse_int(val));
      } else if (key == "output") {
        cfg.output = val;
      } else {
        throw ConfigError("unknown key '" + key + "'");
      }
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.experiment.empty() || cfg.experiment.find(',') != std::string::npos)
    throw ConfigError("experiment id must be non-empty and comma-free");
  if (cfg.algorithms.empty()) throw ConfigError("no algorithms given");
  const auto& ids = algorithm_ids();
  for (const auto& a : cfg.algorithms)
    if (std::find(ids.begin(), ids.end(), a) == ids.end()) throw ConfigError("unknown algorithm '" + a + "'");
  if (!generator_kinds().count(cfg.generator.kind)) throw ConfigError("unknown generator '" + cfg.generator.kind + "'");
  if (cfg.generator.kind == "ops") {
    try {
      op_kind_from_string(cfg.generator.op);
    } catch (const std::exception&) {
      throw ConfigError("unknown op '" + cfg.generator.op + "'");
    }
  }
  if (cfg.generator.kind == "duel") {
    static const std::set<std::string> adv{"lie", "window", "kmax", "hidden"};
    if (!adv.count(cfg.generator.adversary)) throw ConfigError("unknown adversary '" + cfg.generator.adversary + "'");
    try {
      hidden_mode_from_string(cfg.generator.mode);
    } catch (const std::exception&) {
      throw ConfigError("unknown hidden mode '" + cfg.generator.mode + "'");
    }
  }
  if (cfg.n_values.empty()) throw ConfigError("no n values given");
  for (Index n : cfg.n_values)
    if (n < 1) throw ConfigError("n must be >= 1");
  if (cfg.k_values.empty()) throw ConfigError("no k values given");
  for (Index k : cfg.k_values)
    if (k < 0) throw ConfigError("k must be >= 0");
  if (cfg.c_values.empty()) throw ConfigError("no c values given");
  for (double c : cfg.c_values)
    if (!(c > 0)) throw ConfigError("c must be > 0");
  if (cfg.trials < 1) throw ConfigError("trials must be >= 1");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RowSink& sink) {
  validate_config(cfg);
  ExperimentResult res;
  bool is_duel = cfg.generator.kind == "duel";
  std::uint64_t cell = 0;
  for (Index n : cfg.n_values)
    for (Index k : cfg.k_values)
      for (double c : cfg.c_values) {
        std::uint64_t cell_seed = derive_seed(cfg.seed, cell++);
        // Adversaries are deterministic, so a duel cell needs one trial only.
        std::size_t trials = is_duel ? 1 : cfg.trials;
        for (std::size_t t = 0; t < trials; ++t) {
          std::uint64_t seed = derive_seed(cell_seed, t);
          std::optional<Trial> trial;
          if (!is_duel) trial = make_trial(cfg, n, k, c, seed);
          for (const auto& algo : cfg.algorithms) {
            ResultRow row = is_duel ? run_duel(cfg, algo, n, k, c) : run_one(cfg, *trial, algo, n, k, c);
            row.experiment = cfg.experiment;
            row.n = n;
            row.k = k;
            row.c = c;
            row.trial = t;
            row.seed = seed;
            auto& s = res.summary[{algo, n, k}];
            double slack = row.bound - static_cast<double>(row.queries);
            if (s.rows == 0 || slack < s.min_slack) s.min_slack = slack;
            if (s.rows == 0 || row.queries > s.max_queries) {
              s.max_queries = row.queries;
              s.bound_at_max = row.bound;
            }
            ++s.rows;
            if (!row.bound_ok) ++s.misses, ++res.bound_misses;
            if (row.violation) ++res.violations;
            if (sink) sink(row);
            res.rows.push_back(std::move(row));
          }
        }
      }
  return res;
}

std::string csv_header() {
  return "experiment,algorithm,n,k,c,trial,seed,queries,bound,bound_ok,found,runtime_ns";
}

std::string csv_row(const ResultRow& r) {
  std::ostringstream os;
  os << r.experiment << ',' << r.algorithm << ',' << r.n << ',' << r.k << ',' << fmt("%g", r.c) << ',' << r.trial
     << ',' << r.seed << ',' << r.queries << ',' << fmt("%.4f", r.bound) << ',' << (r.bound_ok ? "true" : "false")
     << ',' << (r.found ? "true" : "false") << ',' << r.runtime_ns;
  return os.str();
}

std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = std::string(kCsvVersionLine) + "\n" + csv_header() + "\n";
  for (const auto& r : rows) out += csv_row(r) + "\n";
  return out;
}

std::string format_summary(const ExperimentResult& res) {
  std::ostringstream os;
  os << "algorithm,n,k,rows,max_queries,bound_at_max,min_slack,misses\n";
  for (const auto& [key, s] : res.summary)
    os << std::get<0>(key) << ',' << std::get<1>(key) << ',' << std::get<2>(key) << ',' << s.rows << ','
       << s.max_queries << ',' << fmt("%.4f", s.bound_at_max) << ',' << fmt("%.4f", s.min_slack) << ','
       << s.misses << '\n';
  os << "rows=" << res.rows.size() << " bound_misses=" << res.bound_misses << " violations=" << res.violations << '\n';
  return os.str();
}

std::uint64_t determinism_hash(const std::string& csv_text) {
  std::uint64_t h = kFnvBasis;
  std::istringstream is(csv_text);
  std::string line;
  std::optional<std::size_t> drop;
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] == '#') {
      h = fnv1a(h, line + "\n");
      continue;
    }
    auto cols = split(line, ',');
    if (!drop) {
      auto it = std::find(cols.begin(), cols.end(), "runtime_ns");
      drop = it == cols.end() ? std::numeric_limits<std::size_t>::max() : static_cast<std::size_t>(it - cols.begin());
    }
    std::string kept;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i == *drop) continue;
      kept += cols[i];
      kept += ',';
    }
    h = fnv1a(h, kept + "\n");
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// SVG plot

namespace {

struct Agg {
  double max_y = -std::numeric_limits<double>::infinity();
  double sum_y = 0;
  std::size_t count = 0;
  double max_bound = -std::numeric_limits<double>::infinity();
};

std::string esc(const std::string& s) {
  std::string o;
  for (char ch : s) {
    if (ch == '<') o += "&lt;";
    else if (ch == '>') o += "&gt;";
    else if (ch == '&') o += "&amp;";
    else if (ch == '"') o += "&quot;";
    else o += ch;
  }
  return o;
}

std::string num(double v) {
  if (std::fabs(v - std::round(v)) < 1e-9 && std::fabs(v) < 1e15) return std::to_string(static_cast<long long>(std::llround(v)));
  return fmt("%.3g", v);
}

}  // namespace

std::string render_plot(const std::string& csv_text, const std::string& x, const std::string& y,
                        const std::string& series) {
  std::istringstream is(csv_text);
  std::string line;
  std::vector<std::string> header;
  std::map<std::string, std::map<double, Agg>> data;
  std::size_t xi = 0, yi = 0, si = 0;
  std::optional<std::size_t> bi;
  while (std::getline(is, line)) {
    if (trim(line).empty() || line[0] == '#') continue;
    auto cols = split(line, ',');
    if (header.empty()) {
      header = cols;
      auto col = [&](const std::string& f) {
        auto it = std::find(header.begin(), header.end(), f);
        if (it == header.end()) throw std::invalid_argument("CSV has no field '" + f + "'");
        return static_cast<std::size_t>(it - header.begin());
      };
      xi = col(x);
      yi = col(y);
      si = col(series);
      if (y == "queries")
        if (auto it = std::find(header.begin(), header.end(), "bound"); it != header.end())
          bi = static_cast<std::size_t>(it - header.begin());
      continue;
    }
    if (cols.size() != header.size()) throw std::invalid_argument("ragged CSV row: " + line);
    double xv = std::stod(cols[xi]), yv = std::stod(cols[yi]);
    auto& a = data[cols[si]][xv];
    a.max_y = std::max(a.max_y, yv);
    a.sum_y += yv;
    ++a.count;
    if (bi) a.max_bound = std::max(a.max_bound, std::stod(cols[*bi]));
  }

  const double W = 720, H = 480, L = 70, R = 170, T = 30, B = 50;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = 0, ymax = 1;
  for (const auto& [s, pts] : data)
    for (const auto& [xv, a] : pts) {
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      ymax = std::max({ymax, a.max_y, bi ? a.max_bound : 0.0});
    }
  if (data.empty()) xmin = 0, xmax = 1;
  bool logx = xmin > 0 && xmax / xmin >= 16;
  if (xmax == xmin) xmax = xmin + 1;
  auto tx = [&](double v) {
    double f = logx ? (std::log2(v) - std::log2(xmin)) / (std::log2(xmax) - std::log2(xmin)) : (v - xmin) / (xmax - xmin);
    return L + f * (W - L - R);
  };
  auto ty = [&](double v) { return H - B - (v - ymin) / (ymax - ymin) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double yv = ymin + (ymax - ymin) * i / 4.0;
    os << "<text x=\"" << L - 6 << "\" y=\"" << ty(yv) + 4 << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
    double xv = logx ? std::exp2(std::log2(xmin) + (std::log2(xmax) - std::log2(xmin)) * i / 4.0)
                     : xmin + (xmax - xmin) * i / 4.0;
    os << "<text x=\"" << tx(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << esc(x)
     << (logx ? " (log scale)" : "") << "</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
     << ")\" text-anchor=\"middle\">" << esc(y) << "</text>\n";

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  std::size_t idx = 0;
  double legend_y = T + 10;
  auto polyline = [&](const std::map<double, Agg>& pts, auto pick, const char* color, const char* dash) {
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (dash) os << " stroke-dasharray=\"" << dash << "\"";
    os << " points=\"";
    for (const auto& [xv, a] : pts) os << tx(xv) << ',' << ty(pick(a)) << ' ';
    os << "\"/>\n";
  };
  auto legend = [&](const std::string& label, const char* color, const char* dash) {
    os << "<line x1=\"" << W - R + 10 << "\" y1=\"" << legend_y << "\" x2=\"" << W - R + 34 << "\" y2=\"" << legend_y
       << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"";
    if (dash) os << " stroke-dasharray=\"" << dash << "\"";
    os << "/>\n<text x=\"" << W - R + 40 << "\" y=\"" << legend_y + 4 << "\">" << esc(label) << "</text>\n";
    legend_y += 16;
  };
  for (const auto& [s, pts] : data) {
    const char* color = palette[idx++ % 8];
    polyline(pts, [](const Agg& a) { return a.max_y; }, color, nullptr);
    legend(s + " max", color, nullptr);
    polyline(pts, [](const Agg& a) { return a.sum_y / static_cast<double>(a.count); }, color, "2,3");
    legend(s + " mean", color, "2,3");
    if (bi) {
      polyline(pts, [](const Agg& a) { return a.max_bound; }, color, "8,4");
      legend(s + " bound", color, "8,4");
    }
  }
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const std::string& csv_path, const std::string& x, const std::string& y, const std::string& series,
               const std::string& out_path) {
  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot read '" + csv_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  std::string svg = render_plot(ss.str(), x, y, series);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << svg;
}

}  // namespace robust_search
