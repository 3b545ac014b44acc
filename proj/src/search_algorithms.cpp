#include "robust_search/search_algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robust_search {

int log_term(Index n) { return std::max(1, ceil_log2(n)); }

namespace {

SearchReport found_report(Index i, std::size_t queries) {
  SearchReport r;
  r.result = ResultKind::Found;
  r.index = i;
  r.queries = queries;
  return r;
}

SearchReport absent_report(std::size_t queries) {
  SearchReport r;
  r.result = ResultKind::NotPresent;
  r.queries = queries;
  return r;
}

struct BudgetHit {};
struct NothingLeft {};

class BudgetPort : public QueryPort {
 public:
  BudgetPort(QueryPort& base, std::size_t budget) : base_(base), budget_(budget) {}
  Index size() const override { return base_.size(); }
  std::size_t count() const override { return base_.count(); }
  Outcome query(Index i) override {
    if (used_ >= budget_) throw BudgetHit{};
    ++used_;
    return base_.query(i);
  }

 private:
  QueryPort& base_;
  std::size_t budget_;
  std::size_t used_ = 0;
};

class RedirectPort : public QueryPort {
 public:
  explicit RedirectPort(QueryPort& base)
      : base_(base), queried_(static_cast<std::size_t>(base.size()), 0) {}
  Index size() const override { return base_.size(); }
  std::size_t count() const override { return base_.count(); }
  Outcome query(Index i) override {
    if (queried_[static_cast<std::size_t>(i)]) i = nearest_unqueried(i);
    queried_[static_cast<std::size_t>(i)] = 1;
    Outcome o = base_.query(i);
    if (o == Outcome::Equal) found_at = i;
    return o;
  }
  std::optional<Index> found_at;

 private:
  Index nearest_unqueried(Index i) const {
    Index n = size();
    for (Index d = 1; d < n; ++d) {
      if (i - d >= 0 && !queried_[static_cast<std::size_t>(i - d)]) return i - d;
      if (i + d < n && !queried_[static_cast<std::size_t>(i + d)]) return i + d;
    }
    throw NothingLeft{};
  }
  QueryPort& base_;
  std::vector<char> queried_;
};

}  // namespace

// ---------------------------------------------------------------------------

BinaryResult binary_search_straddle(QueryPort& port) {
  BinaryResult out;
  std::size_t start = port.count();
  Index lo = -1, hi = port.size();
  while (hi - lo > 1) {
    Index mid = lo + (hi - lo) / 2;
    Outcome o = port.query(mid);
    out.seen[mid] = o;
    if (o == Outcome::Equal) {
      out.report = found_report(mid, port.count() - start);
      out.straddle_lo = out.straddle_hi = mid;
      return out;
    }
    (o == Outcome::Less ? lo : hi) = mid;
  }
  out.report = absent_report(port.count() - start);
  out.straddle_lo = lo;
  out.straddle_hi = hi;
  return out;
}

SearchReport binary_search(QueryPort& port) { return binary_search_straddle(port).report; }

// ---------------------------------------------------------------------------

SearchReport lies_search_basic(QueryPort& port, const OuterObserver& observe) {
  TreeNav nav(port.size());
  std::size_t start = port.count();
  Node i = nav.root();
  for (;;) {
    if (observe) observe(i, port.count() - start);
    Outcome q = port.query(i.index);
    if (q == Outcome::Equal) return found_report(i.index, port.count() - start);
    auto back = nav.last_opposite_ancestor(i, q);
    if (!back) {
      i = nav.child_clamped(i, q);
      continue;
    }
    while (!(i == *back)) {
      Outcome b = port.query(back->index);
      if (b == Outcome::Equal) return found_report(back->index, port.count() - start);
      if (b != q) break;
      i = *nav.parent(i);
    }
    if (!(i == *back)) i = nav.child_clamped(i, q);
  }
}

SearchReport lies_search_tunable(QueryPort& port, const SearchConfig& config, const AdvanceObserver& observe) {
  if (!(config.c >= 1.0)) throw std::invalid_argument("lies_search_tunable: c must be >= 1");
  TreeNav nav(port.size());
  TallyTable tally;
  std::size_t start = port.count();
  const double c = config.c;
  Node i = nav.root();
  for (;;) {
    Outcome q = port.query(i.index);
    if (q == Outcome::Equal) return found_report(i.index, port.count() - start);
    tally.record(i, q);
    auto back = nav.last_opposite_ancestor(i, q);
    if (!back) {
      if (observe) observe(i, back, 0, 0);
      i = nav.child(i, q);
      continue;
    }
    std::size_t dist = nav.distance(i, *back);
    auto supported = [&] {
      double cd = c * static_cast<double>(tally.delta(*back));
      return !(cd > 0 && cd < static_cast<double>(dist) + 1);
    };
    while (!supported()) {
      Outcome b = port.query(back->index);
      if (b == Outcome::Equal) return found_report(back->index, port.count() - start);
      tally.record(*back, b);
    }
    std::size_t delta = tally.delta(*back);
    if (observe) observe(i, back, delta, dist);
    if (delta == 0) {
      // Nodes below the backtrack target leave the path with a clean slate.
      for (std::size_t d = back->depth() + 1; d <= i.depth(); ++d) tally.erase(nav.from_dirs(i.dirs.substr(0, d)));
      i = *back;
    } else {
      i = nav.child(i, q);
    }
  }
}

SearchReport faults_wrapper(QueryPort& port, const SearchFn& inner) {
  RedirectPort redirect(port);
  std::size_t start = port.count();
  SearchReport r;
  try {
    r = inner(redirect);
  } catch (const NothingLeft&) {
    return absent_report(port.count() - start);
  }
  if (redirect.found_at) {
    r.result = ResultKind::Found;
    r.index = *redirect.found_at;
  }
  r.queries = port.count() - start;
  return r;
}

// ---------------------------------------------------------------------------

SearchReport displacement_search(QueryPort& port) {
  std::size_t start = port.count();
  auto b = binary_search_straddle(port);
  if (b.report.found()) return b.report;
  Index n = port.size(), i = b.straddle_lo;
  // i, i+1, i-1, i+2, i-2, ...
  for (Index step = 0; step <= 2 * n + 2; ++step) {
    Index j = step % 2 == 0 ? i - step / 2 : i + (step + 1) / 2;
    if (j < 0 || j >= n || b.seen.count(j)) continue;
    Outcome o = port.query(j);
    b.seen[j] = o;
    if (o == Outcome::Equal) return found_report(j, port.count() - start);
  }
  return absent_report(port.count() - start);
}

SearchReport maxdisp_search(QueryPort& port, MaxDispTrace* trace) {
  std::size_t start = port.count();
  auto b = binary_search_straddle(port);
  if (trace) {
    trace->straddle_lo = b.straddle_lo;
    trace->straddle_hi = b.straddle_hi;
  }
  if (b.report.found()) return b.report;
  Index n = port.size();
  Index left = b.straddle_lo - 1, right = b.straddle_hi + 1;
  Index larger = b.straddle_hi < n ? 1 : 0, smaller = b.straddle_lo >= 0 ? 1 : 0;
  while (left >= 0 || right < n) {
    bool go_left = larger > smaller;
    if (go_left && left < 0) go_left = false;
    if (!go_left && right >= n) go_left = true;
    Index j = go_left ? left-- : right++;
    Outcome o;
    if (auto it = b.seen.find(j); it != b.seen.end()) {
      o = it->second;
    } else {
      o = port.query(j);
      if (trace) trace->window_queries.push_back(j);
      if (o == Outcome::Equal) return found_report(j, port.count() - start);
    }
    (o == Outcome::Less ? smaller : larger) += 1;
  }
  return absent_report(port.count() - start);
}

// ---------------------------------------------------------------------------

namespace {

int block_class(Outcome a, Outcome b) {
  bool x = a == Outcome::Greater, y = b == Outcome::Greater;
  return (x ? 2 : 0) + (y ? 1 : 0);
}

void classify(GridSummary& g) {
  g.q_less = g.q_greater = g.n_less_less = 0;
  g.blocks = {};
  for (Index pos : g.grid) {
    Outcome o = g.outcome.at(pos);
    if (o == Outcome::Less) ++g.q_less;
    else if (o == Outcome::Greater) ++g.q_greater;
  }
  for (std::size_t t = 0; t + 1 < g.grid.size(); ++t) {
    Index a = g.grid[t], b = g.grid[t + 1];
    int cls = block_class(g.outcome.at(a), g.outcome.at(b));
    ++g.blocks[static_cast<std::size_t>(cls)];
    if (cls == 0) g.n_less_less += b - a - 1;
  }
}

}  // namespace

SearchReport grid_search(QueryPort& port, Index m, Index p, GridSummary* summary) {
  if (p < 1) throw std::invalid_argument("grid_search: p >= 1");
  if (m < 1) m = 1;
  GridSummary local;
  GridSummary& g = summary ? *summary : local;
  g = GridSummary{};
  g.p = p;
  g.m = m;
  std::size_t start = port.count();
  Index n = port.size();
  auto ask = [&](Index i) {
    Outcome o = port.query(i);
    g.outcome[i] = o;
    return o;
  };

  std::vector<Index> grid;
  for (Index i = 0; i < n; i += p + 1) grid.push_back(i);
  if (grid.back() != n - 1) grid.push_back(n - 1);
  for (Index i : grid)
    if (ask(i) == Outcome::Equal) return found_report(i, port.count() - start);

  // Refine each non-empty >< block down to one adjacent inversion.
  std::vector<Index> refined;
  for (std::size_t t = 0; t < grid.size(); ++t) {
    refined.push_back(grid[t]);
    if (t + 1 == grid.size()) break;
    Index lo = grid[t], hi = grid[t + 1];
    if (hi - lo <= 1 || g.outcome[lo] != Outcome::Greater || g.outcome[hi] != Outcome::Less) continue;
    ++g.inversion_blocks_initial;
    while (hi - lo > 1) {
      Index mid = lo + (hi - lo) / 2;
      Outcome o = ask(mid);
      ++g.refine_queries;
      if (o == Outcome::Equal) return found_report(mid, port.count() - start);
      refined.push_back(mid);
      (o == Outcome::Less ? hi : lo) = mid;
    }
  }
  std::sort(refined.begin(), refined.end());
  g.grid = refined;
  g.refined = true;
  classify(g);

  Index centre = g.q_less + g.n_less_less;
  g.range_lo = std::max<Index>(0, centre - m * p);
  g.range_hi = std::min<Index>(n - 1, centre + m * p + p);
  for (Index i = g.range_lo; i <= g.range_hi; ++i) {
    if (g.outcome.count(i)) continue;
    if (ask(i) == Outcome::Equal) return found_report(i, port.count() - start);
  }
  return absent_report(port.count() - start);
}

Index ainv_block_size(Index n, Index k) {
  k = std::max<Index>(k, 1);
  auto p = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(n) / static_cast<double>(k)) / std::sqrt(2.0)));
  return std::max<Index>(1, p);
}

SearchReport ainv_search(QueryPort& port, Index k, GridSummary* summary) {
  Index m = std::max<Index>(k, 1);
  return grid_search(port, m, ainv_block_size(port.size(), m), summary);
}

SearchReport bmov_search(QueryPort& port, Index k, GridSummary* summary) {
  Index m = std::max<Index>(k, 0) + 1;
  return grid_search(port, m, ainv_block_size(port.size(), m), summary);
}

SearchReport edit_search(QueryPort& port, const SearchConfig& config) {
  return faults_wrapper(port, [&config](QueryPort& p) { return lies_search_tunable(p, config); });
}

SearchReport linear_search(QueryPort& port) {
  std::size_t start = port.count();
  for (Index i = 0; i < port.size(); ++i)
    if (port.query(i) == Outcome::Equal) return found_report(i, port.count() - start);
  return absent_report(port.count() - start);
}

SearchReport known_k_wrapper(QueryPort& port, const SearchFn& inner, Index budget) {
  std::size_t start = port.count();
  BudgetPort limited(port, static_cast<std::size_t>(std::max<Index>(budget, 0)));
  try {
    SearchReport r = inner(limited);
    r.queries = port.count() - start;
    return r;
  } catch (const BudgetHit&) {
    return absent_report(port.count() - start);
  }
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& algorithm_ids() {
  static const std::vector<std::string> ids{"binary",   "lies-basic", "lies-c",    "faults-c", "disp-sum",
                                            "disp-max", "grid-ainv",  "grid-bmov", "edit-c",   "linear"};
  return ids;
}

double bound_lies_basic(Index n, double k) { return 2.0 * log_term(n) + 4.0 * k; }

double bound_lies_tunable(Index n, double k, double c) {
  return (1.0 + 1.0 / c) * log_term(n) + (2.0 * c + 2.0) * k;
}

double bound_disp_sum(Index n, double k_sum) { return log_term(n) + 2.0 * k_sum + 4.0; }

double bound_disp_max(Index n, double k_max) { return log_term(n) + 3.0 * k_max + 4.0; }

double bound_grid(Index n, Index m, const GridSummary& g) {
  double k = static_cast<double>(std::max<Index>(m, 1));
  return 2.0 * std::sqrt(2.0 * static_cast<double>(n) * k) +
         static_cast<double>(g.inversion_blocks_initial) * (1.0 + ceil_log2(g.p)) + 2.0 * static_cast<double>(g.p) + 8.0;
}

double bound_edit(Index n, double c, Index k_rep, Index k_swap, Index k_mov) {
  Index faults = std::min({2 * k_rep, 4 * k_swap, 2 * k_mov});
  return bound_lies_tunable(n, static_cast<double>(faults), c);
}

SearchReport run_algorithm(const std::string& id, QueryPort& port, const AlgoParams& params, GridSummary* summary) {
  SearchConfig cfg;
  cfg.c = params.c;
  cfg.known_k = params.known_k;
  Index n = port.size();
  SearchFn fn;
  double budget = -1;
  auto kk = params.known_k ? static_cast<double>(*params.known_k) : 0.0;
  if (id == "binary") return binary_search(port);
  if (id == "linear") return linear_search(port);
  if (id == "grid-ainv") return ainv_search(port, params.k, summary);
  if (id == "grid-bmov") return bmov_search(port, params.k, summary);
  if (id == "lies-basic") {
    fn = [](QueryPort& p) { return lies_search_basic(p); };
    budget = bound_lies_basic(n, kk);
  } else if (id == "lies-c") {
    fn = [cfg](QueryPort& p) { return lies_search_tunable(p, cfg); };
    budget = bound_lies_tunable(n, kk, cfg.c);
  } else if (id == "faults-c" || id == "edit-c") {
    fn = [cfg](QueryPort& p) { return edit_search(p, cfg); };
    budget = bound_lies_tunable(n, kk, cfg.c);
  } else if (id == "disp-sum") {
    fn = [](QueryPort& p) { return displacement_search(p); };
    budget = bound_disp_sum(n, kk);
  } else if (id == "disp-max") {
    fn = [](QueryPort& p) { return maxdisp_search(p); };
    budget = bound_disp_max(n, kk);
  } else {
    throw std::invalid_argument("unknown algorithm id '" + id + "'");
  }
  if (!params.known_k) return fn(port);
  return known_k_wrapper(port, fn, static_cast<Index>(std::floor(std::min(budget, static_cast<double>(n)) + 1e-9)));
}

}  // namespace robust_search
