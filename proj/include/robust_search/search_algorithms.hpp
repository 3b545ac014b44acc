#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "robust_search/core_model.hpp"
#include "robust_search/search_tree.hpp"

namespace robust_search {

struct SearchConfig {
  double c = 2.0;
  std::optional<Index> known_k;  // set: known-k mode, otherwise oblivious
};

// max(1, ceil(log2 n)); the log term used in every bound formula.
int log_term(Index n);

struct BinaryResult {
  SearchReport report;
  Index straddle_lo = -1;  // last index answered '<' (or -1)
  Index straddle_hi = 0;   // first index answered '>' (or n)
  std::map<Index, Outcome> seen;
};

BinaryResult binary_search_straddle(QueryPort& port);
SearchReport binary_search(QueryPort& port);

// Called at the start of every outer iteration with the current node and
// the number of queries spent so far.
using OuterObserver = std::function<void(const Node& current, std::size_t queries)>;

SearchReport lies_search_basic(QueryPort& port, const OuterObserver& observe = {});

// Reports each decision to advance: (current node, checked ancestor, delta, distance).
using AdvanceObserver =
    std::function<void(const Node& i, const std::optional<Node>& ancestor, std::size_t delta, std::size_t dist)>;

SearchReport lies_search_tunable(QueryPort& port, const SearchConfig& config,
                                 const AdvanceObserver& observe = {});

using SearchFn = std::function<SearchReport(QueryPort&)>;

// Repeat queries of the inner search go to the nearest unqueried index
// (ties to the left) instead.
SearchReport faults_wrapper(QueryPort& port, const SearchFn& inner);

SearchReport displacement_search(QueryPort& port);

struct MaxDispTrace {
  Index straddle_lo = -1, straddle_hi = 0;
  std::vector<Index> window_queries;  // indices probed after the binary search
};

SearchReport maxdisp_search(QueryPort& port, MaxDispTrace* trace = nullptr);

struct GridSummary {
  Index p = 1;
  Index m = 1;
  std::vector<Index> grid;  // sorted queried positions after refinement
  std::map<Index, Outcome> outcome;
  Index q_less = 0, q_greater = 0;
  Index n_less_less = 0;
  // Block counts by neighbour outcomes: [0]=<<, [1]=<>, [2]=><, [3]=>>.
  std::array<Index, 4> blocks{};
  Index inversion_blocks_initial = 0;  // non-empty >< blocks before refinement
  Index refine_queries = 0;
  bool refined = false;
  Index range_lo = 0, range_hi = -1;
};

SearchReport grid_search(QueryPort& port, Index m, Index p, GridSummary* summary = nullptr);
Index ainv_block_size(Index n, Index k);
SearchReport ainv_search(QueryPort& port, Index k, GridSummary* summary = nullptr);
SearchReport bmov_search(QueryPort& port, Index k, GridSummary* summary = nullptr);

SearchReport edit_search(QueryPort& port, const SearchConfig& config);
SearchReport linear_search(QueryPort& port);

// Runs inner with a query budget; exhausting it means e is absent.
SearchReport known_k_wrapper(QueryPort& port, const SearchFn& inner, Index budget);

// ---------------------------------------------------------------------------
// Bounds and dispatch by algorithm id

const std::vector<std::string>& algorithm_ids();

double bound_lies_basic(Index n, double k);
double bound_lies_tunable(Index n, double k, double c);
double bound_disp_sum(Index n, double k_sum);
double bound_disp_max(Index n, double k_max);
double bound_grid(Index n, Index m, const GridSummary& g);
double bound_edit(Index n, double c, Index k_rep, Index k_swap, Index k_mov);

struct AlgoParams {
  double c = 2.0;
  Index k = 0;                   // disorder budget for grid-ainv / grid-bmov
  std::optional<Index> known_k;  // wrap in the known-k budget
};

// Runs algorithm `id`; `summary` is filled for grid algorithms.
SearchReport run_algorithm(const std::string& id, QueryPort& port, const AlgoParams& params,
                           GridSummary* summary = nullptr);

}  // namespace robust_search
