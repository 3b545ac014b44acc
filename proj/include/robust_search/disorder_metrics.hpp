#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robust_search/core_model.hpp"

namespace robust_search {

// rank[i] = position of values[i] in the stable sorted order.
std::vector<Index> stable_ranks(const std::vector<Value>& a);

Index metric_sum(const std::vector<Value>& a);
Index metric_max(const std::vector<Value>& a);
Index metric_inv(const std::vector<Value>& a);
Index metric_ainv(const std::vector<Value>& a);
Index metric_seq(const std::vector<Value>& a);
Index metric_mov(const std::vector<Value>& a);
Index metric_rep(const std::vector<Value>& a);
Index metric_swap(const std::vector<Value>& a);
Index metric_aswap(const std::vector<Value>& a);
// Requires e to occur exactly once in a.
Index metric_faults_of(const std::vector<Value>& a, Value e);

struct BlockResult {
  bool exceeds = false;  // true: the distance is larger than the budget
  Index value = 0;       // exact distance, or the budget when exceeds

  bool operator==(const BlockResult& o) const { return exceeds == o.exceeds && value == o.value; }
};

inline constexpr Index kExactSolverLimit = 10;

// Exact block distance by iterative deepening. kind is BlockMove, BlockSwap
// or RestrictedBlockSwap.
BlockResult metric_block_exact(const std::vector<Value>& a, OpKind kind, Index budget,
                               Index limit = kExactSolverLimit);

// Breadth-first distance to the nearest sorted arrangement (n <= 8).
// Replacement uses exhaustive subsequence enumeration instead.
Index brute_metric(const std::vector<Value>& a, OpKind kind);

inline constexpr Index kBruteLimit = 8;

struct DisorderProfile {
  Index k_sum = 0, k_max = 0, k_inv = 0, k_ainv = 0, k_seq = 0, k_mov = 0, k_rep = 0,
        k_swap = 0, k_aswap = 0;
  std::optional<Index> k_faults_e;
  std::optional<Index> k_bswap, k_rbswap, k_bmov;
};

// Computes every metric; block metrics only when n <= block_limit. Throws
// std::logic_error if any profile invariant fails.
DisorderProfile disorder_profile(const std::vector<Value>& a, std::optional<Value> e = std::nullopt,
                                 Index block_limit = kBruteLimit);

// One key=value line per metric; "na" for metrics not computed.
std::string format_profile(const DisorderProfile& p);
std::string profile_csv_header();
std::string profile_csv_row(const DisorderProfile& p);

}  // namespace robust_search
