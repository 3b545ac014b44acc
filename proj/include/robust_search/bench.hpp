#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "robust_search/core_model.hpp"

namespace robust_search {

// Instance source for an experiment.
//   sorted        sorted array, truthful answers (absent=true draws a missing target)
//   lies          sorted array, k lies at random ordinals
//   faults        sorted array, k faulty indices with fixed wrong answers
//   displacement  max displacement <= k
//   ainv          pos(e)=rank(e), exactly k adjacent inversions
//   ops           k random operations of `op` applied to a sorted array
//   duel          no instance; the adversary named by `adversary` answers
struct GeneratorSpec {
  std::string kind = "sorted";
  std::string op = "swap";
  std::string adversary = "lie";
  std::string mode = "ainv";
  bool absent = false;
};

struct ExperimentConfig {
  std::string experiment = "experiment";
  std::vector<std::string> algorithms;
  GeneratorSpec generator;
  std::vector<Index> n_values;
  std::vector<Index> k_values{0};
  std::vector<double> c_values{2.0};
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::string output;  // empty: caller decides
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// `key = value` lines; '#' starts a comment. Lists are `a,b,c`; integer
// items may be ranges `lo..hi` or power ranges `2^a..2^b`.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
void validate_config(const ExperimentConfig& cfg);

std::vector<Index> parse_index_list(const std::string& s);

struct ResultRow {
  std::string experiment, algorithm;
  Index n = 0, k = 0;
  double c = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::size_t queries = 0;
  double bound = 0;
  bool bound_ok = true;
  bool found = false;
  std::int64_t runtime_ns = 0;
  // Not in the CSV: a wrong answer, or a duel whose commitment fails replay.
  bool violation = false;
  std::string note;
};

// Largest observed query count against the bound, per (algorithm, n, k).
struct SummaryCell {
  std::size_t rows = 0;
  std::size_t max_queries = 0;
  double bound_at_max = 0;
  double min_slack = 0;  // min over rows of bound - queries
  std::size_t misses = 0;
};

struct ExperimentResult {
  std::vector<ResultRow> rows;
  std::map<std::tuple<std::string, Index, Index>, SummaryCell> summary;
  std::size_t bound_misses = 0;
  std::size_t violations = 0;
};

using RowSink = std::function<void(const ResultRow&)>;

// Rows come out ordered by (n, k, c, trial, algorithm). Each trial's seed
// depends only on the config seed and the cell, never on run order.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RowSink& sink = {});

inline constexpr const char* kCsvVersionLine = "# robust-search-csv v1";

std::string csv_header();
std::string csv_row(const ResultRow& r);
std::string to_csv(const std::vector<ResultRow>& rows);
std::string format_summary(const ExperimentResult& res);

// FNV-1a over the CSV text with the runtime_ns column dropped.
std::uint64_t determinism_hash(const std::string& csv_text);
std::string hash_hex(std::uint64_t h);

// Plots max and mean of y against x, one pair of curves per series value,
// plus the max of the `bound` column when the CSV has one. Writes SVG.
// Throws std::invalid_argument when a named field is missing.
std::string render_plot(const std::string& csv_text, const std::string& x, const std::string& y,
                        const std::string& series);
void emit_plot(const std::string& csv_path, const std::string& x, const std::string& y,
               const std::string& series, const std::string& out_path);

}  // namespace robust_search
