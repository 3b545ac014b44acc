#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "robust_search/core_model.hpp"
#include "robust_search/search_algorithms.hpp"
#include "robust_search/search_tree.hpp"

namespace robust_search {

// What an adversary emits once it settles on an array.
struct Commitment {
  Instance instance;
  std::vector<std::size_t> lie_ordinals;  // answers that deliberately contradict `instance`
  std::vector<OpRecord> sort_log;         // replaying this on the values sorts them (block modes)
};

class Adversary : public Oracle {
 public:
  // Settles on an array consistent with every answer so far. Later
  // queries are answered from it.
  virtual Commitment finalize() = 0;
  // Queries the adversary guarantees before e can be identified.
  virtual double forced_minimum() const = 0;
  // The query count compared against forced_minimum().
  virtual std::size_t forced_count(std::size_t total_queries) const { return total_queries; }
  // Empty when the commitment respects the disorder or lie budget.
  virtual std::string budget_violation(const Commitment& c) const = 0;
  virtual std::string name() const = 0;
};

// ---------------------------------------------------------------------------

struct LieAdversaryState {
  int c = 1;
  std::size_t k = 0;
  std::size_t phase = 0;  // depth of the current candidate root / (c+1)
  std::vector<std::size_t> phase_of_lie;
  std::size_t lies_used = 0;
};

// Only serves tree-operating algorithms; any other query order throws ContractError.
class LieAdversary : public Adversary {
 public:
  LieAdversary(Index n, std::size_t k, int c);
  Outcome answer(Index index, std::size_t ordinal) override;
  std::string kind() const override { return "lie-adversary"; }
  std::string name() const override { return "lie"; }
  Commitment finalize() override;
  double forced_minimum() const override;
  std::string budget_violation(const Commitment& c) const override;

  const LieAdversaryState& state() const { return st_; }

 private:
  enum class Mode { Await, Phase, Plain, Done };
  Outcome relative(Index i) const;
  Outcome dispatch(Index i, std::size_t ordinal);
  void decide(bool lie);
  std::optional<Node> deep_node(const Node& from, Outcome first, Outcome then) const;
  void set_range(const Node& root);

  Index n_;
  TreeNav nav_;
  LieAdversaryState st_;
  Mode mode_ = Mode::Await;
  Index lo_, hi_;
  Node range_root_;
  Node phase_root_;
  std::size_t phase_ordinal_ = 0;
  std::size_t phase_queries_ = 0;
  std::optional<Index> e_pos_;
  std::vector<char> queried_;
  std::vector<QueryRecord> log_;
  std::vector<std::size_t> lie_ordinals_;
};

// ---------------------------------------------------------------------------

struct WindowAdversaryState {
  Index l = 0, r = 0;
  int phase = 1;
  Index phase1_len = 0;
  Index phase2_budget = 0;
  Index mid = 0;
};

class WindowAdversary : public Adversary {
 public:
  WindowAdversary(Index n, Index k_sum);
  Outcome answer(Index index, std::size_t ordinal) override;
  std::string kind() const override { return "window-adversary"; }
  std::string name() const override { return "window"; }
  Commitment finalize() override;
  double forced_minimum() const override;
  std::string budget_violation(const Commitment& c) const override;

  const WindowAdversaryState& state() const { return st_; }

 private:
  std::pair<Index, Index> frontier() const;  // last '<' answer, first '>' answer
  Index rank_slot(Index x, Index a, Index b) const;
  Instance build(Index x) const;
  void commit(std::optional<Index> at);

  Index n_, k_;
  WindowAdversaryState st_;
  std::vector<char> queried_;
  std::vector<std::optional<Outcome>> ans_;
  Index count_ = 0;
  std::optional<Instance> committed_;
};

// ---------------------------------------------------------------------------

class KmaxAdversary : public Adversary {
 public:
  KmaxAdversary(Index n, Index k);
  Outcome answer(Index index, std::size_t ordinal) override;
  std::string kind() const override { return "kmax-adversary"; }
  std::string name() const override { return "kmax"; }
  Commitment finalize() override;
  double forced_minimum() const override;
  std::string budget_violation(const Commitment& c) const override;

  int phase() const { return phase_; }
  Index window_start() const { return w0_; }

 private:
  Outcome standard(Index i) const;
  Instance best_instance(const std::vector<Index>& candidates) const;
  Instance build(Index x, const std::vector<char>& large_unqueried) const;

  Index n_, k_;
  int phase_ = 0;
  Index l_, r_;
  Index w0_ = -1;
  int half_ = 0;  // 0: L, 1: R
  Index phase2_new_ = 0;
  std::vector<char> queried_;
  std::vector<std::optional<Outcome>> ans_;
  std::optional<Instance> committed_;
};

// ---------------------------------------------------------------------------

enum class HiddenMode { Ainv, Rbswap, Bswap };
std::string to_string(HiddenMode m);
HiddenMode hidden_mode_from_string(const std::string& s);

struct HiddenBlockState {
  Index n = 0;
  Index k = 0;
  Index p = 0, q = 0;
  Index ell = 0, r_count = 0;
  std::set<Index> queried;
  bool left_feasible = true, right_feasible = true;
  std::optional<Instance> committed;
};

class HiddenBlockAdversary : public Adversary {
 public:
  HiddenBlockAdversary(Index n, Index k, HiddenMode mode);
  Outcome answer(Index index, std::size_t ordinal) override;
  std::string kind() const override { return "hidden-block-adversary"; }
  std::string name() const override { return "hidden"; }
  Commitment finalize() override;
  double forced_minimum() const override;
  std::size_t forced_count(std::size_t total) const override;
  std::string budget_violation(const Commitment& c) const override;

  const HiddenBlockState& state() const { return st_; }
  std::optional<std::size_t> queries_at_commit() const { return at_commit_; }
  HiddenMode mode() const { return mode_; }

 private:
  // Smallest offset >= start whose centre-adjacent slot is unqueried.
  Index p_of(const std::set<Index>& qs, Index start = 0) const;
  Index q_of(const std::set<Index>& qs, Index start = 0) const;
  bool feasible_left(const std::set<Index>& qs, Index p) const;
  bool feasible_right(const std::set<Index>& qs, Index q) const;
  Commitment instantiate(bool left, const std::set<Index>& qs) const;
  void refresh();

  HiddenMode mode_;
  HiddenBlockState st_;
  Index left_total_ = 0, right_total_ = 0;
  std::size_t answered_ = 0;
  std::optional<std::size_t> at_commit_;
  std::optional<Commitment> commitment_;
};

// ---------------------------------------------------------------------------

// Sizes of the alternating blocks after e: beta_0 larges, alpha_1 smalls,
// beta_1 larges, ..., alpha_k smalls, beta_k larges.
struct BlockPattern {
  std::vector<Index> alphas;
  std::vector<Index> betas;
};

struct BlockInstantiation {
  Instance instance;
  std::vector<OpRecord> log;  // block swaps that sort instance.values
};

// e sits at n/2 + q (0-based) with q = sum(alphas); needs
// sum(betas) = n/2 - 2q - 1 so the layout fills exactly n positions.
BlockInstantiation block_swap_instantiation(Index n, const BlockPattern& pattern);

// ---------------------------------------------------------------------------

struct AdversarySpec {
  std::string strategy;  // lie | window | kmax | hidden
  Index n = 0;
  Index k = 0;
  int c = 1;
  HiddenMode mode = HiddenMode::Ainv;
};

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& spec);

struct DuelReport {
  std::string algorithm;
  std::string adversary;
  Index n = 0, k = 0;
  int c = 1;
  std::size_t queries = 0;
  std::size_t counted = 0;  // queries compared with the forced minimum
  double forced_min = 0;
  bool found = false;
  Index reported_index = -1;
  Index committed_pos = -1;
  std::size_t lies_used = 0;
  bool consistent = false;
  bool budget_ok = false;
  bool bound_ok = false;
  std::string detail;
  Instance committed;

  bool ok() const { return consistent && budget_ok && bound_ok; }
};

// Replays the transcript against the commitment; returns the first mismatch.
std::string check_consistency(const std::vector<QueryRecord>& transcript, const Commitment& c);

DuelReport duel(const std::string& algorithm, const AdversarySpec& spec, const AlgoParams& params);

std::string duel_csv_header();
std::string duel_csv_row(const DuelReport& r);

}  // namespace robust_search
