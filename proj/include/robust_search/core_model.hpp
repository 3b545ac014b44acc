#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace robust_search {

using Value = std::int64_t;
using Index = std::int64_t;

enum class Outcome : char { Less = '<', Greater = '>', Equal = '=' };

char to_char(Outcome o);
Outcome outcome_from_char(char c);
// Swaps LESS and GREATER; EQUAL maps to itself.
Outcome opposite(Outcome o);

struct GuaranteeFlags {
  bool present = false;
  bool pos_eq_rank = false;
};

class InstanceError : public std::runtime_error {
 public:
  InstanceError(const std::string& what, Index offending);
  Index offending_index() const { return offending_; }

 private:
  Index offending_;
};

// Thrown when a caller breaks an operation's precondition.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Instance {
  std::vector<Value> values;
  Value target = 0;
  GuaranteeFlags flags;
  std::optional<Index> pos;  // set when the target occurs exactly once
  Index rank = 0;            // |{j : values[j] < target}|

  Index n() const { return static_cast<Index>(values.size()); }
  Outcome truth(Index i) const;
};

Instance make_instance(std::vector<Value> values, Value target, GuaranteeFlags flags);

// ---------------------------------------------------------------------------
// Oracles

class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual Outcome answer(Index index, std::size_t ordinal) = 0;
  virtual std::string kind() const = 0;
};

class TruthfulOracle : public Oracle {
 public:
  explicit TruthfulOracle(const Instance& inst) : inst_(inst) {}
  Outcome answer(Index index, std::size_t ordinal) override;
  std::string kind() const override { return "truthful"; }

 private:
  const Instance& inst_;
};

// Inverts the truthful outcome at the planned query ordinals (0-based).
// A planned ordinal that lands on a query to pos(e) is skipped.
class ScriptedLiesOracle : public Oracle {
 public:
  ScriptedLiesOracle(const Instance& inst, std::vector<std::size_t> plan, std::size_t budget);
  Outcome answer(Index index, std::size_t ordinal) override;
  std::string kind() const override { return "scripted-lies"; }

  const std::vector<std::size_t>& plan() const { return plan_; }
  const std::vector<std::size_t>& lies_told() const { return told_; }

 private:
  const Instance& inst_;
  std::vector<std::size_t> plan_;
  std::vector<std::size_t> told_;
};

class FaultSetOracle : public Oracle {
 public:
  FaultSetOracle(const Instance& inst, std::map<Index, Outcome> faults, std::size_t budget);
  Outcome answer(Index index, std::size_t ordinal) override;
  std::string kind() const override { return "fault-set"; }

  const std::map<Index, Outcome>& faults() const { return faults_; }

 private:
  const Instance& inst_;
  std::map<Index, Outcome> faults_;
};

// ---------------------------------------------------------------------------
// Query accounting

struct QueryRecord {
  std::size_t ordinal = 0;
  Index index = 0;
  Outcome outcome = Outcome::Equal;
};

// Anything an algorithm can ask. Sessions and the search wrappers implement it.
class QueryPort {
 public:
  virtual ~QueryPort() = default;
  virtual Index size() const = 0;
  virtual Outcome query(Index index) = 0;
  virtual std::size_t count() const = 0;
};

class QuerySession : public QueryPort {
 public:
  QuerySession(const Instance& inst, Oracle& oracle);
  // Adversary-driven sessions have no instance until the adversary commits.
  QuerySession(Index n, Oracle& oracle);

  Index size() const override { return n_; }
  Outcome query(Index index) override;
  std::size_t count() const override { return transcript_.size(); }

  const Instance* instance() const { return inst_; }
  Oracle& oracle() { return oracle_; }
  const std::vector<QueryRecord>& transcript() const { return transcript_; }
  bool was_queried(Index i) const { return queried_[static_cast<std::size_t>(i)] != 0; }
  std::size_t distinct_queried() const { return distinct_; }
  // Queries past the limit throw ContractError; 0 means unlimited.
  void set_query_limit(std::size_t limit) { limit_ = limit; }

 private:
  const Instance* inst_ = nullptr;
  Oracle& oracle_;
  Index n_ = 0;
  std::vector<QueryRecord> transcript_;
  std::vector<char> queried_;
  std::size_t distinct_ = 0;
  std::size_t limit_ = 0;
};

enum class ResultKind { Found, NotPresent, BudgetExhausted };

struct SearchReport {
  ResultKind result = ResultKind::NotPresent;
  Index index = -1;
  std::size_t queries = 0;
  std::optional<double> bound;
  std::optional<bool> bound_ok;

  bool found() const { return result == ResultKind::Found; }
};

std::string to_string(ResultKind r);

// Applies min(f, n) and fills bound/bound_ok.
void attach_bound(SearchReport& report, double formula, Index n);

// ---------------------------------------------------------------------------
// Randomness

std::uint64_t splitmix64(std::uint64_t x);
// Stream seed for (experiment seed, trial index); independent of run order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  // Uniform integer in [lo, hi]; portable across standard libraries.
  std::int64_t uniform(std::int64_t lo, std::int64_t hi);
  double unit();
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

// ---------------------------------------------------------------------------
// Array operations and generators

enum class OpKind {
  Swap,
  Move,
  AdjacentSwap,
  Replacement,
  BlockMove,
  BlockSwap,
  RestrictedBlockSwap,
};

std::string to_string(OpKind k);
OpKind op_kind_from_string(std::string_view s);

// Block operations exchange [a, b] and [c, d] (inclusive, b < c).
// Swap/AdjacentSwap exchange a and b. Move takes the element at a and
// reinserts it so that it ends at index b. Replacement writes value at a.
struct OpRecord {
  OpKind kind = OpKind::Swap;
  Index a = 0, b = 0, c = 0, d = 0;
  Value value = 0;
};

void apply_op(std::vector<Value>& values, const OpRecord& op);
// Block swap that undoes `op` when applied to its result.
OpRecord inverse_block_op(const OpRecord& op);

struct GeneratedInstance {
  Instance instance;
  std::vector<OpRecord> log;
};

Instance gen_bounded_displacement(Index n, Index k, std::uint64_t seed);
GeneratedInstance gen_random_ops(Index n, OpKind kind, std::size_t count, std::uint64_t seed);

// Picks a target uniformly among unique values that sit at their rank.
// Returns nullopt when no such value exists.
std::optional<Instance> with_rank_target(std::vector<Value> values, Rng& rng);

// pos(e)=rank(e) instance with exactly `k` adjacent inversions (k >= 0,
// clipped when n is too small), built from hidden runs on both sides of e.
Instance gen_ainv_instance(Index n, Index k, std::uint64_t seed);

// Sorted [0, 2, 4, ...] with the target drawn uniformly; odd targets when absent.
Instance gen_sorted_instance(Index n, std::uint64_t seed, bool absent = false);

// ---------------------------------------------------------------------------
// Serialization

std::string format_instance(const Instance& inst);
Instance parse_instance(std::string_view line);
std::string format_transcript(const std::vector<QueryRecord>& t);
std::vector<QueryRecord> parse_transcript(std::string_view csv);

}  // namespace robust_search
