#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robust_search/core_model.hpp"
#include "robust_search/disorder_metrics.hpp"

namespace robust_search {

// lhs <= coefficient * rhs, or lhs == rhs when `equality` is set.
struct RelationVerdict {
  std::string id;
  std::string lhs_name, rhs_name;
  Index lhs = 0, rhs = 0;
  int coefficient = 1;
  bool equality = false;
  bool holds = true;
};

struct RelationReport {
  std::string fingerprint;  // FNV-1a of the values, hex
  Index n = 0;
  bool block_checked = false;
  std::vector<RelationVerdict> verdicts;

  bool all_hold() const;
  std::vector<RelationVerdict> violations() const;
};

std::string array_fingerprint(const std::vector<Value>& a);

// Block relations are evaluated only when n <= block_limit.
RelationReport check_relations(const std::vector<Value>& a, Index block_limit = kBruteLimit);

struct WitnessFact {
  std::string description;
  bool holds = false;
};

struct Witness {
  std::string family;
  Instance instance;
  std::vector<WitnessFact> facts;

  bool all_hold() const;
};

const std::vector<std::string>& witness_families();

// Throws std::invalid_argument on an unknown family or an n it cannot take.
Witness witness_family(const std::string& name, Index n);

struct AuditSummary {
  std::size_t trials = 0;
  std::size_t block_checked = 0;
  std::size_t relations_checked = 0;
  std::size_t violations = 0;
  std::vector<RelationReport> failing;  // first few failing reports
};

AuditSummary audit_random(std::size_t trials, Index n_max, std::uint64_t seed,
                          Index block_limit = kBruteLimit);

std::string relations_csv_header();
std::string relations_csv_rows(const RelationReport& r);

}  // namespace robust_search
