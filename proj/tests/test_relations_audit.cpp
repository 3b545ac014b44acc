#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "robust_search/relations_audit.hpp"

using namespace robust_search;

namespace {

const RelationVerdict* find(const RelationReport& r, const std::string& id) {
  for (const auto& v : r.verdicts)
    if (v.id == id) return &v;
  return nullptr;
}

Index inverted_pairs(const std::vector<Value>& a) {
  Index c = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j) c += a[i] > a[j];
  return c;
}

}  // namespace

TEST_CASE("relations on a sorted array") {
  auto r = check_relations({1, 2, 3, 4, 5});
  CHECK(r.all_hold());
  CHECK(r.block_checked);
  CHECK(r.verdicts.size() == 16);
  for (const auto& v : r.verdicts) {
    CHECK(v.lhs == 0);
    CHECK(v.rhs == 0);
  }
}

TEST_CASE("verdict values come from the metrics") {
  std::vector<Value> a = {3, 0, 4, 1, 2, 6, 5};
  auto r = check_relations(a);
  REQUIRE(r.all_hold());
  const auto* ai = find(r, "aswap=inv");
  REQUIRE(ai);
  CHECK(ai->equality);
  CHECK(ai->rhs == inverted_pairs(a));
  const auto* si = find(r, "sum<=2inv");
  REQUIRE(si);
  CHECK(si->coefficient == 2);
  CHECK(si->lhs == metric_sum(a));
  CHECK(find(r, "bmov<=2bswap"));
}

TEST_CASE("block relations are skipped above the limit") {
  std::vector<Value> a(12);
  std::iota(a.rbegin(), a.rend(), Value{0});
  auto r = check_relations(a, 8);
  CHECK_FALSE(r.block_checked);
  CHECK(r.verdicts.size() == 10);
  CHECK_FALSE(find(r, "rbswap<=swap"));
  CHECK(r.all_hold());
}

TEST_CASE("all permutations up to n = 6 satisfy every relation") {
  for (Index n = 1; n <= 6; ++n) {
    std::vector<Value> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), Value{0});
    do {
      auto r = check_relations(p);
      CHECK(r.violations().empty());
    } while (std::next_permutation(p.begin(), p.end()));
  }
}

TEST_CASE("fingerprints separate arrays") {
  CHECK(array_fingerprint({1, 2, 3}) == array_fingerprint({1, 2, 3}));
  CHECK(array_fingerprint({1, 2, 3}) != array_fingerprint({1, 3, 2}));
  CHECK(array_fingerprint({12}) != array_fingerprint({1, 2}));
}

TEST_CASE("witness families reproduce their facts") {
  for (const auto& fam : witness_families()) {
    Index n = fam == "rep-vs-rbswap" ? 16 : 8;
    auto w = witness_family(fam, n);
    CAPTURE(fam);
    CHECK(w.family == fam);
    CHECK(w.instance.n() == n);
    CHECK_FALSE(w.facts.empty());
    CHECK(w.all_hold());
  }
  CHECK(witness_families().size() == 6);
}

TEST_CASE("witness facts grow with n") {
  for (Index n : {4, 16, 64, 256}) {
    auto pf = witness_family("pairflip", n);
    CHECK(metric_max(pf.instance.values) == 1);
    CHECK(metric_ainv(pf.instance.values) == n / 2);
    auto bs = witness_family("big-swap", n);
    CHECK(metric_swap(bs.instance.values) == 1);
    CHECK(metric_max(bs.instance.values) == n - 1);
    auto hr = witness_family("half-rotate", n);
    CHECK(metric_seq(hr.instance.values) == n / 2);
    CHECK(pf.all_hold());
    CHECK(bs.all_hold());
    CHECK(hr.all_hold());
  }
}

TEST_CASE("interleave needs n/2-1 block swaps at n = 8") {
  auto w = witness_family("interleave", 8);
  CHECK(metric_ainv(w.instance.values) == 1);
  auto exact = metric_block_exact(w.instance.values, OpKind::BlockSwap, 8);
  CHECK(exact.value >= 3);
  CHECK(w.all_hold());
}

TEST_CASE("witness errors") {
  CHECK_THROWS_AS(witness_family("pairflip", 7), std::invalid_argument);
  CHECK_THROWS_AS(witness_family("rep-vs-rbswap", 8), std::invalid_argument);
  CHECK_THROWS_AS(witness_family("nope", 8), std::invalid_argument);
}

TEST_CASE("random audit finds no violations") {
  auto s = audit_random(2000, 64, 9);
  CHECK(s.trials == 2000);
  CHECK(s.violations == 0);
  CHECK(s.failing.empty());
  CHECK(s.block_checked >= 500);
  CHECK(s.relations_checked >= 20000);
  CHECK_THROWS(audit_random(0, 8, 1));
}

TEST_CASE("audit is deterministic in its seed") {
  auto a = audit_random(300, 32, 5), b = audit_random(300, 32, 5);
  CHECK(a.relations_checked == b.relations_checked);
  CHECK(a.block_checked == b.block_checked);
}

TEST_CASE("relations csv") {
  auto r = check_relations({2, 1, 3});
  auto rows = relations_csv_rows(r);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == static_cast<long>(r.verdicts.size()));
  auto h = relations_csv_header();
  auto first = rows.substr(0, rows.find('\n'));
  CHECK(std::count(h.begin(), h.end(), ',') == std::count(first.begin(), first.end(), ','));
}
