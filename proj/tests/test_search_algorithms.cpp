#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robust_search/disorder_metrics.hpp"
#include "robust_search/search_algorithms.hpp"

using namespace robust_search;

namespace {

std::vector<Value> iota(Index n) {
  std::vector<Value> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), Value{0});
  return v;
}

Instance present(std::vector<Value> v, Value e) { return make_instance(std::move(v), e, {true, false}); }

struct Run {
  SearchReport report;
  std::size_t distinct = 0;
};

template <class F>
Run run_truthful(const Instance& inst, F&& algo) {
  TruthfulOracle o(inst);
  QuerySession s(inst, o);
  Run r{algo(s), 0};
  r.distinct = s.distinct_queried();
  CHECK(r.report.queries == s.count());
  return r;
}

std::vector<std::size_t> lie_plan(Rng& rng, Index k, double horizon) {
  std::vector<std::size_t> plan;
  for (Index j = 0; j < k; ++j) plan.push_back(static_cast<std::size_t>(rng.uniform(0, static_cast<Index>(horizon))));
  return plan;
}

}  // namespace

TEST_CASE("log_term") {
  CHECK(log_term(1) == 1);
  CHECK(log_term(2) == 1);
  CHECK(log_term(3) == 2);
  CHECK(log_term(1 << 16) == 16);
}

TEST_CASE("binary search") {
  auto inst = present(iota(8), 5);
  auto r = run_truthful(inst, [](QueryPort& p) { return binary_search(p); });
  CHECK(r.report.found());
  CHECK(r.report.index == 5);
  CHECK(r.report.queries <= 4);

  std::vector<Value> scaled;
  for (Value v : iota(8)) scaled.push_back(2 * v);
  auto missing = make_instance(scaled, 7, {});
  auto m = run_truthful(missing, [](QueryPort& p) { return binary_search(p); });
  CHECK(m.report.result == ResultKind::NotPresent);

  auto messy = present({1, 0, 3, 2}, 3);
  TruthfulOracle o(messy);
  QuerySession s(messy, o);
  auto b = binary_search_straddle(s);
  if (!b.report.found()) {
    CHECK(b.straddle_hi == b.straddle_lo + 1);
    CHECK(std::abs(b.straddle_hi - 2) <= 1);
  }
}

TEST_CASE("lies_search_basic examples") {
  auto inst = present(iota(8), 5);
  auto r = run_truthful(inst, [](QueryPort& p) { return lies_search_basic(p); });
  CHECK(r.report.index == 5);
  CHECK(r.report.queries <= 6);

  auto one = present({42}, 42);
  auto r1 = run_truthful(one, [](QueryPort& p) { return lies_search_basic(p); });
  CHECK(r1.report.index == 0);
  CHECK(r1.report.queries == 1);

  auto big = gen_sorted_instance(1024, 3);
  ScriptedLiesOracle liar(big, {0, 4, 9}, 3);
  QuerySession s(big, liar);
  auto r3 = lies_search_basic(s);
  CHECK(r3.found());
  CHECK(r3.index == *big.pos);
  CHECK(r3.queries <= 32);
}

TEST_CASE("lies_search_basic meets its bound under random lie plans") {
  Rng rng(12);
  for (int t = 0; t < 1500; ++t) {
    Index n = rng.uniform(1, 600);
    Index k = rng.uniform(0, 5);
    auto inst = gen_sorted_instance(n, rng.next());
    ScriptedLiesOracle liar(inst, lie_plan(rng, k, bound_lies_basic(n, static_cast<double>(k))), static_cast<std::size_t>(k));
    QuerySession s(inst, liar);
    auto r = lies_search_basic(s);
    REQUIRE(r.found());
    CHECK(r.index == *inst.pos);
    CHECK(static_cast<double>(r.queries) <= bound_lies_basic(n, static_cast<double>(liar.lies_told().size())));
  }
}

TEST_CASE("lies_search_basic potential drops by at least the queries spent") {
  Rng rng(77);
  for (int t = 0; t < 400; ++t) {
    Index n = rng.uniform(2, 2000);
    Index k = rng.uniform(0, 6);
    auto inst = gen_sorted_instance(n, rng.next());
    ScriptedLiesOracle liar(inst, lie_plan(rng, k, bound_lies_basic(n, static_cast<double>(k))), static_cast<std::size_t>(k));
    QuerySession s(inst, liar);
    TreeNav nav(n);
    Node target = nav.node_of(*inst.pos);
    bool have_prev = false;
    long prev_phi = 0;
    std::size_t prev_q = 0;
    lies_search_basic(s, [&](const Node& i, std::size_t q) {
      long remaining = k - static_cast<long>(liar.lies_told().size());
      long phi = 2 * static_cast<long>(nav.distance(i, target)) + 4 * remaining;
      if (have_prev) CHECK(prev_phi - phi >= static_cast<long>(q - prev_q));
      have_prev = true;
      prev_phi = phi;
      prev_q = q;
    });
  }
}

TEST_CASE("lies_search_tunable examples") {
  auto inst = gen_sorted_instance(256, 5);
  auto r = run_truthful(inst, [](QueryPort& p) { return lies_search_tunable(p, {1.0, {}}); });
  CHECK(r.report.index == *inst.pos);
  CHECK(r.report.queries <= 16);

  auto big = gen_sorted_instance(1 << 16, 8);
  ScriptedLiesOracle liar(big, {1, 3, 10, 17, 30}, 5);
  QuerySession s(big, liar);
  auto r5 = lies_search_tunable(s, {4.0, {}});
  CHECK(r5.index == *big.pos);
  CHECK(r5.queries <= 70);

  auto one = present({7}, 7);
  CHECK(run_truthful(one, [](QueryPort& p) { return lies_search_tunable(p, {2.0, {}}); }).report.queries == 1);

  TruthfulOracle o(inst);
  QuerySession bad(inst, o);
  CHECK_THROWS_AS(lies_search_tunable(bad, {0.5, {}}), std::invalid_argument);
}

TEST_CASE("lies_search_tunable meets its bound and never advances against its guard") {
  Rng rng(31);
  for (int t = 0; t < 1500; ++t) {
    double c = std::vector<double>{1.0, 2.0, 4.0, 8.0}[static_cast<std::size_t>(t % 4)];
    // n >= 2^c here; smaller trees are covered below.
    Index n = rng.uniform(Index{1} << static_cast<int>(c), 1200);
    Index k = rng.uniform(0, 5);
    auto inst = gen_sorted_instance(n, rng.next());
    ScriptedLiesOracle liar(inst, lie_plan(rng, k, bound_lies_tunable(n, static_cast<double>(k), c)),
                            static_cast<std::size_t>(k));
    QuerySession s(inst, liar);
    auto r = lies_search_tunable(s, {c, {}}, [&](const Node&, const std::optional<Node>& a, std::size_t delta, std::size_t dist) {
      if (!a) return;
      double cd = c * static_cast<double>(delta);
      CHECK_FALSE((cd > 0 && cd < static_cast<double>(dist) + 1));
    });
    REQUIRE(r.found());
    CHECK(r.index == *inst.pos);
    CHECK(static_cast<double>(r.queries) <=
          bound_lies_tunable(n, static_cast<double>(liar.lies_told().size()), c) + 1e-9);
  }
}

TEST_CASE("lies_search_tunable on tiny trees and fractional c") {
  // n = 2^d with e at the last index sits at depth d: d+1 queries, above
  // (1+1/c)d whenever d < c.
  for (int d = 1; d < 8; ++d) {
    Index n = Index{1} << d;
    auto inst = present(iota(n), n - 1);
    auto r = run_truthful(inst, [](QueryPort& p) { return lies_search_tunable(p, {8.0, {}}); });
    CHECK(r.report.queries == static_cast<std::size_t>(d + 1));
    CHECK(static_cast<double>(r.report.queries) > bound_lies_tunable(n, 0, 8.0));
  }
  // With c = 1.5 an alternating path needs two queries per level.
  std::size_t worst = 0;
  for (Index p = 0; p < 682; ++p) {
    auto inst = present(iota(682), p);
    worst = std::max(worst, run_truthful(inst, [](QueryPort& q) { return lies_search_tunable(q, {1.5, {}}); }).report.queries);
  }
  CHECK(static_cast<double>(worst) > bound_lies_tunable(682, 0, 1.5));
}

TEST_CASE("faults_wrapper") {
  auto inst = gen_sorted_instance(300, 4);
  auto plain = run_truthful(inst, [](QueryPort& p) { return lies_search_tunable(p, {2.0, {}}); });
  auto wrapped = run_truthful(inst, [](QueryPort& p) {
    return faults_wrapper(p, [](QueryPort& q) { return lies_search_tunable(q, {2.0, {}}); });
  });
  CHECK(wrapped.report.index == plain.report.index);
  CHECK(wrapped.report.queries == plain.report.queries);

  Rng rng(2);
  for (int t = 0; t < 300; ++t) {
    auto sorted64 = gen_sorted_instance(64, rng.next());
    Index f = rng.uniform(0, 63);
    if (f == *sorted64.pos) continue;
    FaultSetOracle o(sorted64, {{f, opposite(sorted64.truth(f))}}, 1);
    QuerySession s(sorted64, o);
    auto r = faults_wrapper(s, [](QueryPort& q) { return lies_search_tunable(q, {2.0, {}}); });
    CHECK(r.index == *sorted64.pos);
    CHECK(r.queries <= 15);
    CHECK(s.distinct_queried() == s.count());
  }
}

TEST_CASE("faults_wrapper redirects a repeat to the nearest unqueried index") {
  auto inst = present(iota(10), 9);
  TruthfulOracle o(inst);
  QuerySession s(inst, o);
  faults_wrapper(s, [](QueryPort& q) {
    q.query(4);
    q.query(4);
    q.query(4);
    return SearchReport{};
  });
  REQUIRE(s.transcript().size() == 3);
  CHECK(s.transcript()[1].index == 3);
  CHECK(s.transcript()[2].index == 5);
}

TEST_CASE("displacement_search") {
  auto sorted = gen_sorted_instance(500, 6);
  auto a = run_truthful(sorted, [](QueryPort& p) { return displacement_search(p); });
  auto b = run_truthful(sorted, [](QueryPort& p) { return binary_search(p); });
  CHECK(a.report.queries == b.report.queries);

  auto pf = present({1, 0, 3, 2, 5, 4, 7, 6}, 4);
  auto r = run_truthful(pf, [](QueryPort& p) { return displacement_search(p); });
  CHECK(r.report.index == 5);
  CHECK(static_cast<double>(r.report.queries) <= std::min(bound_disp_sum(8, 8), 8.0));

  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    Index n = 1 + static_cast<Index>(seed * 37 % 3000);
    auto inst = gen_bounded_displacement(n, static_cast<Index>(seed % 9) % n, seed);
    auto rr = run_truthful(inst, [](QueryPort& p) { return displacement_search(p); });
    CHECK(rr.report.index == *inst.pos);
    CHECK(static_cast<double>(rr.report.queries) <=
          std::min(bound_disp_sum(n, static_cast<double>(metric_sum(inst.values))), static_cast<double>(n)));
  }
}

TEST_CASE("maxdisp_search") {
  auto small = present({1, 0, 3, 2}, 0);
  auto r = run_truthful(small, [](QueryPort& p) { return maxdisp_search(p); });
  CHECK(r.report.index == 1);

  auto sorted = gen_sorted_instance(1000, 1);
  auto a = run_truthful(sorted, [](QueryPort& p) { return maxdisp_search(p); });
  auto b = run_truthful(sorted, [](QueryPort& p) { return binary_search(p); });
  CHECK(a.report.queries == b.report.queries);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto inst = gen_bounded_displacement(1 << 14, 16, seed);
    auto rr = run_truthful(inst, [](QueryPort& p) { return maxdisp_search(p); });
    CHECK(rr.report.index == *inst.pos);
    CHECK(static_cast<double>(rr.report.queries) <= bound_disp_max(1 << 14, static_cast<double>(metric_max(inst.values))));
  }
}

TEST_CASE("maxdisp_search stays inside the displacement window") {
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    Index n = 2 + static_cast<Index>(seed * 53 % 4000);
    auto inst = gen_bounded_displacement(n, static_cast<Index>(seed % 12) % n, seed);
    Index k = metric_max(inst.values);
    TruthfulOracle o(inst);
    QuerySession s(inst, o);
    MaxDispTrace trace;
    auto r = maxdisp_search(s, &trace);
    CHECK(r.index == *inst.pos);
    for (Index j : trace.window_queries) {
      CHECK(j >= trace.straddle_lo - 2 * k);
      CHECK(j <= trace.straddle_lo + 2 * k + 1);
    }
  }
}

TEST_CASE("grid_search") {
  auto sorted = gen_sorted_instance(777, 2);
  auto r = run_truthful(sorted, [](QueryPort& p) { return grid_search(p, 0, 5); });
  CHECK(r.report.index == *sorted.pos);
  CHECK_THROWS(run_truthful(sorted, [](QueryPort& p) { return grid_search(p, 1, 0); }));

  Index n = 1 << 16, k = 16;
  auto inst = gen_ainv_instance(n, k, 9);
  REQUIRE(metric_ainv(inst.values) == k);
  GridSummary g;
  auto rr = run_truthful(inst, [&](QueryPort& p) { return grid_search(p, k, ainv_block_size(n, k), &g); });
  CHECK(rr.report.index == *inst.pos);
  CHECK(static_cast<double>(rr.report.queries) <= bound_grid(n, k, g));

  // e sits between 2i and 2i+2 at its rank, so pos=rank would hold if present.
  std::vector<Value> even;
  for (Value v : iota(300)) even.push_back(2 * v);
  auto missing = make_instance(even, 301, {});
  auto m = run_truthful(missing, [](QueryPort& p) { return grid_search(p, 1, 8); });
  CHECK(m.report.result == ResultKind::NotPresent);
}

TEST_CASE("grid refinement leaves no interior >< block") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Index n = 200 + static_cast<Index>(seed * 97 % 5000);
    Index k = static_cast<Index>(seed % 20);
    auto inst = gen_ainv_instance(n, k, seed);
    GridSummary g;
    TruthfulOracle o(inst);
    QuerySession s(inst, o);
    auto r = ainv_search(s, metric_ainv(inst.values), &g);
    CHECK(r.index == *inst.pos);
    if (!g.refined) continue;
    for (std::size_t t = 0; t + 1 < g.grid.size(); ++t) {
      Index a = g.grid[t], b = g.grid[t + 1];
      bool inverted = g.outcome.at(a) == Outcome::Greater && g.outcome.at(b) == Outcome::Less;
      CHECK_FALSE((inverted && b - a > 1));
    }
  }
}

TEST_CASE("ainv_search with a larger k stays correct and uses a finer grid") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Index n = 4096, k = static_cast<Index>(seed % 10);
    auto inst = gen_ainv_instance(n, k, seed);
    Index prev_p = n;
    for (Index kk = k; kk <= k + 40; kk += 8) {
      auto r = run_truthful(inst, [&](QueryPort& p) { return ainv_search(p, kk); });
      CHECK(r.report.index == *inst.pos);
      Index p = ainv_block_size(n, kk);
      CHECK(p <= prev_p);
      prev_p = p;
    }
  }
}

TEST_CASE("bmov_search") {
  Rng rng(4);
  auto sorted = gen_sorted_instance(1000, 3);
  CHECK(run_truthful(sorted, [](QueryPort& p) { return bmov_search(p, 0); }).report.index == *sorted.pos);

  for (int t = 0; t < 10; ++t) {
    Index n = t < 5 ? (1 << 14) : (1 << 16);
    std::size_t moves = t < 5 ? 1 : 2;
    auto g = gen_random_ops(n, OpKind::BlockMove, moves, rng.next());
    auto inst = with_rank_target(g.instance.values, rng);
    REQUIRE(inst.has_value());
    GridSummary sum;
    auto r = run_truthful(*inst, [&](QueryPort& p) { return bmov_search(p, static_cast<Index>(moves), &sum); });
    CHECK(r.report.index == *inst->pos);
    CHECK(static_cast<double>(r.report.queries) <= bound_grid(n, sum.m, sum));
  }
}

TEST_CASE("edit_search") {
  auto sorted = gen_sorted_instance(4096, 3);
  CHECK(run_truthful(sorted, [](QueryPort& p) { return edit_search(p, {2.0, {}}); }).report.queries <=
        static_cast<std::size_t>(bound_lies_tunable(4096, 0, 2.0)));

  Rng rng(19);
  for (int t = 0; t < 100; ++t) {
    auto g = gen_random_ops(1 << 12, t % 2 ? OpKind::Swap : OpKind::Move, t % 2 ? 3 : 2, rng.next());
    auto inst = with_rank_target(g.instance.values, rng);
    REQUIRE(inst.has_value());
    auto r = run_truthful(*inst, [](QueryPort& p) { return edit_search(p, {2.0, {}}); });
    CHECK(r.report.index == *inst->pos);
    double b = bound_edit(1 << 12, 2.0, metric_rep(inst->values), metric_swap(inst->values), metric_mov(inst->values));
    CHECK(static_cast<double>(r.report.queries) <= b);
    if (t % 2) CHECK(b <= 90.0);
  }
}

TEST_CASE("linear_search") {
  CHECK(run_truthful(present(iota(9), 0), [](QueryPort& p) { return linear_search(p); }).report.queries == 1);
  CHECK(run_truthful(present(iota(9), 8), [](QueryPort& p) { return linear_search(p); }).report.queries == 9);
  auto missing = make_instance(iota(9), 100, {});
  auto r = run_truthful(missing, [](QueryPort& p) { return linear_search(p); });
  CHECK(r.report.queries == 9);
  CHECK(r.report.result == ResultKind::NotPresent);
}

TEST_CASE("known_k_wrapper") {
  auto inst = gen_sorted_instance(1024, 7);
  SearchFn basic = [](QueryPort& p) { return lies_search_basic(p); };
  auto plain = run_truthful(inst, basic);
  auto wrapped = run_truthful(inst, [&](QueryPort& p) { return known_k_wrapper(p, basic, 20); });
  CHECK(wrapped.report.index == plain.report.index);
  CHECK(wrapped.report.queries == plain.report.queries);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto missing = gen_sorted_instance(1024, seed, true);
    ScriptedLiesOracle liar(missing, {seed % 7}, 1);
    QuerySession s(missing, liar);
    Index m = 2 * 10 + 4;
    auto r = known_k_wrapper(s, basic, m);
    CHECK(r.result == ResultKind::NotPresent);
    CHECK(r.queries <= static_cast<std::size_t>(m));
  }

  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    auto pres = gen_sorted_instance(1024, rng.next());
    ScriptedLiesOracle liar(pres, lie_plan(rng, 2, 24), 2);
    QuerySession s(pres, liar);
    auto r = known_k_wrapper(s, basic, static_cast<Index>(bound_lies_basic(1024, 2)));
    CHECK(r.found());
    CHECK(r.index == *pres.pos);
  }
}

TEST_CASE("run_algorithm dispatch") {
  auto inst = gen_sorted_instance(128, 3);
  for (const auto& id : algorithm_ids()) {
    TruthfulOracle o(inst);
    QuerySession s(inst, o);
    AlgoParams params;
    params.k = 1;
    auto r = run_algorithm(id, s, params);
    CHECK(r.index == *inst.pos);
    CHECK(r.queries <= 128);
  }
  TruthfulOracle o(inst);
  QuerySession s(inst, o);
  CHECK_THROWS_AS(run_algorithm("nope", s, AlgoParams{}), std::invalid_argument);
}
