#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "robust_search/core_model.hpp"
#include "robust_search/disorder_metrics.hpp"

using namespace robust_search;

namespace {
GuaranteeFlags present() { return {true, false}; }
GuaranteeFlags present_rank() { return {true, true}; }
}  // namespace

TEST_CASE("make_instance on a sorted array") {
  auto inst = make_instance({1, 2, 3, 4}, 3, present_rank());
  CHECK(inst.pos == 2);
  CHECK(inst.rank == 2);
  CHECK(inst.n() == 4);
}

TEST_CASE("make_instance counts smaller elements for rank") {
  auto inst = make_instance({2, 1, 4, 3}, 4, present());
  CHECK(inst.pos == 2);
  CHECK(inst.rank == 3);
  CHECK_THROWS_AS(make_instance({2, 1, 4, 3}, 4, present_rank()), InstanceError);
}

TEST_CASE("make_instance rejects a missing or repeated target") {
  CHECK_THROWS_AS(make_instance({1, 2, 4}, 3, present()), InstanceError);
  try {
    make_instance({5, 3, 3}, 3, present());
    FAIL("expected InstanceError");
  } catch (const InstanceError& e) {
    CHECK(e.offending_index() == 2);
  }
  CHECK_THROWS_AS(make_instance({}, 0, {}), InstanceError);
  auto loose = make_instance({1, 2, 4}, 3, {});
  CHECK_FALSE(loose.pos.has_value());
  CHECK(loose.rank == 2);
}

TEST_CASE("truthful oracle") {
  auto inst = make_instance({1, 2, 3}, 2, present());
  TruthfulOracle o(inst);
  QuerySession s(inst, o);
  CHECK(s.query(0) == Outcome::Less);
  CHECK(s.query(2) == Outcome::Greater);
  CHECK(s.query(1) == Outcome::Equal);
  CHECK(s.count() == 3);
  CHECK(s.distinct_queried() == 3);
  CHECK_THROWS_AS(s.query(3), std::out_of_range);
  CHECK_THROWS_AS(s.query(-1), std::out_of_range);
}

TEST_CASE("fault set answers the same wrong outcome every time") {
  auto inst = make_instance({1, 2, 3}, 2, present());
  FaultSetOracle o(inst, {{0, Outcome::Greater}}, 1);
  QuerySession s(inst, o);
  for (int r = 0; r < 5; ++r) CHECK(s.query(0) == Outcome::Greater);
  CHECK(s.query(2) == Outcome::Greater);
  CHECK(s.count() == 6);
  CHECK(s.distinct_queried() == 2);
}

TEST_CASE("fault set validation") {
  auto inst = make_instance({1, 2, 3}, 2, present());
  CHECK_THROWS_AS(FaultSetOracle(inst, {{1, Outcome::Less}}, 1), InstanceError);
  CHECK_THROWS_AS(FaultSetOracle(inst, {{0, Outcome::Less}}, 1), InstanceError);
  CHECK_THROWS_AS(FaultSetOracle(inst, {{0, Outcome::Equal}}, 1), InstanceError);
  CHECK_THROWS_AS(FaultSetOracle(inst, {{0, Outcome::Greater}, {2, Outcome::Less}}, 1), std::invalid_argument);
}

TEST_CASE("scripted lies flip exactly the planned ordinals and never '='") {
  auto inst = gen_sorted_instance(64, 9);
  ScriptedLiesOracle liar(inst, {1, 3, 4}, 3);
  TruthfulOracle truth(inst);
  QuerySession s(inst, liar);
  std::vector<Index> seq = {10, 20, *inst.pos, 30, 40, 50};
  for (std::size_t j = 0; j < seq.size(); ++j) {
    Outcome got = s.query(seq[j]);
    Outcome want = truth.answer(seq[j], j);
    bool planned = j == 1 || j == 3 || j == 4;
    if (seq[j] == *inst.pos) CHECK(got == Outcome::Equal);
    else CHECK((got != want) == planned);
  }
  CHECK(liar.lies_told() == std::vector<std::size_t>{1, 3, 4});
  CHECK_THROWS_AS(ScriptedLiesOracle(inst, {0, 1}, 1), std::invalid_argument);
}

TEST_CASE("a planned lie on the target query is skipped") {
  auto inst = make_instance({0, 2, 4, 6}, 4, present());
  ScriptedLiesOracle liar(inst, {0}, 1);
  QuerySession s(inst, liar);
  CHECK(s.query(2) == Outcome::Equal);
  CHECK(liar.lies_told().empty());
}

TEST_CASE("transcripts replay to the same outcomes") {
  auto inst = gen_bounded_displacement(32, 3, 5);
  Rng rng(11);
  std::vector<Index> idx;
  for (int j = 0; j < 40; ++j) idx.push_back(rng.uniform(0, 31));
  auto run = [&] {
    ScriptedLiesOracle o(inst, {2, 7, 19}, 3);
    QuerySession s(inst, o);
    for (Index i : idx) s.query(i);
    return s.transcript();
  };
  auto a = run(), b = run();
  REQUIRE(a.size() == idx.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    CHECK(a[j].ordinal == j);
    CHECK(a[j].index == b[j].index);
    CHECK(a[j].outcome == b[j].outcome);
  }
  auto text = format_transcript(a);
  auto back = parse_transcript(text);
  REQUIRE(back.size() == a.size());
  for (std::size_t j = 0; j < a.size(); ++j) CHECK(back[j].outcome == a[j].outcome);
  CHECK_THROWS(parse_transcript("1,2"));
}

TEST_CASE("instance text format round-trips") {
  auto inst = make_instance({3, -1, 7, 5}, 7, present());
  auto back = parse_instance(format_instance(inst));
  CHECK(back.values == inst.values);
  CHECK(back.target == 7);
  CHECK(back.pos == 2);
  CHECK(back.flags.present);
  CHECK_FALSE(back.flags.pos_eq_rank);
}

TEST_CASE("seed derivation is a pure function of (seed, stream)") {
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  CHECK(derive_seed(1, 2) != derive_seed(2, 2));
  Rng a(derive_seed(5, 0)), b(derive_seed(5, 0));
  for (int i = 0; i < 10; ++i) CHECK(a.uniform(0, 100) == b.uniform(0, 100));
  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    auto v = r.uniform(-3, 4);
    CHECK(v >= -3);
    CHECK(v <= 4);
  }
}

TEST_CASE("gen_bounded_displacement") {
  auto zero = gen_bounded_displacement(8, 0, 123);
  std::vector<Value> sorted(8);
  for (int i = 0; i < 8; ++i) sorted[i] = i;
  CHECK(zero.values == sorted);

  auto any = gen_bounded_displacement(4, 3, 77);
  auto perm = any.values;
  std::sort(perm.begin(), perm.end());
  CHECK(perm == std::vector<Value>{0, 1, 2, 3});

  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    Index n = 1 + static_cast<Index>(seed % 60);
    Index k = static_cast<Index>(seed % 7) % n;
    auto inst = gen_bounded_displacement(n, k, seed);
    CHECK(metric_max(inst.values) <= k);
    CHECK(inst.pos.has_value());
  }
  CHECK_THROWS_AS(gen_bounded_displacement(4, 4, 1), std::invalid_argument);
}

TEST_CASE("gen_random_ops with zero operations is sorted") {
  auto g = gen_random_ops(8, OpKind::Swap, 0, 4);
  CHECK(std::is_sorted(g.instance.values.begin(), g.instance.values.end()));
  CHECK(g.log.empty());
}

TEST_CASE("gen_random_ops stays within its operation budget") {
  const OpKind cheap[] = {OpKind::Swap, OpKind::Move, OpKind::AdjacentSwap, OpKind::Replacement};
  for (std::uint64_t seed = 0; seed < 200; ++seed)
    for (OpKind kind : cheap) {
      Index n = 2 + static_cast<Index>(seed % 7);
      auto count = static_cast<std::size_t>(seed % 4);
      auto g = gen_random_ops(n, kind, count, seed);
      CHECK(g.log.size() == count);
      CHECK(brute_metric(g.instance.values, kind) <= static_cast<Index>(count));
    }
  const OpKind block[] = {OpKind::BlockMove, OpKind::BlockSwap, OpKind::RestrictedBlockSwap};
  for (std::uint64_t seed = 0; seed < 60; ++seed)
    for (OpKind kind : block) {
      auto count = static_cast<std::size_t>(seed % 3);
      auto g = gen_random_ops(8, kind, count, seed);
      auto r = metric_block_exact(g.instance.values, kind, static_cast<Index>(count));
      CHECK_FALSE(r.exceeds);
    }
  auto one = gen_random_ops(8, OpKind::BlockMove, 1, 42);
  CHECK(metric_block_exact(one.instance.values, OpKind::BlockMove, 1).value <= 1);
  auto two = gen_random_ops(6, OpKind::Swap, 2, 42);
  CHECK(metric_swap(two.instance.values) <= 2);
}

TEST_CASE("apply_op and inverse_block_op") {
  std::vector<Value> v = {0, 1, 2, 3, 4, 5, 6};
  OpRecord op{OpKind::BlockSwap, 0, 1, 4, 6, 0};
  apply_op(v, op);
  CHECK(v == std::vector<Value>{4, 5, 6, 2, 3, 0, 1});
  apply_op(v, inverse_block_op(op));
  CHECK(v == std::vector<Value>{0, 1, 2, 3, 4, 5, 6});

  OpRecord mv{OpKind::Move, 0, 3, 0, 0, 0};
  apply_op(v, mv);
  CHECK(v == std::vector<Value>{1, 2, 3, 0, 4, 5, 6});
  CHECK_THROWS_AS(apply_op(v, OpRecord{OpKind::BlockSwap, 2, 1, 4, 5, 0}), std::out_of_range);
}

TEST_CASE("gen_ainv_instance has pos(e)=rank(e) and the requested adjacent inversions") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Index n = 64 + static_cast<Index>(seed);
    Index k = static_cast<Index>(seed % 9);
    auto inst = gen_ainv_instance(n, k, seed);
    REQUIRE(inst.pos.has_value());
    CHECK(*inst.pos == inst.rank);
    CHECK(metric_ainv(inst.values) == k);
  }
}

TEST_CASE("attach_bound caps at n") {
  SearchReport r;
  r.queries = 9;
  attach_bound(r, 100.0, 9);
  CHECK(*r.bound == doctest::Approx(9.0));
  CHECK(*r.bound_ok);
  r.queries = 10;
  attach_bound(r, 4.0, 50);
  CHECK_FALSE(*r.bound_ok);
}

TEST_CASE("outcome characters") {
  CHECK(outcome_from_char('<') == Outcome::Less);
  CHECK(to_char(Outcome::Greater) == '>');
  CHECK(opposite(Outcome::Equal) == Outcome::Equal);
  CHECK_THROWS(outcome_from_char('x'));
  CHECK(op_kind_from_string("rbswap") == OpKind::RestrictedBlockSwap);
  CHECK_THROWS(op_kind_from_string("shuffle"));
}
