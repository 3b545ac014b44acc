#include "robust_search/relations_audit.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace robust_search {

namespace {

constexpr std::size_t kKeepFailing = 8;
// Depth-limited solver checks on witnesses stay cheap up to this size.
constexpr Index kWitnessSolverLimit = 64;

RelationVerdict le(std::string id, std::string lhs_name, Index lhs, int coef, std::string rhs_name,
                   Index rhs) {
  RelationVerdict v{std::move(id), std::move(lhs_name), std::move(rhs_name), lhs, rhs, coef, false};
  v.holds = lhs <= coef * rhs;
  return v;
}

RelationVerdict eq(std::string id, std::string lhs_name, Index lhs, std::string rhs_name, Index rhs) {
  RelationVerdict v{std::move(id), std::move(lhs_name), std::move(rhs_name), lhs, rhs, 1, true};
  v.holds = lhs == rhs;
  return v;
}

Instance as_instance(std::vector<Value> values) {
  // Any value sitting at its rank serves as target; otherwise the first one.
  auto ranks = stable_ranks(values);
  Value target = values.empty() ? 0 : values.front();
  for (std::size_t i = 0; i < values.size(); ++i)
    if (ranks[i] == static_cast<Index>(i) && std::count(values.begin(), values.end(), values[i]) == 1) {
      target = values[i];
      break;
    }
  return make_instance(std::move(values), target, GuaranteeFlags{});
}

void require_even(const std::string& family, Index n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument(family + " needs an even n >= 2");
}

std::string fact(const std::string& metric, const std::string& op, Index want, Index got) {
  return metric + " " + op + " " + std::to_string(want) + " (got " + std::to_string(got) + ")";
}

WitnessFact equals(const std::string& metric, Index got, Index want) {
  return {fact(metric, "==", want, got), got == want};
}

// Lower bound by showing the solver cannot finish within want-1 operations.
WitnessFact at_least(const std::string& metric, const std::vector<Value>& a, OpKind kind, Index want) {
  if (want <= 0) return {metric + " >= " + std::to_string(want), true};
  auto r = metric_block_exact(a, kind, want - 1, static_cast<Index>(a.size()));
  std::string got = r.exceeds ? "> " + std::to_string(want - 1) : std::to_string(r.value);
  return {metric + " >= " + std::to_string(want) + " (got " + got + ")", r.exceeds};
}

WitnessFact exactly_block(const std::string& metric, const std::vector<Value>& a, OpKind kind, Index want) {
  auto r = metric_block_exact(a, kind, want, static_cast<Index>(a.size()));
  std::string got = r.exceeds ? "> " + std::to_string(want) : std::to_string(r.value);
  return {metric + " == " + std::to_string(want) + " (got " + got + ")", !r.exceeds && r.value == want};
}

std::vector<Value> draw_array(Index n, std::size_t trial, Rng& rng) {
  std::vector<Value> a(static_cast<std::size_t>(n));
  std::uint64_t s = rng.next();
  switch (trial % 6) {
    case 0:
      for (Index i = 0; i < n; ++i) a[i] = i;
      rng.shuffle(a);
      break;
    case 1:
      for (auto& v : a) v = rng.uniform(0, std::max<Index>(1, n / 2));
      break;
    case 2: {
      static const OpKind kinds[] = {OpKind::Swap,        OpKind::Move,      OpKind::AdjacentSwap,
                                     OpKind::Replacement, OpKind::BlockMove, OpKind::BlockSwap,
                                     OpKind::RestrictedBlockSwap};
      OpKind kind = kinds[rng.uniform(0, 6)];
      auto count = static_cast<std::size_t>(rng.uniform(0, 4));
      a = gen_random_ops(n, kind, count, s).instance.values;
      break;
    }
    case 3:
      a = gen_bounded_displacement(n, rng.uniform(0, n / 4), s).values;
      break;
    case 4:
      for (Index i = 0; i < n; ++i) a[i] = n - i;
      for (Index t = rng.uniform(0, n); t > 0; --t) std::swap(a[rng.uniform(0, n - 1)], a[rng.uniform(0, n - 1)]);
      break;
    default:
      for (Index i = 0; i < n; ++i) a[i] = 2 * i;
      break;
  }
  return a;
}

}  // namespace

bool RelationReport::all_hold() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const RelationVerdict& v) { return v.holds; });
}

std::vector<RelationVerdict> RelationReport::violations() const {
  std::vector<RelationVerdict> out;
  for (const auto& v : verdicts)
    if (!v.holds) out.push_back(v);
  return out;
}

std::string array_fingerprint(const std::vector<Value>& a) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](const std::string& s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  for (Value v : a) mix(std::to_string(v) + ",");
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RelationReport check_relations(const std::vector<Value>& a, Index block_limit) {
  RelationReport r;
  r.n = static_cast<Index>(a.size());
  r.fingerprint = array_fingerprint(a);

  Index sum = metric_sum(a), mx = metric_max(a), inv = metric_inv(a), ainv = metric_ainv(a);
  Index seq = metric_seq(a), mov = metric_mov(a), rep = metric_rep(a);
  Index swp = metric_swap(a), aswap = metric_aswap(a);

  auto& v = r.verdicts;
  v.push_back(eq("seq=mov", "k_seq", seq, "k_mov", mov));
  v.push_back(eq("mov=rep", "k_mov", mov, "k_rep", rep));
  v.push_back(eq("aswap=inv", "k_aswap", aswap, "k_inv", inv));
  v.push_back(le("swap<=aswap", "k_swap", swp, 1, "k_aswap", aswap));
  v.push_back(le("rep<=2swap", "k_rep", rep, 2, "k_swap", swp));
  v.push_back(le("inv<=sum", "k_inv", inv, 1, "k_sum", sum));
  v.push_back(le("sum<=2inv", "k_sum", sum, 2, "k_inv", inv));
  v.push_back(le("max<=inv", "k_max", mx, 1, "k_inv", inv));
  v.push_back(le("rep<=inv", "k_rep", rep, 1, "k_inv", inv));
  v.push_back(le("ainv<=seq", "k_ainv", ainv, 1, "k_seq", seq));

  if (r.n <= block_limit) {
    r.block_checked = true;
    auto exact = [&](OpKind k) { return metric_block_exact(a, k, r.n, block_limit).value; };
    Index bswap = exact(OpKind::BlockSwap), rbswap = exact(OpKind::RestrictedBlockSwap),
          bmov = exact(OpKind::BlockMove);
    v.push_back(le("rbswap<=swap", "k_rbswap", rbswap, 1, "k_swap", swp));
    v.push_back(le("bswap<=rbswap", "k_bswap", bswap, 1, "k_rbswap", rbswap));
    v.push_back(le("bmov<=mov", "k_bmov", bmov, 1, "k_mov", mov));
    v.push_back(le("bswap<=bmov", "k_bswap", bswap, 1, "k_bmov", bmov));
    v.push_back(le("bmov<=2bswap", "k_bmov", bmov, 2, "k_bswap", bswap));
    v.push_back(le("ainv<=2bswap", "k_ainv", ainv, 2, "k_bswap", bswap));
  }
  return r;
}

bool Witness::all_hold() const {
  return std::all_of(facts.begin(), facts.end(), [](const WitnessFact& f) { return f.holds; });
}

const std::vector<std::string>& witness_families() {
  static const std::vector<std::string> ids = {"pairflip",   "big-swap",   "big-replace",
                                               "half-rotate", "interleave", "rep-vs-rbswap"};
  return ids;
}

Witness witness_family(const std::string& name, Index n) {
  Witness w;
  w.family = name;
  std::vector<Value> a;
  if (name == "pairflip") {
    require_even(name, n);
    for (Index i = 1; i <= n; i += 2) {
      a.push_back(i + 1);
      a.push_back(i);
    }
    w.facts.push_back(equals("k_max", metric_max(a), 1));
    w.facts.push_back(equals("k_ainv", metric_ainv(a), n / 2));
  } else if (name == "big-swap") {
    if (n < 2) throw std::invalid_argument("big-swap needs n >= 2");
    a.push_back(n);
    for (Index i = 2; i < n; ++i) a.push_back(i);
    a.push_back(1);
    w.facts.push_back(equals("k_swap", metric_swap(a), 1));
    w.facts.push_back(equals("k_max", metric_max(a), n - 1));
  } else if (name == "big-replace") {
    if (n < 2) throw std::invalid_argument("big-replace needs n >= 2");
    a.push_back(n + 1);
    for (Index i = 2; i <= n; ++i) a.push_back(i);
    w.facts.push_back(equals("k_rep", metric_rep(a), 1));
    w.facts.push_back(equals("k_max", metric_max(a), n - 1));
  } else if (name == "half-rotate") {
    require_even(name, n);
    for (Index i = n / 2 + 1; i <= n; ++i) a.push_back(i);
    for (Index i = 1; i <= n / 2; ++i) a.push_back(i);
    w.facts.push_back(equals("k_seq", metric_seq(a), n / 2));
    if (n <= kWitnessSolverLimit) w.facts.push_back(exactly_block("k_rbswap", a, OpKind::RestrictedBlockSwap, 1));
  } else if (name == "interleave") {
    require_even(name, n);
    for (Index i = 1; i <= n; i += 2) a.push_back(i);
    for (Index i = 2; i <= n; i += 2) a.push_back(i);
    w.facts.push_back(equals("k_ainv", metric_ainv(a), 1));
    if (n <= kExactSolverLimit) w.facts.push_back(at_least("k_bswap", a, OpKind::BlockSwap, n / 2 - 1));
  } else if (name == "rep-vs-rbswap") {
    Index d = 0, m = 1;
    while (m < n) m *= 4, ++d;
    if (n < 4 || m != n) throw std::invalid_argument("rep-vs-rbswap needs n = 4^d with d >= 1");
    a.push_back(n);
    for (Index i = 1; i < n; ++i) a.push_back(i);
    w.facts.push_back(equals("k_rep", metric_rep(a), 1));
    if (n <= kWitnessSolverLimit) w.facts.push_back(at_least("k_rbswap", a, OpKind::RestrictedBlockSwap, d));
  } else {
    throw std::invalid_argument("unknown witness family: " + name);
  }
  w.instance = as_instance(std::move(a));
  return w;
}

AuditSummary audit_random(std::size_t trials, Index n_max, std::uint64_t seed, Index block_limit) {
  if (trials < 1) throw std::invalid_argument("audit needs trials >= 1");
  if (n_max < 1) throw std::invalid_argument("audit needs n_max >= 1");
  AuditSummary s;
  s.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    // Every fourth array is small enough for the block solver.
    Index hi = t % 4 == 3 ? std::min(n_max, block_limit) : n_max;
    Index n = rng.uniform(1, std::max<Index>(1, hi));
    auto rep = check_relations(draw_array(n, t / 4, rng), block_limit);
    s.relations_checked += rep.verdicts.size();
    if (rep.block_checked) ++s.block_checked;
    auto bad = rep.violations().size();
    if (bad > 0) {
      s.violations += bad;
      if (s.failing.size() < kKeepFailing) s.failing.push_back(rep);
    }
  }
  return s;
}

std::string relations_csv_header() { return "fingerprint,n,relation,lhs_name,lhs,coefficient,rhs_name,rhs,equality,holds"; }

std::string relations_csv_rows(const RelationReport& r) {
  std::ostringstream os;
  for (const auto& v : r.verdicts)
    os << r.fingerprint << ',' << r.n << ',' << v.id << ',' << v.lhs_name << ',' << v.lhs << ','
       << v.coefficient << ',' << v.rhs_name << ',' << v.rhs << ',' << (v.equality ? 1 : 0) << ','
       << (v.holds ? 1 : 0) << '\n';
  return os.str();
}

}  // namespace robust_search
