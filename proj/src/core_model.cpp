#include "robust_search/core_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace robust_search {

char to_char(Outcome o) { return static_cast<char>(o); }

Outcome outcome_from_char(char c) {
  switch (c) {
    case '<': return Outcome::Less;
    case '>': return Outcome::Greater;
    case '=': return Outcome::Equal;
    default: throw std::invalid_argument(std::string("bad outcome character '") + c + "'");
  }
}

Outcome opposite(Outcome o) {
  if (o == Outcome::Less) return Outcome::Greater;
  if (o == Outcome::Greater) return Outcome::Less;
  return Outcome::Equal;
}

InstanceError::InstanceError(const std::string& what, Index offending)
    : std::runtime_error(what + " (index " + std::to_string(offending) + ")"), offending_(offending) {}

Outcome Instance::truth(Index i) const {
  Value v = values[static_cast<std::size_t>(i)];
  if (v < target) return Outcome::Less;
  if (v > target) return Outcome::Greater;
  return Outcome::Equal;
}

Instance make_instance(std::vector<Value> values, Value target, GuaranteeFlags flags) {
  if (values.empty()) throw InstanceError("empty array", -1);
  Instance inst;
  inst.target = target;
  inst.flags = flags;
  Index occurrences = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < target) ++inst.rank;
    if (values[i] == target) {
      if (occurrences == 0) inst.pos = static_cast<Index>(i);
      ++occurrences;
    }
  }
  if (occurrences > 1) {
    if (flags.present) {
      Index second = -1;
      for (std::size_t i = static_cast<std::size_t>(*inst.pos) + 1; i < values.size(); ++i)
        if (values[i] == target) { second = static_cast<Index>(i); break; }
      throw InstanceError("target occurs more than once", second);
    }
    inst.pos.reset();
  }
  if (flags.present && occurrences == 0) throw InstanceError("target absent despite present flag", -1);
  if (flags.pos_eq_rank && inst.pos && *inst.pos != inst.rank)
    throw InstanceError("pos(e) != rank(e) = " + std::to_string(inst.rank), *inst.pos);
  inst.values = std::move(values);
  return inst;
}

// ---------------------------------------------------------------------------

Outcome TruthfulOracle::answer(Index index, std::size_t) { return inst_.truth(index); }

ScriptedLiesOracle::ScriptedLiesOracle(const Instance& inst, std::vector<std::size_t> plan,
                                       std::size_t budget)
    : inst_(inst), plan_(std::move(plan)) {
  std::sort(plan_.begin(), plan_.end());
  plan_.erase(std::unique(plan_.begin(), plan_.end()), plan_.end());
  if (plan_.size() > budget)
    throw std::invalid_argument("lie plan has " + std::to_string(plan_.size()) +
                                " entries, budget " + std::to_string(budget));
}

Outcome ScriptedLiesOracle::answer(Index index, std::size_t ordinal) {
  Outcome t = inst_.truth(index);
  if (t == Outcome::Equal) return t;
  if (std::binary_search(plan_.begin(), plan_.end(), ordinal)) {
    told_.push_back(ordinal);
    return opposite(t);
  }
  return t;
}

FaultSetOracle::FaultSetOracle(const Instance& inst, std::map<Index, Outcome> faults,
                               std::size_t budget)
    : inst_(inst), faults_(std::move(faults)) {
  if (faults_.size() > budget)
    throw std::invalid_argument("fault set larger than budget " + std::to_string(budget));
  for (const auto& [i, o] : faults_) {
    if (i < 0 || i >= inst.n()) throw InstanceError("fault index out of range", i);
    if (inst.pos && *inst.pos == i) throw InstanceError("fault placed on the target", i);
    if (o == Outcome::Equal) throw InstanceError("fault may not answer '='", i);
    if (o == inst.truth(i)) throw InstanceError("fault outcome equals the truth", i);
  }
}

Outcome FaultSetOracle::answer(Index index, std::size_t) {
  auto it = faults_.find(index);
  return it == faults_.end() ? inst_.truth(index) : it->second;
}

// ---------------------------------------------------------------------------

QuerySession::QuerySession(const Instance& inst, Oracle& oracle)
    : inst_(&inst), oracle_(oracle), n_(inst.n()), queried_(static_cast<std::size_t>(inst.n()), 0) {}

QuerySession::QuerySession(Index n, Oracle& oracle)
    : oracle_(oracle), n_(n), queried_(static_cast<std::size_t>(n), 0) {
  if (n < 1) throw std::invalid_argument("session needs n >= 1");
}

Outcome QuerySession::query(Index index) {
  if (index < 0 || index >= n_)
    throw std::out_of_range("query index " + std::to_string(index) + " outside [0, " +
                            std::to_string(n_) + ")");
  std::size_t ordinal = transcript_.size();
  if (limit_ && ordinal >= limit_) throw ContractError("query limit " + std::to_string(limit_) + " reached");
  Outcome o = oracle_.answer(index, ordinal);
  transcript_.push_back({ordinal, index, o});
  auto& q = queried_[static_cast<std::size_t>(index)];
  if (!q) {
    q = 1;
    ++distinct_;
  }
  return o;
}

std::string to_string(ResultKind r) {
  switch (r) {
    case ResultKind::Found: return "found";
    case ResultKind::NotPresent: return "not_present";
    case ResultKind::BudgetExhausted: return "budget_exhausted";
  }
  return "?";
}

void attach_bound(SearchReport& report, double formula, Index n) {
  double b = std::min(formula, static_cast<double>(n));
  report.bound = b;
  report.bound_ok = static_cast<double>(report.queries) <= b + 1e-9;
}

// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("empty uniform range");
  auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(eng_());
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t x;
  do x = eng_();
  while (x >= limit);
  return lo + static_cast<std::int64_t>(x % span);
}

double Rng::unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------

std::string to_string(OpKind k) {
  switch (k) {
    case OpKind::Swap: return "swap";
    case OpKind::Move: return "move";
    case OpKind::AdjacentSwap: return "adjacent_swap";
    case OpKind::Replacement: return "replacement";
    case OpKind::BlockMove: return "block_move";
    case OpKind::BlockSwap: return "block_swap";
    case OpKind::RestrictedBlockSwap: return "restricted_block_swap";
  }
  return "?";
}

OpKind op_kind_from_string(std::string_view s) {
  for (OpKind k : {OpKind::Swap, OpKind::Move, OpKind::AdjacentSwap, OpKind::Replacement,
                   OpKind::BlockMove, OpKind::BlockSwap, OpKind::RestrictedBlockSwap})
    if (to_string(k) == s) return k;
  if (s == "bmov") return OpKind::BlockMove;
  if (s == "bswap") return OpKind::BlockSwap;
  if (s == "rbswap") return OpKind::RestrictedBlockSwap;
  if (s == "rep") return OpKind::Replacement;
  if (s == "mov") return OpKind::Move;
  if (s == "aswap") return OpKind::AdjacentSwap;
  throw std::invalid_argument("unknown operation kind '" + std::string(s) + "'");
}

void apply_op(std::vector<Value>& v, const OpRecord& op) {
  auto n = static_cast<Index>(v.size());
  auto in = [n](Index x) { return x >= 0 && x < n; };
  auto it = [&v](Index x) { return v.begin() + x; };
  switch (op.kind) {
    case OpKind::Swap:
    case OpKind::AdjacentSwap:
      if (!in(op.a) || !in(op.b)) throw std::out_of_range("swap index");
      std::swap(v[static_cast<std::size_t>(op.a)], v[static_cast<std::size_t>(op.b)]);
      return;
    case OpKind::Move:
      if (!in(op.a) || !in(op.b)) throw std::out_of_range("move index");
      if (op.a < op.b) std::rotate(it(op.a), it(op.a + 1), it(op.b + 1));
      else if (op.b < op.a) std::rotate(it(op.b), it(op.a), it(op.a + 1));
      return;
    case OpKind::Replacement:
      if (!in(op.a)) throw std::out_of_range("replacement index");
      v[static_cast<std::size_t>(op.a)] = op.value;
      return;
    case OpKind::BlockMove:
    case OpKind::BlockSwap:
    case OpKind::RestrictedBlockSwap: {
      if (!(0 <= op.a && op.a <= op.b && op.b < op.c && op.c <= op.d && op.d < n))
        throw std::out_of_range("block bounds");
      std::vector<Value> out(v.begin(), it(op.a));
      out.insert(out.end(), it(op.c), it(op.d + 1));
      out.insert(out.end(), it(op.b + 1), it(op.c));
      out.insert(out.end(), it(op.a), it(op.b + 1));
      std::copy(out.begin() + op.a, out.end(), it(op.a));
      return;
    }
  }
}

OpRecord inverse_block_op(const OpRecord& op) {
  Index l1 = op.b - op.a + 1, l2 = op.d - op.c + 1;
  OpRecord r = op;
  r.a = op.a;
  r.b = op.a + l2 - 1;
  r.c = op.d - l1 + 1;
  r.d = op.d;
  return r;
}

namespace {

std::vector<Value> iota_values(Index n) {
  std::vector<Value> v(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

OpRecord random_op(Index n, OpKind kind, Rng& rng) {
  OpRecord op;
  op.kind = kind;
  switch (kind) {
    case OpKind::Swap:
      op.a = rng.uniform(0, n - 1);
      do op.b = rng.uniform(0, n - 1);
      while (op.b == op.a);
      break;
    case OpKind::AdjacentSwap:
      op.a = rng.uniform(0, n - 2);
      op.b = op.a + 1;
      break;
    case OpKind::Move:
      op.a = rng.uniform(0, n - 1);
      do op.b = rng.uniform(0, n - 1);
      while (op.b == op.a);
      break;
    case OpKind::Replacement:
      op.a = rng.uniform(0, n - 1);
      op.value = rng.uniform(-1, n);
      break;
    case OpKind::BlockMove: {
      Index x = rng.uniform(0, n - 2);
      Index y = rng.uniform(x + 1, n - 1);
      Index z = rng.uniform(y, n - 1);
      op.a = x; op.b = y - 1; op.c = y; op.d = z;
      break;
    }
    case OpKind::BlockSwap: {
      op.a = rng.uniform(0, n - 2);
      op.b = rng.uniform(op.a, n - 2);
      op.c = rng.uniform(op.b + 1, n - 1);
      op.d = rng.uniform(op.c, n - 1);
      break;
    }
    case OpKind::RestrictedBlockSwap: {
      Index len = rng.uniform(1, n / 2);
      op.a = rng.uniform(0, n - 2 * len);
      op.b = op.a + len - 1;
      op.c = rng.uniform(op.b + 1, n - len);
      op.d = op.c + len - 1;
      break;
    }
  }
  return op;
}

Instance choose_present_target(std::vector<Value> values, Rng& rng) {
  if (auto r = with_rank_target(values, rng)) return *r;
  std::map<Value, int> counts;
  for (Value v : values) ++counts[v];
  std::vector<Value> unique;
  for (auto& [v, c] : counts)
    if (c == 1) unique.push_back(v);
  if (unique.empty()) {
    Value absent = counts.rbegin()->first + 1;
    return make_instance(std::move(values), absent, {});
  }
  Value t = unique[static_cast<std::size_t>(rng.uniform(0, static_cast<Index>(unique.size()) - 1))];
  return make_instance(std::move(values), t, {true, false});
}

// Splits `total` into parts.size() pieces with part i >= lo[i].
std::vector<Index> random_composition(Index total, const std::vector<Index>& lo, Rng& rng) {
  Index extra = total;
  for (Index l : lo) extra -= l;
  if (extra < 0) throw std::logic_error("composition infeasible");
  std::vector<Index> cuts;
  for (std::size_t i = 1; i < lo.size(); ++i) cuts.push_back(rng.uniform(0, extra));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Index> out(lo.size());
  Index prev = 0;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    Index cut = i + 1 < lo.size() ? cuts[i] : extra;
    out[i] = lo[i] + (cut - prev);
    prev = cut;
  }
  return out;
}

}  // namespace

Instance gen_bounded_displacement(Index n, Index k, std::uint64_t seed) {
  if (n < 1 || k < 0 || k >= n) throw std::invalid_argument("gen_bounded_displacement: need 0 <= k < n");
  Rng rng(seed);
  std::vector<std::pair<Index, Index>> keys(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) keys[static_cast<std::size_t>(i)] = {i + rng.uniform(0, k), i};
  std::sort(keys.begin(), keys.end());
  std::vector<Value> values(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) values[static_cast<std::size_t>(j)] = keys[static_cast<std::size_t>(j)].second;
  Value t = rng.uniform(0, n - 1);
  return make_instance(std::move(values), t, {true, false});
}

GeneratedInstance gen_random_ops(Index n, OpKind kind, std::size_t count, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("gen_random_ops: n >= 1");
  Rng rng(seed);
  auto values = iota_values(n);
  GeneratedInstance g;
  bool possible = n >= 2 || kind == OpKind::Replacement;
  for (std::size_t t = 0; t < count && possible; ++t) {
    OpRecord op = random_op(n, kind, rng);
    apply_op(values, op);
    g.log.push_back(op);
  }
  g.instance = choose_present_target(std::move(values), rng);
  return g;
}

std::optional<Instance> with_rank_target(std::vector<Value> values, Rng& rng) {
  std::vector<Value> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Index> candidates;
  for (std::size_t i = 0; i < values.size(); ++i) {
    Value v = values[i];
    auto lo = std::lower_bound(sorted.begin(), sorted.end(), v);
    auto hi = std::upper_bound(sorted.begin(), sorted.end(), v);
    if (hi - lo == 1 && lo - sorted.begin() == static_cast<std::ptrdiff_t>(i))
      candidates.push_back(static_cast<Index>(i));
  }
  if (candidates.empty()) return std::nullopt;
  Index pick = candidates[static_cast<std::size_t>(rng.uniform(0, static_cast<Index>(candidates.size()) - 1))];
  Value t = values[static_cast<std::size_t>(pick)];
  return make_instance(std::move(values), t, {true, true});
}

Instance gen_ainv_instance(Index n, Index k, std::uint64_t seed) {
  if (n < 1 || k < 0) throw std::invalid_argument("gen_ainv_instance: n >= 1, k >= 0");
  Rng rng(seed);
  // Each hidden run needs a partner element on the other side of e and a
  // separator of the opposite class next to it.
  while (k > 0) {
    Index b1 = k / 2, b2 = k - b1;
    if (2 * std::max(b1, b2) + b1 + b2 <= n - 1) break;
    --k;
  }
  if (k == 1) {
    // A lone run has no partner; swap two neighbours of one class instead.
    std::vector<Value> values(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = i;
    Index x = rng.uniform(0, n - 1);
    Index i = rng.uniform(0, n - 3);
    if (i + 1 >= x && i <= x) i = x + 1 <= n - 2 ? x + 1 : x - 2;
    std::swap(values[static_cast<std::size_t>(i)], values[static_cast<std::size_t>(i + 1)]);
    return make_instance(std::move(values), x, {true, true});
  }
  Index b1 = k / 2, b2 = k - b1;
  if (k % 2 == 1 && rng.uniform(0, 1) == 1) std::swap(b1, b2);
  Index m = std::max(b1, b2);
  Index a_hi = std::max(m, std::min((n - 1 - b1 - b2) / 2, m + std::max<Index>(1, n / 16)));
  Index a = m == 0 ? 0 : rng.uniform(m, a_hi);
  Index x = rng.uniform(a + b1, n - 1 - a - b2);

  std::vector<char> cls;  // 's' small, 'l' large, 'e'
  cls.reserve(static_cast<std::size_t>(n));
  auto lay = [&](Index blocks, Index block_elems, char block_cls, Index filler, char filler_cls) {
    if (blocks == 0) {
      cls.insert(cls.end(), static_cast<std::size_t>(filler), filler_cls);
      return;
    }
    std::vector<Index> lo(static_cast<std::size_t>(blocks), 1);
    auto sizes = random_composition(block_elems, lo, rng);
    std::vector<Index> gap_lo(static_cast<std::size_t>(blocks) + 1, 1);
    gap_lo.front() = 0;
    gap_lo.back() = 0;
    auto gaps = random_composition(filler, gap_lo, rng);
    for (Index b = 0; b < blocks; ++b) {
      cls.insert(cls.end(), static_cast<std::size_t>(gaps[static_cast<std::size_t>(b)]), filler_cls);
      cls.insert(cls.end(), static_cast<std::size_t>(sizes[static_cast<std::size_t>(b)]), block_cls);
    }
    cls.insert(cls.end(), static_cast<std::size_t>(gaps.back()), filler_cls);
  };
  lay(b1, a, 'l', x - a, 's');
  cls.push_back('e');
  lay(b2, a, 's', n - 1 - x - a, 'l');

  std::vector<Value> values(static_cast<std::size_t>(n));
  Value next_small = 0, next_large = x + 1;
  for (Index i = 0; i < n; ++i) {
    char c = cls[static_cast<std::size_t>(i)];
    values[static_cast<std::size_t>(i)] = c == 's' ? next_small++ : c == 'l' ? next_large++ : x;
  }
  return make_instance(std::move(values), x, {true, true});
}

Instance gen_sorted_instance(Index n, std::uint64_t seed, bool absent) {
  if (n < 1) throw std::invalid_argument("gen_sorted_instance: n >= 1");
  Rng rng(seed);
  std::vector<Value> values(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = 2 * i;
  if (absent) return make_instance(std::move(values), 2 * rng.uniform(0, n) - 1, {});
  return make_instance(std::move(values), 2 * rng.uniform(0, n - 1), {true, true});
}

// ---------------------------------------------------------------------------

std::string format_instance(const Instance& inst) {
  std::ostringstream os;
  os << "n=" << inst.n() << " e=" << inst.target << " flags=";
  if (inst.flags.present) os << 'p';
  if (inst.flags.pos_eq_rank) os << 'r';
  if (!inst.flags.present && !inst.flags.pos_eq_rank) os << '-';
  os << " values=";
  for (std::size_t i = 0; i < inst.values.size(); ++i) os << (i ? "," : "") << inst.values[i];
  return os.str();
}

namespace {

Value parse_int(std::string_view s) {
  Value v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

Instance parse_instance(std::string_view line) {
  std::optional<Index> n;
  std::optional<Value> e;
  GuaranteeFlags flags;
  std::vector<Value> values;
  bool have_values = false;
  std::istringstream is{std::string(line)};
  std::string tok;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("malformed field '" + tok + "'");
    std::string_view key(tok.data(), eq), val(tok.data() + eq + 1, tok.size() - eq - 1);
    if (key == "n") n = parse_int(val);
    else if (key == "e") e = parse_int(val);
    else if (key == "flags") {
      if (val != "-")
        for (char c : val) {
          if (c == 'p') flags.present = true;
          else if (c == 'r') flags.pos_eq_rank = true;
          else throw std::invalid_argument("unknown flag");
        }
    } else if (key == "values") {
      have_values = true;
      std::size_t start = 0;
      while (start <= val.size()) {
        auto comma = val.find(',', start);
        if (comma == std::string_view::npos) comma = val.size();
        values.push_back(parse_int(val.substr(start, comma - start)));
        start = comma + 1;
      }
    } else throw std::invalid_argument("unknown field '" + std::string(key) + "'");
  }
  if (!n || !e || !have_values) throw std::invalid_argument("instance line needs n, e, values");
  if (*n != static_cast<Index>(values.size())) throw std::invalid_argument("n does not match values");
  return make_instance(std::move(values), *e, flags);
}

std::string format_transcript(const std::vector<QueryRecord>& t) {
  std::ostringstream os;
  for (const auto& r : t) os << r.ordinal << ',' << r.index << ',' << to_char(r.outcome) << '\n';
  return os.str();
}

std::vector<QueryRecord> parse_transcript(std::string_view csv) {
  std::vector<QueryRecord> out;
  std::istringstream is{std::string(csv)};
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto c1 = line.find(','), c2 = line.rfind(',');
    if (c1 == std::string::npos || c1 == c2 || c2 + 2 != line.size())
      throw std::invalid_argument("malformed transcript row '" + line + "'");
    QueryRecord r;
    r.ordinal = static_cast<std::size_t>(parse_int(std::string_view(line).substr(0, c1)));
    r.index = parse_int(std::string_view(line).substr(c1 + 1, c2 - c1 - 1));
    r.outcome = outcome_from_char(line.back());
    out.push_back(r);
  }
  return out;
}

}  // namespace robust_search
