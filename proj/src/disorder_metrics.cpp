#include "robust_search/disorder_metrics.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace robust_search {

std::vector<Index> stable_ranks(const std::vector<Value>& a) {
  std::vector<Index> order(a.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&a](Index x, Index y) {
    return a[static_cast<std::size_t>(x)] < a[static_cast<std::size_t>(y)];
  });
  std::vector<Index> rank(a.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[static_cast<std::size_t>(order[r])] = static_cast<Index>(r);
  return rank;
}

Index metric_sum(const std::vector<Value>& a) {
  auto r = stable_ranks(a);
  Index s = 0;
  for (std::size_t i = 0; i < r.size(); ++i) s += std::abs(r[i] - static_cast<Index>(i));
  return s;
}

Index metric_max(const std::vector<Value>& a) {
  auto r = stable_ranks(a);
  Index m = 0;
  for (std::size_t i = 0; i < r.size(); ++i) m = std::max(m, std::abs(r[i] - static_cast<Index>(i)));
  return m;
}

Index metric_inv(const std::vector<Value>& a) {
  // Fenwick tree over stable ranks.
  auto r = stable_ranks(a);
  std::size_t n = r.size();
  std::vector<Index> bit(n + 1, 0);
  Index inv = 0;
  for (std::size_t i = n; i-- > 0;) {
    for (auto x = static_cast<std::size_t>(r[i]); x > 0; x -= x & (~x + 1)) inv += bit[x];
    for (auto x = static_cast<std::size_t>(r[i]) + 1; x <= n; x += x & (~x + 1)) ++bit[x];
  }
  return inv;
}

Index metric_ainv(const std::vector<Value>& a) {
  Index c = 0;
  for (std::size_t i = 0; i + 1 < a.size(); ++i) c += a[i] > a[i + 1];
  return c;
}

Index metric_seq(const std::vector<Value>& a) {
  std::vector<Value> tails;
  for (Value v : a) {
    auto it = std::upper_bound(tails.begin(), tails.end(), v);
    if (it == tails.end()) tails.push_back(v);
    else *it = v;
  }
  return static_cast<Index>(a.size() - tails.size());
}

namespace {

Index lis_of_ranks(const std::vector<Index>& r) {
  std::vector<Index> tails;
  for (Index v : r) {
    auto it = std::lower_bound(tails.begin(), tails.end(), v);
    if (it == tails.end()) tails.push_back(v);
    else *it = v;
  }
  return static_cast<Index>(tails.size());
}

}  // namespace

Index metric_mov(const std::vector<Value>& a) {
  return static_cast<Index>(a.size()) - lis_of_ranks(stable_ranks(a));
}

Index metric_rep(const std::vector<Value>& a) {
  std::size_t n = a.size();
  if (n > 2048) return metric_mov(a);
  std::vector<Index> best(n, 1);
  Index longest = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < j; ++i)
      if (a[i] <= a[j]) best[j] = std::max(best[j], best[i] + 1);
    longest = std::max(longest, best[j]);
  }
  return static_cast<Index>(n) - longest;
}

Index metric_swap(const std::vector<Value>& a) {
  auto r = stable_ranks(a);
  std::vector<char> seen(r.size(), 0);
  Index cycles = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (seen[i]) continue;
    ++cycles;
    for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(r[j])) seen[j] = 1;
  }
  return static_cast<Index>(r.size()) - cycles;
}

namespace {

Index merge_count(std::vector<Value>& v, std::vector<Value>& tmp, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  std::size_t mid = (lo + hi) / 2;
  Index c = merge_count(v, tmp, lo, mid) + merge_count(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      c += static_cast<Index>(mid - i);
      tmp[k++] = v[j++];
    } else {
      tmp[k++] = v[i++];
    }
  }
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo), tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return c;
}

}  // namespace

Index metric_aswap(const std::vector<Value>& a) {
  std::vector<Value> v = a;
  if (v.size() > 4096) {
    std::vector<Value> tmp(v.size());
    return merge_count(v, tmp, 0, v.size());
  }
  // Insertion sort, counting each adjacent exchange.
  Index swaps = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
      std::swap(v[j - 1], v[j]);
      ++swaps;
    }
  return swaps;
}

Index metric_faults_of(const std::vector<Value>& a, Value e) {
  auto inst = make_instance(a, e, {true, false});
  Index p = *inst.pos, c = 0;
  for (Index i = 0; i < inst.n(); ++i) {
    Value v = a[static_cast<std::size_t>(i)];
    if ((i < p && v > e) || (i > p && v < e)) ++c;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Exact block distances

namespace {

std::vector<int> dense_ranks(const std::vector<Value>& a) {
  std::vector<Value> u = a;
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  std::vector<int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    r[i] = static_cast<int>(std::lower_bound(u.begin(), u.end(), a[i]) - u.begin());
  return r;
}

struct Move {
  int a, b, c, d;  // 1-based positions inside the padded state
};

std::vector<Move> block_moves(int n, OpKind kind) {
  std::vector<Move> out;
  if (kind == OpKind::RestrictedBlockSwap) {
    for (int len = 1; 2 * len <= n; ++len)
      for (int a = 1; a + 2 * len - 1 <= n; ++a)
        for (int c = a + len; c + len - 1 <= n; ++c) out.push_back({a, a + len - 1, c, c + len - 1});
  } else {
    for (int a = 1; a <= n; ++a)
      for (int b = a; b < n; ++b) {
        if (kind == OpKind::BlockMove) {
          for (int d = b + 1; d <= n; ++d) out.push_back({a, b, b + 1, d});
        } else {
          for (int c = b + 1; c <= n; ++c)
            for (int d = c; d <= n; ++d) out.push_back({a, b, c, d});
        }
      }
  }
  return out;
}

class BlockSolver {
 public:
  BlockSolver(const std::vector<Value>& a, OpKind kind) : n_(static_cast<int>(a.size())), kind_(kind) {
    auto r = dense_ranks(a);
    int m = r.empty() ? 0 : *std::max_element(r.begin(), r.end()) + 1;
    state_.assign(static_cast<std::size_t>(n_) + 2, 0);
    state_[0] = 0;
    for (int i = 0; i < n_; ++i) state_[static_cast<std::size_t>(i) + 1] = static_cast<unsigned char>(r[static_cast<std::size_t>(i)] + 1);
    state_[static_cast<std::size_t>(n_) + 1] = static_cast<unsigned char>(m + 1);
    cuts_per_move_ = kind == OpKind::BlockMove ? 3 : 4;
    moves_ = block_moves(n_, kind);
  }

  BlockResult solve(Index budget) {
    int bad0 = count_bad(state_);
    for (Index t = h(bad0); t <= budget; ++t) {
      seen_.clear();
      if (dfs(state_, bad0, 0, static_cast<int>(t))) return {false, t};
    }
    return {true, budget};
  }

 private:
  static bool bad(int x, int y) { return y - x != 0 && y - x != 1; }

  int count_bad(const std::string& s) const {
    int c = 0;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) c += bad(static_cast<unsigned char>(s[i]), static_cast<unsigned char>(s[i + 1]));
    return c;
  }

  int h(int b) const { return (b + cuts_per_move_ - 1) / cuts_per_move_; }

  int delta(const std::string& s, const Move& m) const {
    auto v = [&s](int i) { return static_cast<int>(static_cast<unsigned char>(s[static_cast<std::size_t>(i)])); };
    bool mid = m.c > m.b + 1;
    int before = bad(v(m.a - 1), v(m.a)) + bad(v(m.b), v(m.b + 1)) + bad(v(m.d), v(m.d + 1));
    if (mid) before += bad(v(m.c - 1), v(m.c));
    int after = bad(v(m.a - 1), v(m.c)) + bad(v(m.d), mid ? v(m.b + 1) : v(m.a)) + bad(v(m.b), v(m.d + 1));
    if (mid) after += bad(v(m.c - 1), v(m.a));
    return after - before;
  }

  static std::string apply(const std::string& s, const Move& m) {
    std::string out;
    out.reserve(s.size());
    auto a = static_cast<std::size_t>(m.a), b = static_cast<std::size_t>(m.b),
         c = static_cast<std::size_t>(m.c), d = static_cast<std::size_t>(m.d);
    out.append(s, 0, a);
    out.append(s, c, d - c + 1);
    out.append(s, b + 1, c - b - 1);
    out.append(s, a, b - a + 1);
    out.append(s, d + 1, std::string::npos);
    return out;
  }

  bool dfs(const std::string& s, int b, int g, int t) {
    if (b == 0) return true;
    if (g + h(b) > t) return false;
    auto [it, fresh] = seen_.try_emplace(s, g);
    if (!fresh) {
      if (it->second <= g) return false;
      it->second = g;
    }
    for (const Move& m : moves_) {
      int nb = b + delta(s, m);
      if (g + 1 + h(nb) > t) continue;
      if (dfs(apply(s, m), nb, g + 1, t)) return true;
    }
    return false;
  }

  int n_;
  OpKind kind_;
  int cuts_per_move_;
  std::string state_;
  std::vector<Move> moves_;
  std::unordered_map<std::string, int> seen_;
};

}  // namespace

BlockResult metric_block_exact(const std::vector<Value>& a, OpKind kind, Index budget, Index limit) {
  if (kind != OpKind::BlockMove && kind != OpKind::BlockSwap && kind != OpKind::RestrictedBlockSwap)
    throw std::invalid_argument("metric_block_exact: not a block operation");
  if (budget < 0) throw std::invalid_argument("metric_block_exact: negative budget");
  if (static_cast<Index>(a.size()) > limit || a.size() > 250)
    throw std::length_error("metric_block_exact: n = " + std::to_string(a.size()) +
                            " exceeds the exact-solver limit " + std::to_string(limit));
  return BlockSolver(a, kind).solve(budget);
}

// ---------------------------------------------------------------------------
// Brute-force oracles

namespace {

using Small = std::array<std::uint8_t, kBruteLimit>;

std::uint64_t pack(const Small& s, int n) {
  std::uint64_t k = 0;
  for (int i = 0; i < n; ++i) k |= static_cast<std::uint64_t>(s[static_cast<std::size_t>(i)]) << (4 * i);
  return k;
}

std::vector<OpRecord> all_ops(int n, OpKind kind) {
  std::vector<OpRecord> ops;
  switch (kind) {
    case OpKind::Swap:
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) ops.push_back({kind, a, b, 0, 0, 0});
      break;
    case OpKind::AdjacentSwap:
      for (int a = 0; a + 1 < n; ++a) ops.push_back({kind, a, a + 1, 0, 0, 0});
      break;
    case OpKind::Move:
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (a != b) ops.push_back({kind, a, b, 0, 0, 0});
      break;
    case OpKind::BlockMove:
    case OpKind::BlockSwap:
    case OpKind::RestrictedBlockSwap:
      for (const Move& m : block_moves(n, kind)) ops.push_back({kind, m.a - 1, m.b - 1, m.c - 1, m.d - 1, 0});
      break;
    case OpKind::Replacement:
      throw std::logic_error("replacement has no state-space moves");
  }
  return ops;
}

Small apply_small(const Small& s, int n, const OpRecord& op) {
  std::vector<Value> v(s.begin(), s.begin() + n);
  apply_op(v, op);
  Small out{};
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v[static_cast<std::size_t>(i)]);
  return out;
}

using DistTable = std::unordered_map<std::uint64_t, std::uint8_t>;

const DistTable& permutation_table(int n, OpKind kind) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, DistTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, static_cast<int>(kind));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  DistTable& t = cache[key];
  auto ops = all_ops(n, kind);
  Small start{};
  for (int i = 0; i < n; ++i) start[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  std::deque<Small> frontier{start};
  t[pack(start, n)] = 0;
  while (!frontier.empty()) {
    Small s = frontier.front();
    frontier.pop_front();
    std::uint8_t d = t[pack(s, n)];
    for (const auto& op : ops) {
      Small nx = apply_small(s, n, op);
      if (t.try_emplace(pack(nx, n), static_cast<std::uint8_t>(d + 1)).second) frontier.push_back(nx);
    }
  }
  return t;
}

Index bfs_to_sorted(const std::vector<int>& r, OpKind kind) {
  int n = static_cast<int>(r.size());
  Small start{};
  for (int i = 0; i < n; ++i) start[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(r[static_cast<std::size_t>(i)]);
  auto sorted = [n](const Small& s) {
    for (int i = 0; i + 1 < n; ++i)
      if (s[static_cast<std::size_t>(i)] > s[static_cast<std::size_t>(i) + 1]) return false;
    return true;
  };
  if (sorted(start)) return 0;
  auto ops = all_ops(n, kind);
  std::unordered_map<std::uint64_t, Index> dist{{pack(start, n), 0}};
  std::deque<Small> frontier{start};
  while (!frontier.empty()) {
    Small s = frontier.front();
    frontier.pop_front();
    Index d = dist[pack(s, n)];
    for (const auto& op : ops) {
      Small nx = apply_small(s, n, op);
      if (!dist.try_emplace(pack(nx, n), d + 1).second) continue;
      if (sorted(nx)) return d + 1;
      frontier.push_back(nx);
    }
  }
  throw std::logic_error("sorted arrangement unreachable");
}

}  // namespace

Index brute_metric(const std::vector<Value>& a, OpKind kind) {
  auto n = static_cast<int>(a.size());
  if (kind == OpKind::Replacement) {
    if (n > 20) throw std::length_error("brute replacement limited to n <= 20");
    int best = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      int cnt = __builtin_popcount(mask);
      if (cnt <= best) continue;
      bool ok = true;
      Value last = 0;
      bool have = false;
      for (int i = 0; i < n && ok; ++i)
        if (mask >> i & 1u) {
          if (have && a[static_cast<std::size_t>(i)] < last) ok = false;
          last = a[static_cast<std::size_t>(i)];
          have = true;
        }
      if (ok) best = cnt;
    }
    return n - best;
  }
  if (n > kBruteLimit) throw std::length_error("brute_metric limited to n <= 8");
  if (n <= 1) return 0;
  auto r = dense_ranks(a);
  bool distinct = *std::max_element(r.begin(), r.end()) == n - 1;
  if (!distinct) return bfs_to_sorted(r, kind);
  Small s{};
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(r[static_cast<std::size_t>(i)]);
  return permutation_table(n, kind).at(pack(s, n));
}

// ---------------------------------------------------------------------------

DisorderProfile disorder_profile(const std::vector<Value>& a, std::optional<Value> e, Index block_limit) {
  DisorderProfile p;
  p.k_sum = metric_sum(a);
  p.k_max = metric_max(a);
  p.k_inv = metric_inv(a);
  p.k_ainv = metric_ainv(a);
  p.k_seq = metric_seq(a);
  p.k_mov = metric_mov(a);
  p.k_rep = metric_rep(a);
  p.k_swap = metric_swap(a);
  p.k_aswap = metric_aswap(a);
  if (e) p.k_faults_e = metric_faults_of(a, *e);
  auto n = static_cast<Index>(a.size());
  if (n <= block_limit) {
    p.k_bswap = metric_block_exact(a, OpKind::BlockSwap, n, block_limit).value;
    p.k_rbswap = metric_block_exact(a, OpKind::RestrictedBlockSwap, n, block_limit).value;
    p.k_bmov = metric_block_exact(a, OpKind::BlockMove, n, block_limit).value;
  }

  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("profile invariant failed: ") + what);
  };
  require(p.k_seq == p.k_mov && p.k_mov == p.k_rep, "k_seq = k_mov = k_rep");
  require(p.k_aswap == p.k_inv, "k_aswap = k_inv");
  require(p.k_inv <= p.k_sum && p.k_sum <= 2 * p.k_inv, "k_inv <= k_sum <= 2 k_inv");
  require(p.k_max <= p.k_inv, "k_max <= k_inv");
  require(p.k_rep <= p.k_inv, "k_rep <= k_inv");
  require(p.k_ainv <= p.k_seq, "k_ainv <= k_seq");
  require(p.k_swap <= p.k_aswap, "k_swap <= k_aswap");
  require(p.k_rep <= 2 * p.k_swap, "k_rep <= 2 k_swap");
  if (p.k_bswap) {
    require(*p.k_bswap <= *p.k_rbswap, "k_bswap <= k_rbswap");
    require(*p.k_rbswap <= p.k_swap, "k_rbswap <= k_swap");
    require(*p.k_bswap <= *p.k_bmov && *p.k_bmov <= 2 * *p.k_bswap, "k_bswap <= k_bmov <= 2 k_bswap");
    require(*p.k_bmov <= p.k_mov, "k_bmov <= k_mov");
    require(p.k_ainv <= 2 * *p.k_bswap, "k_ainv <= 2 k_bswap");
  }
  return p;
}

namespace {

std::vector<std::pair<std::string, std::string>> profile_fields(const DisorderProfile& p) {
  auto opt = [](const std::optional<Index>& v) { return v ? std::to_string(*v) : std::string(); };
  return {{"k_sum", std::to_string(p.k_sum)},   {"k_max", std::to_string(p.k_max)},
          {"k_inv", std::to_string(p.k_inv)},   {"k_ainv", std::to_string(p.k_ainv)},
          {"k_seq", std::to_string(p.k_seq)},   {"k_mov", std::to_string(p.k_mov)},
          {"k_rep", std::to_string(p.k_rep)},   {"k_swap", std::to_string(p.k_swap)},
          {"k_aswap", std::to_string(p.k_aswap)}, {"k_faults_e", opt(p.k_faults_e)},
          {"k_bswap", opt(p.k_bswap)},          {"k_rbswap", opt(p.k_rbswap)},
          {"k_bmov", opt(p.k_bmov)}};
}

}  // namespace

std::string format_profile(const DisorderProfile& p) {
  std::ostringstream os;
  for (auto& [k, v] : profile_fields(p)) os << k << '=' << (v.empty() ? "na" : v) << '\n';
  return os.str();
}

std::string profile_csv_header() {
  std::string out;
  for (auto& [k, v] : profile_fields(DisorderProfile{})) out += (out.empty() ? "" : ",") + k;
  return out;
}

std::string profile_csv_row(const DisorderProfile& p) {
  std::string out;
  bool first = true;
  for (auto& [k, v] : profile_fields(p)) {
    out += (first ? "" : ",") + v;
    first = false;
  }
  return out;
}

}  // namespace robust_search
