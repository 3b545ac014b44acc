#include "robust_search/adversaries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "robust_search/disorder_metrics.hpp"

namespace robust_search {

namespace {

// floor(log2(n / m)) for positive integers, negative when n < m.
Index floor_log2_ratio(Index n, Index m) {
  if (n >= m) {
    Index t = 0;
    while ((m << (t + 1)) <= n) ++t;
    return t;
  }
  Index s = 0;
  while ((n << s) < m) ++s;
  return -s;
}

Instance sorted_with_target(Index n, Index x) {
  std::vector<Value> v(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = 2 * j;
  return make_instance(std::move(v), 2 * x, {true, true});
}

Outcome compare(Index i, Index x) {
  if (i < x) return Outcome::Less;
  if (i > x) return Outcome::Greater;
  return Outcome::Equal;
}

struct Run {
  Index start = 0, len = 0;
};

// Maximal unqueried runs inside [lo, hi].
std::vector<Run> unqueried_runs(const std::set<Index>& qs, Index lo, Index hi) {
  std::vector<Run> runs;
  Index prev = lo - 1;
  for (auto it = qs.lower_bound(lo); it != qs.end() && *it <= hi; ++it) {
    if (*it - prev - 1 > 0) runs.push_back({prev + 1, *it - prev - 1});
    prev = *it;
  }
  if (hi - prev > 0) runs.push_back({prev + 1, hi - prev});
  return runs;
}

Index top_k_total(std::vector<Run> runs, Index k) {
  auto kk = std::min<std::size_t>(static_cast<std::size_t>(k), runs.size());
  std::partial_sort(runs.begin(), runs.begin() + static_cast<std::ptrdiff_t>(kk), runs.end(),
                    [](const Run& a, const Run& b) { return a.len > b.len; });
  Index s = 0;
  for (std::size_t i = 0; i < kk; ++i) s += runs[i].len;
  return s;
}

std::vector<Value> scaled_sorted(Index n) {
  std::vector<Value> v(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = (j + 1) * n;
  return v;
}

OpRecord block_op(OpKind kind, Index a, Index b, Index c, Index d) {
  OpRecord op;
  op.kind = kind;
  op.a = a;
  op.b = b;
  op.c = c;
  op.d = d;
  return op;
}

std::vector<OpRecord> undo_log(const std::vector<OpRecord>& ops) {
  std::vector<OpRecord> log;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) log.push_back(inverse_block_op(*it));
  return log;
}

Commitment mirror(const Commitment& c) {
  Index n = c.instance.n();
  Value hi = *std::max_element(c.instance.values.begin(), c.instance.values.end());
  Value top = std::max(hi, c.instance.target) + 1;
  std::vector<Value> v(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j)
    v[static_cast<std::size_t>(j)] = top - c.instance.values[static_cast<std::size_t>(n - 1 - j)];
  Commitment m;
  m.instance = make_instance(std::move(v), top - c.instance.target, c.instance.flags);
  for (const auto& op : c.sort_log)
    m.sort_log.push_back(block_op(op.kind, n - 1 - op.d, n - 1 - op.c, n - 1 - op.b, n - 1 - op.a));
  return m;
}

bool replay_sorts(const Commitment& c) {
  auto v = c.instance.values;
  for (const auto& op : c.sort_log) apply_op(v, op);
  return std::is_sorted(v.begin(), v.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// Lie adversary

LieAdversary::LieAdversary(Index n, std::size_t k, int c) : n_(n), nav_(n) {
  if (c < 1) throw ContractError("lie adversary needs c >= 1");
  st_.c = c;
  st_.k = k;
  queried_.assign(static_cast<std::size_t>(n), 0);
  set_range(nav_.root());
}

void LieAdversary::set_range(const Node& root) {
  range_root_ = root;
  lo_ = root.lo;
  hi_ = root.hi;
}

std::optional<Node> LieAdversary::deep_node(const Node& from, Outcome first, Outcome then) const {
  Node v = nav_.child(from, first);
  if (v.extended()) return std::nullopt;
  for (int s = 0; s < st_.c; ++s) {
    v = nav_.child(v, then);
    if (v.extended()) return std::nullopt;
  }
  return v;
}

Outcome LieAdversary::relative(Index i) const {
  if (e_pos_) return compare(i, *e_pos_);
  return i < lo_ ? Outcome::Less : Outcome::Greater;
}

void LieAdversary::decide(bool lie) {
  std::optional<Node> next;
  if (lie && st_.lies_used < st_.k) next = deep_node(phase_root_, Outcome::Greater, Outcome::Less);
  if (next) {
    ++st_.lies_used;
    st_.phase_of_lie.push_back(st_.phase);
    lie_ordinals_.push_back(phase_ordinal_);
  } else {
    next = deep_node(phase_root_, Outcome::Less, Outcome::Greater);
  }
  set_range(*next);
  mode_ = Mode::Await;
}

Outcome LieAdversary::dispatch(Index i, std::size_t ordinal) {
  if (e_pos_) return relative(i);
  if (mode_ == Mode::Phase) {
    const Node& r = phase_root_;
    ++phase_queries_;
    if (i == r.index) {
      decide(phase_queries_ > static_cast<std::size_t>(st_.c) + 1);
      return dispatch(i, ordinal);
    }
    if (r.lo <= i && i < r.index) {
      decide(false);
      return dispatch(i, ordinal);
    }
    if (r.index < i && i <= r.hi) {
      if (nav_.depth_of(i) >= r.depth() + static_cast<std::size_t>(st_.c) + 1) {
        decide(true);
        return dispatch(i, ordinal);
      }
      return Outcome::Greater;
    }
    return i < r.lo ? Outcome::Less : Outcome::Greater;
  }
  if (i < lo_ || i > hi_) return relative(i);
  if (mode_ == Mode::Await) {
    const Node& r = range_root_;
    bool room = deep_node(r, Outcome::Greater, Outcome::Less) && deep_node(r, Outcome::Less, Outcome::Greater);
    if (i == r.index && st_.lies_used < st_.k && room) {
      mode_ = Mode::Phase;
      phase_root_ = r;
      phase_ordinal_ = ordinal;
      phase_queries_ = 1;
      st_.phase = r.depth() / static_cast<std::size_t>(st_.c + 1);
      return Outcome::Less;
    }
    mode_ = Mode::Plain;
  }
  if (lo_ == hi_) {
    e_pos_ = i;
    mode_ = Mode::Done;
    return Outcome::Equal;
  }
  if (i - lo_ > hi_ - i) {
    hi_ = i - 1;
    return Outcome::Greater;
  }
  lo_ = i + 1;
  return Outcome::Less;
}

Outcome LieAdversary::answer(Index i, std::size_t ordinal) {
  if (i < 0 || i >= n_) throw std::out_of_range("lie adversary: index out of range");
  if (!queried_[static_cast<std::size_t>(i)]) {
    Index par = nav_.parent_index(i);
    if (par >= 0 && !queried_[static_cast<std::size_t>(par)])
      throw ContractError("lie adversary: index " + std::to_string(i) + " queried before its tree parent");
  }
  Outcome o = dispatch(i, ordinal);
  queried_[static_cast<std::size_t>(i)] = 1;
  log_.push_back({ordinal, i, o});
  return o;
}

Commitment LieAdversary::finalize() {
  if (!e_pos_) {
    Index lower = 0, upper = n_ - 1;
    std::set<std::size_t> lies(lie_ordinals_.begin(), lie_ordinals_.end());
    for (const auto& r : log_) {
      Outcome o = lies.count(r.ordinal) ? opposite(r.outcome) : r.outcome;
      if (o == Outcome::Less) lower = std::max(lower, r.index + 1);
      else if (o == Outcome::Greater) upper = std::min(upper, r.index - 1);
    }
    if (lower > upper) throw std::logic_error("lie adversary: no consistent position left");
    Node v = nav_.root();
    while (v.index < lower || v.index > upper) {
      v = nav_.child(v, v.index < lower ? Outcome::Less : Outcome::Greater);
      if (v.extended()) throw std::logic_error("lie adversary: interval without a tree node");
    }
    e_pos_ = v.index;
    mode_ = Mode::Done;
  }
  Commitment c;
  c.instance = sorted_with_target(n_, *e_pos_);
  c.lie_ordinals = lie_ordinals_;
  return c;
}

double LieAdversary::forced_minimum() const {
  double f = ceil_log2(n_) + static_cast<double>(st_.c) * static_cast<double>(st_.lies_used);
  return std::min(f, static_cast<double>(n_));
}

std::string LieAdversary::budget_violation(const Commitment& c) const {
  if (c.lie_ordinals.size() > st_.k) return "lies used exceed budget";
  auto ph = st_.phase_of_lie;
  std::sort(ph.begin(), ph.end());
  if (std::adjacent_find(ph.begin(), ph.end()) != ph.end()) return "two lies in one phase";
  return {};
}

// ---------------------------------------------------------------------------
// Window adversary

WindowAdversary::WindowAdversary(Index n, Index k) : n_(n), k_(k) {
  if (n < 1 || k < 0) throw ContractError("window adversary needs n >= 1, k >= 0");
  st_.l = 0;
  st_.r = n - 1;
  st_.phase1_len = k == 0 ? n : std::max<Index>(0, floor_log2_ratio(n, 2 * k) - 1);
  st_.phase2_budget = 2 * k + 1;
  queried_.assign(static_cast<std::size_t>(n), 0);
  ans_.assign(static_cast<std::size_t>(n), std::nullopt);
}

std::pair<Index, Index> WindowAdversary::frontier() const {
  Index a = -1, b = n_;
  for (Index j = 0; j < n_; ++j) {
    const auto& o = ans_[static_cast<std::size_t>(j)];
    if (o == Outcome::Less) a = std::max(a, j);
    if (o == Outcome::Greater) b = std::min(b, j);
  }
  return {a, b};
}

// Rank slot for e at x: e sits at x, every other element keeps its order.
Index WindowAdversary::rank_slot(Index x, Index a, Index b) const {
  auto disp = [x](Index s) { return std::abs(x - (s - (x < s ? 1 : 0))); };
  Index best = a + 1;
  for (Index s : {a + 1, b, std::clamp(x, a + 1, b), std::clamp(x + 1, a + 1, b)})
    if (disp(s) < disp(best)) best = s;
  return best;
}

Instance WindowAdversary::build(Index x) const {
  auto [a, b] = frontier();
  Index best = rank_slot(x, a, b);
  std::vector<Value> v(static_cast<std::size_t>(n_));
  Index t = 0, smalls = 0;
  for (Index j = 0; j < n_; ++j) {
    if (j == x) continue;
    if (j < best) ++smalls;
    v[static_cast<std::size_t>(j)] = 2 * t++;
  }
  v[static_cast<std::size_t>(x)] = 2 * smalls - 1;
  return make_instance(std::move(v), 2 * smalls - 1, {true, false});
}

void WindowAdversary::commit(std::optional<Index> at) {
  Index x = -1;
  if (at) {
    x = *at;
  } else {
    auto [a, b] = frontier();
    Index best = -1;
    for (Index j = std::max<Index>(0, st_.l); j <= std::min(st_.r, n_ - 1); ++j) {
      if (queried_[static_cast<std::size_t>(j)]) continue;
      Index slot = rank_slot(j, a, b);
      // e moves |j - rank| places and each element it passes moves one.
      Index s = 2 * std::abs(j - (slot - (j < slot ? 1 : 0)));
      if (best < 0 || s < best) {
        best = s;
        x = j;
      }
    }
    if (x < 0) throw std::logic_error("window adversary: no unqueried slot left");
  }
  committed_ = build(x);
  st_.phase = 3;
}

Outcome WindowAdversary::answer(Index i, std::size_t) {
  if (i < 0 || i >= n_) throw std::out_of_range("window adversary: index out of range");
  auto& slot = ans_[static_cast<std::size_t>(i)];
  Outcome o;
  if (committed_) {
    o = committed_->truth(i);
  } else if (slot) {
    o = *slot;
  } else if (count_ >= st_.phase1_len + st_.phase2_budget) {
    commit(std::nullopt);
    o = committed_->truth(i);
  } else if (i < st_.l) {
    o = Outcome::Less;
  } else if (i > st_.r) {
    o = Outcome::Greater;
  } else if (count_ < st_.phase1_len) {
    if (st_.l == st_.r) {
      commit(i);
      o = Outcome::Equal;
    } else if (i - st_.l + 1 > st_.r - i + 1) {
      o = Outcome::Greater;
      st_.r = i - 1;
    } else {
      o = Outcome::Less;
      st_.l = i + 1;
    }
  } else {
    if (st_.phase == 1) {
      st_.phase = 2;
      st_.mid = (st_.l + st_.r) / 2;
    }
    Index open = 0;
    for (Index j = st_.l; j <= st_.r; ++j) open += queried_[static_cast<std::size_t>(j)] ? 0 : 1;
    if (open == 1) {
      commit(i);
      o = Outcome::Equal;
    } else {
      o = i <= st_.mid ? Outcome::Less : Outcome::Greater;
    }
  }
  if (!slot) slot = o;
  queried_[static_cast<std::size_t>(i)] = 1;
  ++count_;
  return o;
}

Commitment WindowAdversary::finalize() {
  if (!committed_) commit(std::nullopt);
  return {*committed_, {}, {}};
}

double WindowAdversary::forced_minimum() const {
  double f;
  if (k_ == 0) f = static_cast<double>(floor_log2_ratio(n_, 1) + 1);
  else f = static_cast<double>(floor_log2_ratio(n_, 2 * k_) + 2 * k_ + 1);
  return std::min(f, static_cast<double>(n_));
}

std::string WindowAdversary::budget_violation(const Commitment& c) const {
  Index s = metric_sum(c.instance.values);
  if (s > k_) return "k_sum " + std::to_string(s) + " exceeds budget " + std::to_string(k_);
  return {};
}

// ---------------------------------------------------------------------------
// k_max adversary

KmaxAdversary::KmaxAdversary(Index n, Index k) : n_(n), k_(k), l_(0), r_(n - 1) {
  if (k < 1 || n < 4 * k) throw ContractError("kmax adversary needs k >= 1 and n >= 4k");
  queried_.assign(static_cast<std::size_t>(n), 0);
  ans_.assign(static_cast<std::size_t>(n), std::nullopt);
}

Outcome KmaxAdversary::standard(Index i) const {
  if (w0_ < 0) return i < l_ ? Outcome::Less : Outcome::Greater;
  return i < w0_ + 2 * k_ ? Outcome::Less : Outcome::Greater;
}

Instance KmaxAdversary::build(Index x, const std::vector<char>& large) const {
  std::vector<int> cls(static_cast<std::size_t>(n_));  // 0 small, 1 e, 2 large
  Index smalls = 0;
  for (Index j = 0; j < n_; ++j) {
    auto u = static_cast<std::size_t>(j);
    if (j == x) cls[u] = 1;
    else if (ans_[u]) cls[u] = *ans_[u] == Outcome::Less ? 0 : 2;
    else cls[u] = large[u] ? 2 : 0;
    if (cls[u] == 0) ++smalls;
  }
  std::vector<Value> v(static_cast<std::size_t>(n_));
  Index ts = 0, tl = 0;
  for (Index j = 0; j < n_; ++j) {
    auto u = static_cast<std::size_t>(j);
    if (cls[u] == 0) v[u] = 2 * ts++;
    else if (cls[u] == 2) v[u] = 2 * (smalls + 1 + tl++);
    else v[u] = 2 * smalls;
  }
  return make_instance(std::move(v), 2 * smalls, {true, false});
}

Instance KmaxAdversary::best_instance(const std::vector<Index>& candidates) const {
  if (candidates.empty()) throw std::logic_error("kmax adversary: no slot for e");
  Index lo = w0_ >= 0 ? w0_ : l_;
  Index hi = w0_ >= 0 ? w0_ + 4 * k_ - 1 : r_;
  if (w0_ >= 0 && phase_ >= 2) {
    lo = half_ == 0 ? w0_ : w0_ + 2 * k_;
    hi = lo + 2 * k_ - 1;
  }
  std::optional<Instance> best;
  Index best_max = 0;
  for (Index x : candidates) {
    std::vector<char> large(static_cast<std::size_t>(n_));
    std::vector<Index> free;
    for (Index j = 0; j < n_; ++j) {
      auto u = static_cast<std::size_t>(j);
      if (j == x || ans_[u]) continue;
      if (j >= lo && j <= hi) {
        free.push_back(j);
        large[u] = j > x;
      } else {
        large[u] = standard(j) == Outcome::Greater;
      }
    }
    auto consider = [&](const std::vector<char>& lg) {
      Instance inst = build(x, lg);
      Index m = metric_max(inst.values);
      if (!best || m < best_max) {
        best = std::move(inst);
        best_max = m;
      }
    };
    if (free.size() <= 6) {
      for (std::uint32_t mask = 0; mask < (1u << free.size()); ++mask) {
        for (std::size_t b = 0; b < free.size(); ++b)
          large[static_cast<std::size_t>(free[b])] = (mask >> b) & 1u;
        consider(large);
      }
    } else {
      consider(large);
    }
  }
  return *best;
}

Outcome KmaxAdversary::answer(Index i, std::size_t) {
  if (i < 0 || i >= n_) throw std::out_of_range("kmax adversary: index out of range");
  auto u = static_cast<std::size_t>(i);
  if (committed_) return committed_->truth(i);
  if (ans_[u]) return *ans_[u];
  Outcome o;
  if (w0_ < 0 && r_ - l_ + 1 < 8 * k_) {
    w0_ = l_ + (r_ - l_ + 1 - 4 * k_) / 2;
    phase_ = 1;
  }
  auto count_in = [this](Index a) {
    Index c = 0;
    for (Index j = a; j < a + 2 * k_; ++j) c += queried_[static_cast<std::size_t>(j)] ? 1 : 0;
    return c;
  };
  if (phase_ == 1) {
    Index cl = count_in(w0_), cr = count_in(w0_ + 2 * k_);
    if (cl >= k_ - 1 && cr >= k_ - 1) {
      half_ = cl == k_ - 1 ? 0 : 1;
      phase_ = 2;
    }
  }
  if (phase_ == 2 && phase2_new_ == k_ - 1) phase_ = 3;
  Index h0 = w0_ + (half_ == 0 ? 0 : 2 * k_);
  bool in_h = w0_ >= 0 && i >= h0 && i < h0 + 2 * k_;
  if (phase_ == 0) {
    if (i < l_) {
      o = Outcome::Less;
    } else if (i > r_) {
      o = Outcome::Greater;
    } else if (i - l_ + 1 > r_ - i + 1) {
      o = Outcome::Greater;
      r_ = i - 1;
    } else {
      o = Outcome::Less;
      l_ = i + 1;
    }
  } else if (phase_ == 2 && in_h) {
    Index special = half_ == 0 ? w0_ : w0_ + 4 * k_ - 1;
    o = i == special ? standard(i) : opposite(standard(i));
    ++phase2_new_;
  } else if (phase_ == 3 && in_h) {
    committed_ = best_instance({i});
    o = Outcome::Equal;
  } else {
    o = standard(i);
  }
  ans_[u] = o;
  queried_[u] = 1;
  return o;
}

Commitment KmaxAdversary::finalize() {
  if (!committed_) {
    Index lo = l_, hi = r_;
    if (w0_ >= 0) {
      lo = phase_ >= 2 ? w0_ + (half_ == 0 ? 0 : 2 * k_) : w0_;
      hi = phase_ >= 2 ? lo + 2 * k_ - 1 : w0_ + 4 * k_ - 1;
    }
    std::vector<Index> cands;
    for (Index j = lo; j <= hi; ++j)
      if (!queried_[static_cast<std::size_t>(j)]) cands.push_back(j);
    committed_ = best_instance(cands);
  }
  return {*committed_, {}, {}};
}

double KmaxAdversary::forced_minimum() const {
  double f = static_cast<double>(floor_log2_ratio(n_, 4 * k_) + 3 * k_ - 2);
  return std::min(f, static_cast<double>(n_));
}

std::string KmaxAdversary::budget_violation(const Commitment& c) const {
  Index m = metric_max(c.instance.values);
  if (m > k_) return "k_max " + std::to_string(m) + " exceeds budget " + std::to_string(k_);
  return {};
}

// ---------------------------------------------------------------------------
// Block-swap instantiation

BlockInstantiation block_swap_instantiation(Index n, const BlockPattern& pattern) {
  if (n < 2 || n % 2) throw ContractError("block pattern needs even n");
  if (pattern.betas.size() != pattern.alphas.size() + 1) throw ContractError("need one more beta than alphas");
  Index q = 0, sb = 0;
  for (Index a : pattern.alphas) {
    if (a < 0) throw ContractError("negative alpha");
    q += a;
  }
  for (Index b : pattern.betas) {
    if (b < 0) throw ContractError("negative beta");
    sb += b;
  }
  Index half = n / 2;
  if (sb != half - 2 * q - 1) throw ContractError("infeasible pattern: betas must sum to n/2 - 2q - 1");

  // Canonical form: drop empty blocks and merge neighbours of the same kind.
  std::vector<std::pair<bool, Index>> runs;  // (small?, size)
  for (std::size_t i = 0; i < pattern.betas.size(); ++i) {
    if (i > 0) runs.push_back({true, pattern.alphas[i - 1]});
    runs.push_back({false, pattern.betas[i]});
  }
  std::vector<std::pair<bool, Index>> canon;
  for (auto r : runs) {
    if (r.second == 0) continue;
    if (!canon.empty() && canon.back().first == r.first) canon.back().second += r.second;
    else canon.push_back(r);
  }
  Index beta0 = 0;
  std::size_t at = 0;
  if (!canon.empty() && !canon.front().first) beta0 = canon[at++].second;
  std::vector<Index> A, B{beta0};
  for (; at < canon.size(); ++at) {
    if (canon[at].first) {
      A.push_back(canon[at].second);
      B.push_back(0);
    } else {
      B.back() = canon[at].second;
    }
  }

  Index y = half + q;
  auto v = scaled_sorted(n);
  Value target = v[static_cast<std::size_t>(y)];
  std::vector<OpRecord> ops;
  auto run = [&](OpKind kind, Index a, Index b, Index c, Index d) {
    ops.push_back(block_op(kind, a, b, c, d));
    apply_op(v, ops.back());
  };
  if (q > 0) {
    Index c0 = y + 1 + beta0;
    run(OpKind::BlockSwap, half, half + q - 1, c0, c0 + q - 1);
    Index start = c0;
    std::size_t lo = 1, hi = A.size();
    while (hi >= lo + 2) {
      Index sa = 0, sbeta = 0;
      for (std::size_t m = lo; m <= hi; ++m) {
        sa += A[m - 1];
        sbeta += B[m];
      }
      Index a = start + A[lo - 1], b = a + A[hi - 1] - 1;
      Index d = start + sa + sbeta - B[hi] - 1, c = d - B[lo] + 1;
      run(OpKind::BlockSwap, a, b, c, d);
      start += A[lo - 1] + B[lo];
      ++lo;
      --hi;
    }
    if (hi == lo + 1) {
      Index a = start + A[lo - 1], b = a + A[hi - 1] - 1;
      run(OpKind::BlockSwap, a, b, b + 1, b + B[lo]);
    }
  }
  BlockInstantiation out;
  out.instance = make_instance(std::move(v), target, {true, true});
  out.log = undo_log(ops);
  return out;
}

// ---------------------------------------------------------------------------
// Hidden-block adversary

std::string to_string(HiddenMode m) {
  switch (m) {
    case HiddenMode::Ainv: return "ainv";
    case HiddenMode::Rbswap: return "rbswap";
    case HiddenMode::Bswap: return "bswap";
  }
  return "?";
}

HiddenMode hidden_mode_from_string(const std::string& s) {
  if (s == "ainv") return HiddenMode::Ainv;
  if (s == "rbswap") return HiddenMode::Rbswap;
  if (s == "bswap") return HiddenMode::Bswap;
  throw std::invalid_argument("unknown hidden-block mode: " + s);
}

HiddenBlockAdversary::HiddenBlockAdversary(Index n, Index k, HiddenMode mode) : mode_(mode) {
  if (n < 2 || n % 2) throw ContractError("hidden-block adversary needs even n");
  if (k < 1) throw ContractError("hidden-block adversary needs k >= 1");
  st_.n = n;
  st_.k = k;
}

Index HiddenBlockAdversary::p_of(const std::set<Index>& qs, Index p) const {
  Index half = st_.n / 2;
  while (p < half && qs.count(half - 1 - p)) ++p;
  return p;
}

Index HiddenBlockAdversary::q_of(const std::set<Index>& qs, Index q) const {
  Index half = st_.n / 2;
  while (q < half && qs.count(half + q)) ++q;
  return q;
}

bool HiddenBlockAdversary::feasible_left(const std::set<Index>& qs, Index p) const {
  Index half = st_.n / 2;
  if (p >= half) return false;
  if (p == 0) return true;
  Index x = half - 1 - p;
  return top_k_total(unqueried_runs(qs, 0, x - 1), st_.k) >= p;
}

bool HiddenBlockAdversary::feasible_right(const std::set<Index>& qs, Index q) const {
  Index half = st_.n / 2;
  if (q >= half) return false;
  if (q == 0) return true;
  Index y = half + q;
  return top_k_total(unqueried_runs(qs, y + 1, st_.n - 1), st_.k) >= q;
}

void HiddenBlockAdversary::refresh() {
  st_.p = p_of(st_.queried, st_.p);
  st_.q = q_of(st_.queried, st_.q);
  st_.ell = left_total_ - st_.p;
  st_.r_count = right_total_ - st_.q;
}

Commitment HiddenBlockAdversary::instantiate(bool left, const std::set<Index>& qs) const {
  Index n = st_.n, half = n / 2;
  // Work in right-half coordinates; the left case is the mirror image.
  std::set<Index> mq;
  if (left) {
    for (Index j : qs) mq.insert(n - 1 - j);
  } else {
    mq = qs;
  }
  Index q = q_of(mq);
  Index y = half + q;
  auto runs = unqueried_runs(mq, y + 1, n - 1);
  std::stable_sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) { return a.len > b.len; });
  std::vector<Run> used;
  Index need = q;
  for (std::size_t i = 0; i < runs.size() && i < static_cast<std::size_t>(st_.k) && need > 0; ++i) {
    Index m = std::min(runs[i].len, need);
    used.push_back({runs[i].start, m});
    need -= m;
  }
  if (need > 0) throw std::logic_error("hidden-block adversary: committed half is infeasible");
  std::sort(used.begin(), used.end(), [](const Run& a, const Run& b) { return a.start < b.start; });

  Commitment c;
  if (mode_ == HiddenMode::Bswap) {
    BlockPattern pat;
    Index prev_end = y;
    for (const auto& u : used) {
      pat.betas.push_back(u.start - prev_end - 1);
      pat.alphas.push_back(u.len);
      prev_end = u.start + u.len - 1;
    }
    pat.betas.push_back(n - 1 - prev_end);
    auto bi = block_swap_instantiation(n, pat);
    c.instance = std::move(bi.instance);
    c.sort_log = std::move(bi.log);
  } else {
    auto v = scaled_sorted(n);
    Value target = v[static_cast<std::size_t>(y)];
    std::vector<OpRecord> ops;
    Index seg = half;
    for (const auto& u : used) {
      ops.push_back(block_op(OpKind::RestrictedBlockSwap, seg, seg + u.len - 1, u.start, u.start + u.len - 1));
      apply_op(v, ops.back());
      seg += u.len;
    }
    c.instance = make_instance(std::move(v), target, {true, true});
    c.sort_log = undo_log(ops);
  }
  return left ? mirror(c) : c;
}

Outcome HiddenBlockAdversary::answer(Index i, std::size_t) {
  Index n = st_.n, half = n / 2;
  if (i < 0 || i >= n) throw std::out_of_range("hidden-block adversary: index out of range");
  if (commitment_) {
    ++answered_;
    (i < half ? left_total_ : right_total_) += 1;
    refresh();
    return commitment_->instance.truth(i);
  }
  bool left = i < half;
  bool fresh = st_.queried.insert(i).second;
  bool& mine = left ? st_.left_feasible : st_.right_feasible;
  bool other = left ? st_.right_feasible : st_.left_feasible;
  bool keep = mine && (left ? feasible_left(st_.queried, p_of(st_.queried, st_.p))
                            : feasible_right(st_.queried, q_of(st_.queried, st_.q)));
  Outcome o = left ? Outcome::Less : Outcome::Greater;
  if (!keep && !other) {
    if (!mine) throw std::logic_error("hidden-block adversary: both halves already abandoned");
    if (fresh) st_.queried.erase(i);
    commitment_ = instantiate(left, st_.queried);
    st_.queried.insert(i);
    st_.committed = commitment_->instance;
    at_commit_ = answered_ + 1;
    o = commitment_->instance.truth(i);
  } else {
    mine = keep;
  }
  ++answered_;
  (left ? left_total_ : right_total_) += 1;
  refresh();
  return o;
}

Commitment HiddenBlockAdversary::finalize() {
  if (!commitment_) {
    if (!st_.left_feasible && !st_.right_feasible) throw std::logic_error("hidden-block adversary: nothing feasible");
    commitment_ = instantiate(st_.left_feasible, st_.queried);
    st_.committed = commitment_->instance;
    at_commit_ = answered_;
  }
  return *commitment_;
}

double HiddenBlockAdversary::forced_minimum() const {
  double k = static_cast<double>(st_.k), n = static_cast<double>(st_.n);
  return std::min(2.0 * std::sqrt(4 * k * k + 2 * k * n) - 4 * k, n);
}

std::size_t HiddenBlockAdversary::forced_count(std::size_t total) const {
  return at_commit_ ? *at_commit_ : total;
}

std::string HiddenBlockAdversary::budget_violation(const Commitment& c) const {
  const Instance& inst = c.instance;
  if (!inst.pos || *inst.pos != inst.rank) return "pos(e) != rank(e)";
  Index k = st_.k;
  switch (mode_) {
    case HiddenMode::Ainv: {
      Index a = metric_ainv(inst.values);
      if (a > k + 1) return "k_ainv " + std::to_string(a) + " exceeds " + std::to_string(k + 1);
      return {};
    }
    case HiddenMode::Rbswap:
      for (const auto& op : c.sort_log)
        if (op.kind != OpKind::RestrictedBlockSwap || op.b - op.a != op.d - op.c) return "log holds an unrestricted swap";
      if (static_cast<Index>(c.sort_log.size()) > k) return "restricted swap log longer than k";
      break;
    case HiddenMode::Bswap:
      if (static_cast<Index>(c.sort_log.size()) > (k + 2) / 2) return "block swap log longer than ceil((k+1)/2)";
      break;
  }
  if (!replay_sorts(c)) return "replaying the swap log does not sort the array";
  return {};
}

// ---------------------------------------------------------------------------
// Duels

std::unique_ptr<Adversary> make_adversary(const AdversarySpec& s) {
  if (s.strategy == "lie") return std::make_unique<LieAdversary>(s.n, static_cast<std::size_t>(s.k), s.c);
  if (s.strategy == "window") return std::make_unique<WindowAdversary>(s.n, s.k);
  if (s.strategy == "kmax") return std::make_unique<KmaxAdversary>(s.n, s.k);
  if (s.strategy == "hidden") return std::make_unique<HiddenBlockAdversary>(s.n, s.k, s.mode);
  throw std::invalid_argument("unknown adversary strategy: " + s.strategy);
}

std::string check_consistency(const std::vector<QueryRecord>& transcript, const Commitment& c) {
  std::set<std::size_t> lies(c.lie_ordinals.begin(), c.lie_ordinals.end());
  for (const auto& r : transcript) {
    Outcome t = c.instance.truth(r.index);
    bool lie = lies.count(r.ordinal) > 0;
    bool bad = lie ? (r.outcome == t || r.outcome == Outcome::Equal) : r.outcome != t;
    if (bad) {
      std::ostringstream os;
      os << "query #" << r.ordinal << " at " << r.index << " answered " << to_char(r.outcome)
         << (lie ? " as a lie" : "") << ", committed array says " << to_char(t);
      return os.str();
    }
  }
  return {};
}

DuelReport duel(const std::string& algorithm, const AdversarySpec& spec, const AlgoParams& params) {
  auto adv = make_adversary(spec);
  QuerySession session(spec.n, *adv);
  session.set_query_limit(static_cast<std::size_t>(16 * spec.n + 1024));
  DuelReport rep;
  rep.algorithm = algorithm;
  rep.adversary = spec.strategy == "hidden" ? "hidden/" + to_string(spec.mode) : spec.strategy;
  rep.n = spec.n;
  rep.k = spec.k;
  rep.c = spec.c;
  SearchReport sr;
  try {
    sr = run_algorithm(algorithm, session, params);
  } catch (const ContractError& e) {
    rep.detail = e.what();
  }
  Commitment cm = adv->finalize();
  rep.queries = session.count();
  rep.counted = adv->forced_count(session.count());
  rep.forced_min = adv->forced_minimum();
  rep.committed = cm.instance;
  rep.committed_pos = cm.instance.pos.value_or(-1);
  rep.reported_index = sr.index;
  rep.found = sr.found() && cm.instance.pos && sr.index == *cm.instance.pos;
  rep.lies_used = cm.lie_ordinals.size();
  std::string why = check_consistency(session.transcript(), cm);
  rep.consistent = why.empty();
  std::string budget = adv->budget_violation(cm);
  rep.budget_ok = budget.empty();
  rep.bound_ok = static_cast<double>(rep.counted) + 1e-9 >= rep.forced_min;
  for (const auto& s : {why, budget})
    if (!s.empty()) rep.detail += (rep.detail.empty() ? "" : "; ") + s;
  return rep;
}

std::string duel_csv_header() {
  return "algorithm,adversary,n,k,c,queries,counted,forced_min,found,lies_used,consistent,budget_ok,bound_ok,detail";
}

std::string duel_csv_row(const DuelReport& r) {
  std::ostringstream os;
  std::string detail = r.detail;
  std::replace(detail.begin(), detail.end(), ',', ';');
  os << r.algorithm << ',' << r.adversary << ',' << r.n << ',' << r.k << ',' << r.c << ',' << r.queries << ','
     << r.counted << ',' << r.forced_min << ',' << r.found << ',' << r.lies_used << ',' << r.consistent << ','
     << r.budget_ok << ',' << r.bound_ok << ',' << detail;
  return os.str();
}

}  // namespace robust_search
