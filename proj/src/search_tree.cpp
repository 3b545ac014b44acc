#include "robust_search/search_tree.hpp"

#include <stdexcept>

namespace robust_search {

int ceil_log2(Index n) {
  int d = 0;
  while ((Index{1} << d) < n) ++d;
  return d;
}

TreeNav::TreeNav(Index n) : n_(n), height_(ceil_log2(n + 1)) {
  if (n < 1) throw std::invalid_argument("tree needs n >= 1");
}

Node TreeNav::root() const {
  Node v;
  v.lo = 0;
  v.hi = n_ - 1;
  v.index = (v.lo + v.hi) / 2;
  return v;
}

bool TreeNav::has_child(const Node& v, Outcome q) const {
  if (v.extended()) return false;
  return q == Outcome::Less ? v.index + 1 <= v.hi : v.lo <= v.index - 1;
}

Node TreeNav::child(const Node& v, Outcome q) const {
  if (q == Outcome::Equal) throw std::invalid_argument("child direction must be < or >");
  Node c = v;
  c.dirs.push_back(to_char(q));
  if (!has_child(v, q)) return c;
  if (q == Outcome::Less) c.lo = v.index + 1;
  else c.hi = v.index - 1;
  c.index = (c.lo + c.hi) / 2;
  c.real_depth = c.dirs.size();
  return c;
}

Node TreeNav::child_clamped(const Node& v, Outcome q) const {
  if (!has_child(v, q)) return v;
  return child(v, q);
}

Node TreeNav::from_dirs(const std::string& dirs) const {
  Node v = root();
  for (char c : dirs) v = child(v, outcome_from_char(c));
  return v;
}

std::optional<Node> TreeNav::parent(const Node& v) const {
  if (v.dirs.empty()) return std::nullopt;
  return from_dirs(v.dirs.substr(0, v.dirs.size() - 1));
}

std::optional<Node> TreeNav::last_opposite_ancestor(const Node& v, Outcome q) const {
  char want = to_char(opposite(q));
  for (std::size_t d = v.dirs.size(); d-- > 0;)
    if (v.dirs[d] == want) return from_dirs(v.dirs.substr(0, d));
  return std::nullopt;
}

std::size_t TreeNav::distance(const Node& a, const Node& b) const {
  std::size_t common = 0;
  while (common < a.dirs.size() && common < b.dirs.size() && a.dirs[common] == b.dirs[common])
    ++common;
  return a.dirs.size() + b.dirs.size() - 2 * common;
}

Node TreeNav::node_of(Index i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("tree index out of range");
  Node v = root();
  while (v.index != i) v = child(v, i > v.index ? Outcome::Less : Outcome::Greater);
  return v;
}

Index TreeNav::parent_index(Index i) const {
  auto p = parent(node_of(i));
  return p ? p->index : -1;
}

std::size_t TreeNav::depth_of(Index i) const { return node_of(i).depth(); }

void TallyTable::record(const Node& v, Outcome q) {
  auto& e = t_[v.dirs];
  if (q == Outcome::Less) ++e.first;
  else if (q == Outcome::Greater) ++e.second;
}

std::size_t TallyTable::less(const Node& v) const {
  auto it = t_.find(v.dirs);
  return it == t_.end() ? 0 : it->second.first;
}

std::size_t TallyTable::greater(const Node& v) const {
  auto it = t_.find(v.dirs);
  return it == t_.end() ? 0 : it->second.second;
}

std::size_t TallyTable::delta(const Node& v) const {
  std::size_t l = less(v), g = greater(v);
  return l > g ? l - g : g - l;
}

void TallyTable::erase(const Node& v) { t_.erase(v.dirs); }

}  // namespace robust_search
