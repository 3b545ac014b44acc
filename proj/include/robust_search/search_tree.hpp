#pragma once

#include <optional>
#include <string>
#include <unordered_map>

#include "robust_search/core_model.hpp"

namespace robust_search {

// A node of the implicit search tree, named by its direction path from the
// root ('<' = went right, '>' = went left). Past a leaf the path keeps
// growing while the array index stays fixed.
struct Node {
  std::string dirs;
  Index index = 0;
  Index lo = 0, hi = 0;    // interval of the deepest real node on the path
  std::size_t real_depth = 0;

  std::size_t depth() const { return dirs.size(); }
  bool extended() const { return real_depth < dirs.size(); }
  bool operator==(const Node& o) const { return dirs == o.dirs; }
};

class TreeNav {
 public:
  explicit TreeNav(Index n);

  Index n() const { return n_; }
  // Smallest d with 2^d >= n + 1.
  int virtual_height() const { return height_; }

  Node root() const;
  // LESS goes right, GREATER goes left; a missing child extends the leaf.
  Node child(const Node& v, Outcome q) const;
  // Same, but a missing child maps back to v itself.
  Node child_clamped(const Node& v, Outcome q) const;
  std::optional<Node> parent(const Node& v) const;
  Node from_dirs(const std::string& dirs) const;

  // Deepest proper ancestor u of v whose step toward v was opposite(q).
  // This is the node an algorithm double-checks after seeing q at v.
  std::optional<Node> last_opposite_ancestor(const Node& v, Outcome q) const;

  std::size_t distance(const Node& a, const Node& b) const;

  // Real (non-extended) node holding array index i.
  Node node_of(Index i) const;
  // Array index of the parent of i's node, or -1 at the root.
  Index parent_index(Index i) const;
  std::size_t depth_of(Index i) const;

 private:
  bool has_child(const Node& v, Outcome q) const;
  Index n_;
  int height_;
};

int ceil_log2(Index n);

// Query tallies n_<, n_> per tree node.
class TallyTable {
 public:
  void record(const Node& v, Outcome q);
  std::size_t less(const Node& v) const;
  std::size_t greater(const Node& v) const;
  std::size_t delta(const Node& v) const;
  void erase(const Node& v);

 private:
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> t_;
};

}  // namespace robust_search
