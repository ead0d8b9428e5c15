// Copyright 2026 The pbbdd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Hash-consed node storage for reduced ordered BDDs.
//
// Levels are 1-based positions in the variable order; both terminals sit at
// the virtual level num_levels() + 1. Children are indexed by the value of
// the selector *variable*, so a level whose literal is negated has its
// literal-true branch in false_child().

#pragma once

#include "pbbdd/pb.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pbbdd {

using Level = std::uint32_t;

struct NodeId {
  std::uint32_t index = 0;
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline constexpr NodeId kFalseNode{0};
inline constexpr NodeId kTrueNode{1};

}  // namespace pbbdd

template <>
struct std::hash<pbbdd::NodeId> {
  std::size_t operator()(pbbdd::NodeId id) const noexcept { return std::hash<std::uint32_t>{}(id.index); }
};

namespace pbbdd {

class NodeStore {
 public:
  explicit NodeStore(Level num_levels) : num_levels_(num_levels) {
    nodes_.push_back(Node{terminal_level(), kFalseNode, kFalseNode});
    nodes_.push_back(Node{terminal_level(), kTrueNode, kTrueNode});
  }

  Level num_levels() const { return num_levels_; }
  Level terminal_level() const { return num_levels_ + 1; }

  // Returns the canonical node for (level, f, t); collapses f == t.
  NodeId mk_node(Level level, NodeId f, NodeId t) {
    if (f == t) return f;
    if (level == 0 || level > num_levels_)
      throw std::invalid_argument("mk_node: level " + std::to_string(level) + " out of range");
    if (!valid(f) || !valid(t)) throw std::invalid_argument("mk_node: unknown child");
    if (this->level(f) <= level || this->level(t) <= level)
      throw std::invalid_argument("mk_node: children must lie strictly below level " + std::to_string(level));
    const Key key{level, f.index, t.index};
    if (auto it = unique_.find(key); it != unique_.end()) return it->second;
    const NodeId id{static_cast<std::uint32_t>(nodes_.size())};
    nodes_.push_back(Node{level, f, t});
    unique_.emplace(key, id);
    return id;
  }

  bool valid(NodeId id) const { return id.index < nodes_.size(); }
  static bool is_terminal(NodeId id) { return id == kFalseNode || id == kTrueNode; }
  Level level(NodeId id) const { return nodes_.at(id.index).level; }
  NodeId false_child(NodeId id) const { return nodes_.at(id.index).f; }
  NodeId true_child(NodeId id) const { return nodes_.at(id.index).t; }

  // Total number of nodes ever created, terminals included.
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Level level;
    NodeId f;
    NodeId t;
  };
  struct Key {
    Level level;
    std::uint32_t f;
    std::uint32_t t;
    friend bool operator==(const Key&, const Key&) = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::uint64_t h = k.level;
      h = h * 0x9E3779B97F4A7C15ULL ^ k.f;
      h = h * 0x9E3779B97F4A7C15ULL ^ k.t;
      return static_cast<std::size_t>(h ^ (h >> 29));
    }
  };

  Level num_levels_;
  std::vector<Node> nodes_;
  std::unordered_map<Key, NodeId, KeyHash> unique_;
};

// Follows the path induced by `values` (indexed by variable id). `levels`
// maps level l to the literal at position l - 1 of the order; only its
// variable matters since children are variable-indexed.
inline bool eval_bdd(const NodeStore& store, NodeId root, std::span<const Literal> levels,
                     std::span<const std::uint8_t> values) {
  NodeId cur = root;
  while (!NodeStore::is_terminal(cur)) {
    const Literal& lit = levels[store.level(cur) - 1];
    if (lit.var >= values.size() || values[lit.var] > 1)
      throw std::out_of_range("assignment has no value for x" + std::to_string(lit.var));
    cur = values[lit.var] ? store.true_child(cur) : store.false_child(cur);
  }
  return cur == kTrueNode;
}

// Decision nodes reachable from root, ascending by id. Children are always
// created before their parents, so this is a bottom-up order.
inline std::vector<NodeId> reachable_nodes(const NodeStore& store, NodeId root) {
  std::vector<NodeId> out;
  std::unordered_set<NodeId> seen;
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (NodeStore::is_terminal(n) || !seen.insert(n).second) continue;
    out.push_back(n);
    stack.push_back(store.false_child(n));
    stack.push_back(store.true_child(n));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Decision nodes only; add 2 for the count that includes terminals.
inline std::size_t count_nodes(const NodeStore& store, NodeId root) { return reachable_nodes(store, root).size(); }

// widths[l - 1] = number of reachable decision nodes with selector level l.
inline std::vector<std::size_t> level_widths(const NodeStore& store, NodeId root) {
  std::vector<std::size_t> widths(store.num_levels(), 0);
  for (NodeId n : reachable_nodes(store, root)) ++widths[store.level(n) - 1];
  return widths;
}

// Structural identity of two diagrams that may live in different stores.
inline bool structurally_equal(const NodeStore& a, NodeId ra, const NodeStore& b, NodeId rb) {
  std::unordered_map<NodeId, NodeId> matched, reverse;
  std::vector<std::pair<NodeId, NodeId>> stack{{ra, rb}};
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    const bool tx = NodeStore::is_terminal(x), ty = NodeStore::is_terminal(y);
    if (tx || ty) {
      if (!(tx && ty && x == y)) return false;
      continue;
    }
    if (auto it = matched.find(x); it != matched.end()) {
      if (it->second != y) return false;
      continue;
    }
    if (a.level(x) != b.level(y)) return false;
    if (!reverse.emplace(y, x).second) return false;
    matched.emplace(x, y);
    stack.emplace_back(a.false_child(x), b.false_child(y));
    stack.emplace_back(a.true_child(x), b.true_child(y));
  }
  return true;
}

// Graphviz rendering for debugging; dashed edges are false branches.
inline void write_dot(std::ostream& os, const NodeStore& store, NodeId root, std::span<const Literal> levels) {
  os << "digraph bdd {\n";
  os << "  n0 [shape=box,label=\"0\"];\n";
  os << "  n1 [shape=box,label=\"1\"];\n";
  for (NodeId n : reachable_nodes(store, root)) {
    const Literal& lit = levels[store.level(n) - 1];
    os << "  n" << n.index << " [label=\"x" << lit.var << "\"];\n";
    os << "  n" << n.index << " -> n" << store.false_child(n).index << " [style=dashed];\n";
    os << "  n" << n.index << " -> n" << store.true_child(n).index << ";\n";
  }
  os << "}\n";
}

}  // namespace pbbdd
