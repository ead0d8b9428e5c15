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

// Top-down ROBDD construction for  a_1 l_1 + ... + a_n l_n <= K.
//
// Every level keeps a store of disjoint (interval, node) pairs. A call for
// (level i, K') first looks K' up in level i's store; on a miss it builds the
// literal-false child for K' and the literal-true child for K' - a_i, then
// either reuses the child (equal intervals) or creates a node, and records
// the resulting interval at level i. Each call is answered in O(log m).

#pragma once

#include "pbbdd/interval.hpp"
#include "pbbdd/pb.hpp"
#include "pbbdd/robdd.hpp"

#include <algorithm>
#include <cstddef>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace pbbdd {

struct LevelEntry {
  Interval interval;
  NodeId node;
};

// Disjoint intervals keyed by lower bound; lookups are O(log size).
class LevelStore {
 public:
  std::optional<LevelEntry> search(const Integer& k) const {
    auto it = entries_.upper_bound(Bound(k));
    if (it == entries_.begin()) return std::nullopt;
    --it;
    if (it->second.interval.contains(k)) return it->second;
    return std::nullopt;
  }

  // Throws std::logic_error if the interval overlaps a stored one, unless it
  // is the very same pair.
  void insert(const Interval& iv, NodeId node) {
    if (iv.is_empty()) throw std::logic_error("LevelStore::insert: empty interval");
    auto next = entries_.lower_bound(iv.lo);
    if (next != entries_.end() && next->second.interval == iv) {
      if (next->second.node == node) return;
      throw std::logic_error("LevelStore::insert: interval " + to_string(iv) + " already bound to another node");
    }
    if (next != entries_.end() && next->second.interval.overlaps(iv))
      throw std::logic_error("LevelStore::insert: " + to_string(iv) + " overlaps " + to_string(next->second.interval));
    if (next != entries_.begin()) {
      auto prev = std::prev(next);
      if (prev->second.interval.overlaps(iv))
        throw std::logic_error("LevelStore::insert: " + to_string(iv) + " overlaps " +
                               to_string(prev->second.interval));
    }
    entries_.emplace_hint(next, iv.lo, LevelEntry{iv, node});
  }

  std::size_t size() const { return entries_.size(); }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [lo, e] : entries_) fn(e);
  }

 private:
  std::map<Bound, LevelEntry> entries_;
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::size_t budget)
      : std::runtime_error("node budget of " + std::to_string(budget) + " exceeded"), budget_(budget) {}
  std::size_t budget() const { return budget_; }

 private:
  std::size_t budget_;
};

struct BuildOptions {
  // Abort with BudgetExceeded once the store holds more nodes; 0 disables.
  std::size_t node_budget = 0;
  bool record_trace = false;
};

struct CallRecord {
  std::size_t call;  // 1-based, in invocation order
  Level level;
  Integer k;
  bool search_hit;
  bool merged;  // both children coincided, no node created
  Interval interval;
  NodeId node;
};

struct BuildStats {
  std::size_t calls = 0;
  std::size_t search_hits = 0;
  std::size_t merges = 0;
  std::size_t nodes_created = 0;
};

struct BuildResult {
  NodeId root = kFalseNode;
  Interval root_interval;
  // Interval of each node created by this build, relative to its own level.
  IntervalTable intervals;
  BuildStats stats;
  std::vector<CallRecord> trace;
};

// Builds the ROBDD of  sum(levels) <= bound  into `store`, where levels[l-1]
// is the term tested at level l. The store must have levels.size() levels;
// it may be shared between builds over the same order.
inline BuildResult build(NodeStore& store, std::span<const Term> levels, const Integer& bound,
                         const BuildOptions& options = {}) {
  const Level n = static_cast<Level>(levels.size());
  if (store.num_levels() != n)
    throw std::invalid_argument("build: store has " + std::to_string(store.num_levels()) + " levels, constraint has " +
                                std::to_string(n));
  for (const auto& t : levels)
    if (t.coefficient <= 0) throw std::invalid_argument("build: coefficients must be positive");

  const LevelCoefficients coeffs(levels);
  std::vector<LevelStore> stores(n + 2);
  for (Level i = 1; i <= n + 1; ++i) {
    stores[i].insert(terminal_interval(false), kFalseNode);
    stores[i].insert(Interval{Bound(coeffs.suffix(i)), Bound::pos_inf()}, kTrueNode);
  }

  BuildResult result;
  const std::size_t nodes_before = store.size();

  struct Frame {
    Level level;
    Integer k;
    std::size_t call;
    int stage;  // 0: need false child, 1: need true child, 2: combine
    LevelEntry lit_false;
  };
  std::vector<Frame> stack;
  LevelEntry ret{Interval::empty(), kFalseNode};

  // Starts a call; returns true if it was answered by the level store.
  auto enter = [&](Level level, Integer k) -> bool {
    const std::size_t call = ++result.stats.calls;
    if (auto hit = stores[level].search(k)) {
      ++result.stats.search_hits;
      if (options.record_trace)
        result.trace.push_back(CallRecord{call, level, std::move(k), true, false, hit->interval, hit->node});
      ret = *hit;
      return true;
    }
    stack.push_back(Frame{level, std::move(k), call, 0, LevelEntry{Interval::empty(), kFalseNode}});
    return false;
  };

  if (options.record_trace) result.trace.reserve(16);
  enter(1, bound);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.stage == 0) {
      f.stage = 1;
      enter(f.level + 1, f.k);
      continue;
    }
    if (f.stage == 1) {
      f.lit_false = ret;
      f.stage = 2;
      Integer k_true = f.k - coeffs.coefficient(f.level);
      enter(f.level + 1, std::move(k_true));
      continue;
    }
    const LevelEntry lit_true = ret;
    const Integer& a = coeffs.coefficient(f.level);
    LevelEntry out{Interval::empty(), kFalseNode};
    bool merged = false;
    if (lit_true.interval == f.lit_false.interval) {
      merged = true;
      ++result.stats.merges;
      out.node = lit_true.node;
      out.interval = Interval{lit_true.interval.lo + a, lit_true.interval.hi};
    } else {
      const bool negated = levels[f.level - 1].literal.negated;
      const NodeId var_false = negated ? lit_true.node : f.lit_false.node;
      const NodeId var_true = negated ? f.lit_false.node : lit_true.node;
      const std::size_t before = store.size();
      out.node = store.mk_node(f.level, var_false, var_true);
      out.interval = intersect(f.lit_false.interval, lit_true.interval.shifted(a));
      result.intervals.emplace(out.node, out.interval);
      if (store.size() != before) {
        ++result.stats.nodes_created;
        if (options.node_budget != 0 && store.size() - nodes_before > options.node_budget)
          throw BudgetExceeded(options.node_budget);
      }
    }
    stores[f.level].insert(out.interval, out.node);
    if (options.record_trace)
      result.trace.push_back(CallRecord{f.call, f.level, f.k, false, merged, out.interval, out.node});
    ret = out;
    stack.pop_back();
  }

  result.root = ret.node;
  result.root_interval = ret.interval;
  return result;
}

// Level sequence of `c` under `order` (a permutation of its variables); the
// empty order means the constraint's own term order.
inline std::vector<Term> ordered_levels(const PBConstraint& c, std::span<const VarId> order = {}) {
  if (order.empty()) return c.terms;
  if (order.size() != c.terms.size()) throw std::invalid_argument("order must cover exactly the constraint's variables");
  std::vector<Term> levels;
  levels.reserve(order.size());
  std::unordered_set<VarId> used;
  for (VarId v : order) {
    if (!used.insert(v).second) throw std::invalid_argument("order repeats x" + std::to_string(v));
    auto it = std::find_if(c.terms.begin(), c.terms.end(), [v](const Term& t) { return t.literal.var == v; });
    if (it == c.terms.end()) throw std::invalid_argument("order names x" + std::to_string(v) + " not in constraint");
    levels.push_back(*it);
  }
  return levels;
}

// A built diagram together with the store and order it lives in.
struct Robdd {
  std::vector<Term> levels;
  NodeStore store;
  BuildResult result;

  NodeId root() const { return result.root; }
  std::vector<Literal> literals() const {
    std::vector<Literal> out;
    out.reserve(levels.size());
    for (const auto& t : levels) out.push_back(t.literal);
    return out;
  }
};

inline Robdd build(const PBConstraint& c, std::span<const VarId> order = {}, const BuildOptions& options = {}) {
  std::vector<Term> levels = ordered_levels(c, order);
  NodeStore store(static_cast<Level>(levels.size()));
  BuildResult result = build(store, levels, c.bound, options);
  return Robdd{std::move(levels), std::move(store), std::move(result)};
}

// Upper bound on the number of build calls: each edge of length k costs at
// most 2k - 1 calls, plus 2r - 1 calls to reach a root at level r.
inline std::size_t call_bound(const NodeStore& store, NodeId root) {
  const Level root_level = store.level(root);
  std::size_t bound = 2 * static_cast<std::size_t>(root_level) - 1;
  for (NodeId n : reachable_nodes(store, root)) {
    for (NodeId child : {store.false_child(n), store.true_child(n)}) {
      const std::size_t len = store.level(child) - store.level(n);
      bound += 2 * len - 1;
    }
  }
  return bound;
}

}  // namespace pbbdd
