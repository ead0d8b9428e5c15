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

// Test oracles written independently of the library internals.

#pragma once

#include "pbbdd.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <fstream>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>
#include <span>
#include <tuple>
#include <vector>

namespace pbbdd::test {

// sum coeffs[i] * l_{i+1} <= bound; negated[i] flips the polarity of x_{i+1}.
inline PBConstraint make(std::initializer_list<long long> coeffs, long long bound, std::vector<bool> negated = {}) {
  PBConstraint c;
  VarId v = 1;
  for (long long a : coeffs) {
    const bool neg = v - 1 < negated.size() && negated[v - 1];
    c.terms.push_back(Term{Integer(a), Literal{v, neg}});
    ++v;
  }
  c.bound = bound;
  return c;
}

// 2 x1 + 3 x2 + 5 x3 <= 6
inline PBConstraint running() { return make({2, 3, 5}, 6); }

// values[v] for v = 1..num_vars from the bits of mask (bit v-1).
inline std::vector<std::uint8_t> assignment(std::uint64_t mask, std::size_t num_vars) {
  std::vector<std::uint8_t> values(num_vars + 1, 0);
  for (std::size_t v = 1; v <= num_vars; ++v) values[v] = (mask >> (v - 1)) & 1u;
  return values;
}

inline std::vector<Literal> literals_of(std::span<const Term> levels) {
  std::vector<Literal> out;
  for (const auto& t : levels) out.push_back(t.literal);
  return out;
}

// Full decision tree over `levels` followed by bottom-up reduction with a
// unique table; returns the number of decision nodes of the reduced diagram.
inline std::size_t oracle_node_count(const PBConstraint& c, std::span<const Term> levels) {
  const std::size_t n = levels.size();
  const VarId max_var = c.max_var();
  std::vector<int> layer(std::size_t{1} << n);
  std::vector<std::uint8_t> values(max_var + 1, 0);
  for (std::size_t idx = 0; idx < layer.size(); ++idx) {
    for (std::size_t j = 0; j < n; ++j) values[levels[j].literal.var] = (idx >> j) & 1u;
    layer[idx] = evaluate(c, values) ? 1 : 0;
  }
  int next_id = 2;
  std::size_t nodes = 0;
  for (std::size_t level = n; level >= 1; --level) {
    std::map<std::pair<int, int>, int> unique;
    const std::size_t half = std::size_t{1} << (level - 1);
    std::vector<int> up(half);
    for (std::size_t p = 0; p < half; ++p) {
      const int f = layer[p];
      const int t = layer[p | half];
      if (f == t) {
        up[p] = f;
        continue;
      }
      auto [it, inserted] = unique.emplace(std::make_pair(f, t), next_id);
      if (inserted) {
        ++next_id;
        ++nodes;
      }
      up[p] = it->second;
    }
    layer = std::move(up);
  }
  return nodes;
}

// Reachable sums of a subset-sum instance via the textbook DP.
inline bool dp_subset_sum(std::span<const long long> weights, long long target) {
  if (target < 0) return false;
  std::vector<char> reach(static_cast<std::size_t>(target) + 1, 0);
  reach[0] = 1;
  for (long long w : weights)
    for (long long s = target; s >= w; --s)
      if (reach[s - w]) reach[s] = 1;
  return reach[target] != 0;
}

using ClauseList = std::vector<Clause>;

inline std::set<std::vector<int>> canonical(const ClauseList& clauses) {
  std::set<std::vector<int>> out;
  for (Clause c : clauses) {
    std::sort(c.begin(), c.end());
    out.insert(c);
  }
  return out;
}

// True when some bijection between the auxiliary variables (> num_inputs)
// of `actual` and `expected` maps one clause set onto the other. Returns the
// renaming (expected aux -> actual aux) through `renaming` when found.
// Backtracking search; a partial mapping is dropped as soon as a fully
// mapped expected clause is missing from `actual`.
inline bool equal_up_to_renaming(const ClauseList& actual, const ClauseList& expected, int num_inputs,
                                 std::map<int, int>* renaming = nullptr) {
  if (actual.size() != expected.size()) return false;
  auto aux_of = [&](const ClauseList& cs) {
    std::set<int> vars;
    for (const auto& c : cs)
      for (int l : c)
        if (std::abs(l) > num_inputs) vars.insert(std::abs(l));
    return std::vector<int>(vars.begin(), vars.end());
  };
  const std::vector<int> exp_aux = aux_of(expected);
  const std::vector<int> act_aux = aux_of(actual);
  if (exp_aux.size() != act_aux.size()) return false;
  const auto target = canonical(actual);
  if (target.size() != canonical(expected).size()) return false;

  // clauses become checkable once their last aux variable (in exp_aux
  // order) is mapped
  std::map<int, std::size_t> rank;
  for (std::size_t i = 0; i < exp_aux.size(); ++i) rank[exp_aux[i]] = i;
  std::vector<std::vector<const Clause*>> ready(exp_aux.size() + 1);
  for (const auto& c : expected) {
    std::size_t last = 0;
    for (int l : c)
      if (std::abs(l) > num_inputs) last = std::max(last, rank.at(std::abs(l)) + 1);
    ready[last].push_back(&c);
  }
  std::map<int, int> m;
  std::vector<bool> used(act_aux.size(), false);
  auto mapped_ok = [&](std::size_t depth) {
    for (const Clause* c : ready[depth]) {
      std::vector<int> d;
      for (int l : *c) {
        const int v = std::abs(l);
        const int w = v > num_inputs ? m.at(v) : v;
        d.push_back(l > 0 ? w : -w);
      }
      std::sort(d.begin(), d.end());
      if (!target.count(d)) return false;
    }
    return true;
  };
  std::function<bool(std::size_t)> extend = [&](std::size_t depth) {
    if (depth == exp_aux.size()) return true;
    for (std::size_t j = 0; j < act_aux.size(); ++j) {
      if (used[j]) continue;
      used[j] = true;
      m[exp_aux[depth]] = act_aux[j];
      if (mapped_ok(depth + 1) && extend(depth + 1)) return true;
      m.erase(exp_aux[depth]);
      used[j] = false;
    }
    return false;
  };
  if (!mapped_ok(0) || !extend(0)) return false;
  if (renaming) *renaming = m;
  return true;
}

inline ClauseList clauses_of(const ClauseSet& cs) { return ClauseList(cs.clauses().begin(), cs.clauses().end()); }

inline Instance parse_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_opb(ss.str());
}

}  // namespace pbbdd::test
