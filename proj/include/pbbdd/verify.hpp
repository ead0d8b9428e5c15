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

// Brute-force oracles and propagation-strength checkers for encodings.
//
// Partial assignments are lists of signed input literals; input variable v
// is CNF variable v in every encoding checked here.

#pragma once

#include "pbbdd/builder.hpp"
#include "pbbdd/encode.hpp"
#include "pbbdd/pb.hpp"
#include "pbbdd/propagate.hpp"
#include "pbbdd/robdd.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbbdd {

class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifyOptions {
  // Largest constraint (in variables) the 3^n enumerations accept.
  std::size_t max_vars = 8;
};

inline constexpr std::size_t kExtendableLimit = 14;

namespace detail {

inline Integer true_weight(const PBConstraint& c, std::span<const CnfLit> partial) {
  Integer sum = 0;
  for (const Term& t : c.terms) {
    const CnfLit lit = t.literal.to_dimacs();
    if (std::find(partial.begin(), partial.end(), lit) != partial.end()) sum += t.coefficient;
  }
  return sum;
}

inline void check_partial(std::span<const CnfLit> partial) {
  for (CnfLit l : partial)
    if (std::find(partial.begin(), partial.end(), -l) != partial.end())
      throw std::invalid_argument("partial assignment contains both polarities of x" + std::to_string(std::abs(l)));
}

// Calls fn(partial) for all 3^n partial assignments over `vars`.
template <typename Fn>
void for_each_partial(const std::vector<VarId>& vars, Fn&& fn) {
  const std::size_t n = vars.size();
  std::vector<int> digit(n, 0);
  std::vector<CnfLit> partial;
  partial.reserve(n);
  while (true) {
    partial.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (digit[i] == 1) partial.push_back(static_cast<CnfLit>(vars[i]));
      if (digit[i] == 2) partial.push_back(-static_cast<CnfLit>(vars[i]));
    }
    if (!fn(std::span<const CnfLit>(partial))) return;
    std::size_t i = 0;
    while (i < n && digit[i] == 2) digit[i++] = 0;
    if (i == n) return;
    ++digit[i];
  }
}

inline void check_limit(const PBConstraint& c, const VerifyOptions& options) {
  if (c.terms.size() > options.max_vars)
    throw LimitExceeded("constraint has " + std::to_string(c.terms.size()) + " variables, limit is " +
                        std::to_string(options.max_vars));
}

inline std::string describe(std::span<const CnfLit> partial) {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < partial.size(); ++i) os << (i ? ", " : "") << partial[i];
  os << "}";
  return os.str();
}

}  // namespace detail

// Monotonicity makes "all unassigned literals false" the best extension.
inline bool extendable(const PBConstraint& c, std::span<const CnfLit> partial) {
  detail::check_partial(partial);
  return detail::true_weight(c, partial) <= c.bound;
}

// Reference version: tries all 2^k completions of the unassigned variables.
inline bool extendable_by_enumeration(const PBConstraint& c, std::span<const CnfLit> partial,
                                      std::size_t limit = kExtendableLimit) {
  detail::check_partial(partial);
  if (c.terms.size() > limit)
    throw LimitExceeded("extendable: " + std::to_string(c.terms.size()) + " variables exceed the limit of " +
                        std::to_string(limit));
  const VarId max_var = c.max_var();
  std::vector<std::uint8_t> values(max_var + 1, 0);
  std::vector<VarId> free_vars;
  for (VarId v : c.variables()) {
    const CnfLit pos = static_cast<CnfLit>(v);
    if (std::find(partial.begin(), partial.end(), pos) != partial.end()) {
      values[v] = 1;
    } else if (std::find(partial.begin(), partial.end(), -pos) == partial.end()) {
      free_vars.push_back(v);
    }
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << free_vars.size()); ++mask) {
    for (std::size_t i = 0; i < free_vars.size(); ++i) values[free_vars[i]] = (mask >> i) & 1u;
    if (evaluate(c, values)) return true;
  }
  return false;
}

struct Counterexample {
  std::vector<CnfLit> assignment;
  CnfLit literal = 0;  // the literal GAC should have refuted, if any
  std::string reason;
};

// What unit propagation must produce on an inextensible assignment.
struct ConsistencyTarget {
  // 0: a conflict (encodings that assert their root). Otherwise propagating
  // ~root_var or a conflict both count as detection.
  int root_var = 0;

  static ConsistencyTarget conflict() { return {}; }
  static ConsistencyTarget root_false(int var) { return ConsistencyTarget{var}; }
};

// Every inextensible partial assignment must be detected by unit
// propagation, and no extensible one may be.
inline std::optional<Counterexample> check_consistency(const PBConstraint& c, std::span<const Clause> cnf,
                                                       ConsistencyTarget target = ConsistencyTarget::conflict(),
                                                       const VerifyOptions& options = {}) {
  detail::check_limit(c, options);
  Propagator p(cnf, static_cast<int>(c.max_var()));
  const std::size_t base = p.trail_size();
  std::optional<Counterexample> found;
  detail::for_each_partial(c.variables(), [&](std::span<const CnfLit> partial) {
    for (CnfLit l : partial)
      if (!p.assume(l)) break;
    const bool detected = p.in_conflict() || (target.root_var != 0 && p.value(-target.root_var) > 0);
    const bool ext = extendable(c, partial);
    p.backtrack(base);
    if (detected == !ext) return true;
    found = Counterexample{std::vector<CnfLit>(partial.begin(), partial.end()), 0,
                           ext ? "false alarm on extensible assignment " + detail::describe(partial)
                               : "inextensible assignment " + detail::describe(partial) + " not detected"};
    return false;
  });
  return found;
}

// For every extensible A and literal l with A + l inextensible, unit
// propagation from A must derive ~l.
inline std::optional<Counterexample> check_gac(const PBConstraint& c, std::span<const Clause> cnf,
                                               const VerifyOptions& options = {}) {
  detail::check_limit(c, options);
  Propagator p(cnf, static_cast<int>(c.max_var()));
  const std::size_t base = p.trail_size();
  const std::vector<VarId> vars = c.variables();
  std::optional<Counterexample> found;
  std::vector<CnfLit> extended;
  detail::for_each_partial(vars, [&](std::span<const CnfLit> partial) {
    if (!extendable(c, partial)) return true;
    for (CnfLit l : partial)
      if (!p.assume(l)) break;
    if (p.in_conflict()) {
      p.backtrack(base);
      found = Counterexample{std::vector<CnfLit>(partial.begin(), partial.end()), 0,
                             "conflict on extensible assignment " + detail::describe(partial)};
      return false;
    }
    for (VarId v : vars) {
      const CnfLit pos = static_cast<CnfLit>(v);
      if (std::find(partial.begin(), partial.end(), pos) != partial.end() ||
          std::find(partial.begin(), partial.end(), -pos) != partial.end())
        continue;
      for (CnfLit lit : {pos, -pos}) {
        extended.assign(partial.begin(), partial.end());
        extended.push_back(lit);
        if (extendable(c, extended) || p.value(-lit) > 0) continue;
        found = Counterexample{std::vector<CnfLit>(partial.begin(), partial.end()), lit,
                               "A = " + detail::describe(partial) + " does not propagate " + std::to_string(-lit)};
        p.backtrack(base);
        return false;
      }
    }
    p.backtrack(base);
    return true;
  });
  return found;
}

// Exhaustive satisfiability under assumptions; intended for the small CNFs
// produced by the encoders.
inline bool satisfiable(std::span<const Clause> cnf, std::span<const CnfLit> assumptions, int num_vars = 0) {
  Propagator p(cnf, num_vars);
  for (CnfLit l : assumptions)
    if (!p.assume(l)) return false;
  if (p.in_conflict()) return false;
  std::vector<bool> occurs(p.num_vars() + 1, false);
  for (const Clause& c : cnf)
    for (CnfLit l : c) occurs[std::abs(l)] = true;
  std::vector<int> vars;
  for (int v = 1; v <= p.num_vars(); ++v)
    if (occurs[v]) vars.push_back(v);

  // Iterative DPLL: decisions try false first, then true.
  struct Decision {
    std::size_t var_index;
    std::size_t mark;
    bool flipped;
  };
  std::vector<Decision> decisions;
  std::size_t next = 0;
  while (true) {
    if (!p.in_conflict()) {
      while (next < vars.size() && p.value(vars[next]) != 0) ++next;
      if (next == vars.size()) return true;
      decisions.push_back(Decision{next, p.trail_size(), false});
      p.assume(-vars[next]);
      continue;
    }
    while (!decisions.empty() && decisions.back().flipped) decisions.pop_back();
    if (decisions.empty()) return false;
    Decision& d = decisions.back();
    p.backtrack(d.mark);
    d.flipped = true;
    next = d.var_index;
    p.assume(vars[next]);
  }
}

// Compares the CNF's models, projected onto the constraint's variables, with
// the constraint's models.
inline std::optional<Counterexample> check_models(const PBConstraint& c, std::span<const Clause> cnf,
                                                  const VerifyOptions& options = {}) {
  detail::check_limit(c, options);
  const std::vector<VarId> vars = c.variables();
  std::vector<std::uint8_t> values(c.max_var() + 1, 0);
  std::vector<CnfLit> assumptions(vars.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << vars.size()); ++mask) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      const bool bit = (mask >> i) & 1u;
      values[vars[i]] = bit;
      assumptions[i] = bit ? static_cast<CnfLit>(vars[i]) : -static_cast<CnfLit>(vars[i]);
    }
    const bool expected = evaluate(c, values);
    if (satisfiable(cnf, assumptions, static_cast<int>(c.max_var())) != expected)
      return Counterexample{assumptions, 0,
                            std::string(expected ? "model " : "non-model ") + detail::describe(assumptions) +
                                (expected ? " rejected by the CNF" : " accepted by the CNF")};
  }
  return std::nullopt;
}

enum class Equivalence { Equivalent, Different };

// Builds both ROBDDs in one store under c1's variable order; canonicity makes
// root identity the same as logical equivalence.
inline Equivalence check_equivalent(const PBConstraint& c1, const PBConstraint& c2) {
  const std::vector<VarId> order = c1.variables();
  std::vector<VarId> a = order, b = c2.variables();
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw std::invalid_argument("check_equivalent: constraints range over different variables");
  const std::vector<Term> levels1 = ordered_levels(c1, order);
  const std::vector<Term> levels2 = ordered_levels(c2, order);
  NodeStore store(static_cast<Level>(order.size()));
  const NodeId r1 = build(store, levels1, c1.bound).root;
  const NodeId r2 = build(store, levels2, c2.bound).root;
  return r1 == r2 ? Equivalence::Equivalent : Equivalence::Different;
}

// True iff no subset of `weights` sums to exactly `target`, decided by
// comparing the ROBDDs of  sum <= target  and  sum <= target - 1.
inline bool subset_sum_unsat(std::span<const Integer> weights, const Integer& target) {
  PBConstraint at, below;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) throw std::invalid_argument("subset sum weights must be positive");
    at.terms.push_back(Term{weights[i], Literal{static_cast<VarId>(i + 1), false}});
  }
  below.terms = at.terms;
  at.bound = target;
  below.bound = target - 1;
  return check_equivalent(at, below) == Equivalence::Equivalent;
}

struct WidthViolation {
  Level level;
  unsigned power;
  std::size_t position;
  std::size_t width;
  std::size_t limit;  // largest allowed width, n + r
};

// For a decomposed diagram, the number of nodes testing x_{i,r} is at most
// n + r, n being the number of original variables. The nodes at (i, r) are
// told apart by the residual bound rounded down to a multiple of 2^i, and
// the prefix above (i, r) sums to less than 2^i (n + r - 1), so at most
// n + r such multiples are reachable. Equality does occur with ascending
// powers, e.g. 499 x1 + 892 x2 <= 418 has width 3 at (5, 1).
inline std::optional<WidthViolation> check_level_width(std::span<const BitTerm> terms, std::size_t num_original,
                                                       const NodeStore& store, NodeId root) {
  if (store.num_levels() != terms.size()) throw std::invalid_argument("check_level_width: level count mismatch");
  for (const BitTerm& b : terms) {
    Integer expected = 1;
    expected <<= b.power;
    if (b.weight != expected) throw std::invalid_argument("check_level_width: coefficient is not 2^power");
    if (b.position == 0 || b.position > num_original)
      throw std::invalid_argument("check_level_width: position out of range");
  }
  const std::vector<std::size_t> widths = level_widths(store, root);
  for (std::size_t l = 0; l < terms.size(); ++l) {
    const std::size_t limit = num_original + terms[l].position;
    if (widths[l] > limit)
      return WidthViolation{static_cast<Level>(l + 1), terms[l].power, terms[l].position, widths[l], limit};
  }
  return std::nullopt;
}

inline std::optional<WidthViolation> check_level_width(const Decomposition& d, const NodeStore& store, NodeId root) {
  return check_level_width(d.terms, d.original.terms.size(), store, root);
}

struct GapViolation {
  Level level;
  Integer gap;
  Integer required;
};

// Lower bounds of the intervals at a level testing x_{i,r} are at least 2^i
// apart. Not a quoted result; checked as an observed property.
inline std::optional<GapViolation> check_interval_gaps(std::span<const BitTerm> terms, const NodeStore& store,
                                                       NodeId root, const IntervalTable& intervals) {
  std::map<Level, std::vector<Integer>> lows;
  for (NodeId n : reachable_nodes(store, root)) {
    const Interval& iv = intervals.at(n);
    lows[store.level(n)].push_back(iv.lo.value());
  }
  for (auto& [level, v] : lows) {
    std::sort(v.begin(), v.end());
    const Integer& step = terms[level - 1].weight;
    for (std::size_t j = 1; j < v.size(); ++j)
      if (v[j] - v[j - 1] < step) return GapViolation{level, v[j] - v[j - 1], step};
  }
  return std::nullopt;
}

}  // namespace pbbdd
