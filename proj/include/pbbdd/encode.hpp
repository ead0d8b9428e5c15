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

// CNF encodings of pseudo-Boolean constraints through decision diagrams.
//
//   bdd1  ROBDD of the constraint, two clauses per node, root asserted.
//   bdd2  ROBDD of the coefficient-decomposed constraint with bit variables
//         substituted by their original literals; consistent, not GAC.
//   bdd3  For every term i, the decomposed diagram of the constraint with
//         l_i fixed true, encoded without a root unit, plus (r_i | ~l_i).
//   ite6  ROBDD with the six if-then-else clauses per node.
//   naive One clause per minimal falsifying set of literals.
//
// Input variable v is CNF variable v. Auxiliary variables follow the inputs
// and are handed out per diagram in node creation order.

#pragma once

#include "pbbdd/builder.hpp"
#include "pbbdd/pb.hpp"
#include "pbbdd/propagate.hpp"
#include "pbbdd/robdd.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pbbdd {

struct AuxOrigin {
  std::uint32_t diagram;
  NodeId node;
};

class ClauseSet {
 public:
  explicit ClauseSet(int num_inputs = 0) : num_inputs_(num_inputs), next_var_(num_inputs + 1) {
    if (num_inputs < 0) throw std::invalid_argument("negative input count");
  }

  int num_inputs() const { return num_inputs_; }
  // Highest variable in use (inputs included).
  int num_vars() const { return next_var_ - 1; }
  int next_var() const { return next_var_; }
  bool is_input(int var) const { return var >= 1 && var <= num_inputs_; }

  std::uint32_t begin_diagram() { return diagrams_++; }
  std::uint32_t num_diagrams() const { return diagrams_; }

  int new_aux(AuxOrigin origin) {
    aux_origins_.push_back(origin);
    return next_var_++;
  }
  const AuxOrigin& origin(int aux_var) const { return aux_origins_.at(aux_var - num_inputs_ - 1); }
  std::size_t num_aux() const { return aux_origins_.size(); }

  // Drops duplicate literals; returns false (and adds nothing) for a
  // tautology.
  bool add_clause(Clause c) {
    Clause clean;
    clean.reserve(c.size());
    for (CnfLit l : c) {
      if (l == 0 || std::abs(l) >= next_var_) throw std::invalid_argument("clause uses unallocated variable " + std::to_string(l));
      if (std::find(clean.begin(), clean.end(), -l) != clean.end()) return false;
      if (std::find(clean.begin(), clean.end(), l) == clean.end()) clean.push_back(l);
    }
    clauses_.push_back(std::move(clean));
    return true;
  }

  std::span<const Clause> clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }

  // Appends another set over the same inputs; its auxiliary variables are
  // shifted past ours.
  void append(const ClauseSet& other) {
    if (other.num_inputs_ != num_inputs_) throw std::invalid_argument("append: input counts differ");
    const int shift = next_var_ - (num_inputs_ + 1);
    auto remap = [&](CnfLit l) {
      const int v = std::abs(l);
      if (v <= num_inputs_) return l;
      return l > 0 ? l + shift : l - shift;
    };
    for (const Clause& c : other.clauses_) {
      Clause mapped;
      mapped.reserve(c.size());
      for (CnfLit l : c) mapped.push_back(remap(l));
      clauses_.push_back(std::move(mapped));
    }
    for (const AuxOrigin& o : other.aux_origins_) aux_origins_.push_back(AuxOrigin{o.diagram + diagrams_, o.node});
    next_var_ += other.next_var_ - (other.num_inputs_ + 1);
    diagrams_ += other.diagrams_;
  }

 private:
  int num_inputs_;
  int next_var_;
  std::uint32_t diagrams_ = 0;
  std::vector<Clause> clauses_;
  std::vector<AuxOrigin> aux_origins_;
};

struct ClauseCounts {
  std::size_t units = 0;
  std::size_t binary = 0;
  std::size_t ternary = 0;
  std::size_t longer = 0;
  std::size_t empty = 0;

  std::size_t total() const { return units + binary + ternary + longer + empty; }
  void add(const Clause& c) {
    switch (c.size()) {
      case 0: ++empty; break;
      case 1: ++units; break;
      case 2: ++binary; break;
      case 3: ++ternary; break;
      default: ++longer; break;
    }
  }
  ClauseCounts& operator+=(const ClauseCounts& o) {
    units += o.units;
    binary += o.binary;
    ternary += o.ternary;
    longer += o.longer;
    empty += o.empty;
    return *this;
  }
};

inline ClauseCounts count_clauses(std::span<const Clause> clauses) {
  ClauseCounts counts;
  for (const Clause& c : clauses) counts.add(c);
  return counts;
}

// Propagates the unit clauses of `local` to fixpoint and emits the result
// into `out`: derived literals become unit clauses (except on the terminal
// placeholder variables, which are constants), satisfied clauses vanish and
// false literals are removed. A conflict yields a single empty clause.
inline void simplify_into(std::span<const Clause> local, int first_placeholder, ClauseSet& out) {
  Propagator p(local, first_placeholder + 1);
  if (p.in_conflict()) {
    out.add_clause({});
    return;
  }
  for (const TrailEntry& e : p.trail()) {
    if (std::abs(e.literal) >= first_placeholder) continue;
    out.add_clause({e.literal});
  }
  for (const Clause& c : local) {
    bool satisfied = false;
    Clause rest;
    for (CnfLit l : c) {
      const int v = p.value(l);
      if (v > 0) {
        satisfied = true;
        break;
      }
      if (v == 0) rest.push_back(l);
    }
    if (!satisfied) out.add_clause(std::move(rest));
  }
}

enum class RootMode {
  UnitTrue,        // assert the root: GAC encoding
  ImpliesLiteral,  // add (root | ~literal)
  ConsistencyOnly  // no root clause: ~root propagates iff inextensible
};

struct DiagramEncoding {
  // CNF variable of the root node; nullopt when the root is a terminal.
  std::optional<int> root_var;
  ClauseCounts raw;  // before unit simplification, terminal units included
  std::size_t decision_nodes = 0;
};

namespace detail {

struct LocalEncoding {
  std::vector<Clause> clauses;
  std::unordered_map<NodeId, int> vars;
  int top = 0;
  int bottom = 0;

  int var(NodeId n) const {
    if (n == kTrueNode) return top;
    if (n == kFalseNode) return bottom;
    return vars.at(n);
  }
};

inline LocalEncoding allocate(ClauseSet& out, const std::vector<NodeId>& nodes) {
  LocalEncoding enc;
  const std::uint32_t diagram = out.begin_diagram();
  for (NodeId n : nodes) enc.vars.emplace(n, out.new_aux(AuxOrigin{diagram, n}));
  enc.top = out.next_var();
  enc.bottom = enc.top + 1;
  return enc;
}

inline void add_root_clause(LocalEncoding& enc, NodeId root, RootMode mode, CnfLit implied) {
  switch (mode) {
    case RootMode::UnitTrue: enc.clauses.push_back({enc.var(root)}); break;
    case RootMode::ImpliesLiteral: enc.clauses.push_back({enc.var(root), -implied}); break;
    case RootMode::ConsistencyOnly: break;
  }
}

}  // namespace detail

// Two clauses per decision node with literal l, literal-false child f and
// literal-true child t:  (f | ~n)  and  (t | ~l | ~n). Valid for any diagram
// of a function that is monotone decreasing in the level literals.
inline DiagramEncoding encode_monotone(const NodeStore& store, NodeId root, std::span<const Literal> level_literals,
                                       ClauseSet& out, RootMode mode, CnfLit implied = 0) {
  if (mode == RootMode::ImpliesLiteral && implied == 0) throw std::invalid_argument("ImpliesLiteral needs a literal");
  const std::vector<NodeId> nodes = reachable_nodes(store, root);
  detail::LocalEncoding enc = detail::allocate(out, nodes);
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const NodeId n = *it;
    const Literal lit = level_literals[store.level(n) - 1];
    if (static_cast<int>(lit.var) > out.num_inputs() || lit.var == 0)
      throw std::invalid_argument("level literal x" + std::to_string(lit.var) + " is not an input variable");
    const NodeId f = lit.negated ? store.true_child(n) : store.false_child(n);
    const NodeId t = lit.negated ? store.false_child(n) : store.true_child(n);
    const int nv = enc.var(n);
    enc.clauses.push_back({enc.var(f), -nv});
    enc.clauses.push_back({enc.var(t), -lit.to_dimacs(), -nv});
  }
  enc.clauses.push_back({enc.top});
  enc.clauses.push_back({-enc.bottom});
  detail::add_root_clause(enc, root, mode, implied);

  DiagramEncoding result;
  result.raw = count_clauses(enc.clauses);
  result.decision_nodes = nodes.size();
  if (!NodeStore::is_terminal(root)) result.root_var = enc.var(root);
  simplify_into(enc.clauses, enc.top, out);
  return result;
}

// The six if-then-else clauses per node (a <-> ite(x, t, f)), terminal units
// and a root unit. Children are taken by variable value, so no monotonicity
// is required.
inline DiagramEncoding encode_ite6(const NodeStore& store, NodeId root, std::span<const Literal> level_literals,
                                   ClauseSet& out) {
  const std::vector<NodeId> nodes = reachable_nodes(store, root);
  detail::LocalEncoding enc = detail::allocate(out, nodes);
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    const NodeId n = *it;
    const Literal lit = level_literals[store.level(n) - 1];
    if (static_cast<int>(lit.var) > out.num_inputs() || lit.var == 0)
      throw std::invalid_argument("level literal x" + std::to_string(lit.var) + " is not an input variable");
    const int x = static_cast<int>(lit.var);
    const int f = enc.var(store.false_child(n));
    const int t = enc.var(store.true_child(n));
    const int a = enc.var(n);
    enc.clauses.push_back({x, f, -a});
    enc.clauses.push_back({-x, t, -a});
    enc.clauses.push_back({f, t, -a});
    enc.clauses.push_back({x, -f, a});
    enc.clauses.push_back({-x, -t, a});
    enc.clauses.push_back({-f, -t, a});
  }
  enc.clauses.push_back({enc.top});
  enc.clauses.push_back({-enc.bottom});
  detail::add_root_clause(enc, root, RootMode::UnitTrue, 0);

  DiagramEncoding result;
  result.raw = count_clauses(enc.clauses);
  result.decision_nodes = nodes.size();
  if (!NodeStore::is_terminal(root)) result.root_var = enc.var(root);
  simplify_into(enc.clauses, enc.top, out);
  return result;
}

// One term 2^power * l_r of a coefficient-decomposed constraint.
struct BitTerm {
  unsigned power;
  std::size_t position;  // 1-based index r of the original term
  Literal literal;       // the original literal substituted for x_{power,r}
  Integer weight;        // 2^power
};

struct Decomposition {
  PBConstraint original;
  std::vector<BitTerm> terms;  // level order: ascending power, then position
  Integer bound;

  std::vector<Term> levels() const {
    std::vector<Term> out;
    out.reserve(terms.size());
    for (const auto& b : terms) out.push_back(Term{b.weight, b.literal});
    return out;
  }
};

inline Decomposition decompose(const PBConstraint& c) {
  Decomposition d;
  d.original = c;
  d.bound = c.bound;
  unsigned max_bits = 0;
  for (const auto& t : c.terms) {
    if (t.coefficient <= 0) throw std::invalid_argument("decompose: coefficients must be positive");
    max_bits = std::max(max_bits, static_cast<unsigned>(boost::multiprecision::msb(t.coefficient)) + 1);
  }
  for (unsigned power = 0; power < max_bits; ++power) {
    for (std::size_t r = 0; r < c.terms.size(); ++r) {
      if (!boost::multiprecision::bit_test(c.terms[r].coefficient, power)) continue;
      Integer weight = 1;
      weight <<= power;
      d.terms.push_back(BitTerm{power, r + 1, c.terms[r].literal, std::move(weight)});
    }
  }
  return d;
}

enum class Method { Bdd1, Bdd2, Bdd3, Ite6, Naive };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::Bdd1: return "bdd1";
    case Method::Bdd2: return "bdd2";
    case Method::Bdd3: return "bdd3";
    case Method::Ite6: return "ite6";
    case Method::Naive: return "naive";
  }
  return "?";
}

inline std::optional<Method> parse_method(const std::string& s) {
  for (Method m : {Method::Bdd1, Method::Bdd2, Method::Bdd3, Method::Ite6, Method::Naive})
    if (to_string(m) == s) return m;
  return std::nullopt;
}

struct ConstraintEncoding {
  Method method = Method::Bdd1;
  bool trivial = false;  // handled without building a diagram
  std::size_t diagrams = 0;
  std::size_t decision_nodes = 0;
  std::size_t max_width = 0;
  std::vector<std::size_t> widths;  // of the single diagram (bdd1, bdd2, ite6)
  std::size_t aux_vars = 0;
  ClauseCounts raw;
  ClauseCounts emitted;
};

// Minimal sets of literals whose coefficients exceed the bound; one clause
// of negations per set.
inline void encode_naive(const PBConstraint& c, ClauseSet& out) {
  const std::size_t n = c.terms.size();
  if (n > 20) throw std::invalid_argument("naive encoding limited to 20 terms");
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    Integer sum = 0;
    Integer smallest = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1u)) continue;
      sum += c.terms[i].coefficient;
      if (smallest < 0 || c.terms[i].coefficient < smallest) smallest = c.terms[i].coefficient;
    }
    if (sum <= c.bound || sum - smallest > c.bound) continue;
    Clause clause;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1u) clause.push_back(-c.terms[i].literal.to_dimacs());
    out.add_clause(std::move(clause));
  }
  if (c.bound < 0) out.add_clause({});
}

// Encodes one normalized constraint into `out`. Input variables of `c` must
// be within out.num_inputs().
inline ConstraintEncoding encode_constraint(const PBConstraint& c, Method method, ClauseSet& out,
                                            const BuildOptions& options = {}) {
  if (static_cast<int>(c.max_var()) > out.num_inputs())
    throw std::invalid_argument("constraint uses x" + std::to_string(c.max_var()) + " beyond the clause set's inputs");
  ConstraintEncoding report;
  report.method = method;
  const std::size_t clauses_before = out.size();
  const std::size_t aux_before = out.num_aux();

  auto finish = [&]() {
    report.emitted = count_clauses(out.clauses().subspan(clauses_before));
    report.aux_vars = out.num_aux() - aux_before;
    return report;
  };
  auto record_widths = [&](const NodeStore& store, NodeId root, bool keep) {
    auto w = level_widths(store, root);
    for (auto x : w) report.max_width = std::max(report.max_width, x);
    if (keep) report.widths = std::move(w);
  };

  if (c.trivially_true() || c.trivially_false()) {
    report.trivial = true;
    if (c.trivially_false()) out.add_clause({});
    return finish();
  }

  switch (method) {
    case Method::Naive: encode_naive(c, out); break;
    case Method::Bdd1:
    case Method::Ite6: {
      Robdd bdd = build(c, {}, options);
      const auto lits = bdd.literals();
      DiagramEncoding e = method == Method::Bdd1 ? encode_monotone(bdd.store, bdd.root(), lits, out, RootMode::UnitTrue)
                                                 : encode_ite6(bdd.store, bdd.root(), lits, out);
      report.diagrams = 1;
      report.decision_nodes = e.decision_nodes;
      report.raw = e.raw;
      record_widths(bdd.store, bdd.root(), true);
      break;
    }
    case Method::Bdd2: {
      const Decomposition d = decompose(c);
      const std::vector<Term> levels = d.levels();
      NodeStore store(static_cast<Level>(levels.size()));
      BuildResult r = build(store, levels, d.bound, options);
      std::vector<Literal> lits;
      for (const auto& t : levels) lits.push_back(t.literal);
      DiagramEncoding e = encode_monotone(store, r.root, lits, out, RootMode::UnitTrue);
      report.diagrams = 1;
      report.decision_nodes = e.decision_nodes;
      report.raw = e.raw;
      record_widths(store, r.root, true);
      break;
    }
    case Method::Bdd3: {
      for (std::size_t i = 0; i < c.terms.size(); ++i) {
        const Term& fixed = c.terms[i];
        PBConstraint sub;
        sub.bound = c.bound - fixed.coefficient;
        for (std::size_t j = 0; j < c.terms.size(); ++j)
          if (j != i) sub.terms.push_back(c.terms[j]);
        if (sub.trivially_true()) continue;
        if (sub.trivially_false()) {
          out.add_clause({-fixed.literal.to_dimacs()});
          ++report.raw.units;
          continue;
        }
        const Decomposition d = decompose(sub);
        const std::vector<Term> levels = d.levels();
        NodeStore store(static_cast<Level>(levels.size()));
        BuildResult r = build(store, levels, d.bound, options);
        std::vector<Literal> lits;
        for (const auto& t : levels) lits.push_back(t.literal);
        DiagramEncoding e =
            encode_monotone(store, r.root, lits, out, RootMode::ImpliesLiteral, fixed.literal.to_dimacs());
        ++report.diagrams;
        report.decision_nodes += e.decision_nodes;
        report.raw += e.raw;
        record_widths(store, r.root, false);
      }
      break;
    }
  }
  return finish();
}

inline ClauseSet encode(const PBConstraint& c, Method method, const BuildOptions& options = {}) {
  ClauseSet out(static_cast<int>(c.max_var()));
  encode_constraint(c, method, out, options);
  return out;
}

inline ClauseSet pipeline_bdd1(const PBConstraint& c) { return encode(c, Method::Bdd1); }
inline ClauseSet pipeline_bdd2(const PBConstraint& c) { return encode(c, Method::Bdd2); }
inline ClauseSet pipeline_bdd3(const PBConstraint& c) { return encode(c, Method::Bdd3); }

}  // namespace pbbdd
