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

// Pseudo-Boolean constraint types and normalization to the canonical
// form  a_1 l_1 + ... + a_n l_n <= K  with positive coefficients.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbbdd {

using Integer = boost::multiprecision::cpp_int;
using VarId = std::uint32_t;

struct Literal {
  VarId var = 0;
  bool negated = false;

  Literal operator~() const { return Literal{var, !negated}; }
  // Signed DIMACS encoding of the literal (input variables map to
  // themselves in every emitted CNF).
  int to_dimacs() const { return negated ? -static_cast<int>(var) : static_cast<int>(var); }

  friend bool operator==(const Literal&, const Literal&) = default;
};

struct Term {
  Integer coefficient;
  Literal literal;

  friend bool operator==(const Term&, const Term&) = default;
};

enum class Comparator { Less, Greater, LessEqual, GreaterEqual, Equal };

struct RawTerm {
  Integer coefficient;
  VarId var = 0;

  friend bool operator==(const RawTerm&, const RawTerm&) = default;
};

// A linear constraint as it appears in the input, before normalization.
struct RawConstraint {
  std::vector<RawTerm> terms;
  Comparator comparator = Comparator::LessEqual;
  Integer bound;

  friend bool operator==(const RawConstraint&, const RawConstraint&) = default;
};

// Normalized constraint  sum(terms) <= bound. Coefficients are positive and
// every variable occurs in at most one term. The term order is the default
// variable order of the decision diagram.
struct PBConstraint {
  std::vector<Term> terms;
  Integer bound;

  Integer coefficient_sum() const {
    Integer sum = 0;
    for (const auto& t : terms) sum += t.coefficient;
    return sum;
  }
  bool trivially_true() const { return bound >= coefficient_sum(); }
  bool trivially_false() const { return bound < 0; }

  std::vector<VarId> variables() const {
    std::vector<VarId> vars;
    vars.reserve(terms.size());
    for (const auto& t : terms) vars.push_back(t.literal.var);
    return vars;
  }
  VarId max_var() const {
    VarId m = 0;
    for (const auto& t : terms) m = std::max(m, t.literal.var);
    return m;
  }

  friend bool operator==(const PBConstraint&, const PBConstraint&) = default;
};

inline std::string to_string(Comparator cmp) {
  switch (cmp) {
    case Comparator::Less: return "<";
    case Comparator::Greater: return ">";
    case Comparator::LessEqual: return "<=";
    case Comparator::GreaterEqual: return ">=";
    case Comparator::Equal: return "=";
  }
  return "?";
}

inline std::string to_string(const PBConstraint& c) {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : c.terms) {
    if (!first) os << " + ";
    first = false;
    os << t.coefficient << (t.literal.negated ? " ~x" : " x") << t.literal.var;
  }
  if (first) os << "0";
  os << " <= " << c.bound;
  return os.str();
}

namespace detail {

// Turns  sum(signed c_v * x_v) <= bound  into polarity form.
inline PBConstraint to_polarity_form(const std::vector<RawTerm>& merged, int sign, Integer bound) {
  PBConstraint out;
  out.terms.reserve(merged.size());
  for (const auto& rt : merged) {
    Integer c = rt.coefficient * sign;
    if (c > 0) {
      out.terms.push_back(Term{c, Literal{rt.var, false}});
    } else {
      // -a x = a ~x - a
      Integer a = -c;
      bound += a;
      out.terms.push_back(Term{std::move(a), Literal{rt.var, true}});
    }
  }
  out.bound = std::move(bound);
  return out;
}

}  // namespace detail

// Reduces a raw constraint to one (<, >, <=, >=) or two (=) normalized
// constraints whose conjunction has exactly the models of `raw`.
inline std::vector<PBConstraint> normalize(const RawConstraint& raw) {
  std::vector<RawTerm> merged;
  std::map<VarId, std::size_t> position;
  for (const auto& rt : raw.terms) {
    if (rt.var == 0) throw std::invalid_argument("variable ids start at 1");
    auto [it, inserted] = position.emplace(rt.var, merged.size());
    if (inserted) {
      merged.push_back(rt);
    } else {
      merged[it->second].coefficient += rt.coefficient;
    }
  }
  std::erase_if(merged, [](const RawTerm& t) { return t.coefficient == 0; });

  switch (raw.comparator) {
    case Comparator::LessEqual: return {detail::to_polarity_form(merged, 1, raw.bound)};
    case Comparator::Less: return {detail::to_polarity_form(merged, 1, raw.bound - 1)};
    case Comparator::GreaterEqual: return {detail::to_polarity_form(merged, -1, -raw.bound)};
    case Comparator::Greater: return {detail::to_polarity_form(merged, -1, -raw.bound - 1)};
    case Comparator::Equal:
      return {detail::to_polarity_form(merged, 1, raw.bound),
              detail::to_polarity_form(merged, -1, -raw.bound)};
  }
  throw std::logic_error("unknown comparator");
}

// Re-establishes the normalized-form invariants on an arbitrary polarity
// constraint: same-polarity duplicates are added, opposite-polarity
// duplicates cancel min(a, a') into the bound, zero terms are dropped.
inline PBConstraint normalize(const PBConstraint& c) {
  PBConstraint out;
  out.bound = c.bound;
  std::map<VarId, std::size_t> position;
  for (const auto& t : c.terms) {
    if (t.literal.var == 0) throw std::invalid_argument("variable ids start at 1");
    if (t.coefficient < 0) throw std::invalid_argument("polarity form requires nonnegative coefficients");
    auto [it, inserted] = position.emplace(t.literal.var, out.terms.size());
    if (inserted) {
      out.terms.push_back(t);
      continue;
    }
    Term& prev = out.terms[it->second];
    if (prev.literal == t.literal) {
      prev.coefficient += t.coefficient;
    } else if (prev.coefficient >= t.coefficient) {
      out.bound -= t.coefficient;
      prev.coefficient -= t.coefficient;
    } else {
      out.bound -= prev.coefficient;
      prev.coefficient = t.coefficient - prev.coefficient;
      prev.literal = t.literal;
    }
  }
  std::erase_if(out.terms, [](const Term& t) { return t.coefficient == 0; });
  return out;
}

// Inverse of normalization for a single <= constraint: a ~x becomes a - a x.
inline RawConstraint to_raw(const PBConstraint& c) {
  RawConstraint raw;
  raw.comparator = Comparator::LessEqual;
  raw.bound = c.bound;
  for (const auto& t : c.terms) {
    if (t.literal.negated) {
      raw.terms.push_back(RawTerm{-t.coefficient, t.literal.var});
      raw.bound -= t.coefficient;
    } else {
      raw.terms.push_back(RawTerm{t.coefficient, t.literal.var});
    }
  }
  return raw;
}

// values[v] is the 0/1 value of variable v; index 0 is unused.
inline bool literal_value(const Literal& lit, std::span<const std::uint8_t> values) {
  if (lit.var >= values.size() || values[lit.var] > 1)
    throw std::out_of_range("assignment has no value for x" + std::to_string(lit.var));
  return (values[lit.var] != 0) != lit.negated;
}

inline bool evaluate(const PBConstraint& c, std::span<const std::uint8_t> values) {
  Integer sum = 0;
  for (const auto& t : c.terms)
    if (literal_value(t.literal, values)) sum += t.coefficient;
  return sum <= c.bound;
}

inline bool evaluate(const RawConstraint& raw, std::span<const std::uint8_t> values) {
  Integer sum = 0;
  for (const auto& t : raw.terms) {
    if (t.var >= values.size() || values[t.var] > 1)
      throw std::out_of_range("assignment has no value for x" + std::to_string(t.var));
    if (values[t.var] != 0) sum += t.coefficient;
  }
  switch (raw.comparator) {
    case Comparator::Less: return sum < raw.bound;
    case Comparator::Greater: return sum > raw.bound;
    case Comparator::LessEqual: return sum <= raw.bound;
    case Comparator::GreaterEqual: return sum >= raw.bound;
    case Comparator::Equal: return sum == raw.bound;
  }
  return false;
}

}  // namespace pbbdd
