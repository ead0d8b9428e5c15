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

// OPB input, DIMACS output and the variable-map sidecar.

#pragma once

#include "pbbdd/encode.hpp"
#include "pbbdd/pb.hpp"

#include <cctype>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pbbdd {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Variable ids are dense from 1 in order of first appearance. names[id - 1]
// is the identifier following the `x` in the file.
struct Instance {
  std::vector<std::string> names;
  std::vector<RawConstraint> constraints;

  VarId num_vars() const { return static_cast<VarId>(names.size()); }

  VarId intern(const std::string& name) {
    auto [it, inserted] = ids_.emplace(name, static_cast<VarId>(names.size() + 1));
    if (inserted) names.push_back(name);
    return it->second;
  }
  std::optional<VarId> find(const std::string& name) const {
    auto it = ids_.find(name);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const Instance& a, const Instance& b) {
    return a.names == b.names && a.constraints == b.constraints;
  }

 private:
  std::unordered_map<std::string, VarId> ids_;
};

namespace detail {

struct Token {
  enum class Kind { Integer, Variable, Operator, Semicolon, Objective, End };
  Kind kind;
  std::string text;
  bool negated = false;  // variable written as ~x
  std::size_t line;
  std::size_t column;
};

class OpbLexer {
 public:
  explicit OpbLexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_space();
    const std::size_t line = line_, col = col_;
    if (pos_ >= text_.size()) return Token{Token::Kind::End, "", false, line, col};
    const char c = text_[pos_];
    if (c == ';') {
      advance();
      return Token{Token::Kind::Semicolon, ";", false, line, col};
    }
    if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      advance();
      if (c != '=' && pos_ < text_.size() && text_[pos_] == '=') {
        op += '=';
        advance();
      }
      return Token{Token::Kind::Operator, op, false, line, col};
    }
    if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      if (c == '+' || c == '-') {
        if (c == '-') num += '-';
        advance();
      }
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
        throw ParseError(line, col, "expected digits after sign");
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        num += text_[pos_];
        advance();
      }
      return Token{Token::Kind::Integer, num, false, line, col};
    }
    if (c == '~' || c == 'x') {
      bool negated = false;
      if (c == '~') {
        negated = true;
        advance();
        if (pos_ >= text_.size() || text_[pos_] != 'x') throw ParseError(line, col, "expected variable after '~'");
      }
      advance();
      std::string name;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        name += text_[pos_];
        advance();
      }
      if (name.empty()) throw ParseError(line, col, "variable name missing after 'x'");
      return Token{Token::Kind::Variable, name, negated, line, col};
    }
    if (text_.substr(pos_, 4) == "min:" || text_.substr(pos_, 4) == "max:") {
      return Token{Token::Kind::Objective, std::string(text_.substr(pos_, 4)), false, line, col};
    }
    throw ParseError(line, col, std::string("unexpected character '") + c + "'");
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      if (col_ == 1 && text_[pos_] == '*') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (!std::isspace(static_cast<unsigned char>(text_[pos_]))) return;
      advance();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline Comparator parse_comparator(const Token& t) {
  if (t.text == "<=") return Comparator::LessEqual;
  if (t.text == ">=") return Comparator::GreaterEqual;
  if (t.text == "<") return Comparator::Less;
  if (t.text == ">") return Comparator::Greater;
  if (t.text == "=") return Comparator::Equal;
  throw ParseError(t.line, t.column, "unknown operator '" + t.text + "'");
}

}  // namespace detail

// Linear OPB decision instances: `[+|-]<int> x<name> ... <op> <int> ;`.
// Lines starting with '*' are comments; objectives are rejected.
inline Instance parse_opb(std::string_view text) {
  Instance inst;
  detail::OpbLexer lex(text);
  while (true) {
    detail::Token t = lex.next();
    if (t.kind == detail::Token::Kind::End) break;
    if (t.kind == detail::Token::Kind::Objective)
      throw ParseError(t.line, t.column, "objective functions are not supported (decision instances only)");
    RawConstraint c;
    while (t.kind == detail::Token::Kind::Integer) {
      const detail::Token coeff = t;
      t = lex.next();
      if (t.kind != detail::Token::Kind::Variable)
        throw ParseError(t.line, t.column, "coefficient " + coeff.text + " is not followed by a variable");
      Integer a(coeff.text);
      const VarId v = inst.intern(t.text);
      if (t.negated) {
        // a ~x = a - a x
        c.terms.push_back(RawTerm{-a, v});
        c.bound -= a;
      } else {
        c.terms.push_back(RawTerm{a, v});
      }
      t = lex.next();
    }
    if (t.kind == detail::Token::Kind::Variable)
      throw ParseError(t.line, t.column, "variable x" + t.text + " has no coefficient");
    if (t.kind != detail::Token::Kind::Operator) throw ParseError(t.line, t.column, "expected a comparison operator");
    if (c.terms.empty()) throw ParseError(t.line, t.column, "constraint has no terms");
    c.comparator = detail::parse_comparator(t);
    t = lex.next();
    if (t.kind != detail::Token::Kind::Integer) throw ParseError(t.line, t.column, "expected an integer right-hand side");
    // Constants of negated literals move to the right-hand side.
    Integer shift = c.bound;
    c.bound = Integer(t.text) + shift;
    t = lex.next();
    if (t.kind != detail::Token::Kind::Semicolon) throw ParseError(t.line, t.column, "expected ';'");
    inst.constraints.push_back(std::move(c));
  }
  return inst;
}

inline void write_opb(const Instance& inst, std::ostream& os) {
  os << "* #variable= " << inst.num_vars() << " #constraint= " << inst.constraints.size() << "\n";
  for (const RawConstraint& c : inst.constraints) {
    for (const RawTerm& t : c.terms) {
      os << (t.coefficient >= 0 ? "+" : "") << t.coefficient << " x" << inst.names.at(t.var - 1) << " ";
    }
    os << to_string(c.comparator) << " " << c.bound << " ;\n";
  }
}

// Instance over x1..xn (n = largest variable used) from normalized
// constraints; names are the decimal variable ids.
inline Instance make_instance(const std::vector<PBConstraint>& constraints) {
  Instance inst;
  VarId max_var = 0;
  for (const auto& c : constraints) max_var = std::max(max_var, c.max_var());
  for (VarId v = 1; v <= max_var; ++v) inst.intern(std::to_string(v));
  for (const auto& c : constraints) inst.constraints.push_back(to_raw(c));
  return inst;
}

struct DimacsHeader {
  std::string method;
  std::optional<std::uint64_t> seed;
  // Input names in CNF variable order; names[v - 1] maps to variable v.
  std::vector<std::string> names;
};

inline void write_dimacs(const ClauseSet& cnf, const DimacsHeader& header, std::ostream& os) {
  if (!header.method.empty()) os << "c method " << header.method << "\n";
  if (header.seed) os << "c seed " << *header.seed << "\n";
  for (std::size_t i = 0; i < header.names.size(); ++i) os << "c map x" << header.names[i] << " = " << i + 1 << "\n";
  os << "p cnf " << cnf.num_vars() << " " << cnf.size() << "\n";
  for (const Clause& c : cnf.clauses()) {
    for (CnfLit l : c) os << l << " ";
    os << "0\n";
  }
}

// One line per CNF variable: `x<name> <var>` for inputs and
// `aux <var> <diagram> <node>` for diagram nodes.
inline void write_map(const ClauseSet& cnf, const std::vector<std::string>& names, std::ostream& os) {
  for (std::size_t i = 0; i < names.size(); ++i) os << "x" << names[i] << " " << i + 1 << "\n";
  for (int v = cnf.num_inputs() + 1; v <= cnf.num_vars(); ++v) {
    const AuxOrigin& o = cnf.origin(v);
    os << "aux " << v << " " << o.diagram << " " << o.node.index << "\n";
  }
}

}  // namespace pbbdd
