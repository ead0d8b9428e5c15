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

// Right-hand-side intervals of BDD nodes.
//
// The interval of a node at level i is the set of integers M for which the
// sub-diagram rooted there represents  a_i l_i + ... + a_n l_n <= M.

#pragma once

#include "pbbdd/pb.hpp"
#include "pbbdd/robdd.hpp"

#include <cassert>
#include <compare>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace pbbdd {

// Integer extended with -inf and +inf. Addition saturates at the infinities.
class Bound {
 public:
  enum class Kind { NegInf = 0, Finite = 1, PosInf = 2 };

  Bound() = default;
  Bound(Integer v) : kind_(Kind::Finite), value_(std::move(v)) {}  // NOLINT(implicit)
  Bound(long long v) : kind_(Kind::Finite), value_(v) {}           // NOLINT(implicit)

  static Bound neg_inf() { return Bound(Kind::NegInf); }
  static Bound pos_inf() { return Bound(Kind::PosInf); }

  Kind kind() const { return kind_; }
  bool finite() const { return kind_ == Kind::Finite; }
  const Integer& value() const {
    if (!finite()) throw std::logic_error("value() of an infinite bound");
    return value_;
  }

  friend Bound operator+(const Bound& b, const Integer& d) {
    if (!b.finite()) return b;
    return Bound(b.value_ + d);
  }
  friend Bound operator-(const Bound& b, const Integer& d) {
    if (!b.finite()) return b;
    return Bound(b.value_ - d);
  }

  friend bool operator==(const Bound& a, const Bound& b) {
    return a.kind_ == b.kind_ && (!a.finite() || a.value_ == b.value_);
  }
  friend std::strong_ordering operator<=>(const Bound& a, const Bound& b) {
    if (a.kind_ != b.kind_) return static_cast<int>(a.kind_) <=> static_cast<int>(b.kind_);
    if (!a.finite()) return std::strong_ordering::equal;
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Bound& b) {
    switch (b.kind_) {
      case Kind::NegInf: return os << "-inf";
      case Kind::PosInf: return os << "+inf";
      case Kind::Finite: return os << b.value_;
    }
    return os;
  }

 private:
  explicit Bound(Kind k) : kind_(k) {}

  Kind kind_ = Kind::Finite;
  Integer value_ = 0;
};

struct Interval {
  Bound lo;
  Bound hi;

  static Interval empty() { return Interval{Bound::pos_inf(), Bound::neg_inf()}; }

  bool is_empty() const { return lo > hi; }
  bool contains(const Integer& k) const { return lo <= Bound(k) && Bound(k) <= hi; }
  bool overlaps(const Interval& o) const { return !is_empty() && !o.is_empty() && lo <= o.hi && o.lo <= hi; }

  Interval shifted(const Integer& d) const { return Interval{lo + d, hi + d}; }

  friend bool operator==(const Interval& a, const Interval& b) {
    if (a.is_empty() || b.is_empty()) return a.is_empty() == b.is_empty();
    return a.lo == b.lo && a.hi == b.hi;
  }

  friend std::ostream& operator<<(std::ostream& os, const Interval& iv) {
    if (iv.is_empty()) return os << "{}";
    os << (iv.lo.finite() ? "[" : "(") << iv.lo << ", " << iv.hi << (iv.hi.finite() ? "]" : ")");
    return os;
  }
};

inline Interval intersect(const Interval& a, const Interval& b) {
  return Interval{std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

inline std::string to_string(const Interval& iv) {
  std::ostringstream os;
  os << iv;
  return os.str();
}

inline Interval terminal_interval(bool value) {
  return value ? Interval{Bound(0), Bound::pos_inf()} : Interval{Bound::neg_inf(), Bound(-1)};
}

// Coefficients along the variable order with suffix sums, so that
// range_sum(i, j) = a_i + ... + a_{j-1} is O(1). Levels are 1-based and
// level n + 1 is the terminal level.
class LevelCoefficients {
 public:
  explicit LevelCoefficients(std::span<const Term> levels) : suffix_(levels.size() + 2, 0) {
    coefficients_.reserve(levels.size());
    for (const auto& t : levels) coefficients_.push_back(t.coefficient);
    for (std::size_t i = levels.size(); i >= 1; --i) suffix_[i] = suffix_[i + 1] + coefficients_[i - 1];
  }

  Level num_levels() const { return static_cast<Level>(coefficients_.size()); }
  const Integer& coefficient(Level i) const { return coefficients_.at(i - 1); }
  // a_i + ... + a_n
  const Integer& suffix(Level i) const { return suffix_.at(i); }
  // a_from + ... + a_{to-1}; zero when to <= from.
  Integer range_sum(Level from, Level to) const {
    if (to <= from) return 0;
    return suffix_.at(from) - suffix_.at(to);
  }

 private:
  std::vector<Integer> coefficients_;
  std::vector<Integer> suffix_;
};

// Interval of a node at `level` from its children's intervals. The children
// are given by literal value (not variable value) and may sit several levels
// below; skipped coefficients are added to the lower bound.
inline Interval combine_child_intervals(const LevelCoefficients& coeffs, Level level, Level false_level,
                                        const Interval& false_iv, Level true_level, const Interval& true_iv) {
  if (false_level <= level || true_level <= level)
    throw std::invalid_argument("combine_child_intervals: children must lie below the node");
  const Integer& a = coeffs.coefficient(level);
  Bound lo = std::max(false_iv.lo + coeffs.range_sum(level + 1, false_level),
                      true_iv.lo + coeffs.range_sum(level, true_level));
  Bound hi = std::min(false_iv.hi, true_iv.hi + a);
  Interval out{std::move(lo), std::move(hi)};
  assert(!out.is_empty());
  return out;
}

using IntervalTable = std::unordered_map<NodeId, Interval>;

struct IntervalMismatch {
  NodeId node;
  Interval stored;
  Interval recomputed;
};

// Recomputes every reachable node's interval bottom-up and compares it with
// `stored`. A node missing from `stored` counts as a mismatch (stored empty).
inline std::optional<IntervalMismatch> verify_intervals(std::span<const Term> levels, const NodeStore& store,
                                                        NodeId root, const IntervalTable& stored) {
  const LevelCoefficients coeffs(levels);
  IntervalTable computed;
  computed.emplace(kFalseNode, terminal_interval(false));
  computed.emplace(kTrueNode, terminal_interval(true));
  for (NodeId n : reachable_nodes(store, root)) {
    const Level lvl = store.level(n);
    NodeId lit_false = store.false_child(n);
    NodeId lit_true = store.true_child(n);
    if (levels[lvl - 1].literal.negated) std::swap(lit_false, lit_true);
    Interval iv = combine_child_intervals(coeffs, lvl, store.level(lit_false), computed.at(lit_false),
                                          store.level(lit_true), computed.at(lit_true));
    auto it = stored.find(n);
    if (it == stored.end()) return IntervalMismatch{n, Interval::empty(), iv};
    if (!(it->second == iv)) return IntervalMismatch{n, it->second, iv};
    computed.emplace(n, std::move(iv));
  }
  return std::nullopt;
}

}  // namespace pbbdd
