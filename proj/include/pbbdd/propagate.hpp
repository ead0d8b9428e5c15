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

// Counter-based unit propagation over DIMACS-style clauses.

#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbbdd {

using CnfLit = int;
using Clause = std::vector<CnfLit>;

enum class PropagationStatus { Fixpoint, Conflict };

struct TrailEntry {
  CnfLit literal;
  // Index of the clause that forced the literal; nullopt for assumptions.
  std::optional<std::size_t> antecedent;
};

// Keeps per-clause counts of processed true and false literals. The
// constructor propagates unit clauses once; assume() extends that base level
// and backtrack() undoes back to any earlier trail size.
class Propagator {
 public:
  Propagator(std::span<const Clause> clauses, int num_vars) : clauses_(clauses) {
    for (const Clause& c : clauses)
      for (CnfLit l : c) num_vars = std::max(num_vars, std::abs(l));
    num_vars_ = num_vars;
    values_.assign(num_vars_ + 1, 0);
    occurs_.resize(2 * (num_vars_ + 1));
    true_count_.assign(clauses.size(), 0);
    false_count_.assign(clauses.size(), 0);
    for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
      for (CnfLit l : clauses[ci]) {
        if (l == 0) throw std::invalid_argument("literal 0 inside a clause");
        occurs_[index(l)].push_back(ci);
      }
    }
    for (std::size_t ci = 0; ci < clauses.size() && !conflict_; ++ci) {
      const Clause& c = clauses[ci];
      if (c.empty()) {
        conflict_ = ci;
      } else if (c.size() == 1) {
        if (value(c[0]) < 0) {
          conflict_ = ci;
        } else if (value(c[0]) == 0) {
          enqueue(c[0], ci);
        }
      }
    }
    if (!conflict_) propagate();
    base_size_ = trail_.size();
    base_conflict_ = conflict_;
  }

  int num_vars() const { return num_vars_; }

  // +1 true, -1 false, 0 unassigned. Variables beyond num_vars() read as 0.
  int value(CnfLit l) const {
    const int v = std::abs(l);
    if (v > num_vars_) return 0;
    const int val = values_[v];
    return l > 0 ? val : -val;
  }

  bool in_conflict() const { return conflict_.has_value(); }
  std::optional<std::size_t> conflict_clause() const { return conflict_; }
  std::span<const TrailEntry> trail() const { return trail_; }
  std::size_t trail_size() const { return trail_.size(); }
  std::size_t base_size() const { return base_size_; }

  // Asserts `l` and propagates; returns false on conflict. Once in
  // conflict, further assumptions are ignored until backtrack().
  bool assume(CnfLit l) {
    if (conflict_) return false;
    if (l == 0 || std::abs(l) > num_vars_) {
      if (l == 0) throw std::invalid_argument("literal 0");
      grow(std::abs(l));
    }
    if (value(l) > 0) return true;
    if (marks_.empty() || marks_.back() != trail_.size()) marks_.push_back(trail_.size());
    if (value(l) < 0) {
      conflict_ = kAssumptionConflict;
      conflict_pos_ = trail_.size();
      return false;
    }
    enqueue(l, std::nullopt);
    return propagate();
  }

  // `size` must be the base size or a trail size observed between calls
  // (a propagation fixpoint); other positions would lose implications.
  void backtrack(std::size_t size) {
    if (size < base_size_) throw std::invalid_argument("cannot backtrack below the base level");
    if (size != base_size_ && size != trail_.size() && !std::binary_search(marks_.begin(), marks_.end(), size))
      throw std::invalid_argument("backtrack target " + std::to_string(size) + " is not a fixpoint mark");
    while (!marks_.empty() && marks_.back() > size) marks_.pop_back();
    while (trail_.size() > size) {
      const std::size_t pos = trail_.size() - 1;
      const CnfLit l = trail_[pos].literal;
      if (pos < qhead_) {
        for (std::size_t ci : occurs_[index(l)]) --true_count_[ci];
        for (std::size_t ci : occurs_[index(-l)]) --false_count_[ci];
      }
      values_[std::abs(l)] = 0;
      trail_.pop_back();
    }
    qhead_ = std::min(qhead_, trail_.size());
    if (conflict_ && size <= conflict_pos_) conflict_.reset();
    if (base_conflict_) conflict_ = base_conflict_;
    if (!conflict_) propagate();
  }

  // Marker returned by conflict_clause() when an assumption contradicted
  // the current assignment directly.
  static constexpr std::size_t kAssumptionConflict = static_cast<std::size_t>(-1);

 private:
  std::size_t index(CnfLit l) const { return 2 * static_cast<std::size_t>(std::abs(l)) + (l < 0 ? 1 : 0); }

  void grow(int v) {
    num_vars_ = v;
    values_.resize(num_vars_ + 1, 0);
    occurs_.resize(2 * (num_vars_ + 1));
  }

  void enqueue(CnfLit l, std::optional<std::size_t> reason) {
    values_[std::abs(l)] = l > 0 ? 1 : -1;
    trail_.push_back(TrailEntry{l, reason});
  }

  bool propagate() {
    while (qhead_ < trail_.size()) {
      const CnfLit l = trail_[qhead_].literal;
      ++qhead_;
      for (std::size_t ci : occurs_[index(l)]) ++true_count_[ci];
      // Counters for every clause of -l are updated even after a conflict so
      // that backtrack() can undo them uniformly.
      for (std::size_t ci : occurs_[index(-l)]) {
        ++false_count_[ci];
        if (conflict_ || true_count_[ci] != 0) continue;
        const Clause& c = clauses_[ci];
        if (false_count_[ci] + 1 < c.size()) continue;
        CnfLit unit = 0;
        bool satisfied = false;
        for (CnfLit x : c) {
          const int v = value(x);
          if (v > 0) {
            satisfied = true;
            break;
          }
          if (v == 0) unit = x;
        }
        if (satisfied) continue;
        if (unit == 0) {
          conflict_ = ci;
          conflict_pos_ = qhead_ - 1;
        } else {
          enqueue(unit, ci);
        }
      }
      if (conflict_) return false;
    }
    return true;
  }

  std::span<const Clause> clauses_;
  int num_vars_ = 0;
  std::vector<std::int8_t> values_;
  std::vector<std::vector<std::size_t>> occurs_;
  std::vector<std::uint32_t> true_count_;
  std::vector<std::uint32_t> false_count_;
  std::vector<TrailEntry> trail_;
  std::size_t qhead_ = 0;
  std::size_t base_size_ = 0;
  std::optional<std::size_t> conflict_;
  std::size_t conflict_pos_ = 0;
  std::optional<std::size_t> base_conflict_;
  std::vector<std::size_t> marks_;  // trail sizes at assume() entry, increasing
};

struct PropagationResult {
  PropagationStatus status = PropagationStatus::Fixpoint;
  std::vector<TrailEntry> trail;
  // Falsified clause, or Propagator::kAssumptionConflict when two seed
  // literals contradict each other or the unit consequences.
  std::optional<std::size_t> conflict_clause;

  bool contains(CnfLit l) const {
    for (const auto& e : trail)
      if (e.literal == l) return true;
    return false;
  }
};

// Unit propagation fixpoint of `clauses` extended with the seed literals.
inline PropagationResult unit_propagate(std::span<const Clause> clauses, std::span<const CnfLit> seed,
                                        int num_vars = 0) {
  Propagator p(clauses, num_vars);
  for (CnfLit l : seed) {
    if (!p.assume(l)) break;
  }
  PropagationResult r;
  r.status = p.in_conflict() ? PropagationStatus::Conflict : PropagationStatus::Fixpoint;
  r.trail.assign(p.trail().begin(), p.trail().end());
  r.conflict_clause = p.conflict_clause();
  return r;
}

}  // namespace pbbdd
