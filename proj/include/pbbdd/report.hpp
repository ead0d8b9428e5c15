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

// Whole-instance encoding and per-constraint statistics.
//
// Constraints are encoded independently (optionally on several threads)
// into private clause sets that are appended in input order, so the output
// does not depend on the number of workers.

#pragma once

#include "pbbdd/builder.hpp"
#include "pbbdd/encode.hpp"
#include "pbbdd/io.hpp"
#include "pbbdd/pb.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace pbbdd {

struct EncodeSettings {
  Method method = Method::Bdd1;
  // Constraints with at most this many terms use the naive encoding.
  std::size_t naive_max_vars = 2;
  BuildOptions build;
  unsigned jobs = 1;
};

struct ConstraintReport {
  std::size_t index = 0;   // 1-based, over normalized constraints
  std::size_t source = 0;  // 1-based index of the input constraint it came from
  std::size_t input_vars = 0;
  ConstraintEncoding encoding;
  double build_ms = 0.0;
};

struct EncodingReport {
  std::size_t instance_vars = 0;
  std::vector<ConstraintReport> rows;

  struct Totals {
    std::size_t aux_vars = 0;
    std::size_t decision_nodes = 0;
    ClauseCounts clauses;
    double build_ms = 0.0;
  };
  Totals totals() const {
    Totals t;
    for (const auto& r : rows) {
      t.aux_vars += r.encoding.aux_vars;
      t.decision_nodes += r.encoding.decision_nodes;
      t.clauses += r.encoding.emitted;
      t.build_ms += r.build_ms;
    }
    return t;
  }
};

struct InstanceEncoding {
  ClauseSet cnf;
  EncodingReport report;
};

inline InstanceEncoding encode_instance(const Instance& inst, const EncodeSettings& settings) {
  std::vector<PBConstraint> constraints;
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < inst.constraints.size(); ++i) {
    for (PBConstraint& c : normalize(inst.constraints[i])) {
      constraints.push_back(std::move(c));
      sources.push_back(i + 1);
    }
  }

  const int inputs = static_cast<int>(inst.num_vars());
  std::vector<ClauseSet> parts(constraints.size(), ClauseSet(inputs));
  std::vector<ConstraintReport> rows(constraints.size());
  std::vector<std::exception_ptr> errors(constraints.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (std::size_t i = next++; i < constraints.size(); i = next++) {
      try {
        const PBConstraint& c = constraints[i];
        const Method m = c.terms.size() <= settings.naive_max_vars ? Method::Naive : settings.method;
        const auto start = std::chrono::steady_clock::now();
        ConstraintEncoding e = encode_constraint(c, m, parts[i], settings.build);
        const auto stop = std::chrono::steady_clock::now();
        rows[i] = ConstraintReport{i + 1, sources[i], c.terms.size(), std::move(e),
                                   std::chrono::duration<double, std::milli>(stop - start).count()};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, settings.jobs);
  if (jobs == 1 || constraints.size() < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  InstanceEncoding out{ClauseSet(inputs), EncodingReport{}};
  out.report.instance_vars = inst.num_vars();
  for (const ClauseSet& p : parts) out.cnf.append(p);
  out.report.rows = std::move(rows);
  return out;
}

namespace detail {

inline std::string join_widths(const std::vector<std::size_t>& widths) {
  std::ostringstream os;
  for (std::size_t i = 0; i < widths.size(); ++i) os << (i ? "," : "") << widths[i];
  return widths.empty() ? "-" : os.str();
}

}  // namespace detail

// Human-readable table. "nodes" excludes the two terminals, "+term"
// includes them.
inline void print_report_table(const EncodingReport& report, std::ostream& os) {
  os << std::left << std::setw(5) << "#" << std::setw(5) << "src" << std::setw(7) << "method" << std::right
     << std::setw(6) << "vars" << std::setw(8) << "aux" << std::setw(8) << "nodes" << std::setw(8) << "+term"
     << std::setw(7) << "unit" << std::setw(8) << "binary" << std::setw(8) << "ternary" << std::setw(7) << "other"
     << std::setw(10) << "ms" << "  widths\n";
  os << std::fixed << std::setprecision(3);
  for (const auto& r : report.rows) {
    const auto& e = r.encoding;
    os << std::left << std::setw(5) << r.index << std::setw(5) << r.source << std::setw(7) << to_string(e.method)
       << std::right << std::setw(6) << r.input_vars << std::setw(8) << e.aux_vars << std::setw(8)
       << e.decision_nodes << std::setw(8) << (e.diagrams == 0 ? 0 : e.decision_nodes + 2 * e.diagrams)
       << std::setw(7) << e.emitted.units << std::setw(8) << e.emitted.binary << std::setw(8) << e.emitted.ternary
       << std::setw(7) << e.emitted.longer + e.emitted.empty << std::setw(10) << r.build_ms << "  "
       << detail::join_widths(e.widths) << "\n";
  }
  const auto t = report.totals();
  os << std::left << std::setw(17) << "total" << std::right << std::setw(6) << report.instance_vars << std::setw(8)
     << t.aux_vars << std::setw(8) << t.decision_nodes << std::setw(8) << "" << std::setw(7) << t.clauses.units
     << std::setw(8) << t.clauses.binary << std::setw(8) << t.clauses.ternary << std::setw(7)
     << t.clauses.longer + t.clauses.empty << std::setw(10) << t.build_ms << "\n";
  os.unsetf(std::ios::floatfield);
  os << std::setprecision(6);
}

// One `key=value` line per constraint plus a `total` line.
inline void print_report_rows(const EncodingReport& report, std::ostream& os) {
  std::ostringstream ms;
  for (const auto& r : report.rows) {
    const auto& e = r.encoding;
    ms.str("");
    ms << std::fixed << std::setprecision(3) << r.build_ms;
    os << "row index=" << r.index << " source=" << r.source << " method=" << to_string(e.method)
       << " vars=" << r.input_vars << " aux=" << e.aux_vars << " diagrams=" << e.diagrams
       << " nodes=" << e.decision_nodes << " nodes_with_terminals=" << (e.diagrams == 0 ? 0 : e.decision_nodes + 2 * e.diagrams)
       << " clauses=" << e.emitted.total() << " units=" << e.emitted.units << " binary=" << e.emitted.binary
       << " ternary=" << e.emitted.ternary << " other=" << e.emitted.longer + e.emitted.empty
       << " max_width=" << e.max_width << " widths=" << detail::join_widths(e.widths) << " ms=" << ms.str() << "\n";
  }
  const auto t = report.totals();
  ms.str("");
  ms << std::fixed << std::setprecision(3) << t.build_ms;
  os << "total constraints=" << report.rows.size() << " vars=" << report.instance_vars << " aux=" << t.aux_vars
     << " nodes=" << t.decision_nodes << " clauses=" << t.clauses.total() << " units=" << t.clauses.units
     << " binary=" << t.clauses.binary << " ternary=" << t.clauses.ternary
     << " other=" << t.clauses.longer + t.clauses.empty << " ms=" << ms.str() << "\n";
}

}  // namespace pbbdd
