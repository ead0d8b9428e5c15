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

// Subcommands of the pbbdd tool. Kept in a header so tests can drive the
// CLI in-process.
//
// Exit codes: 0 ok, 1 verification failure, 2 usage or I/O, 3 parse error,
// 4 node budget exceeded.

#pragma once

#include "pbbdd.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pbbdd::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kParse = 3, kBudget = 4 };

inline constexpr const char* kBudgetEnv = "PBBDD_NODE_BUDGET";

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Instance load(const std::string& path) { return parse_opb(read_file(path)); }

// Writes through `fn` into `path`, or into `out` when path is "-".
template <typename Fn>
void write_to(const std::string& path, std::ostream& out, Fn&& fn) {
  if (path == "-") {
    fn(out);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write " + path);
  fn(f);
  if (!f) throw UsageError("error writing " + path);
}

inline std::size_t node_budget(std::size_t flag) {
  if (flag != 0) return flag;
  if (const char* env = std::getenv(kBudgetEnv)) {
    try {
      return static_cast<std::size_t>(std::stoull(env));
    } catch (const std::exception&) {
      throw UsageError(std::string(kBudgetEnv) + " is not a number: " + env);
    }
  }
  return 0;
}

inline Method method_from(const std::string& name) {
  if (auto m = parse_method(name)) return *m;
  throw UsageError("unknown method '" + name + "'");
}

struct EncodeArgs {
  std::string method = "bdd1";
  std::string in;
  std::string out = "-";
  std::string map;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::size_t naive_max_vars = 2;
  std::size_t node_budget = 0;
  std::string format = "both";
};

inline void add_encoding_flags(CLI::App* cmd, EncodeArgs& a) {
  cmd->add_option("--method", a.method, "bdd1, bdd2, bdd3, ite6 or naive")->capture_default_str();
  cmd->add_option("--in", a.in, "OPB input")->required();
  cmd->add_option("--jobs", a.jobs, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--naive-max-vars", a.naive_max_vars, "constraints with at most this many terms use naive clauses")
      ->capture_default_str();
  cmd->add_option("--node-budget", a.node_budget, "per-diagram node limit (0: none; env " + std::string(kBudgetEnv) + ")");
}

inline EncodeSettings settings_from(const EncodeArgs& a) {
  EncodeSettings s;
  s.method = method_from(a.method);
  s.naive_max_vars = a.naive_max_vars;
  s.jobs = a.jobs;
  s.build.node_budget = node_budget(a.node_budget);
  return s;
}

inline int cmd_encode(const EncodeArgs& a, std::ostream& out, std::ostream& err) {
  const Instance inst = load(a.in);
  const InstanceEncoding enc = encode_instance(inst, settings_from(a));
  DimacsHeader header{a.method, a.seed, inst.names};
  write_to(a.out, out, [&](std::ostream& os) { write_dimacs(enc.cnf, header, os); });
  if (!a.map.empty()) write_to(a.map, out, [&](std::ostream& os) { write_map(enc.cnf, inst.names, os); });
  if (a.out != "-") {
    const auto t = enc.report.totals();
    err << "wrote " << enc.cnf.size() << " clauses over " << enc.cnf.num_vars() << " variables (" << t.aux_vars
        << " auxiliary) to " << a.out << "\n";
  }
  return kOk;
}

inline int cmd_stats(const EncodeArgs& a, std::ostream& out) {
  if (a.format != "table" && a.format != "rows" && a.format != "both")
    throw UsageError("--format must be table, rows or both");
  const Instance inst = load(a.in);
  const InstanceEncoding enc = encode_instance(inst, settings_from(a));
  if (a.format != "rows") print_report_table(enc.report, out);
  if (a.format != "table") print_report_rows(enc.report, out);
  return kOk;
}

struct VerifyArgs {
  std::string method = "bdd1";
  std::size_t max_n = 6;
  std::size_t seeds = 20;
  std::uint64_t max_coeff = 100;
  std::string check = "auto";
  double negated = 0.25;
};

inline void print_witness(std::ostream& err, const std::string& what, const PBConstraint& c, const Counterexample& w) {
  err << what << " violation on " << to_string(c) << ": " << w.reason << "\n";
}

// Random corpus: for each seed and each n in 1..max_n one constraint with a
// uniform bound and some negated literals.
inline int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const Method m = method_from(a.method);
  if (a.max_n == 0 || a.max_n > 12) throw UsageError("--max-n must be in 1..12");
  bool consistency = true, gac = false, models = true;
  if (a.check == "auto") {
    gac = m == Method::Bdd1 || m == Method::Bdd3 || m == Method::Naive;
  } else if (a.check == "gac") {
    consistency = models = false;
    gac = true;
  } else if (a.check == "consistency") {
    models = false;
  } else if (a.check == "models") {
    consistency = false;
  } else if (a.check == "all") {
    gac = true;
  } else {
    throw UsageError("--check must be auto, consistency, gac, models or all");
  }
  const VerifyOptions options{a.max_n};
  std::size_t checked = 0, violations = 0;
  for (std::uint64_t s = 0; s < a.seeds; ++s) {
    for (std::size_t n = 1; n <= a.max_n; ++n) {
      RandomOptions ro;
      ro.negated_probability = a.negated;
      const PBConstraint c = random_constraint(s * 1000 + n, n, a.max_coeff, ro);
      const ClauseSet cnf = encode(c, m);
      ++checked;
      if (consistency) {
        if (auto w = check_consistency(c, cnf.clauses(), ConsistencyTarget::conflict(), options)) {
          print_witness(err, "consistency", c, *w);
          ++violations;
        }
      }
      if (gac) {
        if (auto w = check_gac(c, cnf.clauses(), options)) {
          print_witness(err, "gac", c, *w);
          ++violations;
        }
      }
      if (models) {
        if (auto w = check_models(c, cnf.clauses(), options)) {
          print_witness(err, "model", c, *w);
          ++violations;
        }
      }
    }
  }
  out << "method=" << a.method << " constraints=" << checked << " consistency=" << (consistency ? "on" : "off")
      << " gac=" << (gac ? "on" : "off") << " models=" << (models ? "on" : "off") << " violations=" << violations
      << "\n";
  return violations == 0 ? kOk : kVerifyFailed;
}

struct GenArgs {
  std::string family;
  std::size_t n = 0;
  std::string a = "127";
  std::string b = "2";
  std::uint64_t seed = 0;
  std::uint64_t max_coeff = 100;
  double fraction = -1.0;
  double negated = 0.0;
  std::string out = "-";
};

inline int cmd_gen(const GenArgs& g, std::ostream& out) {
  PBConstraint c;
  std::ostringstream comment;
  if (g.n == 0) throw UsageError("--n must be positive");
  if (g.family == "hosaka") {
    c = hosaka_family(g.n);
    comment << "* hosaka n=" << g.n << "\n";
  } else if (g.family == "bailleux") {
    Integer a, b;
    try {
      a = Integer(g.a);
      b = Integer(g.b);
    } catch (const std::exception&) {
      throw UsageError("--a and --b must be integers");
    }
    try {
      c = bailleux_family(a, b, g.n);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    comment << "* bailleux a=" << g.a << " b=" << g.b << " n=" << g.n << "\n";
  } else if (g.family == "random") {
    if (g.max_coeff == 0) throw UsageError("--max-coeff must be positive");
    RandomOptions ro;
    ro.negated_probability = g.negated;
    if (g.fraction >= 0) ro.bound = BoundPolicy::of_sum(g.fraction);
    c = random_constraint(g.seed, g.n, g.max_coeff, ro);
    comment << "* random seed=" << g.seed << " n=" << g.n << " max-coeff=" << g.max_coeff << "\n";
  } else {
    throw UsageError("--family must be hosaka, bailleux or random");
  }
  const Instance inst = make_instance({c});
  write_to(g.out, out, [&](std::ostream& os) {
    write_opb(inst, os);
    os << comment.str();
  });
  return kOk;
}

// The single normalized constraint of an OPB file, with variables renamed
// into `names` (shared between the two files being compared).
inline PBConstraint single_constraint(const std::string& path, Instance& names) {
  const Instance inst = load(path);
  if (inst.constraints.size() != 1) throw UsageError(path + ": expected exactly one constraint");
  std::vector<PBConstraint> parts = normalize(inst.constraints.front());
  if (parts.size() != 1) throw UsageError(path + ": equality constraints are not supported by equiv");
  PBConstraint c = std::move(parts.front());
  for (Term& t : c.terms) t.literal.var = names.intern(inst.names.at(t.literal.var - 1));
  return c;
}

inline int cmd_equiv(const std::string& a, const std::string& b, std::ostream& out) {
  Instance names;
  const PBConstraint ca = single_constraint(a, names);
  const PBConstraint cb = single_constraint(b, names);
  Equivalence e;
  try {
    e = check_equivalent(ca, cb);
  } catch (const std::invalid_argument& ex) {
    throw UsageError(ex.what());
  }
  out << (e == Equivalence::Equivalent ? "equivalent" : "different") << "\n";
  return kOk;
}

}  // namespace detail

// Runs the tool with argv-style arguments (args[0] is the program name).
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pseudo-Boolean to CNF compiler based on interval-labelled ROBDDs", "pbbdd"};
  app.require_subcommand(1);

  detail::EncodeArgs enc_args, stats_args;
  CLI::App* encode_cmd = app.add_subcommand("encode", "encode an OPB instance into DIMACS CNF");
  detail::add_encoding_flags(encode_cmd, enc_args);
  encode_cmd->add_option("--out", enc_args.out, "DIMACS output ('-' for stdout)")->capture_default_str();
  encode_cmd->add_option("--map", enc_args.map, "variable map sidecar");
  encode_cmd->add_option("--seed", enc_args.seed, "seed recorded in the DIMACS header");

  CLI::App* stats_cmd = app.add_subcommand("stats", "print encoding statistics");
  detail::add_encoding_flags(stats_cmd, stats_args);
  stats_cmd->add_option("--format", stats_args.format, "table, rows or both")->capture_default_str();

  detail::VerifyArgs verify_args;
  CLI::App* verify_cmd = app.add_subcommand("verify", "check propagation strength on a random corpus");
  verify_cmd->add_option("--method", verify_args.method)->capture_default_str();
  verify_cmd->add_option("--max-n", verify_args.max_n, "largest constraint size")->capture_default_str();
  verify_cmd->add_option("--seeds", verify_args.seeds, "constraints per size")->capture_default_str();
  verify_cmd->add_option("--max-coeff", verify_args.max_coeff)->capture_default_str()->check(CLI::PositiveNumber);
  verify_cmd->add_option("--check", verify_args.check, "auto, consistency, gac, models or all")->capture_default_str();
  verify_cmd->add_option("--negated", verify_args.negated, "probability of a negated literal")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));

  detail::GenArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand("gen", "write a generated constraint as OPB");
  gen_cmd->add_option("--family", gen_args.family, "hosaka, bailleux or random")->required();
  gen_cmd->add_option("--n", gen_args.n, "family size parameter")->required();
  gen_cmd->add_option("--a", gen_args.a, "bailleux: base weight")->capture_default_str();
  gen_cmd->add_option("--b", gen_args.b, "bailleux: power base")->capture_default_str();
  gen_cmd->add_option("--seed", gen_args.seed, "random: seed")->capture_default_str();
  gen_cmd->add_option("--max-coeff", gen_args.max_coeff, "random: largest coefficient")->capture_default_str();
  gen_cmd->add_option("--bound-fraction", gen_args.fraction, "random: bound as a fraction of the coefficient sum")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--negated", gen_args.negated, "random: probability of a negated literal")
      ->check(CLI::Range(0.0, 1.0));
  gen_cmd->add_option("--out", gen_args.out, "OPB output ('-' for stdout)")->capture_default_str();

  std::string equiv_a, equiv_b;
  CLI::App* equiv_cmd = app.add_subcommand("equiv", "decide whether two single-constraint files are equivalent");
  equiv_cmd->add_option("a", equiv_a)->required();
  equiv_cmd->add_option("b", equiv_b)->required();

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*encode_cmd) return detail::cmd_encode(enc_args, out, err);
    if (*stats_cmd) return detail::cmd_stats(stats_args, out);
    if (*verify_cmd) return detail::cmd_verify(verify_args, out, err);
    if (*gen_cmd) return detail::cmd_gen(gen_args, out);
    if (*equiv_cmd) return detail::cmd_equiv(equiv_a, equiv_b, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParse;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const LimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace pbbdd::cli
