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

#include "support.hpp"

#include <gtest/gtest.h>

#include <commands.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pbbdd {
namespace {

namespace fs = std::filesystem;

std::string sample(const std::string& name) { return std::string(PBBDD_SAMPLES_DIR) + "/" + name; }

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "pbbdd");
  std::ostringstream out, err;
  const int code = cli::run_cli(args, out, err);
  return CliRun{code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("pbbdd_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const std::string& name, const std::string& content = "") const {
    const fs::path p = path_ / name;
    if (!content.empty()) std::ofstream(p) << content;
    return p.string();
  }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(ParseOpb, RunningExample) {
  const Instance inst = parse_opb("* #variable= 3 #constraint= 1\n+2 x1 +3 x2 +5 x3 <= 6 ;\n");
  ASSERT_EQ(inst.constraints.size(), 1u);
  EXPECT_EQ(inst.names, (std::vector<std::string>{"1", "2", "3"}));
  const auto parts = normalize(inst.constraints[0]);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_EQ(parts[0], test::running());
}

TEST(ParseOpb, NegatedLiteralShiftsBound) {
  const Instance inst = parse_opb("+5 x2 +7 ~x5 <= 9 ;");
  EXPECT_EQ(inst.names, (std::vector<std::string>{"2", "5"}));
  const RawConstraint& c = inst.constraints[0];
  EXPECT_EQ(c.terms[1].coefficient, -7);
  EXPECT_EQ(c.bound, 2);
  // 5 x2 + 7 ~x5 <= 9 over all four assignments
  const PBConstraint n = normalize(c).at(0);
  for (int m = 0; m < 4; ++m) {
    std::vector<std::uint8_t> values{0, std::uint8_t(m & 1), std::uint8_t(m >> 1)};
    const int lhs = 5 * (m & 1) + 7 * (1 - (m >> 1));
    EXPECT_EQ(evaluate(n, values), lhs <= 9);
  }
}

TEST(ParseOpb, MixedSample) {
  const Instance inst = test::parse_file(sample("mixed.opb"));
  ASSERT_EQ(inst.constraints.size(), 4u);
  EXPECT_EQ(inst.num_vars(), 5u);
  EXPECT_EQ(inst.constraints[1].comparator, Comparator::Equal);
  EXPECT_EQ(inst.constraints[2].comparator, Comparator::Less);
}

TEST(ParseOpb, ErrorsCarryPosition) {
  auto expect_error = [](const std::string& text, std::size_t line, std::size_t column) {
    try {
      parse_opb(text);
      ADD_FAILURE() << "no error for: " << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text << ": " << e.what();
      EXPECT_EQ(e.column(), column) << text << ": " << e.what();
    }
  };
  expect_error("+2 x1 +3 x2 <= ;\n", 1, 16);
  expect_error("* c\nmin: +1 x1 ;\n", 2, 1);
  expect_error("+2 x1 +3 <= 4 ;", 1, 10);
  expect_error("+2 x1 x2 <= 4 ;", 1, 7);
  expect_error("<= 4 ;", 1, 1);
  expect_error("+2 x1 <= 4", 1, 11);
  expect_error("+2 x1 ?= 4 ;", 1, 7);
  expect_error("+ x1 <= 4 ;", 1, 1);
}

// Property: write then parse is the identity on parsed instances.
TEST(OpbProperty, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    RandomOptions ro;
    ro.negated_probability = 0.3;
    std::vector<PBConstraint> cs;
    for (std::uint64_t k = 0; k < 1 + seed % 4; ++k) cs.push_back(random_constraint(seed * 10 + k, 1 + (seed + k) % 7, 1000, ro));
    const Instance inst = make_instance(cs);
    std::ostringstream os;
    write_opb(inst, os);
    const Instance back = parse_opb(os.str());
    std::ostringstream again;
    write_opb(back, again);
    EXPECT_EQ(os.str(), again.str());
    ASSERT_EQ(back.constraints.size(), cs.size());
    for (std::size_t i = 0; i < cs.size(); ++i) {
      // names of make_instance are the ids, so the re-parsed constraint
      // needs renaming through `back.names`
      PBConstraint c = normalize(back.constraints[i]).at(0);
      for (Term& t : c.terms) t.literal.var = static_cast<VarId>(std::stoul(back.names.at(t.literal.var - 1)));
      EXPECT_EQ(check_equivalent(c, cs[i]), Equivalence::Equivalent) << to_string(cs[i]);
    }
  }
}

TEST(Dimacs, EmptyAndUnsat) {
  std::ostringstream empty;
  write_dimacs(ClauseSet(0), DimacsHeader{}, empty);
  EXPECT_EQ(empty.str(), "p cnf 0 0\n");

  const Instance inst = parse_opb("+2 x1 +3 x2 <= -1 ;");
  const InstanceEncoding enc = encode_instance(inst, EncodeSettings{});
  std::ostringstream os;
  write_dimacs(enc.cnf, DimacsHeader{}, os);
  EXPECT_EQ(os.str(), "p cnf 2 1\n0\n");
}

TEST(Dimacs, RunningExampleGolden) {
  const CliRun r = cli({"encode", "--method", "bdd1", "--in", sample("running.opb")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out,
            "c method bdd1\n"
            "c map x1 = 1\n"
            "c map x2 = 2\n"
            "c map x3 = 3\n"
            "p cnf 6 5\n"
            "6 0\n"
            "5 0\n"
            "4 -1 0\n"
            "4 -2 0\n"
            "-3 -4 0\n");
}

TEST(Dimacs, SeedAndMapSidecar) {
  TempDir dir;
  const std::string cnf = dir.file("out.cnf"), map = dir.file("out.map");
  const CliRun r = cli({"encode", "--method", "bdd3", "--in", sample("running.opb"), "--out", cnf, "--map", map,
                     "--seed", "42"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string text = slurp(cnf);
  EXPECT_NE(text.find("c seed 42\n"), std::string::npos);
  EXPECT_NE(text.find("p cnf 10 13\n"), std::string::npos);
  const std::string m = slurp(map);
  EXPECT_EQ(m.rfind("x1 1\nx2 2\nx3 3\n", 0), 0u);
  std::size_t aux_lines = 0;
  for (std::size_t p = m.find("aux "); p != std::string::npos; p = m.find("aux ", p + 1)) ++aux_lines;
  EXPECT_EQ(aux_lines, 7u);
  EXPECT_NE(r.err.find("13 clauses"), std::string::npos);
}

TEST(EncodeInstance, DeterministicAcrossJobs) {
  const Instance inst = test::parse_file(sample("mixed.opb"));
  for (Method m : {Method::Bdd1, Method::Bdd2, Method::Bdd3, Method::Ite6, Method::Naive}) {
    EncodeSettings one;
    one.method = m;
    EncodeSettings four = one;
    four.jobs = 4;
    EXPECT_EQ(test::clauses_of(encode_instance(inst, one).cnf), test::clauses_of(encode_instance(inst, four).cnf)) << to_string(m);
  }
}

// The instance CNF has exactly the models of the instance (projected).
TEST(EncodeInstance, MixedSampleModels) {
  const Instance inst = test::parse_file(sample("mixed.opb"));
  for (Method m : {Method::Bdd1, Method::Bdd2, Method::Bdd3, Method::Ite6, Method::Naive}) {
    EncodeSettings s;
    s.method = m;
    s.naive_max_vars = 0;
    const ClauseSet cnf = encode_instance(inst, s).cnf;
    for (std::uint64_t mask = 0; mask < 32; ++mask) {
      const auto values = test::assignment(mask, 5);
      bool expected = true;
      for (const RawConstraint& rc : inst.constraints)
        for (const PBConstraint& c : normalize(rc)) expected = expected && evaluate(c, values);
      std::vector<CnfLit> assumptions;
      for (VarId v = 1; v <= 5; ++v) assumptions.push_back(values[v] ? CnfLit(v) : -CnfLit(v));
      EXPECT_EQ(satisfiable(cnf.clauses(), assumptions, cnf.num_vars()), expected) << to_string(m) << " " << mask;
    }
  }
}

TEST(Stats, RowTotalsAreSums) {
  const CliRun r = cli({"stats", "--in", sample("mixed.opb"), "--format", "rows"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::map<std::string, long long> sum, total;
  std::size_t rows = 0;
  auto fields = [](const std::string& l) {
    std::map<std::string, std::string> f;
    std::istringstream ls(l);
    std::string tok;
    while (ls >> tok) {
      const auto eq = tok.find('=');
      if (eq != std::string::npos) f[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return f;
  };
  for (const std::string key : {"aux", "nodes", "clauses", "units", "binary", "ternary", "other"}) sum[key] = 0;
  while (std::getline(in, line)) {
    const auto f = fields(line);
    if (line.rfind("row ", 0) == 0) {
      ++rows;
      for (auto& [k, v] : sum) v += std::stoll(f.at(k));
    } else if (line.rfind("total ", 0) == 0) {
      for (const auto& [k, v] : sum) total[k] = std::stoll(f.at(k));
      EXPECT_EQ(std::stoul(f.at("constraints")), rows);
      EXPECT_EQ(f.at("vars"), "5");
    }
  }
  EXPECT_EQ(rows, 5u);  // the equality splits into two
  EXPECT_EQ(sum, total);
}

TEST(Stats, TableHasHeaderAndTotal) {
  const CliRun r = cli({"stats", "--in", sample("running.opb"), "--format", "table", "--method", "bdd2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("#", 0), 0u);
  EXPECT_NE(r.out.find("+term"), std::string::npos);
  EXPECT_NE(r.out.find("\ntotal"), std::string::npos);
  EXPECT_EQ(cli({"stats", "--in", sample("running.opb"), "--format", "xml"}).code, 2);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(cli({"encode", "--in", sample("bad.opb")}).code, 3);
  EXPECT_EQ(cli({"encode", "--in", sample("objective.opb")}).code, 3);
  EXPECT_EQ(cli({"encode", "--in", sample("does-not-exist.opb")}).code, 2);
  EXPECT_EQ(cli({"encode", "--in", sample("running.opb"), "--method", "bdd9"}).code, 2);
  EXPECT_EQ(cli({"encode"}).code, 2);
  EXPECT_EQ(cli({"frobnicate"}).code, 2);
  EXPECT_EQ(cli({"encode", "--in", sample("running.opb"), "--node-budget", "1"}).code, 4);
  EXPECT_EQ(cli({"encode", "--in", sample("running.opb"), "--node-budget", "3"}).code, 0);
  EXPECT_EQ(cli({"--help"}).code, 0);
  EXPECT_EQ(cli({"verify", "--max-n", "13"}).code, 2);
}

TEST(Cli, BudgetFromEnvironment) {
  ::setenv(cli::kBudgetEnv, "2", 1);
  const CliRun r = cli({"encode", "--in", sample("running.opb")});
  ::unsetenv(cli::kBudgetEnv);
  EXPECT_EQ(r.code, 4);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, VerifyReportsZeroViolations) {
  const CliRun r = cli({"verify", "--method", "bdd1", "--max-n", "5", "--seeds", "4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("constraints=20"), std::string::npos);
  EXPECT_NE(r.out.find("violations=0"), std::string::npos);
}

TEST(Cli, VerifyFlagsBdd2Gac) {
  const CliRun r = cli({"verify", "--method", "bdd2", "--max-n", "6", "--seeds", "10", "--check", "gac"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("gac violation"), std::string::npos);
}

TEST(Cli, GenFamilies) {
  CliRun r = cli({"gen", "--family", "hosaka", "--n", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("+5 x1 +6 x2 +9 x3 +10 x4 <= 15 ;"), std::string::npos);
  r = cli({"gen", "--family", "bailleux", "--n", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("+129 x1 +131 x2 +135 x3 +143 x4 +159 x5 +191 x6 <= 381 ;"), std::string::npos);
  EXPECT_EQ(cli({"gen", "--family", "bailleux", "--n", "5"}).code, 2);
  EXPECT_EQ(cli({"gen", "--family", "other", "--n", "5"}).code, 2);
  const CliRun a = cli({"gen", "--family", "random", "--n", "7", "--seed", "3"});
  const CliRun b = cli({"gen", "--family", "random", "--n", "7", "--seed", "3"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_NO_THROW(parse_opb(a.out));
}

TEST(Cli, GenOutputEncodes) {
  TempDir dir;
  const std::string opb = dir.file("h2.opb");
  ASSERT_EQ(cli({"gen", "--family", "hosaka", "--n", "2", "--out", opb}).code, 0);
  const CliRun r = cli({"encode", "--in", opb, "--method", "bdd3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("p cnf "), std::string::npos);
}

TEST(Cli, Equiv) {
  CliRun r = cli({"equiv", sample("running.opb"), sample("running_le5.opb")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "equivalent\n");
  r = cli({"equiv", sample("running.opb"), sample("running_le7.opb")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "different\n");

  TempDir dir;
  // same function, different names and term order
  const std::string renamed = dir.file("renamed.opb", "+5 x3 +2 x1 +3 x2 <= 5 ;\n");
  EXPECT_EQ(cli({"equiv", sample("running.opb"), renamed}).out, "equivalent\n");
  const std::string other = dir.file("other.opb", "+2 x1 +3 x2 +5 x9 <= 6 ;\n");
  EXPECT_EQ(cli({"equiv", sample("running.opb"), other}).code, 2);
  EXPECT_EQ(cli({"equiv", sample("running.opb"), sample("mixed.opb")}).code, 2);
}

}  // namespace
}  // namespace pbbdd
