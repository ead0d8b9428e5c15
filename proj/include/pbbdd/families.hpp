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

// Constraint generators: two families with known diagram sizes and a seeded
// random generator for tests.

#pragma once

#include "pbbdd/pb.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbbdd {

// x_1 + ... + x_n <= bound
inline PBConstraint cardinality(std::size_t n, const Integer& bound) {
  PBConstraint c;
  for (std::size_t i = 1; i <= n; ++i) c.terms.push_back(Term{1, Literal{static_cast<VarId>(i), false}});
  c.bound = bound;
  return c;
}

// Weights a + b^i with bound a*n/2. Equivalent to x_1 + ... + x_n <= n/2 - 1
// whenever b + b^2 + ... + b^n < a; the ROBDD is quadratic in n.
inline PBConstraint bailleux_family(const Integer& a, const Integer& b, std::size_t n) {
  if (a <= 0 || b <= 0) throw std::invalid_argument("bailleux_family: a and b must be positive");
  if (n == 0 || n % 2 != 0) throw std::invalid_argument("bailleux_family: n must be even and positive");
  PBConstraint c;
  Integer power = 1;
  Integer powers = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    power *= b;
    powers += power;
    c.terms.push_back(Term{a + power, Literal{static_cast<VarId>(i), false}});
  }
  if (powers >= a) throw std::invalid_argument("bailleux_family: need b + ... + b^n < a");
  c.bound = a * static_cast<unsigned long long>(n / 2);
  return c;
}

// Variable of x_{i,j} (1-based) in the 2n x 2n row-major grid.
inline VarId hosaka_var(std::size_t n, std::size_t i, std::size_t j) {
  return static_cast<VarId>((i - 1) * 2 * n + j);
}

// a_{i,j} = 2^(j-1) + 2^(2n+i-1) for 1 <= i, j <= 2n and K = (2^(4n) - 1) n.
// Every variable order yields at least 2^n nodes.
inline PBConstraint hosaka_family(std::size_t n) {
  if (n == 0) throw std::invalid_argument("hosaka_family: n must be positive");
  PBConstraint c;
  for (std::size_t i = 1; i <= 2 * n; ++i) {
    for (std::size_t j = 1; j <= 2 * n; ++j) {
      Integer a = 1;
      a <<= static_cast<unsigned>(j - 1);
      Integer row = 1;
      row <<= static_cast<unsigned>(2 * n + i - 1);
      c.terms.push_back(Term{a + row, Literal{hosaka_var(n, i, j), false}});
    }
  }
  Integer k = 1;
  k <<= static_cast<unsigned>(4 * n);
  c.bound = (k - 1) * static_cast<unsigned long long>(n);
  return c;
}

struct BoundPolicy {
  enum class Kind { Uniform, Fraction, Full };
  Kind kind = Kind::Uniform;
  double fraction = 0.5;

  static BoundPolicy uniform() { return {Kind::Uniform, 0.0}; }
  static BoundPolicy of_sum(double f) { return {Kind::Fraction, f}; }
  static BoundPolicy full() { return {Kind::Full, 1.0}; }
};

struct RandomOptions {
  BoundPolicy bound = BoundPolicy::uniform();
  // Chance that a term's literal is negated.
  double negated_probability = 0.0;
};

// Terms over x_1..x_n with coefficients uniform in [1, max_coeff].
inline PBConstraint random_constraint(std::uint64_t seed, std::size_t n, std::uint64_t max_coeff,
                                      const RandomOptions& options = {}) {
  if (n == 0) throw std::invalid_argument("random_constraint: n must be positive");
  if (max_coeff == 0) throw std::invalid_argument("random_constraint: max_coeff must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint64_t> coeff(1, max_coeff);
  std::bernoulli_distribution negate(options.negated_probability);
  PBConstraint c;
  std::uint64_t sum = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    const std::uint64_t a = coeff(rng);
    sum += a;
    c.terms.push_back(Term{a, Literal{static_cast<VarId>(i), negate(rng)}});
  }
  switch (options.bound.kind) {
    case BoundPolicy::Kind::Uniform:
      c.bound = std::uniform_int_distribution<std::uint64_t>(0, sum)(rng);
      break;
    case BoundPolicy::Kind::Fraction:
      c.bound = static_cast<std::uint64_t>(static_cast<double>(sum) * options.bound.fraction);
      break;
    case BoundPolicy::Kind::Full: c.bound = sum; break;
  }
  return c;
}

}  // namespace pbbdd
