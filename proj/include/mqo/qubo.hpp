// Copyright 2026 The mqo-anneal Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mqo/error.hpp"
#include "mqo/instance.hpp"

namespace mqo {

using VarId = std::uint32_t;

/// Binary assignment, one byte (0 or 1) per variable.
using Assignment = std::vector<std::uint8_t>;

/// Quadratic unconstrained binary objective  sum_i a_i x_i + sum_{i<j} b_ij x_i x_j.
class Qubo {
 public:
  using Pair = std::pair<VarId, VarId>;

  Qubo() = default;
  explicit Qubo(std::size_t num_vars) : linear_(num_vars, 0.0) {}

  std::size_t num_vars() const noexcept { return linear_.size(); }

  void add_linear(VarId v, double weight) {
    check(v);
    linear_[v] += weight;
  }

  /// Adds to the pair weight; a self pair folds into the linear term (x*x == x).
  void add_quadratic(VarId u, VarId v, double weight) {
    check(u);
    check(v);
    if (u == v) {
      linear_[u] += weight;
      return;
    }
    quadratic_[std::minmax(u, v)] += weight;
  }

  double linear(VarId v) const { return linear_.at(v); }
  std::span<const double> linear() const noexcept { return linear_; }
  const std::map<Pair, double>& quadratic() const noexcept { return quadratic_; }

  double quadratic(VarId u, VarId v) const {
    const auto it = quadratic_.find(std::minmax(u, v));
    return it == quadratic_.end() ? 0.0 : it->second;
  }

  /// Largest absolute weight over linear and quadratic terms.
  double max_abs_weight() const {
    double m = 0.0;
    for (double w : linear_) m = std::max(m, std::abs(w));
    for (const auto& [key, w] : quadratic_) m = std::max(m, std::abs(w));
    return m;
  }

 private:
  void check(VarId v) const {
    if (v >= linear_.size())
      throw std::out_of_range("variable " + std::to_string(v) + " out of range");
  }

  std::vector<double> linear_;
  std::map<Pair, double> quadratic_;
};

/// Compressed adjacency of a Qubo for fast local-field updates.
struct QuboAdjacency {
  std::vector<double> linear;
  std::vector<std::size_t> offsets;  // size num_vars + 1
  std::vector<VarId> neighbors;
  std::vector<double> weights;

  explicit QuboAdjacency(const Qubo& qubo)
      : linear(qubo.linear().begin(), qubo.linear().end()), offsets(qubo.num_vars() + 1, 0) {
    for (const auto& [key, w] : qubo.quadratic()) {
      ++offsets[key.first + 1];
      ++offsets[key.second + 1];
    }
    for (std::size_t i = 0; i < qubo.num_vars(); ++i) offsets[i + 1] += offsets[i];
    neighbors.resize(offsets.back());
    weights.resize(offsets.back());
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (const auto& [key, w] : qubo.quadratic()) {
      neighbors[fill[key.first]] = key.second;
      weights[fill[key.first]++] = w;
      neighbors[fill[key.second]] = key.first;
      weights[fill[key.second]++] = w;
    }
  }

  std::size_t num_vars() const noexcept { return linear.size(); }
};

inline double energy(const Qubo& qubo, std::span<const std::uint8_t> assignment) {
  if (assignment.size() != qubo.num_vars())
    throw std::invalid_argument("assignment has " + std::to_string(assignment.size()) +
                                " values, QUBO has " + std::to_string(qubo.num_vars()) +
                                " variables");
  double e = 0.0;
  for (std::size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i]) e += qubo.linear()[i];
  for (const auto& [key, w] : qubo.quadratic())
    if (assignment[key.first] && assignment[key.second]) e += w;
  return e;
}

struct QuboOptimum {
  Assignment assignment;
  double energy = 0.0;
};

inline constexpr std::size_t kDefaultQuboBudget = 24;

namespace detail {

/// Integer value of the assignment read as a bit string, variable 0 first.
inline std::uint64_t assignment_value(std::uint64_t code, std::size_t n) {
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < n; ++i) value = (value << 1) | ((code >> i) & 1U);
  return value;
}

inline Assignment decode_code(std::uint64_t code, std::size_t n) {
  Assignment a(n);
  for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<std::uint8_t>((code >> i) & 1U);
  return a;
}

}  // namespace detail

/// Visits all 2^n assignments in Gray-code order, calling visit(code, energy)
/// where bit i of `code` is variable i. Energies are updated incrementally.
template <class Visitor>
void enumerate_assignments(const Qubo& qubo, std::size_t budget, Visitor&& visit) {
  const std::size_t n = qubo.num_vars();
  if (n > budget || n > 62)
    throw BudgetExceeded("exhaustive QUBO search over " + std::to_string(n) +
                         " variables exceeds the budget of " + std::to_string(budget));
  const QuboAdjacency adj(qubo);
  std::vector<double> field = adj.linear;  // energy change when setting x_i = 1
  std::uint64_t code = 0;
  double e = 0.0;
  visit(code, e);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    const auto bit = static_cast<std::size_t>(std::countr_zero(step));
    const bool on = ((code >> bit) & 1U) == 0;
    const double sign = on ? 1.0 : -1.0;
    e += sign * field[bit];
    code ^= std::uint64_t{1} << bit;
    for (std::size_t k = adj.offsets[bit]; k < adj.offsets[bit + 1]; ++k)
      field[adj.neighbors[k]] += sign * adj.weights[k];
    visit(code, e);
  }
}

/// Exact minimum. Ties (within kTolerance) go to the assignment with the
/// smallest integer value when read as a bit string with variable 0 first.
inline QuboOptimum brute_force_qubo(const Qubo& qubo, std::size_t budget = kDefaultQuboBudget) {
  const std::size_t n = qubo.num_vars();
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t best_code = 0;
  enumerate_assignments(qubo, budget, [&](std::uint64_t code, double e) {
    if (e < best - kTolerance) {
      best = e;
      best_code = code;
    } else if (e <= best + kTolerance &&
               detail::assignment_value(code, n) < detail::assignment_value(best_code, n)) {
      best = std::min(best, e);
      best_code = code;
    }
  });
  QuboOptimum optimum{detail::decode_code(best_code, n), 0.0};
  optimum.energy = energy(qubo, optimum.assignment);
  return optimum;
}

/// Every assignment whose energy lies within `tolerance` of the global minimum.
inline std::vector<Assignment> all_minima(const Qubo& qubo, double tolerance = kTolerance,
                                          std::size_t budget = kDefaultQuboBudget) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<std::uint64_t, double>> candidates;
  enumerate_assignments(qubo, budget, [&](std::uint64_t code, double e) {
    if (e < best - tolerance) candidates.clear();
    if (e < best) best = e;
    if (e <= best + tolerance) candidates.emplace_back(code, e);
  });
  std::vector<Assignment> minima;
  for (const auto& [code, e] : candidates)
    if (e <= best + tolerance) minima.push_back(detail::decode_code(code, qubo.num_vars()));
  return minima;
}

}  // namespace mqo
