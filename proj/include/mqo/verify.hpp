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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mqo/chimera.hpp"
#include "mqo/instance.hpp"
#include "mqo/logical.hpp"
#include "mqo/physical.hpp"
#include "mqo/rng.hpp"

namespace mqo {

// Seeded property suites comparing the QUBO routes against exhaustive oracles.

struct LogicalSuiteOptions {
  std::size_t instances = 200;
  std::size_t max_queries = 6;
  std::size_t max_plans = 3;
  double max_density = 0.4;
  double savings_min = 0.5;
  double savings_max = 5.0;
  std::uint64_t seed = 0;
  /// Negative control: sets the at-most-one weight to the at-least-one weight.
  bool break_at_most_one = false;
};

struct LogicalSuiteReport {
  std::size_t instances = 0;
  std::size_t optimal = 0;  // decoded QUBO optimum has the oracle's cost
  std::size_t valid = 0;    // decoded QUBO optimum is a valid selection
  std::vector<std::uint64_t> failing_seeds;
  bool ok() const { return optimal == instances && valid == instances; }
};

inline GeneratorParams logical_suite_params(const LogicalSuiteOptions& o, std::size_t i) {
  const std::uint64_t seed = derive_seed(o.seed, i);
  Rng rng(seed);
  GeneratorParams p;
  p.queries = 1 + rng.below(o.max_queries);
  p.plans_per_query = 1 + rng.below(o.max_plans);
  p.savings_density = rng.uniform(0.0, o.max_density);
  p.savings_min = o.savings_min;
  p.savings_max = o.savings_max;
  p.seed = derive_seed(seed, 1);
  return p;
}

inline LogicalSuiteReport verify_logical_suite(const LogicalSuiteOptions& o) {
  LogicalSuiteReport report;
  LogicalOptions mapping_options;
  for (std::size_t i = 0; i < o.instances; ++i) {
    const auto params = logical_suite_params(o, i);
    const auto instance = generate_instance(params);
    if (o.break_at_most_one) {
      double max_cost = 0.0;
      for (const auto& p : instance.plans()) max_cost = std::max(max_cost, p.cost);
      mapping_options.at_most_one_override = max_cost + mapping_options.epsilon;
    }
    const auto lq = logical_map(instance, mapping_options);
    const auto selection = decode_logical(lq.mapping, brute_force_qubo(lq.qubo, 62).assignment);
    const bool valid = validate_solution(instance, selection).valid;
    const bool optimal =
        valid && std::abs(cost(instance, selection) - brute_force_mqo(instance).cost) <= kTolerance;
    ++report.instances;
    report.valid += valid ? 1 : 0;
    report.optimal += optimal ? 1 : 0;
    if (!valid || !optimal) report.failing_seeds.push_back(params.seed);
  }
  return report;
}

struct ChainSuiteOptions {
  std::size_t trials = 100;
  std::size_t max_qubits = 24;
  std::uint64_t seed = 0;
  ChainStrengthRule rule = ChainStrengthRule::per_qubit_positive;
};

struct ChainSuiteReport {
  std::size_t trials = 0;
  std::size_t minima = 0;
  std::size_t consistent_trials = 0;  // every global minimum has consistent chains
  std::size_t optimal_trials = 0;     // every global minimum decodes to a logical optimum
  std::size_t max_qubits_used = 0;
  std::vector<std::size_t> chain_length_counts = std::vector<std::size_t>(5, 0);
  bool ok() const { return consistent_trials == trials && optimal_trials == trials; }
};

/// Random logical QUBO on chains of one length L in {2, 3, 4}, taken from a
/// TRIAD block with L - 1 groups so that every pair of chains is coupled.
struct ChainTrial {
  ChimeraGraph graph;
  Qubo qubo;
  Embedding embedding;
};

inline ChainTrial random_chain_trial(std::uint64_t seed, std::size_t max_qubits) {
  Rng rng(seed);
  const std::size_t length = 2 + rng.below(3);
  const std::size_t groups = length - 1;
  const ChimeraGraph graph(groups, groups);
  auto chains = detail::block_triad_chains(graph, {0, 0}, 4 * groups, TriadOrientation::lower);
  const std::size_t most = std::min(chains.size(), max_qubits / length);
  const std::size_t n = 2 + rng.below(most - 1);
  for (std::size_t i = 0; i < n; ++i) std::swap(chains[i], chains[i + rng.below(chains.size() - i)]);
  Embedding embedding;
  for (std::size_t i = 0; i < n; ++i) embedding.chains.emplace(static_cast<VarId>(i), chains[i]);
  Qubo qubo(n);
  const double density = rng.uniform(0.3, 1.0);
  for (VarId u = 0; u < n; ++u) {
    qubo.add_linear(u, rng.uniform(-10.0, 10.0));
    for (VarId v = u + 1; v < n; ++v)
      if (rng.bernoulli(density)) qubo.add_quadratic(u, v, rng.uniform(-10.0, 10.0));
  }
  return ChainTrial{graph, std::move(qubo), std::move(embedding)};
}

inline ChainSuiteReport verify_chain_suite(const ChainSuiteOptions& o) {
  ChainSuiteReport report;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const auto trial = random_chain_trial(derive_seed(o.seed, t), o.max_qubits);
    const auto pq = embed_qubo(trial.qubo, trial.embedding, trial.graph, PhysicalOptions{0.25, o.rule});
    const auto compact = compact_physical(pq);
    const double logical_best = brute_force_qubo(trial.qubo).energy;
    bool consistent = true;
    bool optimal = true;
    for (const auto& m : all_minima(compact.qubo, kTolerance, o.max_qubits)) {
      ++report.minima;
      const auto decoded = decode_physical(trial.embedding, compact.expand(m, trial.graph.num_qubits()));
      consistent &= decoded.chains.consistent();
      optimal &= std::abs(energy(trial.qubo, decoded.assignment) - logical_best) <= kTolerance;
    }
    ++report.trials;
    report.consistent_trials += consistent ? 1 : 0;
    report.optimal_trials += optimal ? 1 : 0;
    report.max_qubits_used = std::max(report.max_qubits_used, compact.qubit_of_var.size());
    ++report.chain_length_counts[trial.embedding.max_chain_length()];
  }
  return report;
}

}  // namespace mqo
