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

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "mqo/chimera.hpp"
#include "mqo/qubo.hpp"

namespace mqo {

/// How the per-chain consistency weight is bounded.
///
/// `per_qubit_positive` sums max(U(b), 0) over the chain qubits, which bounds
/// the energy increase of flipping any subset of them. `chain_sum` sums U(b)
/// with sign, which can fall below the increase caused by flipping only the
/// inconsistent part of a chain (see the tests for a counterexample).
enum class ChainStrengthRule { per_qubit_positive, chain_sum };

struct PhysicalOptions {
  double epsilon = 0.25;
  ChainStrengthRule rule = ChainStrengthRule::per_qubit_positive;
};

/// Weights on qubits and couplers of a Chimera graph, including the chain
/// consistency terms, plus the embedding that produced them.
struct PhysicalQubo {
  ChimeraGraph graph;
  Embedding embedding;
  std::map<QubitId, double> qubit_weight;
  std::map<std::pair<QubitId, QubitId>, double> coupler_weight;
  std::map<VarId, double> chain_penalty;

  /// Qubits carrying a weight or coupler, ascending.
  std::vector<QubitId> used_qubits() const {
    std::vector<QubitId> q;
    for (const auto& [id, w] : qubit_weight) q.push_back(id);
    for (const auto& [key, w] : coupler_weight) {
      q.push_back(key.first);
      q.push_back(key.second);
    }
    std::sort(q.begin(), q.end());
    q.erase(std::unique(q.begin(), q.end()), q.end());
    return q;
  }
};

namespace detail {

inline std::pair<double, double> flip_bounds(const PhysicalQubo& pq, const Chain& chain,
                                             ChainStrengthRule rule) {
  std::map<QubitId, std::pair<double, double>> per_qubit;  // (U 0->1, U 1->0)
  for (QubitId b : chain) {
    const double v = pq.qubit_weight.at(b);
    per_qubit[b] = {v, -v};
  }
  for (const auto& [key, w] : pq.coupler_weight) {
    const bool first_in = per_qubit.contains(key.first);
    const bool second_in = per_qubit.contains(key.second);
    if (first_in == second_in) continue;  // internal coupler or unrelated
    auto& bounds = per_qubit[first_in ? key.first : key.second];
    bounds.first += std::max(w, 0.0);
    bounds.second += std::max(-w, 0.0);
  }
  double up = 0.0;
  double down = 0.0;
  for (const auto& [q, bounds] : per_qubit) {
    if (rule == ChainStrengthRule::per_qubit_positive) {
      up += std::max(bounds.first, 0.0);
      down += std::max(bounds.second, 0.0);
    } else {
      up += bounds.first;
      down += bounds.second;
    }
  }
  return {up, down};
}

}  // namespace detail

/// Consistency weight w_B for one chain given the weights placed so far.
inline double chain_strength(const PhysicalQubo& pq, const Chain& chain,
                             const PhysicalOptions& options = {}) {
  const auto [up, down] = detail::flip_bounds(pq, chain, options.rule);
  return std::max(std::min(up, down), 0.0) + options.epsilon;
}

/// Spreads each linear weight evenly over its chain, puts each quadratic
/// weight on the first working coupler (lowest (min, max) qubit pair) between
/// the two chains, then adds w_B * (b_j + b_{j+1} - 2 b_j b_{j+1}) along every
/// chain. w_B is computed from the logical weights only.
inline PhysicalQubo embed_qubo(const Qubo& qubo, const Embedding& embedding,
                               const ChimeraGraph& graph, const PhysicalOptions& options = {}) {
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const auto report = verify_embedding(embedding, qubo, graph);
  if (!report.ok())
    throw EmbeddingInfeasible("embedding does not realize the QUBO: " +
                              report.violations.front().message);

  PhysicalQubo pq{graph, embedding, {}, {}, {}};
  for (const auto& [var, chain] : embedding.chains) {
    const double w = var < qubo.num_vars() ? qubo.linear(var) : 0.0;
    for (QubitId b : chain) pq.qubit_weight[b] += w / static_cast<double>(chain.size());
  }

  for (const auto& [key, w] : qubo.quadratic()) {
    const auto& cu = embedding.chains.at(key.first);
    const auto& cv = embedding.chains.at(key.second);
    std::optional<std::pair<QubitId, QubitId>> pick;
    for (QubitId a : cu)
      for (QubitId b : cv)
        if (graph.usable(a, b)) {
          const std::pair<QubitId, QubitId> edge = std::minmax(a, b);
          if (!pick || edge < *pick) pick = edge;
        }
    pq.coupler_weight[*pick] += w;
  }

  for (const auto& [var, chain] : embedding.chains)
    pq.chain_penalty[var] = chain_strength(pq, chain, options);

  for (const auto& [var, chain] : embedding.chains) {
    const double wb = pq.chain_penalty[var];
    for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
      pq.qubit_weight[chain[j]] += wb;
      pq.qubit_weight[chain[j + 1]] += wb;
      pq.coupler_weight[std::minmax(chain[j], chain[j + 1])] += -2.0 * wb;
    }
  }
  return pq;
}

/// Energy of a sample over all qubits of the graph (0/1 per qubit id).
inline double physical_energy(const PhysicalQubo& pq, std::span<const std::uint8_t> sample) {
  if (sample.size() != pq.graph.num_qubits())
    throw std::invalid_argument("sample covers " + std::to_string(sample.size()) +
                                " qubits, graph has " + std::to_string(pq.graph.num_qubits()));
  double e = 0.0;
  for (const auto& [q, w] : pq.qubit_weight)
    if (sample[q]) e += w;
  for (const auto& [key, w] : pq.coupler_weight)
    if (sample[key.first] && sample[key.second]) e += w;
  return e;
}

/// The physical energy as a Qubo over the used qubits only.
struct CompactPhysical {
  Qubo qubo;
  std::vector<QubitId> qubit_of_var;

  std::vector<std::uint8_t> expand(std::span<const std::uint8_t> compact,
                                   std::size_t num_qubits) const {
    std::vector<std::uint8_t> full(num_qubits, 0);
    for (std::size_t i = 0; i < compact.size(); ++i) full.at(qubit_of_var.at(i)) = compact[i];
    return full;
  }
};

inline CompactPhysical compact_physical(const PhysicalQubo& pq) {
  CompactPhysical out{Qubo{}, pq.used_qubits()};
  std::map<QubitId, VarId> index;
  for (std::size_t i = 0; i < out.qubit_of_var.size(); ++i)
    index[out.qubit_of_var[i]] = static_cast<VarId>(i);
  out.qubo = Qubo(out.qubit_of_var.size());
  for (const auto& [q, w] : pq.qubit_weight) out.qubo.add_linear(index.at(q), w);
  for (const auto& [key, w] : pq.coupler_weight)
    out.qubo.add_quadratic(index.at(key.first), index.at(key.second), w);
  return out;
}

/// Copies each variable's value onto every qubit of its chain.
inline std::vector<std::uint8_t> replicate_to_chains(const Embedding& embedding,
                                                     std::span<const std::uint8_t> assignment,
                                                     std::size_t num_qubits) {
  std::vector<std::uint8_t> sample(num_qubits, 0);
  for (const auto& [var, chain] : embedding.chains)
    for (QubitId q : chain) sample.at(q) = assignment[var];
  return sample;
}

struct ChainReport {
  std::vector<VarId> inconsistent;
  bool consistent() const noexcept { return inconsistent.empty(); }
};

struct DecodedSample {
  Assignment assignment;
  ChainReport chains;
};

/// Chain read-out: a consistent chain yields its value, otherwise the majority
/// (ties read as 0) and the chain is reported. Variables are 0..max key.
inline DecodedSample decode_physical(const Embedding& embedding, std::span<const std::uint8_t> sample) {
  DecodedSample out;
  const std::size_t n = embedding.chains.empty() ? 0 : embedding.chains.rbegin()->first + 1;
  out.assignment.assign(n, 0);
  for (const auto& [var, chain] : embedding.chains) {
    std::size_t ones = 0;
    for (QubitId q : chain) {
      if (q >= sample.size())
        throw std::invalid_argument("sample does not cover qubit " + std::to_string(q));
      ones += sample[q] ? 1 : 0;
    }
    if (ones != 0 && ones != chain.size()) out.chains.inconsistent.push_back(var);
    out.assignment[var] = 2 * ones > chain.size() ? 1 : 0;
  }
  return out;
}

}  // namespace mqo
