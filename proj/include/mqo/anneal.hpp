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
#include <optional>
#include <utility>
#include <stdexcept>
#include <vector>

#include "mqo/qubo.hpp"
#include "mqo/rng.hpp"

namespace mqo {

enum class Schedule { geometric, linear };

/// Simulated annealing parameters. Temperatures are in energy units; an unset
/// initial temperature defaults to the largest absolute weight of the problem.
struct AnnealParams {
  std::size_t sweeps = 64;
  std::size_t runs_per_batch = 100;
  std::size_t batches = 10;
  std::optional<double> t_initial;
  double t_final = 1e-3 * 0.25;
  Schedule schedule = Schedule::geometric;

  std::size_t total_runs() const noexcept { return runs_per_batch * batches; }

  void validate() const {
    if (sweeps == 0) throw std::invalid_argument("sweeps must be positive");
    if (runs_per_batch * batches == 0) throw std::invalid_argument("need at least one run");
    if (!(t_final > 0.0)) throw std::invalid_argument("final temperature must be positive");
    if (t_initial && !(*t_initial >= t_final))
      throw std::invalid_argument("initial temperature must be at least the final temperature");
  }
};

struct Sample {
  Assignment bits;
  double energy = 0.0;
};

/// Single-bit Metropolis annealer. Local fields are updated on every accepted
/// flip, so one sweep costs O(variables + accepted flips * degree).
class Annealer {
 public:
  Annealer(const Qubo& qubo, AnnealParams params)
      : qubo_(qubo), adj_(qubo), params_(std::move(params)) {
    params_.validate();
    t_initial_ = params_.t_initial.value_or(std::max(qubo.max_abs_weight(), params_.t_final));
    temperatures_.resize(params_.sweeps);
    for (std::size_t s = 0; s < params_.sweeps; ++s) {
      const double frac = params_.sweeps == 1 ? 1.0 : static_cast<double>(s) / (params_.sweeps - 1);
      temperatures_[s] = params_.schedule == Schedule::geometric
                             ? t_initial_ * std::pow(params_.t_final / t_initial_, frac)
                             : t_initial_ + (params_.t_final - t_initial_) * frac;
    }
  }

  const AnnealParams& params() const noexcept { return params_; }
  double initial_temperature() const noexcept { return t_initial_; }

  /// Flip attempts performed so far; the work clock of the benchmark uses it.
  std::uint64_t flip_attempts() const noexcept { return flip_attempts_; }

  Sample run(std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n = adj_.num_vars();
    Sample sample{Assignment(n, 0), 0.0};
    auto& x = sample.bits;
    for (auto& bit : x) bit = static_cast<std::uint8_t>(rng.next() >> 63);

    std::vector<double> field = adj_.linear;
    for (std::size_t i = 0; i < n; ++i) {
      if (!x[i]) continue;
      for (std::size_t k = adj_.offsets[i]; k < adj_.offsets[i + 1]; ++k)
        field[adj_.neighbors[k]] += adj_.weights[k];
    }

    for (double t : temperatures_) {
      const double beta = 1.0 / t;
      for (std::size_t i = 0; i < n; ++i) {
        const double delta = x[i] ? -field[i] : field[i];
        if (delta > 0.0 && rng.uniform01() >= std::exp(-beta * delta)) continue;
        const double sign = x[i] ? -1.0 : 1.0;
        x[i] ^= 1U;
        for (std::size_t k = adj_.offsets[i]; k < adj_.offsets[i + 1]; ++k)
          field[adj_.neighbors[k]] += sign * adj_.weights[k];
      }
      flip_attempts_ += n;
    }
    sample.energy = energy(qubo_, x);
    return sample;
  }

  std::vector<Sample> run_batch(std::uint64_t batch_seed) {
    std::vector<Sample> out;
    out.reserve(params_.runs_per_batch);
    for (std::size_t r = 0; r < params_.runs_per_batch; ++r) out.push_back(run(derive_seed(batch_seed, r)));
    return out;
  }

 private:
  Qubo qubo_;
  QuboAdjacency adj_;
  AnnealParams params_;
  double t_initial_ = 1.0;
  std::vector<double> temperatures_;
  std::uint64_t flip_attempts_ = 0;
};

inline std::uint64_t batch_seed(std::uint64_t seed, std::size_t batch) { return derive_seed(seed, batch); }

/// runs_per_batch * batches samples in batch order. Each batch draws from its
/// own derived seed, standing in for an independent hardware gauge.
inline std::vector<Sample> simulated_annealing(const Qubo& qubo, const AnnealParams& params,
                                               std::uint64_t seed) {
  Annealer annealer(qubo, params);
  std::vector<Sample> out;
  out.reserve(params.total_runs());
  for (std::size_t b = 0; b < params.batches; ++b) {
    auto batch = annealer.run_batch(batch_seed(seed, b));
    out.insert(out.end(), std::make_move_iterator(batch.begin()), std::make_move_iterator(batch.end()));
  }
  return out;
}

}  // namespace mqo
