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
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mqo/instance.hpp"
#include "mqo/logical.hpp"
#include "mqo/rng.hpp"

namespace mqo {

enum class ClockMode {
  wall,  // monotonic wall clock
  work,  // elapsed ms = counted operations / ops_per_ms, bit-reproducible
};

class SolverClock {
 public:
  explicit SolverClock(ClockMode mode = ClockMode::wall, double ops_per_ms = 2e5)
      : mode_(mode), ops_per_ms_(ops_per_ms), start_(std::chrono::steady_clock::now()) {
    if (!(ops_per_ms > 0.0)) throw std::invalid_argument("ops_per_ms must be positive");
  }

  void tick(std::uint64_t ops) noexcept { ops_ += ops; }
  std::uint64_t ops() const noexcept { return ops_; }
  ClockMode mode() const noexcept { return mode_; }

  double elapsed_ms() const {
    if (mode_ == ClockMode::work) return static_cast<double>(ops_) / ops_per_ms_;
    const auto d = std::chrono::steady_clock::now() - start_;
    return std::chrono::duration<double, std::milli>(d).count();
  }

 private:
  ClockMode mode_;
  double ops_per_ms_;
  std::uint64_t ops_ = 0;
  std::chrono::steady_clock::time_point start_;
};

struct CheckpointSample {
  double time_ms = 0.0;
  double best = 0.0;
  std::uint64_t iterations = 0;
};

/// Best-so-far value of one solver run, sampled at fixed times.
struct SolverRunRecord {
  std::string solver;
  std::uint64_t seed = 0;
  std::vector<CheckpointSample> checkpoints;
  PlanSelection best_selection;
  double best_value = std::numeric_limits<double>::infinity();
  std::uint64_t iterations = 0;  // restarts (climb) or generations (GA)
};

struct ClassicalRunConfig {
  std::vector<double> checkpoints_ms{1, 10, 100, 1000};
  ClockMode clock = ClockMode::wall;
  double ops_per_ms = 2e5;

  double deadline_ms() const { return checkpoints_ms.empty() ? 0.0 : checkpoints_ms.back(); }

  void validate() const {
    if (checkpoints_ms.empty() || !(checkpoints_ms.front() > 0.0))
      throw std::invalid_argument("deadline must be positive");
    for (std::size_t i = 1; i < checkpoints_ms.size(); ++i)
      if (!(checkpoints_ms[i] > checkpoints_ms[i - 1]))
        throw std::invalid_argument("checkpoints must be strictly increasing");
  }
};

namespace detail {

/// Records, for every checkpoint t, the best value found at or before t.
class CheckpointRecorder {
 public:
  CheckpointRecorder(SolverRunRecord& record, const ClassicalRunConfig& config)
      : record_(record), schedule_(config.checkpoints_ms) {}

  /// Call whenever time advanced; `improved` is the value found at `now`.
  void improve(double now, double value, const PlanSelection& selection) {
    flush_before(now);
    if (value < record_.best_value) {
      record_.best_value = value;
      record_.best_selection = selection;
    }
  }

  void advance(double now) { flush_before(now); }

  bool done(double now) const { return now >= schedule_.back(); }

  void finish() { flush_before(std::numeric_limits<double>::infinity()); }

 private:
  void flush_before(double now) {
    while (next_ < schedule_.size() && schedule_[next_] < now) {
      record_.checkpoints.push_back({schedule_[next_], record_.best_value, record_.iterations});
      ++next_;
    }
  }

  SolverRunRecord& record_;
  const std::vector<double>& schedule_;
  std::size_t next_ = 0;
};

inline Choice random_choice(const MqoInstance& instance, Rng& rng) {
  Choice c(instance.num_queries());
  for (std::size_t q = 0; q < c.size(); ++q)
    c[q] = static_cast<std::uint32_t>(rng.below(instance.queries()[q].plans.size()));
  return c;
}

/// Cost change when query q switches to plan position `to`; `selected` marks
/// the current selection.
inline double switch_delta(const MqoInstance& instance, const Choice& choice,
                           const std::vector<std::uint8_t>& selected, std::size_t q,
                           std::uint32_t to) {
  const auto& plans = instance.queries()[q].plans;
  const PlanIndex from = plans[choice[q]];
  const PlanIndex target = plans[to];
  double delta = instance.plans()[target].cost - instance.plans()[from].cost;
  for (const auto& [other, value] : instance.savings_of(from))
    if (selected[other]) delta += value;
  for (const auto& [other, value] : instance.savings_of(target))
    if (selected[other]) delta -= value;
  return delta;
}

inline std::uint64_t switch_ops(const MqoInstance& instance, const Choice& choice, std::size_t q,
                                std::uint32_t to) {
  const auto& plans = instance.queries()[q].plans;
  return 1 + instance.savings_of(plans[choice[q]]).size() + instance.savings_of(plans[to]).size();
}

}  // namespace detail

enum class ClimbStrategy { steepest, first_improvement };

/// Iterated hill climbing: random valid selection, then repeatedly move the
/// single query whose plan change lowers cost most, until no move helps.
/// Restarts until the last checkpoint.
inline SolverRunRecord hill_climbing(const MqoInstance& instance, const ClassicalRunConfig& config,
                                     std::uint64_t seed,
                                     ClimbStrategy strategy = ClimbStrategy::steepest) {
  config.validate();
  SolverRunRecord record{"CLIMB", seed, {}, {}, std::numeric_limits<double>::infinity(), 0};
  detail::CheckpointRecorder recorder(record, config);
  SolverClock clock(config.clock, config.ops_per_ms);
  Rng rng(seed);
  const std::size_t n = instance.num_queries();
  Choice choice;

  // Reports the current point; returns true once the deadline has passed.
  auto observe = [&](double current) {
    const double now = clock.elapsed_ms();
    if (current < record.best_value - kTolerance) {
      auto selection = selection_from_choice(instance, choice);
      recorder.improve(now, cost(instance, selection), selection);
    } else {
      recorder.advance(now);
    }
    return recorder.done(now);
  };

  bool stop = false;
  while (!stop) {
    choice = detail::random_choice(instance, rng);
    std::vector<std::uint8_t> selected(instance.num_plans(), 0);
    for (std::size_t q = 0; q < n; ++q) selected[instance.queries()[q].plans[choice[q]]] = 1;
    double current = choice_cost(instance, choice);
    clock.tick(instance.num_plans() + instance.savings().size());
    stop = observe(current);

    while (!stop) {
      double best_delta = -kTolerance;
      std::size_t best_q = n;
      std::uint32_t best_to = 0;
      for (std::size_t q = 0; q < n; ++q) {
        const auto size = static_cast<std::uint32_t>(instance.queries()[q].plans.size());
        for (std::uint32_t to = 0; to < size; ++to) {
          if (to == choice[q]) continue;
          const double d = detail::switch_delta(instance, choice, selected, q, to);
          clock.tick(detail::switch_ops(instance, choice, q, to));
          if (d < best_delta) {
            best_delta = d;
            best_q = q;
            best_to = to;
          }
        }
        if (strategy == ClimbStrategy::first_improvement && best_q < n) break;
      }
      if (best_q == n) break;  // local optimum
      const auto& plans = instance.queries()[best_q].plans;
      selected[plans[choice[best_q]]] = 0;
      selected[plans[best_to]] = 1;
      choice[best_q] = best_to;
      current += best_delta;
      stop = observe(current);
    }
    ++record.iterations;
    if (!stop) stop = recorder.done(clock.elapsed_ms());
  }
  recorder.finish();
  return record;
}

struct GaOptions {
  std::size_t population = 50;
  double crossover_rate = 0.35;
  double mutation_rate = 1.0 / 12.0;
};

/// Genetic algorithm over per-query plan choices, so every chromosome is a
/// valid selection. Each generation: every individual starts a single-point
/// crossover with probability `crossover_rate` (partner drawn uniformly), every
/// individual is copied and each gene of the copy is redrawn with probability
/// `mutation_rate`, and the best `population` of parents and offspring survive.
class GeneticAlgorithm {
 public:
  struct Individual {
    Choice genes;
    double cost = 0.0;
  };

  GeneticAlgorithm(const MqoInstance& instance, GaOptions options, std::uint64_t seed)
      : instance_(instance), options_(options), rng_(seed) {
    if (options.population < 2) throw std::invalid_argument("population must be at least 2");
    if (!(options.crossover_rate >= 0.0 && options.crossover_rate <= 1.0) ||
        !(options.mutation_rate >= 0.0 && options.mutation_rate <= 1.0))
      throw std::invalid_argument("rates must lie in [0, 1]");
    for (std::size_t i = 0; i < options.population; ++i) add(detail::random_choice(instance, rng_), population_);
    select();
  }

  /// Starts from a given population instead of a random one.
  GeneticAlgorithm(const MqoInstance& instance, GaOptions options, std::uint64_t seed,
                   std::vector<Choice> initial)
      : instance_(instance), options_(options), rng_(seed) {
    if (initial.size() < 2) throw std::invalid_argument("population must be at least 2");
    options_.population = initial.size();
    for (auto& c : initial) add(std::move(c), population_);
    select();
  }

  void step() {
    std::vector<Individual> offspring;
    const std::size_t n = instance_.num_queries();
    for (std::size_t i = 0; i < population_.size(); ++i) {
      if (!rng_.bernoulli(options_.crossover_rate)) continue;
      const auto& a = population_[i].genes;
      const auto& b = population_[rng_.below(population_.size())].genes;
      const std::size_t cut = n > 1 ? 1 + rng_.below(n - 1) : 0;
      Choice c1(a.begin(), a.begin() + cut);
      c1.insert(c1.end(), b.begin() + cut, b.end());
      Choice c2(b.begin(), b.begin() + cut);
      c2.insert(c2.end(), a.begin() + cut, a.end());
      add(std::move(c1), offspring);
      add(std::move(c2), offspring);
    }
    if (options_.mutation_rate > 0.0) {
      for (const auto& individual : population_) {
        Choice genes = individual.genes;
        bool changed = false;
        for (std::size_t q = 0; q < n; ++q) {
          if (!rng_.bernoulli(options_.mutation_rate)) continue;
          genes[q] = static_cast<std::uint32_t>(rng_.below(instance_.queries()[q].plans.size()));
          changed = true;
        }
        if (changed) add(std::move(genes), offspring);
      }
    }
    population_.insert(population_.end(), std::make_move_iterator(offspring.begin()),
                       std::make_move_iterator(offspring.end()));
    select();
    ++generation_;
  }

  const std::vector<Individual>& population() const noexcept { return population_; }
  const Individual& best() const { return population_.front(); }
  std::size_t generation() const noexcept { return generation_; }
  std::uint64_t evaluations() const noexcept { return evaluations_; }

 private:
  void add(Choice genes, std::vector<Individual>& into) {
    const double c = choice_cost(instance_, genes);
    ++evaluations_;
    into.push_back(Individual{std::move(genes), c});
  }

  void select() {
    std::stable_sort(population_.begin(), population_.end(), [](const auto& l, const auto& r) {
      if (l.cost != r.cost) return l.cost < r.cost;
      return l.genes < r.genes;
    });
    if (population_.size() > options_.population) population_.resize(options_.population);
  }

  const MqoInstance& instance_;
  GaOptions options_;
  Rng rng_;
  std::vector<Individual> population_;
  std::size_t generation_ = 0;
  std::uint64_t evaluations_ = 0;
};

inline SolverRunRecord genetic_algorithm(const MqoInstance& instance, const GaOptions& options,
                                         const ClassicalRunConfig& config, std::uint64_t seed) {
  config.validate();
  SolverRunRecord record{"GA(" + std::to_string(options.population) + ")", seed, {}, {},
                         std::numeric_limits<double>::infinity(), 0};
  detail::CheckpointRecorder recorder(record, config);
  SolverClock clock(config.clock, config.ops_per_ms);
  const std::uint64_t per_eval = instance.num_plans() + instance.savings().size() / 2 + 1;

  GeneticAlgorithm ga(instance, options, seed);
  std::uint64_t seen = 0;
  auto observe = [&] {
    clock.tick((ga.evaluations() - seen) * per_eval);
    seen = ga.evaluations();
    const auto& best = ga.best();
    recorder.improve(clock.elapsed_ms(), best.cost, selection_from_choice(instance, best.genes));
  };
  observe();
  while (!recorder.done(clock.elapsed_ms())) {
    ga.step();
    record.iterations = ga.generation();
    observe();
  }
  recorder.finish();
  return record;
}

/// Exact optimum of an MQO instance (see brute_force_mqo).
inline MqoOptimum solve_exact(const MqoInstance& instance, double budget = kDefaultEnumerationBudget) {
  return brute_force_mqo(instance, budget);
}

/// Exact optimum of a QUBO (see brute_force_qubo).
inline QuboOptimum solve_exact(const Qubo& qubo, std::size_t budget = kDefaultQuboBudget) {
  return brute_force_qubo(qubo, budget);
}

}  // namespace mqo
