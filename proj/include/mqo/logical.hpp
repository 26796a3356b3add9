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
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "mqo/instance.hpp"
#include "mqo/qubo.hpp"

namespace mqo {

/// Plan <-> variable bijection plus the penalty weights chosen for the QUBO.
///
/// `weight_at_least_one` scales the term rewarding every selected plan and must
/// exceed the largest plan cost. `weight_at_most_one` scales the pairwise
/// penalty on plans of the same query and must exceed the former plus the
/// largest total savings any single plan can collect.
struct LogicalMapping {
  std::vector<PlanIndex> plan_of_var;
  std::vector<VarId> var_of_plan;
  double weight_at_least_one = 0.0;
  double weight_at_most_one = 0.0;
  double epsilon = 0.25;
};

struct LogicalOptions {
  double epsilon = 0.25;
  /// Replaces the derived at-most-one weight. Only meant for negative controls.
  std::optional<double> at_most_one_override;
};

struct LogicalQubo {
  Qubo qubo;
  LogicalMapping mapping;
};

/// Largest sum of savings any single plan participates in.
inline double max_savings_per_plan(const MqoInstance& instance) {
  double best = 0.0;
  for (PlanIndex p = 0; p < instance.num_plans(); ++p) {
    double sum = 0.0;
    for (const auto& entry : instance.savings_of(p)) sum += entry.second;
    best = std::max(best, sum);
  }
  return best;
}

/// Energy  w_L*E_L + w_M*E_M + E_C + E_S  over one binary variable per plan.
inline LogicalQubo logical_map(const MqoInstance& instance, const LogicalOptions& options = {}) {
  if (instance.num_plans() == 0) throw std::invalid_argument("instance has no plans");
  if (!(options.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  double max_cost = 0.0;
  for (const auto& plan : instance.plans()) max_cost = std::max(max_cost, plan.cost);

  LogicalMapping mapping;
  mapping.epsilon = options.epsilon;
  mapping.weight_at_least_one = max_cost + options.epsilon;
  mapping.weight_at_most_one = options.at_most_one_override.value_or(
      mapping.weight_at_least_one + max_savings_per_plan(instance) + options.epsilon);
  mapping.plan_of_var.resize(instance.num_plans());
  mapping.var_of_plan.resize(instance.num_plans());
  for (PlanIndex p = 0; p < instance.num_plans(); ++p) {
    mapping.plan_of_var[p] = p;
    mapping.var_of_plan[p] = static_cast<VarId>(p);
  }

  Qubo qubo(instance.num_plans());
  for (PlanIndex p = 0; p < instance.num_plans(); ++p)
    qubo.add_linear(mapping.var_of_plan[p],
                    instance.plans()[p].cost - mapping.weight_at_least_one);
  for (const auto& query : instance.queries())
    for (std::size_t i = 0; i < query.plans.size(); ++i)
      for (std::size_t j = i + 1; j < query.plans.size(); ++j)
        qubo.add_quadratic(mapping.var_of_plan[query.plans[i]],
                           mapping.var_of_plan[query.plans[j]], mapping.weight_at_most_one);
  for (const auto& s : instance.savings())
    qubo.add_quadratic(mapping.var_of_plan[s.a], mapping.var_of_plan[s.b], -s.value);
  return LogicalQubo{std::move(qubo), std::move(mapping)};
}

/// Plans whose variable is set. Validity is left to the caller.
inline PlanSelection decode_logical(const LogicalMapping& mapping, std::span<const std::uint8_t> a) {
  if (a.size() != mapping.plan_of_var.size())
    throw std::invalid_argument("assignment length does not match the mapping");
  std::vector<PlanIndex> plans;
  for (std::size_t v = 0; v < a.size(); ++v)
    if (a[v]) plans.push_back(mapping.plan_of_var[v]);
  return PlanSelection(std::move(plans));
}

inline Assignment encode_logical(const LogicalMapping& mapping, const PlanSelection& selection) {
  Assignment a(mapping.plan_of_var.size(), 0);
  for (auto p : selection.plans) a.at(mapping.var_of_plan.at(p)) = 1;
  return a;
}

/// Turns any selection into a valid one. Queries with one selected plan keep
/// it. Then, in query order, a query without a plan gets its cheapest plan and
/// a query with several keeps the one minimizing cost minus savings towards
/// plans already kept. Valid input comes back unchanged.
inline PlanSelection repair_selection(const MqoInstance& instance, const PlanSelection& selection) {
  const auto report = validate_solution(instance, selection);
  if (report.valid) return selection;

  std::vector<std::uint8_t> kept(instance.num_plans(), 0);
  std::vector<std::vector<PlanIndex>> chosen(instance.num_queries());
  for (auto p : selection.plans) chosen[instance.plans()[p].query].push_back(p);
  for (QueryIndex q = 0; q < instance.num_queries(); ++q)
    if (chosen[q].size() == 1) kept[chosen[q][0]] = 1;

  for (QueryIndex q = 0; q < instance.num_queries(); ++q) {
    if (chosen[q].size() == 1) continue;
    const auto& query = instance.queries()[q];
    PlanIndex pick = 0;
    double pick_score = std::numeric_limits<double>::infinity();
    if (chosen[q].empty()) {
      for (auto p : query.plans) {
        if (instance.plans()[p].cost < pick_score) {
          pick_score = instance.plans()[p].cost;
          pick = p;
        }
      }
    } else {
      for (auto p : chosen[q]) {
        double score = instance.plans()[p].cost;
        for (const auto& [other, value] : instance.savings_of(p))
          if (kept[other]) score -= value;
        if (score < pick_score) {
          pick_score = score;
          pick = p;
        }
      }
    }
    kept[pick] = 1;
  }
  std::vector<PlanIndex> plans;
  for (PlanIndex p = 0; p < instance.num_plans(); ++p)
    if (kept[p]) plans.push_back(p);
  return PlanSelection(std::move(plans));
}

}  // namespace mqo
