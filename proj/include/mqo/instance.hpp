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
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mqo/error.hpp"
#include "mqo/rng.hpp"

namespace mqo {

using PlanIndex = std::size_t;
using QueryIndex = std::size_t;

/// Absolute tolerance used for cost and energy comparisons.
inline constexpr double kTolerance = 1e-9;

struct PlanSpec {
  std::string id;
  double cost = 0.0;
};

struct QuerySpec {
  std::string id;
  std::vector<PlanSpec> plans;
  /// Empty means "own cluster" (the cluster id becomes the query id).
  std::string cluster;
};

struct SavingSpec {
  std::string a;
  std::string b;
  double value = 0.0;
};

struct Plan {
  std::string id;
  QueryIndex query = 0;
  double cost = 0.0;
};

struct Query {
  std::string id;
  std::size_t cluster = 0;
  std::vector<PlanIndex> plans;
};

/// Savings between two plans of different queries. `a < b` always.
struct Saving {
  PlanIndex a = 0;
  PlanIndex b = 0;
  double value = 0.0;
};

/// A batch of queries, their alternative plans and the pairwise savings that
/// sharing intermediate results between plans would yield.
///
/// Queries are stored sorted by id and each query's plans sorted by id, so
/// plan indices enumerate plans by (query, plan). Immutable after construction.
class MqoInstance {
 public:
  MqoInstance(std::vector<QuerySpec> queries, std::vector<SavingSpec> savings) {
    if (queries.empty()) throw std::invalid_argument("instance has no queries");
    std::sort(queries.begin(), queries.end(),
              [](const QuerySpec& l, const QuerySpec& r) { return l.id < r.id; });

    std::map<std::string, std::size_t> cluster_ids;
    for (auto& q : queries) {
      if (q.cluster.empty()) q.cluster = q.id;
      cluster_ids.emplace(q.cluster, 0);
    }
    std::size_t next_cluster = 0;
    for (auto& [name, index] : cluster_ids) {
      index = next_cluster++;
      cluster_names_.push_back(name);
    }

    std::map<std::string, PlanIndex> plan_lookup;
    for (std::size_t qi = 0; qi < queries.size(); ++qi) {
      auto& spec = queries[qi];
      if (qi > 0 && spec.id == queries[qi - 1].id)
        throw std::invalid_argument("duplicate query id '" + spec.id + "'");
      if (spec.plans.empty())
        throw std::invalid_argument("query '" + spec.id + "' has no plans");
      std::sort(spec.plans.begin(), spec.plans.end(),
                [](const PlanSpec& l, const PlanSpec& r) { return l.id < r.id; });
      Query query{spec.id, cluster_ids.at(spec.cluster), {}};
      for (const auto& plan : spec.plans) {
        if (!(plan.cost >= 0.0) || !std::isfinite(plan.cost))
          throw std::invalid_argument("plan '" + plan.id + "' has invalid cost");
        const PlanIndex index = plans_.size();
        if (!plan_lookup.emplace(plan.id, index).second)
          throw std::invalid_argument("duplicate plan id '" + plan.id + "'");
        plans_.push_back(Plan{plan.id, qi, plan.cost});
        query.plans.push_back(index);
      }
      queries_.push_back(std::move(query));
    }

    std::map<std::pair<PlanIndex, PlanIndex>, double> pairs;
    for (const auto& s : savings) {
      const auto a = lookup(plan_lookup, s.a);
      const auto b = lookup(plan_lookup, s.b);
      if (plans_[a].query == plans_[b].query)
        throw std::invalid_argument("savings between '" + s.a + "' and '" + s.b +
                                    "' connect plans of the same query");
      if (!(s.value > 0.0) || !std::isfinite(s.value))
        throw std::invalid_argument("savings between '" + s.a + "' and '" + s.b +
                                    "' must be positive");
      if (!pairs.emplace(std::minmax(a, b), s.value).second)
        throw std::invalid_argument("duplicate savings entry for '" + s.a + "', '" +
                                    s.b + "'");
    }
    savings_of_.resize(plans_.size());
    for (const auto& [key, value] : pairs) {
      savings_.push_back(Saving{key.first, key.second, value});
      savings_of_[key.first].emplace_back(key.second, value);
      savings_of_[key.second].emplace_back(key.first, value);
    }
    plan_lookup_ = std::move(plan_lookup);
  }

  const std::vector<Query>& queries() const noexcept { return queries_; }
  const std::vector<Plan>& plans() const noexcept { return plans_; }
  const std::vector<Saving>& savings() const noexcept { return savings_; }
  std::size_t num_queries() const noexcept { return queries_.size(); }
  std::size_t num_plans() const noexcept { return plans_.size(); }
  std::size_t num_clusters() const noexcept { return cluster_names_.size(); }
  const std::string& cluster_name(std::size_t cluster) const { return cluster_names_.at(cluster); }

  /// (partner plan, savings value) for every savings entry touching `plan`.
  std::span<const std::pair<PlanIndex, double>> savings_of(PlanIndex plan) const {
    return savings_of_.at(plan);
  }

  PlanIndex plan_index(const std::string& id) const { return lookup(plan_lookup_, id); }

  double savings_between(PlanIndex a, PlanIndex b) const {
    for (const auto& [other, value] : savings_of_.at(a))
      if (other == b) return value;
    return 0.0;
  }

 private:
  static PlanIndex lookup(const std::map<std::string, PlanIndex>& table, const std::string& id) {
    const auto it = table.find(id);
    if (it == table.end()) throw std::invalid_argument("unknown plan id '" + id + "'");
    return it->second;
  }

  std::vector<Query> queries_;
  std::vector<Plan> plans_;
  std::vector<Saving> savings_;
  std::vector<std::vector<std::pair<PlanIndex, double>>> savings_of_;
  std::vector<std::string> cluster_names_;
  std::map<std::string, PlanIndex> plan_lookup_;
};

/// Set of plans chosen for execution. Kept sorted and free of duplicates.
struct PlanSelection {
  std::vector<PlanIndex> plans;

  PlanSelection() = default;
  explicit PlanSelection(std::vector<PlanIndex> p) : plans(std::move(p)) {
    std::sort(plans.begin(), plans.end());
    plans.erase(std::unique(plans.begin(), plans.end()), plans.end());
  }

  bool contains(PlanIndex p) const { return std::binary_search(plans.begin(), plans.end(), p); }
  std::size_t size() const noexcept { return plans.size(); }
  bool empty() const noexcept { return plans.empty(); }

  friend bool operator==(const PlanSelection&, const PlanSelection&) = default;
};

inline PlanSelection selection_from_ids(const MqoInstance& instance,
                                        const std::vector<std::string>& ids) {
  std::vector<PlanIndex> plans;
  plans.reserve(ids.size());
  for (const auto& id : ids) plans.push_back(instance.plan_index(id));
  return PlanSelection(std::move(plans));
}

inline std::vector<std::string> selection_ids(const MqoInstance& instance,
                                              const PlanSelection& selection) {
  std::vector<std::string> ids;
  for (auto p : selection.plans) ids.push_back(instance.plans().at(p).id);
  return ids;
}

namespace detail {

inline void check_known(const MqoInstance& instance, const PlanSelection& selection) {
  for (auto p : selection.plans)
    if (p >= instance.num_plans())
      throw std::invalid_argument("unknown plan index " + std::to_string(p));
}

}  // namespace detail

/// Accumulated execution cost: plan costs minus savings of every selected pair.
/// Validity of the selection is not required.
inline double cost(const MqoInstance& instance, const PlanSelection& selection) {
  detail::check_known(instance, selection);
  double total = 0.0;
  for (auto p : selection.plans) {
    total += instance.plans()[p].cost;
    for (const auto& [other, value] : instance.savings_of(p))
      if (other > p && selection.contains(other)) total -= value;
  }
  return total;
}

struct ValidityReport {
  bool valid = false;
  std::vector<std::size_t> selected_per_query;
  std::vector<QueryIndex> violations;
};

inline ValidityReport validate_solution(const MqoInstance& instance,
                                        const PlanSelection& selection) {
  detail::check_known(instance, selection);
  ValidityReport report;
  report.selected_per_query.assign(instance.num_queries(), 0);
  for (auto p : selection.plans) ++report.selected_per_query[instance.plans()[p].query];
  for (QueryIndex q = 0; q < instance.num_queries(); ++q)
    if (report.selected_per_query[q] != 1) report.violations.push_back(q);
  report.valid = report.violations.empty();
  return report;
}

/// One plan position per query, each entry indexing into that query's plan list.
using Choice = std::vector<std::uint32_t>;

inline PlanSelection selection_from_choice(const MqoInstance& instance, const Choice& choice) {
  std::vector<PlanIndex> plans;
  plans.reserve(choice.size());
  for (std::size_t q = 0; q < choice.size(); ++q)
    plans.push_back(instance.queries()[q].plans.at(choice[q]));
  return PlanSelection(std::move(plans));
}

/// Cost of a valid selection given as a choice vector.
inline double choice_cost(const MqoInstance& instance, const Choice& choice) {
  return cost(instance, selection_from_choice(instance, choice));
}

struct MqoOptimum {
  PlanSelection selection;
  double cost = 0.0;
};

inline constexpr double kDefaultEnumerationBudget = 1e7;

/// Number of valid selections, saturating at +inf for huge instances.
inline double combination_count(const MqoInstance& instance) {
  double count = 1.0;
  for (const auto& q : instance.queries()) count *= static_cast<double>(q.plans.size());
  return count;
}

/// Exhaustive search over all valid selections. Ties go to the selection whose
/// per-query choice vector is lexicographically smallest (plan ids order the
/// same way because plans are stored sorted by id within each query).
inline MqoOptimum brute_force_mqo(const MqoInstance& instance,
                                  double budget = kDefaultEnumerationBudget) {
  const double combinations = combination_count(instance);
  if (combinations > budget)
    throw BudgetExceeded("exhaustive MQO search needs " + std::to_string(combinations) +
                         " combinations, budget is " + std::to_string(budget));

  const auto& queries = instance.queries();
  const std::size_t n = queries.size();
  Choice choice(n, 0);
  std::vector<std::uint8_t> selected(instance.num_plans(), 0);
  for (const auto& q : queries) selected[q.plans[0]] = 1;

  double current = choice_cost(instance, choice);
  Choice best_choice = choice;
  double best = current;

  // Replaces the plan of query q and returns the change in cost.
  auto switch_plan = [&](std::size_t q, std::uint32_t to) {
    const PlanIndex from_plan = queries[q].plans[choice[q]];
    const PlanIndex to_plan = queries[q].plans[to];
    double delta = instance.plans()[to_plan].cost - instance.plans()[from_plan].cost;
    selected[from_plan] = 0;
    for (const auto& [other, value] : instance.savings_of(from_plan))
      if (selected[other]) delta += value;
    for (const auto& [other, value] : instance.savings_of(to_plan))
      if (selected[other]) delta -= value;
    selected[to_plan] = 1;
    choice[q] = to;
    return delta;
  };

  // Odometer with the last query as the fastest digit: lexicographic order.
  while (true) {
    std::size_t q = n;
    while (q > 0) {
      --q;
      if (choice[q] + 1 < queries[q].plans.size()) break;
      current += switch_plan(q, 0);
      if (q == 0) {
        q = n;
        break;
      }
    }
    if (q == n) break;
    current += switch_plan(q, choice[q] + 1);
    if (current < best - kTolerance) {
      current = choice_cost(instance, choice);  // drop accumulated rounding
      best = current;
      best_choice = choice;
    }
  }
  MqoOptimum optimum{selection_from_choice(instance, best_choice), 0.0};
  optimum.cost = cost(instance, optimum.selection);
  return optimum;
}

struct GeneratorParams {
  std::size_t queries = 20;
  std::size_t plans_per_query = 2;
  double savings_density = 0.3;
  double cost_min = 1.0;
  double cost_max = 10.0;
  double savings_min = 0.1;
  double savings_max = 1.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline std::string padded(std::size_t value, std::size_t width) {
  std::string digits = std::to_string(value);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return digits;
}

inline std::size_t digit_count(std::size_t n) {
  std::size_t digits = 1;
  while (n >= 10) {
    n /= 10;
    ++digits;
  }
  return digits;
}

}  // namespace detail

/// Random instance: every query is its own cluster, costs uniform in
/// [cost_min, cost_max], and each pair of plans from different queries gets a
/// savings value uniform in [savings_min, savings_max] with probability
/// `savings_density`. Ids are zero padded so that id order equals index order.
inline MqoInstance generate_instance(const GeneratorParams& params) {
  if (params.queries == 0 || params.plans_per_query == 0)
    throw std::invalid_argument("queries and plans per query must be positive");
  if (!(params.savings_density >= 0.0 && params.savings_density <= 1.0))
    throw std::invalid_argument("savings density must lie in [0, 1]");
  if (!(params.cost_min >= 0.0 && params.cost_min <= params.cost_max))
    throw std::invalid_argument("cost range must be nonempty and nonnegative");
  if (!(params.savings_min > 0.0 && params.savings_min <= params.savings_max))
    throw std::invalid_argument("savings range must be nonempty and positive");

  Rng rng(params.seed);
  const auto qwidth = detail::digit_count(params.queries - 1);
  const auto pwidth = detail::digit_count(params.plans_per_query - 1);
  std::vector<QuerySpec> queries;
  std::vector<std::string> plan_ids;
  std::vector<std::size_t> plan_query;
  for (std::size_t q = 0; q < params.queries; ++q) {
    QuerySpec spec{"q" + detail::padded(q, qwidth), {}, {}};
    for (std::size_t p = 0; p < params.plans_per_query; ++p) {
      std::string id = spec.id + "p" + detail::padded(p, pwidth);
      spec.plans.push_back(PlanSpec{id, rng.uniform(params.cost_min, params.cost_max)});
      plan_ids.push_back(std::move(id));
      plan_query.push_back(q);
    }
    queries.push_back(std::move(spec));
  }
  std::vector<SavingSpec> savings;
  if (params.savings_density > 0.0) {
    for (std::size_t a = 0; a < plan_ids.size(); ++a) {
      for (std::size_t b = a + 1; b < plan_ids.size(); ++b) {
        if (plan_query[a] == plan_query[b]) continue;
        if (!rng.bernoulli(params.savings_density)) continue;
        savings.push_back(
            SavingSpec{plan_ids[a], plan_ids[b], rng.uniform(params.savings_min, params.savings_max)});
      }
    }
  }
  return MqoInstance(std::move(queries), std::move(savings));
}

}  // namespace mqo
