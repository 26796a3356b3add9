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

// JSON file formats. Every writer emits a canonical form: object keys sorted,
// lists sorted by id or index, so equal values serialize to equal bytes.

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mqo/chimera.hpp"
#include "mqo/error.hpp"
#include "mqo/instance.hpp"
#include "mqo/logical.hpp"
#include "mqo/physical.hpp"

namespace mqo::io {

using json = nlohmann::json;

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

namespace detail {

template <class T>
T get(const json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key))
    throw FormatError(std::string(what) + " is missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + " has a malformed '" + key + "': " + e.what());
  }
}

}  // namespace detail

// -- instance ----------------------------------------------------------------

inline json to_json(const MqoInstance& instance) {
  json queries = json::array();
  json clusters = json::object();
  for (const auto& q : instance.queries()) {
    json plans = json::array();
    for (auto p : q.plans)
      plans.push_back({{"id", instance.plans()[p].id}, {"cost", instance.plans()[p].cost}});
    queries.push_back({{"id", q.id}, {"plans", std::move(plans)}});
    clusters[q.id] = instance.cluster_name(q.cluster);
  }
  std::vector<std::tuple<std::string, std::string, double>> rows;
  for (const auto& s : instance.savings()) {
    auto ids = std::minmax(instance.plans()[s.a].id, instance.plans()[s.b].id);
    rows.emplace_back(ids.first, ids.second, s.value);
  }
  std::sort(rows.begin(), rows.end());
  json savings = json::array();
  for (const auto& [a, b, v] : rows) savings.push_back({{"a", a}, {"b", b}, {"value", v}});
  return {{"queries", std::move(queries)}, {"savings", std::move(savings)}, {"clusters", std::move(clusters)}};
}

inline MqoInstance instance_from_json(const json& j) {
  std::vector<QuerySpec> queries;
  const auto clusters = j.contains("clusters") ? j.at("clusters") : json::object();
  for (const auto& q : detail::get<json>(j, "queries", "instance")) {
    QuerySpec spec;
    spec.id = detail::get<std::string>(q, "id", "query");
    for (const auto& p : detail::get<json>(q, "plans", "query"))
      spec.plans.push_back({detail::get<std::string>(p, "id", "plan"), detail::get<double>(p, "cost", "plan")});
    if (clusters.contains(spec.id)) spec.cluster = clusters.at(spec.id).get<std::string>();
    queries.push_back(std::move(spec));
  }
  std::vector<SavingSpec> savings;
  if (j.contains("savings"))
    for (const auto& s : j.at("savings"))
      savings.push_back({detail::get<std::string>(s, "a", "savings entry"),
                         detail::get<std::string>(s, "b", "savings entry"),
                         detail::get<double>(s, "value", "savings entry")});
  try {
    return MqoInstance(std::move(queries), std::move(savings));
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid instance: ") + e.what());
  }
}

// -- logical QUBO ------------------------------------------------------------

inline json to_json(const Qubo& qubo) {
  json linear = json::array();
  for (VarId v = 0; v < qubo.num_vars(); ++v) linear.push_back(json::array({v, qubo.linear(v)}));
  json quadratic = json::array();
  for (const auto& [key, w] : qubo.quadratic()) quadratic.push_back(json::array({key.first, key.second, w}));
  return {{"num_vars", qubo.num_vars()}, {"linear", std::move(linear)}, {"quadratic", std::move(quadratic)}};
}

inline Qubo qubo_from_json(const json& j) {
  const auto n = detail::get<std::size_t>(j, "num_vars", "QUBO");
  Qubo qubo(n);
  try {
    for (const auto& e : detail::get<json>(j, "linear", "QUBO")) qubo.add_linear(e.at(0).get<VarId>(), e.at(1).get<double>());
    for (const auto& e : detail::get<json>(j, "quadratic", "QUBO")) {
      const auto u = e.at(0).get<VarId>();
      const auto v = e.at(1).get<VarId>();
      if (u >= v) throw FormatError("quadratic entry must satisfy u < v");
      qubo.add_quadratic(u, v, e.at(2).get<double>());
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed QUBO term: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw FormatError(std::string("QUBO term out of range: ") + e.what());
  }
  return qubo;
}

/// QUBO with its mapping section and the source instance, so the file alone
/// is enough to decode solutions.
inline json to_json(const LogicalQubo& lq, const MqoInstance& instance) {
  json j = to_json(lq.qubo);
  json plans = json::array();
  for (VarId v = 0; v < lq.mapping.plan_of_var.size(); ++v) {
    const auto& plan = instance.plans()[lq.mapping.plan_of_var[v]];
    const auto& query = instance.queries()[plan.query];
    plans.push_back({{"var", v}, {"plan", plan.id}, {"query", query.id},
                     {"cluster", instance.cluster_name(query.cluster)}});
  }
  j["mapping"] = {{"plans", std::move(plans)},
                  {"w_L", lq.mapping.weight_at_least_one},
                  {"w_M", lq.mapping.weight_at_most_one},
                  {"epsilon", lq.mapping.epsilon}};
  j["instance"] = to_json(instance);
  return j;
}

struct LogicalFile {
  MqoInstance instance;
  LogicalQubo logical;
};

inline LogicalFile logical_from_json(const json& j) {
  auto instance = instance_from_json(detail::get<json>(j, "instance", "QUBO file"));
  const auto mapping_json = detail::get<json>(j, "mapping", "QUBO file");
  LogicalMapping mapping;
  mapping.weight_at_least_one = detail::get<double>(mapping_json, "w_L", "mapping");
  mapping.weight_at_most_one = detail::get<double>(mapping_json, "w_M", "mapping");
  mapping.epsilon = detail::get<double>(mapping_json, "epsilon", "mapping");
  Qubo qubo = qubo_from_json(j);
  mapping.plan_of_var.assign(qubo.num_vars(), 0);
  mapping.var_of_plan.assign(instance.num_plans(), 0);
  std::vector<std::uint8_t> seen(qubo.num_vars(), 0);
  for (const auto& e : detail::get<json>(mapping_json, "plans", "mapping")) {
    const auto v = detail::get<VarId>(e, "var", "mapping entry");
    if (v >= qubo.num_vars() || seen[v]) throw FormatError("mapping has a bad or repeated variable");
    PlanIndex p = 0;
    try {
      p = instance.plan_index(detail::get<std::string>(e, "plan", "mapping entry"));
    } catch (const std::invalid_argument& err) {
      throw FormatError(err.what());
    }
    seen[v] = 1;
    mapping.plan_of_var[v] = p;
    mapping.var_of_plan[p] = v;
  }
  if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(instance.num_plans()) ||
      qubo.num_vars() != instance.num_plans())
    throw FormatError("mapping must list every plan exactly once");
  return LogicalFile{std::move(instance), LogicalQubo{std::move(qubo), std::move(mapping)}};
}

// -- chimera -----------------------------------------------------------------

inline json broken_to_json(const ChimeraGraph& graph) { return graph.broken(); }

inline std::vector<QubitId> broken_from_json(const json& j) {
  if (!j.is_array()) throw FormatError("broken-qubit mask must be a list of qubit ids");
  try {
    return j.get<std::vector<QubitId>>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed broken-qubit mask: ") + e.what());
  }
}

inline json chains_to_json(const Embedding& embedding) {
  json chains = json::array();
  for (const auto& [var, chain] : embedding.chains) chains.push_back(json::array({var, chain}));
  return chains;
}

inline json to_json(const Embedding& embedding, const ChimeraGraph& graph) {
  return {{"grid", json::array({graph.rows(), graph.cols()})}, {"chains", chains_to_json(embedding)}};
}

inline Embedding embedding_from_json(const json& j) {
  Embedding e;
  try {
    for (const auto& entry : detail::get<json>(j, "chains", "embedding"))
      if (!e.chains.emplace(entry.at(0).get<VarId>(), entry.at(1).get<Chain>()).second)
        throw FormatError("embedding lists a variable twice");
  } catch (const json::exception& err) {
    throw FormatError(std::string("malformed embedding: ") + err.what());
  }
  return e;
}

inline std::pair<std::size_t, std::size_t> grid_from_json(const json& j) {
  const auto grid = detail::get<std::vector<std::size_t>>(j, "grid", "file");
  if (grid.size() != 2) throw FormatError("grid must be [rows, cols]");
  return {grid[0], grid[1]};
}

// -- physical QUBO -----------------------------------------------------------

inline json to_json(const PhysicalQubo& pq) {
  json qubits = json::array();
  for (const auto& [q, w] : pq.qubit_weight) qubits.push_back(json::array({q, w}));
  json couplers = json::array();
  for (const auto& [key, w] : pq.coupler_weight) couplers.push_back(json::array({key.first, key.second, w}));
  json penalties = json::array();
  for (const auto& [var, w] : pq.chain_penalty) penalties.push_back(json::array({var, w}));
  return {{"grid", json::array({pq.graph.rows(), pq.graph.cols()})},
          {"broken", pq.graph.broken()},
          {"qubit_weights", std::move(qubits)},
          {"coupler_weights", std::move(couplers)},
          {"chain_penalties", std::move(penalties)},
          {"chains", chains_to_json(pq.embedding)}};
}

inline PhysicalQubo physical_from_json(const json& j) {
  const auto [rows, cols] = grid_from_json(j);
  std::vector<QubitId> broken;
  if (j.contains("broken")) broken = broken_from_json(j.at("broken"));
  PhysicalQubo pq{ChimeraGraph(rows, cols, broken), embedding_from_json(j), {}, {}, {}};
  try {
    for (const auto& e : detail::get<json>(j, "qubit_weights", "physical QUBO")) {
      const auto q = e.at(0).get<QubitId>();
      if (!pq.graph.contains(q)) throw FormatError("qubit " + std::to_string(q) + " outside the grid");
      pq.qubit_weight[q] = e.at(1).get<double>();
    }
    for (const auto& e : detail::get<json>(j, "coupler_weights", "physical QUBO")) {
      const auto a = e.at(0).get<QubitId>();
      const auto b = e.at(1).get<QubitId>();
      if (a >= b || !pq.graph.contains(b) || !pq.graph.usable(a, b))
        throw FormatError("coupler " + std::to_string(a) + "-" + std::to_string(b) + " is not a working edge");
      pq.coupler_weight[{a, b}] = e.at(2).get<double>();
    }
    for (const auto& e : detail::get<json>(j, "chain_penalties", "physical QUBO"))
      pq.chain_penalty[e.at(0).get<VarId>()] = e.at(1).get<double>();
  } catch (const json::exception& err) {
    throw FormatError(std::string("malformed physical QUBO: ") + err.what());
  }
  return pq;
}

}  // namespace mqo::io
