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
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mqo/anneal.hpp"
#include "mqo/chimera.hpp"
#include "mqo/classical.hpp"
#include "mqo/instance.hpp"
#include "mqo/io.hpp"
#include "mqo/logical.hpp"
#include "mqo/physical.hpp"

namespace mqo {

struct FamilySpec {
  std::string name;
  GeneratorParams params;  // params.seed is the family seed
  std::size_t count = 1;
};

enum class SolverKind { sa_physical, sa_logical, climb, ga, exact };

struct SolverSpec {
  std::string name;
  SolverKind kind = SolverKind::sa_physical;
  AnnealParams anneal;
  GaOptions ga;
  ClimbStrategy climb = ClimbStrategy::steepest;
};

inline std::string default_solver_name(const SolverSpec& s) {
  switch (s.kind) {
    case SolverKind::sa_physical: return "SA";
    case SolverKind::sa_logical: return "SA-LOGICAL";
    case SolverKind::climb: return "CLIMB";
    case SolverKind::ga: return "GA(" + std::to_string(s.ga.population) + ")";
    case SolverKind::exact: return "EXACT";
  }
  return "?";
}

struct BenchSuite {
  std::vector<FamilySpec> families;
  std::vector<SolverSpec> solvers;
  std::vector<double> checkpoints_ms{1, 10, 100, 1000};
  std::uint64_t master_seed = 0;
  ClockMode clock = ClockMode::work;
  double ops_per_ms = 2e5;
  std::size_t grid_rows = 12;
  std::size_t grid_cols = 12;
  std::vector<QubitId> broken;
  double epsilon = 0.25;
  double oracle_budget = kDefaultEnumerationBudget;
  std::size_t workers = 1;
  std::string output_dir;

  void validate() const {
    if (families.empty()) throw std::invalid_argument("suite needs at least one instance family");
    if (solvers.empty()) throw std::invalid_argument("suite needs at least one solver");
    std::size_t instances = 0;
    for (const auto& f : families) instances += f.count;
    if (instances == 0) throw std::invalid_argument("suite needs at least one instance");
    ClassicalRunConfig{checkpoints_ms, clock, ops_per_ms}.validate();
    for (const auto& s : solvers)
      if (s.kind == SolverKind::sa_physical || s.kind == SolverKind::sa_logical) s.anneal.validate();
  }
};

struct CurvePoint {
  double time_ms = 0.0;
  std::uint64_t runs = 0;
  double best_cost = 0.0;
  double scaled_cost = 0.0;
  bool valid = true;
};

/// Best cost over time of one solver on one instance. For annealing solvers
/// there is one point per batch; `valid` tells whether the best raw sample was
/// a valid selection before repair.
struct TimeCostCurve {
  std::string instance_id;
  std::string family;
  std::string solver;
  std::uint64_t seed = 0;
  std::vector<CurvePoint> points;
};

struct InstanceOutcome {
  std::string id;
  std::string family;
  double reference_cost = 0.0;
  std::string reference_policy;  // "oracle" or "best-found"
  bool skipped = false;
  std::string reason;
  std::string embedding;  // pattern used for the physical solver, if any
  std::size_t physical_qubits = 0;
};

struct BenchResult {
  std::vector<TimeCostCurve> curves;
  std::vector<InstanceOutcome> instances;
  std::vector<std::string> warnings;
};

/// Embedding for an instance's logical QUBO: one TRIAD per query cluster, or a
/// single TRIAD over all plans when the clusters leave a savings term without
/// a coupler. Returns nullopt with a reason when neither fits.
struct InstanceEmbedding {
  Embedding embedding;
  std::string pattern;
  std::size_t dropped_chains = 0;
};

inline std::optional<InstanceEmbedding> embed_instance(const MqoInstance& instance, const Qubo& qubo,
                                                       const ChimeraGraph& graph, std::string* reason) {
  std::vector<std::size_t> cluster_of_var(qubo.num_vars(), 0);
  for (const auto& q : instance.queries())
    for (auto p : q.plans) cluster_of_var.at(p) = q.cluster;

  std::string last_error;
  auto attempt = [&](std::span<const std::size_t> labels, const char* pattern,
                     const char* failure) -> std::optional<InstanceEmbedding> {
    try {
      auto fit = fit_variables(labels, graph);
      if (verify_embedding(fit.embedding, qubo, graph).ok())
        return InstanceEmbedding{std::move(fit.embedding), pattern, fit.dropped_chains};
      last_error = failure;
    } catch (const EmbeddingInfeasible& err) {
      last_error = err.what();
    }
    return std::nullopt;
  };
  if (instance.num_clusters() > 1)
    if (auto e = attempt(cluster_of_var, "clustered", "clustered pattern leaves savings terms without couplers"))
      return e;
  const std::vector<std::size_t> single(qubo.num_vars(), 0);
  if (auto e = attempt(single, "triad", "TRIAD does not realize every QUBO term")) return e;
  if (reason) *reason = last_error;
  return std::nullopt;
}

namespace detail {

struct PreparedInstance {
  std::string id;
  std::string family;
  std::uint64_t seed = 0;
  MqoInstance instance;
  LogicalQubo logical;
  std::optional<PhysicalQubo> physical;
  std::optional<CompactPhysical> compact;
  std::optional<MqoOptimum> oracle;
  bool skipped = false;
  std::string reason;
  std::string pattern;
};

struct RawCurve {
  std::vector<CurvePoint> points;
};

/// Best repaired cost across annealing samples, one point per batch.
inline RawCurve anneal_curve(const PreparedInstance& prep, const SolverSpec& solver,
                             const BenchSuite& suite, std::uint64_t seed) {
  const bool physical = solver.kind == SolverKind::sa_physical;
  const Qubo& qubo = physical ? prep.compact->qubo : prep.logical.qubo;
  Annealer annealer(qubo, solver.anneal);
  SolverClock clock(suite.clock, suite.ops_per_ms);
  RawCurve curve;
  double best = std::numeric_limits<double>::infinity();
  bool best_valid = false;
  std::uint64_t runs = 0;
  std::uint64_t flips_seen = 0;
  for (std::size_t b = 0; b < solver.anneal.batches; ++b) {
    const auto samples = annealer.run_batch(batch_seed(seed, b));
    for (const auto& s : samples) {
      Assignment logical_bits;
      if (physical) {
        const auto full = prep.compact->expand(s.bits, prep.physical->graph.num_qubits());
        logical_bits = decode_physical(prep.physical->embedding, full).assignment;
        logical_bits.resize(prep.logical.qubo.num_vars(), 0);
      } else {
        logical_bits = s.bits;
      }
      const auto selection = decode_logical(prep.logical.mapping, logical_bits);
      const bool valid = validate_solution(prep.instance, selection).valid;
      const double c = cost(prep.instance, valid ? selection : repair_selection(prep.instance, selection));
      if (c < best - kTolerance || (std::abs(c - best) <= kTolerance && valid && !best_valid)) {
        best = std::min(best, c);
        best_valid = valid;
      }
    }
    runs += samples.size();
    clock.tick(annealer.flip_attempts() - flips_seen);
    flips_seen = annealer.flip_attempts();
    curve.points.push_back({clock.elapsed_ms(), runs, best, 0.0, best_valid});
  }
  return curve;
}

inline RawCurve record_curve(const SolverRunRecord& record) {
  RawCurve curve;
  for (const auto& cp : record.checkpoints) curve.points.push_back({cp.time_ms, cp.iterations, cp.best, 0.0, true});
  return curve;
}

inline RawCurve exact_curve(const PreparedInstance& prep, const BenchSuite& suite) {
  SolverClock clock(suite.clock, suite.ops_per_ms);
  const auto optimum = prep.oracle ? *prep.oracle : brute_force_mqo(prep.instance, suite.oracle_budget);
  clock.tick(static_cast<std::uint64_t>(combination_count(prep.instance)) * prep.instance.num_queries());
  const double done = clock.elapsed_ms();
  RawCurve curve;
  for (double t : suite.checkpoints_ms)
    if (t >= done) curve.points.push_back({t, 1, optimum.cost, 0.0, true});
  if (curve.points.empty()) curve.points.push_back({done, 1, optimum.cost, 0.0, true});
  return curve;
}

inline RawCurve run_cell(const PreparedInstance& prep, const SolverSpec& solver, const BenchSuite& suite,
                         std::uint64_t seed) {
  const ClassicalRunConfig config{suite.checkpoints_ms, suite.clock, suite.ops_per_ms};
  switch (solver.kind) {
    case SolverKind::sa_physical:
    case SolverKind::sa_logical: return anneal_curve(prep, solver, suite, seed);
    case SolverKind::climb: return record_curve(hill_climbing(prep.instance, config, seed, solver.climb));
    case SolverKind::ga: return record_curve(genetic_algorithm(prep.instance, solver.ga, config, seed));
    case SolverKind::exact: return exact_curve(prep, suite);
  }
  return {};
}

template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace detail

/// Runs every solver on every generated instance. Seeds are derived from the
/// master seed per (instance, solver), so with the work clock the result does
/// not depend on the number of workers.
inline BenchResult run_suite(const BenchSuite& suite) {
  suite.validate();
  const ChimeraGraph graph(suite.grid_rows, suite.grid_cols, suite.broken);
  const bool needs_physical = std::any_of(suite.solvers.begin(), suite.solvers.end(),
                                          [](const auto& s) { return s.kind == SolverKind::sa_physical; });

  std::vector<detail::PreparedInstance> prepared;
  for (const auto& family : suite.families) {
    for (std::size_t i = 0; i < family.count; ++i) {
      auto params = family.params;
      params.seed = derive_seed(family.params.seed, i);
      auto instance = generate_instance(params);
      auto logical = logical_map(instance, LogicalOptions{suite.epsilon, {}});
      detail::PreparedInstance prep{family.name + "-" + std::to_string(i), family.name, params.seed,
                                    std::move(instance), std::move(logical), {}, {}, {}, false, {}, {}};
      prepared.push_back(std::move(prep));
    }
  }

  detail::parallel_for(prepared.size(), suite.workers, [&](std::size_t i) {
    auto& prep = prepared[i];
    if (combination_count(prep.instance) <= suite.oracle_budget)
      prep.oracle = brute_force_mqo(prep.instance, suite.oracle_budget);
    if (!needs_physical) return;
    std::string reason;
    auto fitted = embed_instance(prep.instance, prep.logical.qubo, graph, &reason);
    if (!fitted) {
      prep.skipped = true;
      prep.reason = "embedding infeasible: " + reason;
      return;
    }
    prep.pattern = fitted->pattern;
    prep.physical = embed_qubo(prep.logical.qubo, fitted->embedding, graph, PhysicalOptions{suite.epsilon, {}});
    prep.compact = compact_physical(*prep.physical);
  });

  const std::size_t cells = prepared.size() * suite.solvers.size();
  std::vector<std::optional<detail::RawCurve>> raw(cells);
  detail::parallel_for(cells, suite.workers, [&](std::size_t cell) {
    const std::size_t i = cell / suite.solvers.size();
    const std::size_t s = cell % suite.solvers.size();
    const auto& prep = prepared[i];
    if (prep.skipped) return;
    if (suite.solvers[s].kind == SolverKind::exact && !prep.oracle) return;
    raw[cell] = detail::run_cell(prep, suite.solvers[s], suite, derive_seed(derive_seed(suite.master_seed, i), s));
  });

  BenchResult result;
  for (std::size_t i = 0; i < prepared.size(); ++i) {
    const auto& prep = prepared[i];
    InstanceOutcome outcome{prep.id, prep.family, 0.0, "", prep.skipped, prep.reason, prep.pattern,
                            prep.compact ? prep.compact->qubit_of_var.size() : 0};
    if (prep.skipped) {
      result.warnings.push_back("instance " + prep.id + " skipped: " + prep.reason);
      result.instances.push_back(std::move(outcome));
      continue;
    }
    if (prep.oracle) {
      outcome.reference_cost = prep.oracle->cost;
      outcome.reference_policy = "oracle";
    } else {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t s = 0; s < suite.solvers.size(); ++s)
        if (const auto& c = raw[i * suite.solvers.size() + s]; c && !c->points.empty())
          best = std::min(best, c->points.back().best_cost);
      outcome.reference_cost = best;
      outcome.reference_policy = "best-found";
    }
    for (std::size_t s = 0; s < suite.solvers.size(); ++s) {
      auto& c = raw[i * suite.solvers.size() + s];
      const auto& spec = suite.solvers[s];
      const std::string name = spec.name.empty() ? default_solver_name(spec) : spec.name;
      if (!c) {
        result.warnings.push_back("instance " + prep.id + ": solver " + name + " not run (no oracle within budget)");
        continue;
      }
      TimeCostCurve curve{prep.id, prep.family, name, derive_seed(derive_seed(suite.master_seed, i), s), c->points};
      for (auto& p : curve.points)
        p.scaled_cost = outcome.reference_cost > 0.0 ? p.best_cost / outcome.reference_cost
                                                     : std::numeric_limits<double>::quiet_NaN();
      result.curves.push_back(std::move(curve));
    }
    result.instances.push_back(std::move(outcome));
  }
  return result;
}

// -- summary -----------------------------------------------------------------

struct SummaryRow {
  std::string family;
  std::string solver;
  std::size_t curves = 0;
  double time_to_best_min = 0.0;
  double time_to_best_median = 0.0;
  double time_to_best_max = 0.0;
  double mean_final_scaled = 0.0;
  double mean_improvement = 0.0;  // relative drop from first to last point
  std::size_t reached_reference = 0;
};

/// Time of the first point whose cost is within tolerance of the curve's final cost.
inline double time_to_best(const TimeCostCurve& curve) {
  const double final_cost = curve.points.back().best_cost;
  for (const auto& p : curve.points)
    if (p.best_cost <= final_cost + kTolerance) return p.time_ms;
  return curve.points.back().time_ms;
}

inline double lower_median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[(v.size() - 1) / 2];
}

/// Aggregates per (family, solver). Families without any curve are omitted
/// and reported in `warnings`.
inline std::vector<SummaryRow> summarize(const BenchResult& result, std::vector<std::string>* warnings = nullptr) {
  if (result.curves.empty() && result.instances.empty()) throw std::invalid_argument("no results to summarize");
  std::map<std::string, double> reference;
  std::vector<std::string> families;
  for (const auto& inst : result.instances) {
    reference[inst.id] = inst.reference_cost;
    if (std::find(families.begin(), families.end(), inst.family) == families.end()) families.push_back(inst.family);
  }
  for (const auto& c : result.curves)
    if (std::find(families.begin(), families.end(), c.family) == families.end()) families.push_back(c.family);

  std::vector<SummaryRow> rows;
  for (const auto& family : families) {
    std::vector<std::string> solvers;
    for (const auto& c : result.curves)
      if (c.family == family && std::find(solvers.begin(), solvers.end(), c.solver) == solvers.end())
        solvers.push_back(c.solver);
    if (solvers.empty()) {
      if (warnings) warnings->push_back("family " + family + " has no curves; omitted from summary");
      continue;
    }
    for (const auto& solver : solvers) {
      SummaryRow row{family, solver};
      std::vector<double> ttb;
      double scaled_sum = 0.0;
      double improvement_sum = 0.0;
      for (const auto& c : result.curves) {
        if (c.family != family || c.solver != solver || c.points.empty()) continue;
        ++row.curves;
        ttb.push_back(time_to_best(c));
        scaled_sum += c.points.back().scaled_cost;
        const double first = c.points.front().best_cost;
        const double last = c.points.back().best_cost;
        improvement_sum += first != 0.0 ? (first - last) / std::abs(first) : 0.0;
        const auto ref = reference.find(c.instance_id);
        if (ref != reference.end() && last <= ref->second + kTolerance) ++row.reached_reference;
      }
      row.time_to_best_min = *std::min_element(ttb.begin(), ttb.end());
      row.time_to_best_max = *std::max_element(ttb.begin(), ttb.end());
      row.time_to_best_median = lower_median(ttb);
      row.mean_final_scaled = scaled_sum / static_cast<double>(row.curves);
      row.mean_improvement = improvement_sum / static_cast<double>(row.curves);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

// -- CSV -----------------------------------------------------------------------

inline constexpr const char* kCurveCsvHeader = "instance_id,solver,seed,time_ms,runs,best_cost,scaled_cost,valid";

struct CurveRow {
  std::string instance_id;
  std::string solver;
  std::uint64_t seed = 0;
  double time_ms = 0.0;
  std::uint64_t runs = 0;
  double best_cost = 0.0;
  double scaled_cost = 0.0;
  bool valid = true;

  friend bool operator==(const CurveRow& l, const CurveRow& r) {
    auto same = [](double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; };
    return l.instance_id == r.instance_id && l.solver == r.solver && l.seed == r.seed &&
           same(l.time_ms, r.time_ms) && l.runs == r.runs && same(l.best_cost, r.best_cost) &&
           same(l.scaled_cost, r.scaled_cost) && l.valid == r.valid;
  }
};

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw FormatError("bad number '" + s + "' in CSV");
  return v;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::vector<CurveRow> curve_rows(const std::vector<TimeCostCurve>& curves) {
  std::vector<CurveRow> rows;
  for (const auto& c : curves)
    for (const auto& p : c.points)
      rows.push_back({c.instance_id, c.solver, c.seed, p.time_ms, p.runs, p.best_cost, p.scaled_cost, p.valid});
  return rows;
}

inline void write_curves_csv(std::ostream& out, const std::vector<CurveRow>& rows) {
  out << kCurveCsvHeader << '\n';
  for (const auto& r : rows)
    out << detail::csv_field(r.instance_id) << ',' << detail::csv_field(r.solver) << ',' << r.seed << ','
        << format_double(r.time_ms) << ',' << r.runs << ',' << format_double(r.best_cost) << ','
        << format_double(r.scaled_cost) << ',' << (r.valid ? 1 : 0) << '\n';
}

inline std::vector<CurveRow> read_curves_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCurveCsvHeader) throw FormatError("curve CSV header missing or wrong");
  std::vector<CurveRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 8) throw FormatError("curve CSV row has " + std::to_string(f.size()) + " fields");
    CurveRow r;
    r.instance_id = f[0];
    r.solver = f[1];
    r.seed = std::stoull(f[2]);
    r.time_ms = parse_double(f[3]);
    r.runs = std::stoull(f[4]);
    r.best_cost = parse_double(f[5]);
    r.scaled_cost = parse_double(f[6]);
    if (f[7] != "0" && f[7] != "1") throw FormatError("valid column must be 0 or 1");
    r.valid = f[7] == "1";
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "family,solver,curves,time_to_best_min_ms,time_to_best_median_ms,time_to_best_max_ms,"
         "mean_final_scaled_cost,mean_improvement,reached_reference\n";
  for (const auto& r : rows)
    out << detail::csv_field(r.family) << ',' << detail::csv_field(r.solver) << ',' << r.curves << ','
        << format_double(r.time_to_best_min) << ',' << format_double(r.time_to_best_median) << ','
        << format_double(r.time_to_best_max) << ',' << format_double(r.mean_final_scaled) << ','
        << format_double(r.mean_improvement) << ',' << r.reached_reference << '\n';
}

inline void write_summary_table(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << std::left << std::setw(12) << "family" << std::setw(12) << "solver" << std::right << std::setw(7)
      << "curves" << std::setw(11) << "ttb_min" << std::setw(11) << "ttb_med" << std::setw(11) << "ttb_max"
      << std::setw(12) << "scaled" << std::setw(10) << "improve" << std::setw(9) << "optimal" << '\n';
  for (const auto& r : rows) {
    out << std::left << std::setw(12) << r.family << std::setw(12) << r.solver << std::right << std::setw(7)
        << r.curves << std::fixed << std::setprecision(3) << std::setw(11) << r.time_to_best_min << std::setw(11)
        << r.time_to_best_median << std::setw(11) << r.time_to_best_max << std::setprecision(5) << std::setw(12)
        << r.mean_final_scaled << std::setprecision(2) << std::setw(9) << 100.0 * r.mean_improvement << "%"
        << std::setw(6) << r.reached_reference << "/" << r.curves << '\n';
    out.unsetf(std::ios::fixed);
  }
}

// -- suite files ---------------------------------------------------------------

inline BenchSuite suite_from_json(const io::json& j) {
  using io::detail::get;
  BenchSuite suite;
  try {
    suite.master_seed = get<std::uint64_t>(j, "master_seed", "suite");
    if (j.contains("checkpoints_ms")) suite.checkpoints_ms = j.at("checkpoints_ms").get<std::vector<double>>();
    if (j.contains("clock")) {
      const auto mode = j.at("clock").get<std::string>();
      if (mode != "work" && mode != "wall") throw FormatError("clock must be 'work' or 'wall'");
      suite.clock = mode == "work" ? ClockMode::work : ClockMode::wall;
    }
    suite.ops_per_ms = j.value("ops_per_ms", suite.ops_per_ms);
    suite.workers = j.value("workers", suite.workers);
    suite.epsilon = j.value("epsilon", suite.epsilon);
    suite.oracle_budget = j.value("oracle_budget", suite.oracle_budget);
    suite.output_dir = j.value("output_dir", suite.output_dir);
    if (j.contains("grid")) std::tie(suite.grid_rows, suite.grid_cols) = io::grid_from_json(j);
    if (j.contains("broken")) suite.broken = io::broken_from_json(j.at("broken"));

    for (const auto& f : get<io::json>(j, "families", "suite")) {
      FamilySpec family;
      family.params.queries = get<std::size_t>(f, "queries", "family");
      family.params.plans_per_query = get<std::size_t>(f, "plans", "family");
      family.count = f.value("count", std::size_t{1});
      family.params.seed = f.value("seed", std::uint64_t{0});
      family.params.savings_density = f.value("density", family.params.savings_density);
      if (f.contains("cost_range")) {
        const auto r = f.at("cost_range").get<std::vector<double>>();
        if (r.size() != 2) throw FormatError("cost_range must be [min, max]");
        family.params.cost_min = r[0];
        family.params.cost_max = r[1];
      }
      if (f.contains("savings_range")) {
        const auto r = f.at("savings_range").get<std::vector<double>>();
        if (r.size() != 2) throw FormatError("savings_range must be [min, max]");
        family.params.savings_min = r[0];
        family.params.savings_max = r[1];
      }
      family.name = f.value("name", "Q" + std::to_string(family.params.queries) + "P" +
                                        std::to_string(family.params.plans_per_query));
      suite.families.push_back(std::move(family));
    }
    for (const auto& s : get<io::json>(j, "solvers", "suite")) {
      SolverSpec solver;
      const auto type = get<std::string>(s, "type", "solver");
      if (type == "sa") solver.kind = SolverKind::sa_physical;
      else if (type == "sa-logical") solver.kind = SolverKind::sa_logical;
      else if (type == "climb") solver.kind = SolverKind::climb;
      else if (type == "ga") solver.kind = SolverKind::ga;
      else if (type == "exact") solver.kind = SolverKind::exact;
      else throw FormatError("unknown solver type '" + type + "'");
      solver.anneal.sweeps = s.value("sweeps", solver.anneal.sweeps);
      solver.anneal.runs_per_batch = s.value("runs_per_batch", solver.anneal.runs_per_batch);
      solver.anneal.batches = s.value("batches", solver.anneal.batches);
      if (s.contains("t_initial")) solver.anneal.t_initial = s.at("t_initial").get<double>();
      solver.anneal.t_final = s.value("t_final", 1e-3 * suite.epsilon);
      solver.ga.population = s.value("population", solver.ga.population);
      solver.ga.crossover_rate = s.value("crossover_rate", solver.ga.crossover_rate);
      solver.ga.mutation_rate = s.value("mutation_rate", solver.ga.mutation_rate);
      if (s.value("first_improvement", false)) solver.climb = ClimbStrategy::first_improvement;
      solver.name = s.value("name", default_solver_name(solver));
      suite.solvers.push_back(std::move(solver));
    }
  } catch (const io::json::exception& e) {
    throw FormatError(std::string("malformed suite: ") + e.what());
  }
  try {
    suite.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("invalid suite: ") + e.what());
  }
  return suite;
}

inline io::json metadata_json(const BenchResult& result) {
  io::json instances = io::json::array();
  for (const auto& i : result.instances) {
    io::json entry{{"id", i.id}, {"family", i.family}, {"skipped", i.skipped}};
    if (i.skipped) {
      entry["reason"] = i.reason;
    } else {
      entry["reference_cost"] = i.reference_cost;
      entry["reference_policy"] = i.reference_policy;
      if (!i.embedding.empty()) {
        entry["embedding"] = i.embedding;
        entry["physical_qubits"] = i.physical_qubits;
      }
    }
    instances.push_back(std::move(entry));
  }
  return {{"instances", std::move(instances)}, {"warnings", result.warnings}};
}

}  // namespace mqo
