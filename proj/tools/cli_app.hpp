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

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mqo/mqo.hpp"

namespace mqo::cli {

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kInfeasible = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

using io::json;

/// Any of the pipeline files, recognized by its keys.
struct Loaded {
  std::string kind;  // instance, logical, physical or qubo
  std::optional<MqoInstance> instance;
  std::optional<LogicalQubo> logical;
  std::optional<Qubo> qubo;
  std::optional<PhysicalQubo> physical;
};

inline Loaded load_logical_or_qubo(const json& j, Loaded out) {
  if (j.contains("mapping")) {
    auto file = io::logical_from_json(j);
    out.instance = std::move(file.instance);
    out.qubo = file.logical.qubo;
    out.logical = std::move(file.logical);
  } else {
    out.qubo = io::qubo_from_json(j);
  }
  return out;
}

inline Loaded load_any(const std::string& path) {
  const json j = io::read_json_file(path);
  if (!j.is_object()) throw FormatError("'" + path + "' is not a JSON object");
  Loaded out;
  if (j.contains("queries")) {
    out.kind = "instance";
    out.instance = io::instance_from_json(j);
    return out;
  }
  if (j.contains("qubit_weights")) {
    out.kind = "physical";
    out.physical = io::physical_from_json(j);
    if (j.contains("logical")) return load_logical_or_qubo(j.at("logical"), std::move(out));
    if (j.contains("qubo")) return load_logical_or_qubo(j.at("qubo"), std::move(out));
    throw FormatError("physical file '" + path + "' carries neither 'logical' nor 'qubo'");
  }
  if (j.contains("num_vars")) {
    out.kind = j.contains("mapping") ? "logical" : "qubo";
    return load_logical_or_qubo(j, std::move(out));
  }
  throw FormatError("'" + path + "' is not an instance, QUBO or physical QUBO file");
}

inline void require_distinct(const std::vector<std::string>& paths) {
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (paths[i].empty()) continue;
    for (std::size_t k = i + 1; k < paths.size(); ++k) {
      if (paths[k].empty()) continue;
      if (std::filesystem::weakly_canonical(paths[i]) == std::filesystem::weakly_canonical(paths[k]))
        throw UsageError("input and output paths must differ ('" + paths[i] + "')");
    }
  }
}

inline std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
  const auto x = text.find_first_of("xX");
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (x != std::string::npos) {
    const auto r = std::from_chars(text.data(), text.data() + x, rows);
    const auto c = std::from_chars(text.data() + x + 1, text.data() + text.size(), cols);
    if (r.ec == std::errc{} && r.ptr == text.data() + x && c.ec == std::errc{} &&
        c.ptr == text.data() + text.size() && rows > 0 && cols > 0)
      return {rows, cols};
  }
  throw UsageError("--grid expects RxC with positive integers, got '" + text + "'");
}

inline ChainStrengthRule parse_rule(const std::string& text) {
  if (text == "per-qubit") return ChainStrengthRule::per_qubit_positive;
  if (text == "chain-sum") return ChainStrengthRule::chain_sum;
  throw UsageError("unknown chain rule '" + text + "'");
}

inline std::string format_number(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

inline std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  for (const auto& id : ids) out += (out.empty() ? "" : " ") + id;
  return out.empty() ? "(none)" : out;
}

// -- generate -----------------------------------------------------------------

struct GenerateArgs {
  GeneratorParams params;
  bool seeded = false;
  std::string out;
};

inline int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  if (!a.seeded) throw UsageError("generate needs --seed");
  const auto instance = generate_instance(a.params);
  io::write_json_file(a.out, io::to_json(instance));
  out << "wrote " << a.out << ": " << instance.num_queries() << " queries, " << instance.num_plans()
      << " plans, " << instance.savings().size() << " savings\n";
  return kOk;
}

// -- map ----------------------------------------------------------------------

struct MapArgs {
  std::string in;
  std::string out;
  double epsilon = 0.25;
};

inline int cmd_map(const MapArgs& a, std::ostream& out) {
  require_distinct({a.in, a.out});
  const auto instance = io::instance_from_json(io::read_json_file(a.in));
  const auto lq = logical_map(instance, LogicalOptions{a.epsilon, std::nullopt});
  io::write_json_file(a.out, io::to_json(lq, instance));
  std::size_t negative = 0;
  for (const auto& [key, w] : lq.qubo.quadratic()) negative += w < 0.0 ? 1 : 0;
  out << "w_L = " << format_number(lq.mapping.weight_at_least_one) << '\n'
      << "w_M = " << format_number(lq.mapping.weight_at_most_one) << '\n'
      << "variables: " << lq.qubo.num_vars() << '\n'
      << "quadratic terms: " << lq.qubo.quadratic().size() << " (" << negative << " negative)\n"
      << "wrote " << a.out << '\n';
  return kOk;
}

// -- embed --------------------------------------------------------------------

struct EmbedArgs {
  std::string in;
  std::string out;
  std::string embedding_out;
  std::string grid = "12x12";
  std::string broken;
  std::string pattern = "auto";
  std::string rule = "per-qubit";
  double epsilon = 0.25;
};

inline int cmd_embed(const EmbedArgs& a, std::ostream& out, std::ostream& err) {
  require_distinct({a.in, a.out, a.embedding_out, a.broken});
  const auto [rows, cols] = parse_grid(a.grid);
  if (a.pattern != "auto" && a.pattern != "triad" && a.pattern != "clustered")
    throw UsageError("--pattern must be auto, triad or clustered");
  const auto rule = parse_rule(a.rule);
  std::vector<QubitId> broken;
  if (!a.broken.empty()) broken = io::broken_from_json(io::read_json_file(a.broken));
  const ChimeraGraph graph(rows, cols, broken);

  const json j = io::read_json_file(a.in);
  if (!j.is_object() || !j.contains("num_vars"))
    throw FormatError("'" + a.in + "' is not a QUBO file");
  const auto loaded = load_logical_or_qubo(j, Loaded{});
  const Qubo& qubo = *loaded.qubo;

  std::string pattern = a.pattern;
  FittedEmbedding fit;
  if (pattern == "auto" && loaded.instance) {
    std::string reason;
    auto chosen = embed_instance(*loaded.instance, qubo, graph, &reason);
    if (!chosen) throw EmbeddingInfeasible(reason);
    fit.embedding = std::move(chosen->embedding);
    fit.dropped_chains = chosen->dropped_chains;
    pattern = chosen->pattern;
  } else {
    std::vector<std::size_t> labels(qubo.num_vars(), 0);
    if (pattern == "clustered" && loaded.instance)
      for (const auto& q : loaded.instance->queries())
        for (auto p : q.plans) labels.at(loaded.logical->mapping.var_of_plan.at(p)) = q.cluster;
    fit = fit_variables(labels, graph);
    if (pattern == "auto") pattern = "triad";
  }
  const auto pq = embed_qubo(qubo, fit.embedding, graph, PhysicalOptions{a.epsilon, rule});

  json file = io::to_json(pq);
  file["pattern"] = pattern;
  file[loaded.logical ? "logical" : "qubo"] = j;
  io::write_json_file(a.out, file);
  if (!a.embedding_out.empty()) io::write_json_file(a.embedding_out, io::to_json(fit.embedding, graph));

  std::size_t longest = 0;
  for (const auto& [var, chain] : fit.embedding.chains) longest = std::max(longest, chain.size());
  out << "pattern: " << pattern << '\n'
      << "grid: " << rows << "x" << cols << " (" << broken.size() << " broken qubits)\n"
      << "chains: " << fit.embedding.chains.size() << " (longest " << longest << ")\n"
      << "qubits used: " << pq.used_qubits().size() << '\n'
      << "couplers used: " << pq.coupler_weight.size() << '\n'
      << "dropped chains: " << fit.dropped_chains << '\n'
      << "wrote " << a.out << '\n';
  if (fit.dropped_chains > 0)
    err << "warning: " << fit.dropped_chains << " chain(s) dropped because they touch broken qubits\n";
  return kOk;
}

// -- solve --------------------------------------------------------------------

struct SolveArgs {
  std::string in;
  std::string out;
  std::string record;
  std::string algo;
  std::uint64_t seed = 0;
  bool seeded = false;
  std::size_t runs = 1000;
  std::size_t runs_per_batch = 100;
  std::size_t sweeps = 64;
  std::size_t population = 50;
  double crossover_rate = 0.35;
  double mutation_rate = 1.0 / 12.0;
  bool first_improvement = false;
  double deadline_ms = 1000;
  std::string clock = "work";
  double epsilon = 0.25;
};

struct SolveOutcome {
  json solution = json::object();
  json record = json::object();
};

/// Writes selection details of `raw` (possibly invalid) into `j`.
inline void describe_selection(json& j, const MqoInstance& instance, const PlanSelection& raw) {
  const bool valid = validate_solution(instance, raw).valid;
  const auto final_selection = valid ? raw : repair_selection(instance, raw);
  j["selection"] = selection_ids(instance, final_selection);
  j["cost"] = cost(instance, final_selection);
  j["valid"] = valid;
  j["repaired"] = !valid;
  j["raw_selection"] = selection_ids(instance, raw);
}

inline SolveOutcome solve_anneal(const SolveArgs& a, const Loaded& in) {
  std::optional<LogicalQubo> mapped;
  const LogicalQubo* logical = in.logical ? &*in.logical : nullptr;
  if (!logical && in.kind == "instance") {
    mapped = logical_map(*in.instance, LogicalOptions{a.epsilon, std::nullopt});
    logical = &*mapped;
  }
  const Qubo& logical_qubo = logical ? logical->qubo : *in.qubo;
  std::optional<CompactPhysical> compact;
  if (in.physical) compact = compact_physical(*in.physical);
  const Qubo& target = compact ? compact->qubo : logical_qubo;

  AnnealParams params;
  params.sweeps = a.sweeps;
  params.runs_per_batch = std::min(a.runs_per_batch, a.runs);
  if (params.runs_per_batch == 0 || a.runs % params.runs_per_batch != 0)
    throw UsageError("--runs must be a positive multiple of --runs-per-batch");
  params.batches = a.runs / params.runs_per_batch;
  params.t_final = 1e-3 * a.epsilon;
  Annealer annealer(target, params);

  struct Best {
    double score = std::numeric_limits<double>::infinity();
    double energy = 0.0;
    Assignment raw;
    Assignment logical;
    std::vector<VarId> inconsistent;
  } best;
  SolveOutcome result;
  json curve = json::array();
  std::size_t consistent = 0;
  for (std::size_t b = 0; b < params.batches; ++b) {
    for (const auto& s : annealer.run_batch(batch_seed(a.seed, b))) {
      Assignment bits = s.bits;
      std::vector<VarId> inconsistent;
      if (compact) {
        auto decoded = decode_physical(in.physical->embedding,
                                       compact->expand(s.bits, in.physical->graph.num_qubits()));
        bits = std::move(decoded.assignment);
        bits.resize(logical_qubo.num_vars(), 0);
        inconsistent = std::move(decoded.chains.inconsistent);
      }
      consistent += inconsistent.empty() ? 1 : 0;
      double score = energy(logical_qubo, bits);
      if (in.instance) {
        const auto selection = decode_logical(logical->mapping, bits);
        const bool valid = validate_solution(*in.instance, selection).valid;
        score = cost(*in.instance, valid ? selection : repair_selection(*in.instance, selection));
      }
      if (score < best.score - kTolerance) best = {score, s.energy, s.bits, bits, inconsistent};
    }
    curve.push_back({{"batch", b}, {"runs", (b + 1) * params.runs_per_batch}, {"best", best.score}});
  }

  json& sol = result.solution;
  sol["algorithm"] = compact ? "SA" : "SA-LOGICAL";
  sol["seed"] = a.seed;
  sol["runs"] = a.runs;
  sol["energy"] = best.energy;
  sol["assignment"] = best.logical;
  if (compact) {
    sol["inconsistent_chains"] = best.inconsistent;
    sol["consistent_samples"] = consistent;
  }
  if (in.instance) describe_selection(sol, *in.instance, decode_logical(logical->mapping, best.logical));
  result.record = {{"solver", sol["algorithm"]}, {"seed", a.seed}, {"batches", std::move(curve)}};
  return result;
}

inline SolveOutcome solve_classical(const SolveArgs& a, const Loaded& in) {
  if (!in.instance) throw UsageError("--algo " + a.algo + " needs an instance (plain QUBO input given)");
  if (a.clock != "work" && a.clock != "wall") throw UsageError("--clock must be work or wall");
  if (!(a.deadline_ms > 0.0)) throw UsageError("--deadline-ms must be positive");
  ClassicalRunConfig config;
  config.clock = a.clock == "work" ? ClockMode::work : ClockMode::wall;
  config.checkpoints_ms.clear();
  for (double t : {1.0, 10.0, 100.0, 1000.0})
    if (t < a.deadline_ms) config.checkpoints_ms.push_back(t);
  config.checkpoints_ms.push_back(a.deadline_ms);

  SolverRunRecord record;
  if (a.algo == "climb") {
    record = hill_climbing(*in.instance, config, a.seed,
                           a.first_improvement ? ClimbStrategy::first_improvement : ClimbStrategy::steepest);
  } else {
    record = genetic_algorithm(*in.instance, GaOptions{a.population, a.crossover_rate, a.mutation_rate},
                               config, a.seed);
  }
  SolveOutcome result;
  result.solution["algorithm"] = record.solver;
  result.solution["seed"] = a.seed;
  result.solution["iterations"] = record.iterations;
  describe_selection(result.solution, *in.instance, record.best_selection);
  json points = json::array();
  for (const auto& cp : record.checkpoints)
    points.push_back({{"time_ms", cp.time_ms}, {"best", cp.best}, {"iterations", cp.iterations}});
  result.record = {{"solver", record.solver}, {"seed", a.seed}, {"checkpoints", std::move(points)}};
  return result;
}

inline SolveOutcome solve_exact_cli(const Loaded& in) {
  SolveOutcome result;
  result.solution["algorithm"] = "EXACT";
  if (in.instance) {
    const auto optimum = solve_exact(*in.instance);
    describe_selection(result.solution, *in.instance, optimum.selection);
  } else {
    const auto optimum = solve_exact(*in.qubo);
    result.solution["assignment"] = optimum.assignment;
    result.solution["energy"] = optimum.energy;
  }
  result.record = {{"solver", "EXACT"}};
  return result;
}

inline int cmd_solve(const SolveArgs& a, std::ostream& out) {
  require_distinct({a.in, a.out, a.record});
  const bool known = a.algo == "sa" || a.algo == "climb" || a.algo == "ga" || a.algo == "exact";
  if (!known) throw UsageError("unknown --algo '" + a.algo + "' (expected sa, climb, ga or exact)");
  if (a.algo != "exact" && !a.seeded) throw UsageError("--algo " + a.algo + " needs --seed");
  const auto in = load_any(a.in);

  SolveOutcome result;
  if (a.algo == "sa") result = solve_anneal(a, in);
  else if (a.algo == "exact") result = solve_exact_cli(in);
  else result = solve_classical(a, in);
  result.solution["input"] = in.kind;

  const json& s = result.solution;
  out << "algorithm: " << s["algorithm"].get<std::string>() << " on " << in.kind << " input\n";
  if (s.contains("inconsistent_chains")) {
    const auto broken = s["inconsistent_chains"].size();
    out << "chains: " << (broken == 0 ? std::string("all consistent") : std::to_string(broken) + " inconsistent")
        << " (" << s["consistent_samples"].get<std::size_t>() << "/" << a.runs << " samples consistent)\n";
  }
  if (s.contains("selection")) {
    out << "selection: " << join_ids(s["selection"].get<std::vector<std::string>>()) << '\n'
        << "cost: " << format_number(s["cost"].get<double>()) << '\n'
        << "valid: " << (s["valid"].get<bool>() ? "yes" : "no, repaired") << '\n';
  }
  if (s.contains("energy")) out << "energy: " << format_number(s["energy"].get<double>()) << '\n';
  if (!a.out.empty()) io::write_json_file(a.out, result.solution);
  if (!a.record.empty()) io::write_json_file(a.record, result.record);
  return kOk;
}

// -- bench --------------------------------------------------------------------

struct BenchArgs {
  std::string suite;
  std::string out;
  std::size_t workers = 0;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FormatError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw FormatError("failed writing '" + path.string() + "'");
}

inline int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  auto suite = suite_from_json(io::read_json_file(a.suite));
  if (!a.out.empty()) suite.output_dir = a.out;
  if (a.workers > 0) suite.workers = a.workers;
  if (suite.output_dir.empty()) throw UsageError("bench needs --out or an output_dir in the suite");
  suite.validate();

  const auto result = run_suite(suite);
  std::vector<std::string> warnings = result.warnings;
  const auto rows = summarize(result, &warnings);

  const std::filesystem::path dir = suite.output_dir;
  std::filesystem::create_directories(dir);
  std::ostringstream curves, summary, table;
  write_curves_csv(curves, curve_rows(result.curves));
  write_summary_csv(summary, rows);
  write_summary_table(table, rows);
  write_text_file(dir / "curves.csv", curves.str());
  write_text_file(dir / "summary.csv", summary.str());
  write_text_file(dir / "summary.txt", table.str());
  io::write_json_file(dir / "metadata.json", metadata_json(result));

  std::size_t skipped = 0;
  for (const auto& inst : result.instances) skipped += inst.skipped ? 1 : 0;
  out << table.str() << result.instances.size() << " instances (" << skipped << " skipped), "
      << result.curves.size() << " curves written to " << dir.string() << '\n';
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return kOk;
}

// -- verify -------------------------------------------------------------------

struct VerifyArgs {
  LogicalSuiteOptions logical;
  ChainSuiteOptions chains;
  std::string rule = "per-qubit";
  bool seeded = false;
};

inline int cmd_verify(VerifyArgs a, std::ostream& out) {
  if (!a.seeded) throw UsageError("verify needs --seed");
  a.chains.seed = derive_seed(a.logical.seed, 1);
  a.chains.rule = parse_rule(a.rule);
  const auto logical = verify_logical_suite(a.logical);
  out << "optimum equivalence: " << logical.optimal << "/" << logical.instances << '\n'
      << "optimum validity: " << logical.valid << "/" << logical.instances << '\n';
  if (!logical.failing_seeds.empty()) {
    out << "failing instance seeds:";
    for (std::size_t i = 0; i < std::min<std::size_t>(logical.failing_seeds.size(), 10); ++i)
      out << ' ' << logical.failing_seeds[i];
    if (logical.failing_seeds.size() > 10) out << " ...";
    out << '\n';
  }
  bool ok = logical.ok();
  if (a.chains.trials > 0) {
    const auto chains = verify_chain_suite(a.chains);
    out << "chain consistency: " << chains.consistent_trials << "/" << chains.trials << '\n'
        << "chain optimality: " << chains.optimal_trials << "/" << chains.trials << '\n';
    ok = ok && chains.ok();
  }
  out << (ok ? "verification passed" : "verification FAILED") << '\n';
  return ok ? kOk : kVerificationFailed;
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiple query optimization on a simulated Chimera annealer", "mqo"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  detail::GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a random MQO instance");
  generate->add_option("--queries", gen.params.queries, "Number of queries")->check(CLI::PositiveNumber);
  generate->add_option("--plans", gen.params.plans_per_query, "Plans per query")->check(CLI::PositiveNumber);
  generate->add_option("--density", gen.params.savings_density, "Savings density")->check(CLI::Range(0.0, 1.0));
  generate->add_option("--cost-min", gen.params.cost_min, "Smallest plan cost");
  generate->add_option("--cost-max", gen.params.cost_max, "Largest plan cost");
  generate->add_option("--savings-min", gen.params.savings_min, "Smallest savings value");
  generate->add_option("--savings-max", gen.params.savings_max, "Largest savings value");
  auto* gen_seed = generate->add_option("--seed", gen.params.seed, "Generator seed")->required();
  generate->add_option("--out", gen.out, "Instance file to write")->required();

  detail::MapArgs map;
  auto* map_cmd = app.add_subcommand("map", "Map an instance to a logical QUBO");
  map_cmd->add_option("--in", map.in, "Instance file")->required();
  map_cmd->add_option("--out", map.out, "QUBO file to write")->required();
  map_cmd->add_option("--epsilon", map.epsilon, "Penalty margin")->check(CLI::PositiveNumber);

  detail::EmbedArgs emb;
  auto* embed = app.add_subcommand("embed", "Embed a QUBO on a Chimera grid");
  embed->add_option("--in", emb.in, "Logical or plain QUBO file")->required();
  embed->add_option("--out", emb.out, "Physical QUBO file to write")->required();
  embed->add_option("--embedding-out", emb.embedding_out, "Embedding file to write");
  embed->add_option("--grid", emb.grid, "Grid size RxC")->capture_default_str();
  embed->add_option("--broken", emb.broken, "JSON list of broken qubit ids");
  embed->add_option("--pattern", emb.pattern, "auto, triad or clustered")->capture_default_str();
  embed->add_option("--chain-rule", emb.rule, "per-qubit or chain-sum")->capture_default_str();
  embed->add_option("--epsilon", emb.epsilon, "Chain penalty margin")->check(CLI::PositiveNumber);

  detail::SolveArgs sol;
  auto* solve = app.add_subcommand("solve", "Solve an instance, logical or physical QUBO");
  solve->add_option("--in", sol.in, "Input file")->required();
  solve->add_option("--algo", sol.algo, "sa, climb, ga or exact")->required();
  auto* sol_seed = solve->add_option("--seed", sol.seed, "Solver seed");
  solve->add_option("--out", sol.out, "Solution file to write");
  solve->add_option("--record", sol.record, "Run record file to write");
  solve->add_option("--runs", sol.runs, "Annealing runs")->check(CLI::PositiveNumber);
  solve->add_option("--runs-per-batch", sol.runs_per_batch, "Annealing runs per batch")->check(CLI::PositiveNumber);
  solve->add_option("--sweeps", sol.sweeps, "Sweeps per annealing run")->check(CLI::PositiveNumber);
  solve->add_option("--population", sol.population, "GA population")->check(CLI::Range(2, 1 << 20));
  solve->add_option("--crossover-rate", sol.crossover_rate, "GA crossover rate")->check(CLI::Range(0.0, 1.0));
  solve->add_option("--mutation-rate", sol.mutation_rate, "GA mutation rate")->check(CLI::Range(0.0, 1.0));
  solve->add_flag("--first-improvement", sol.first_improvement, "Hill climbing takes the first improving move");
  solve->add_option("--deadline-ms", sol.deadline_ms, "Time budget of climb and ga");
  solve->add_option("--clock", sol.clock, "work or wall")->capture_default_str();
  solve->add_option("--epsilon", sol.epsilon, "Penalty margin for instance input")->check(CLI::PositiveNumber);

  detail::BenchArgs ben;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark suite");
  bench_cmd->add_option("--suite", ben.suite, "Suite JSON file")->required();
  bench_cmd->add_option("--out", ben.out, "Output directory");
  bench_cmd->add_option("--workers", ben.workers, "Worker threads")->check(CLI::PositiveNumber);

  detail::VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Check mapping and chain properties on random instances");
  verify->add_option("--instances", ver.logical.instances, "Random instances")->check(CLI::PositiveNumber);
  verify->add_option("--max-queries", ver.logical.max_queries, "Most queries per instance")->check(CLI::PositiveNumber);
  verify->add_option("--max-plans", ver.logical.max_plans, "Most plans per query")->check(CLI::PositiveNumber);
  verify->add_option("--max-density", ver.logical.max_density, "Largest savings density")->check(CLI::Range(0.0, 1.0));
  auto* ver_seed = verify->add_option("--seed", ver.logical.seed, "Suite seed");
  verify->add_flag("--break-wm", ver.logical.break_at_most_one, "Use a too small at-most-one weight");
  verify->add_option("--chain-trials", ver.chains.trials, "Random chain trials, 0 to skip");
  verify->add_option("--max-qubits", ver.chains.max_qubits, "Most qubits per chain trial")->check(CLI::Range(4, 62));
  verify->add_option("--chain-rule", ver.rule, "per-qubit or chain-sum")->capture_default_str();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (generate->parsed()) {
      gen.seeded = gen_seed->count() > 0;
      return detail::cmd_generate(gen, out);
    }
    if (map_cmd->parsed()) return detail::cmd_map(map, out);
    if (embed->parsed()) return detail::cmd_embed(emb, out, err);
    if (solve->parsed()) {
      sol.seeded = sol_seed->count() > 0;
      return detail::cmd_solve(sol, out);
    }
    if (bench_cmd->parsed()) return detail::cmd_bench(ben, out, err);
    if (verify->parsed()) {
      ver.seeded = ver_seed->count() > 0;
      return detail::cmd_verify(ver, out);
    }
  } catch (const EmbeddingInfeasible& e) {
    err << "error: " << e.what() << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace mqo::cli
