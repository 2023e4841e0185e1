#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include "jitq/error.hpp"
#include "jitq/ising.hpp"
#include "jitq/problem_io.hpp"
#include "jitq/quantum.hpp"
#include "jitq/solvers.hpp"

namespace jitq::cli {

using nlohmann::json;

namespace {

std::string bit_text(const BitString& bits) {
  std::string s;
  s.reserve(bits.size());
  for (const auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

std::string opt_text(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : "undefined"; }

}  // namespace

std::string render_text(const RunReport& r) {
  std::string out;
  auto line = [&out](const std::string& s) { out += s + "\n"; };
  line(fmt::format("command: {}", r.command));
  if (r.scenario) {
    line(fmt::format("scenario: {} ({} sectors, rta {}, alpha {})", scenario_digest(*r.scenario),
                     r.scenario->size(), r.scenario->rta, r.scenario->alpha));
  }
  std::string cfg;
  for (const auto& [k, v] : r.solver_config) cfg += fmt::format(" {}={}", k, v);
  line(fmt::format("solver: {}{}", r.solver, cfg));
  line(fmt::format("objective: {}", r.objective));
  line(fmt::format("bits: {}", bit_text(r.bits)));
  if (r.plan) {
    line("plan:");
    for (std::size_t i = 0; i < r.plan->sectors.size(); ++i) {
      const auto& sp = r.plan->sectors[i];
      line(fmt::format("  sector {}: u={} w={} v={} t={}", i, sp.inverse_speed, opt_text(sp.ground_speed),
                       opt_text(sp.water_speed), sp.time));
    }
    line(fmt::format("  arrival t_A={}", r.plan->arrival_time));
    if (!r.plan->infeasible_sectors.empty()) {
      std::string list;
      for (const auto i : r.plan->infeasible_sectors) list += fmt::format(" {}", i);
      line(fmt::format("  infeasible sectors (u = 0):{}", list));
    }
  }
  if (r.cost) {
    line(fmt::format("cost: fuel={} delay={} total={}", r.cost->fuel_total, r.cost->delay_cost,
                     r.cost->total));
  }
  for (const auto& [k, v] : r.details) line(fmt::format("{}: {}", k, v));
  return out;
}

std::string render_json(const RunReport& r) {
  json doc;
  doc["command"] = r.command;
  if (r.scenario) doc["scenario_digest"] = scenario_digest(*r.scenario);
  doc["solver"] = r.solver;
  json cfg = json::object();
  for (const auto& [k, v] : r.solver_config) cfg[k] = v;
  doc["solver_config"] = cfg;
  doc["objective"] = r.objective;
  doc["bits"] = bit_text(r.bits);
  if (r.plan) {
    json sectors = json::array();
    for (const auto& sp : r.plan->sectors) {
      sectors.push_back({
          {"u", sp.inverse_speed},
          {"w", sp.ground_speed ? json(*sp.ground_speed) : json(nullptr)},
          {"v", sp.water_speed ? json(*sp.water_speed) : json(nullptr)},
          {"t", sp.time},
      });
    }
    doc["plan"] = {{"sectors", sectors},
                   {"t_A", r.plan->arrival_time},
                   {"infeasible_sectors", r.plan->infeasible_sectors}};
  }
  if (r.cost) {
    doc["cost"] = {{"fuel_per_sector", r.cost->fuel_per_sector},
                   {"fuel", r.cost->fuel_total},
                   {"delay", r.cost->delay_cost},
                   {"total", r.cost->total}};
  }
  json details = json::object();
  for (const auto& [k, v] : r.details) details[k] = v;
  doc["details"] = details;
  return doc.dump(2) + "\n";
}

namespace {

// A scenario compiled to a polynomial, remembering how to decode solutions.
struct Compiled {
  RouteScenario scenario;
  BuiltProblem problem;
  std::optional<double> penalty;  // set for the quadratic model
};

Compiled compile(const RouteScenario& scenario, std::optional<double> penalty,
                 const EncodingConfig& enc_w) {
  validate_scenario(scenario);
  if (scenario.is_linear()) {
    return {scenario, build_linear_qubo(scenario, scenario.encoding), std::nullopt};
  }
  const double p = penalty.value_or(default_penalty_weight(scenario, scenario.encoding, enc_w));
  return {scenario, build_quadratic_hobo(scenario, scenario.encoding, enc_w, p), p};
}

void attach_plan(RunReport& report, const Compiled& c) {
  report.scenario = c.scenario;
  report.plan = decode_prefix(report.bits, c.scenario, c.scenario.encoding);
  report.cost = scenario_cost(*report.plan, c.scenario);
  if (c.penalty) report.details.emplace_back("penalty_weight", fmt::format("{}", *c.penalty));
}

bool is_scenario_document(const std::string& text) {
  try {
    const auto doc = json::parse(text);
    return doc.is_object() && doc.contains("sectors");
  } catch (const json::exception&) {
    return false;
  }
}

std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) s += (s.empty() ? "" : " ") + a;
  return s;
}

struct SolverFlags {
  std::string solver = "brute";
  std::size_t sweeps = 200;
  std::size_t restarts = 4;
  std::optional<double> t_start;
  std::optional<double> t_end;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

void add_solver_flags(CLI::App* sub, SolverFlags& f) {
  sub->add_option("--solver", f.solver, "brute or anneal")->check(CLI::IsMember({"brute", "anneal"}));
  sub->add_option("--sweeps", f.sweeps, "annealing sweeps per restart");
  sub->add_option("--restarts", f.restarts, "annealing restarts");
  sub->add_option("--t-start", f.t_start, "initial temperature (default: max |coefficient|)");
  sub->add_option("--t-end", f.t_end, "final temperature (default: 1e-3 * t-start)");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--threads", f.threads, "worker cap (0 = hardware concurrency)");
}

RunReport solve_polynomial(const PseudoBooleanPolynomial& pbp, const SolverFlags& f) {
  RunReport report;
  SolveResult result;
  if (f.solver == "brute") {
    result = brute_force(pbp, f.threads);
    report.solver = "brute-force";
    report.details.emplace_back("minimizers", fmt::format("{}", result.minimizers.size()));
  } else {
    AnnealConfig cfg{f.sweeps, f.t_start, f.t_end, f.restarts, f.seed};
    result = simulated_annealing(pbp, cfg, f.threads);
    report.solver = "simulated-annealing";
    report.solver_config = {{"sweeps", fmt::format("{}", f.sweeps)},
                            {"restarts", fmt::format("{}", f.restarts)},
                            {"seed", fmt::format("{}", f.seed)}};
    if (f.t_start) report.solver_config.emplace_back("t_start", fmt::format("{}", *f.t_start));
    if (f.t_end) report.solver_config.emplace_back("t_end", fmt::format("{}", *f.t_end));
  }
  report.objective = result.best_value;
  report.bits = result.minimizers.front();
  report.details.emplace_back("evaluations", fmt::format("{}", result.evaluations));
  return report;
}

void emit(const RunReport& report, const std::string& format, std::ostream& out, std::ostream& err) {
  out << (format == "json" ? render_json(report) : render_text(report));
  err << fmt::format("wall time: {:.3f} s\n", report.wall_seconds);
}

std::uint64_t modal_index(const std::map<std::uint64_t, std::uint64_t>& counts) {
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  return best->first;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Just-in-time voyage speed optimization over QUBO/Ising formulations", "jitq"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string input_path;
  std::string out_path;
  std::string format = "text";
  std::string trace_path;
  SolverFlags solver;
  std::optional<double> penalty;
  int w_min = kDefaultSpeedEncoding.j_min;
  int w_max = kDefaultSpeedEncoding.j_max;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  };
  auto add_speed_encoding = [&](CLI::App* sub) {
    sub->add_option("--w-min", w_min, "lowest ground-speed bit exponent (quadratic model)");
    sub->add_option("--w-max", w_max, "highest ground-speed bit exponent (quadratic model)");
  };

  auto* validate_cmd = app.add_subcommand("validate", "check a scenario file");
  validate_cmd->add_option("scenario", scenario_path)->required();

  std::string mode = "linear";
  bool want_quadratize = false;
  bool want_ising = false;
  auto* build_cmd = app.add_subcommand("build", "compile a scenario into a problem file");
  build_cmd->add_option("scenario", scenario_path)->required();
  build_cmd->add_option("--mode", mode, "linear or quadratic")->check(CLI::IsMember({"linear", "quadratic"}));
  build_cmd->add_option("--penalty", penalty, "penalty weight P (quadratic mode)");
  build_cmd->add_flag("--quadratize", want_quadratize, "reduce to degree <= 2");
  build_cmd->add_flag("--ising", want_ising, "emit the Ising form");
  build_cmd->add_option("-o,--out", out_path, "output problem file")->required();
  add_speed_encoding(build_cmd);

  auto* solve_cmd = app.add_subcommand("solve", "solve a scenario or problem file");
  solve_cmd->add_option("input", input_path)->required();
  solve_cmd->add_option("--penalty", penalty, "penalty weight for quadratic scenarios");
  add_solver_flags(solve_cmd, solver);
  add_speed_encoding(solve_cmd);
  add_format(solve_cmd);

  std::size_t layers = 1;
  std::size_t qaoa_restarts = 4;
  std::uint64_t shots = 10000;
  auto* qaoa_cmd = app.add_subcommand("qaoa", "optimize and sample a simulated QAOA circuit");
  qaoa_cmd->add_option("scenario", scenario_path)->required();
  qaoa_cmd->add_option("--p", layers, "layer count");
  qaoa_cmd->add_option("--restarts", qaoa_restarts, "random restarts of the angle search");
  qaoa_cmd->add_option("--shots", shots, "measurement shots");
  qaoa_cmd->add_option("--seed", solver.seed, "random seed");
  qaoa_cmd->add_option("--penalty", penalty, "penalty weight for quadratic scenarios");
  qaoa_cmd->add_option("--trace", trace_path, "CSV file for the expectation trace");
  add_speed_encoding(qaoa_cmd);
  add_format(qaoa_cmd);

  double total_time = 125.0;
  std::size_t steps = 4000;
  std::size_t every = 100;
  auto* adiabatic_cmd = app.add_subcommand("adiabatic", "simulate adiabatic evolution");
  adiabatic_cmd->add_option("scenario", scenario_path)->required();
  adiabatic_cmd->add_option("--T", total_time, "total evolution time");
  adiabatic_cmd->add_option("--steps", steps, "integration steps");
  adiabatic_cmd->add_option("--every", every, "trace sampling interval in steps");
  adiabatic_cmd->add_option("--penalty", penalty, "penalty weight for quadratic scenarios");
  adiabatic_cmd->add_option("--trace", trace_path, "CSV file for the overlap trace");
  add_speed_encoding(adiabatic_cmd);
  add_format(adiabatic_cmd);

  std::size_t completed = 0;
  double elapsed = 0.0;
  double new_rta = 0.0;
  auto* replan_cmd = app.add_subcommand("replan", "re-optimize the remaining sectors after an RTA change");
  replan_cmd->add_option("scenario", scenario_path)->required();
  replan_cmd->add_option("--completed", completed, "sectors already sailed")->required();
  replan_cmd->add_option("--elapsed", elapsed, "time spent so far")->required();
  replan_cmd->add_option("--rta", new_rta, "new requested time of arrival")->required();
  replan_cmd->add_option("--penalty", penalty, "penalty weight for quadratic scenarios");
  add_solver_flags(replan_cmd, solver);
  add_speed_encoding(replan_cmd);
  add_format(replan_cmd);

  auto* landscape_cmd = app.add_subcommand("landscape", "minimal cost per arrival time as CSV");
  landscape_cmd->add_option("scenario", scenario_path)->required();
  landscape_cmd->add_option("out", out_path, "output CSV")->required();

  std::vector<std::string> argv_store{"jitq"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitDomain;
  }

  const std::string command = join_args(args);
  const auto started = std::chrono::steady_clock::now();
  auto seconds = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };
  const EncodingConfig enc_w{w_min, w_max};

  try {
    if (validate_cmd->parsed()) {
      const auto scenario = load_scenario(scenario_path);
      validate_scenario(scenario);
      out << fmt::format("valid: {} sectors, total length {}, rta {}, alpha {}, {} bits per sector\n",
                         scenario.size(), scenario.total_length(), scenario.rta, scenario.alpha,
                         scenario.encoding.bits());
      return kExitOk;
    }

    if (build_cmd->parsed()) {
      const auto scenario = load_scenario(scenario_path);
      BuiltProblem problem;
      if (mode == "linear") {
        problem = build_linear_qubo(scenario, scenario.encoding);
      } else {
        if (!penalty) throw DomainError("quadratic mode requires --penalty");
        problem = build_quadratic_hobo(scenario, scenario.encoding, enc_w, *penalty);
      }
      if (want_quadratize) {
        problem = quadratize(problem.polynomial, default_quadratization_weight(problem.polynomial),
                             problem.variables);
      }
      if (want_ising) {
        write_text_file(out_path, ising_to_json(to_ising(problem.polynomial), problem.variables) + "\n");
      } else {
        export_problem(problem, out_path);
      }
      out << fmt::format("wrote {}: {} variables, {} terms, degree {}\n", out_path,
                         problem.polynomial.num_vars(), problem.polynomial.terms().size(),
                         problem.polynomial.degree());
      return kExitOk;
    }

    if (solve_cmd->parsed()) {
      const auto text = read_text_file(input_path);
      RunReport report;
      if (is_scenario_document(text)) {
        const auto compiled = compile(parse_scenario(text), penalty, enc_w);
        report = solve_polynomial(compiled.problem.polynomial, solver);
        attach_plan(report, compiled);
      } else {
        const auto problem = problem_from_json(text);
        report = solve_polynomial(problem.polynomial, solver);
      }
      report.command = command;
      report.wall_seconds = seconds();
      emit(report, format, out, err);
      return kExitOk;
    }

    if (replan_cmd->parsed()) {
      const auto scenario = load_scenario(scenario_path);
      validate_scenario(scenario);
      const auto residual = replan(scenario, completed, elapsed, new_rta);
      const auto compiled = compile(residual, penalty, enc_w);
      auto report = solve_polynomial(compiled.problem.polynomial, solver);
      attach_plan(report, compiled);
      report.details.emplace_back("remaining_sectors", fmt::format("{}", residual.size()));
      report.details.emplace_back("residual_rta", fmt::format("{}", residual.rta));
      report.details.emplace_back("arrival_from_start", fmt::format("{}", elapsed + report.plan->arrival_time));
      report.command = command;
      report.wall_seconds = seconds();
      emit(report, format, out, err);
      return kExitOk;
    }

    if (qaoa_cmd->parsed()) {
      if (layers == 0) throw DomainError("invalid layer count: --p must be at least 1");
      if (shots == 0) throw DomainError("--shots must be at least 1");
      const auto compiled = compile(load_scenario(scenario_path), penalty, enc_w);
      const auto& pbp = compiled.problem.polynomial;
      if (pbp.num_vars() > kMaxQubits) {
        throw DomainError(fmt::format("{} qubits exceed the simulator limit of {}", pbp.num_vars(), kMaxQubits));
      }
      const auto hamiltonian = build_diagonal(pbp);
      const auto scaled = hamiltonian.rescaled();
      const double span = hamiltonian.max() - hamiltonian.min();
      auto to_energy = [&](double e) { return hamiltonian.min() + span * e; };

      const auto opt = qaoa_optimize(scaled, {layers, qaoa_restarts, solver.seed, {}});
      const auto state = qaoa_state(scaled, opt.params);
      const auto counts = sample(state, shots, solver.seed);
      const auto modal = modal_index(counts);

      RunReport report;
      report.command = command;
      report.solver = "qaoa";
      report.solver_config = {{"p", fmt::format("{}", layers)},
                              {"restarts", fmt::format("{}", qaoa_restarts)},
                              {"shots", fmt::format("{}", shots)},
                              {"seed", fmt::format("{}", solver.seed)}};
      report.bits = bits_of(modal, pbp.num_vars());
      report.objective = pbp.evaluate(report.bits);
      attach_plan(report, compiled);
      report.details.emplace_back("expectation", fmt::format("{}", to_energy(opt.expectation)));
      report.details.emplace_back("uniform_mean", fmt::format("{}", hamiltonian.mean()));
      report.details.emplace_back("betas", fmt::format("{}", fmt::join(opt.params.betas, " ")));
      report.details.emplace_back("gammas_rescaled", fmt::format("{}", fmt::join(opt.params.gammas, " ")));
      report.details.emplace_back("modal_count", fmt::format("{}", counts.at(modal)));

      const auto exact = brute_force(pbp);
      std::uint64_t hits = 0;
      bool modal_is_optimal = false;
      for (const auto& m : exact.minimizers) {
        const auto z = index_of(m);
        if (auto it = counts.find(z); it != counts.end()) hits += it->second;
        modal_is_optimal = modal_is_optimal || z == modal;
      }
      report.details.emplace_back("brute_force_optimum", fmt::format("{}", exact.best_value));
      report.details.emplace_back("optimal_frequency",
                                  fmt::format("{}", static_cast<double>(hits) / static_cast<double>(shots)));
      report.details.emplace_back("modal_is_optimal", modal_is_optimal ? "yes" : "no");

      if (!trace_path.empty()) {
        std::string csv = "iteration,expectation\n";
        for (const auto& pt : opt.trace) csv += fmt::format("{},{}\n", pt.iteration, to_energy(pt.expectation));
        write_text_file(trace_path, csv);
      }
      report.wall_seconds = seconds();
      emit(report, format, out, err);
      return kExitOk;
    }

    if (adiabatic_cmd->parsed()) {
      const auto compiled = compile(load_scenario(scenario_path), penalty, enc_w);
      const auto& pbp = compiled.problem.polynomial;
      if (pbp.num_vars() > kMaxQubits) {
        throw DomainError(fmt::format("{} qubits exceed the simulator limit of {}", pbp.num_vars(), kMaxQubits));
      }
      const auto scaled = build_diagonal(pbp).rescaled();
      const auto exact = brute_force(pbp);
      std::vector<std::uint64_t> ground;
      for (const auto& m : exact.minimizers) ground.push_back(index_of(m));

      std::string csv = "t,s,ground_overlap\n";
      auto observer = [&](const AdiabaticSample& smp) {
        csv += fmt::format("{},{},{}\n", smp.time, smp.s, ground_overlap(*smp.state, ground));
      };
      const auto state = adiabatic_evolve(scaled, {total_time, steps, {}}, observer, every);
      const auto probs = state.probabilities();
      const auto modal = static_cast<std::uint64_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());

      RunReport report;
      report.command = command;
      report.solver = "adiabatic";
      report.solver_config = {{"T", fmt::format("{}", total_time)}, {"steps", fmt::format("{}", steps)}};
      report.bits = bits_of(modal, pbp.num_vars());
      report.objective = pbp.evaluate(report.bits);
      attach_plan(report, compiled);
      report.details.emplace_back("ground_overlap", fmt::format("{}", ground_overlap(state, ground)));
      report.details.emplace_back("modal_probability", fmt::format("{}", probs[modal]));
      report.details.emplace_back("norm_drift", fmt::format("{}", std::abs(state.norm() - 1.0)));
      report.details.emplace_back("brute_force_optimum", fmt::format("{}", exact.best_value));
      if (!trace_path.empty()) write_text_file(trace_path, csv);
      report.wall_seconds = seconds();
      emit(report, format, out, err);
      return kExitOk;
    }

    if (landscape_cmd->parsed()) {
      const auto scenario = load_scenario(scenario_path);
      const auto rows = landscape(scenario, scenario.encoding);
      write_text_file(out_path, landscape_csv(rows));
      out << fmt::format("wrote {} rows to {}\n", rows.size(), out_path);
      return kExitOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitDomain;
}

}  // namespace jitq::cli
