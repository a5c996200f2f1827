#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ambsee/ambsee.hpp"

namespace ambsee::cli {

enum ExitCode : int { kOk = 0, kInfeasible = 1, kUsage = 2 };

struct NetworkFlags {
  std::string config_path;
  std::optional<std::size_t> k, m;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> p_max, p_circuit, noise;
  std::optional<double> r_min, gamma;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "Network configuration JSON file")->check(CLI::ExistingFile);
    app->add_option("--k", k, "Number of users K")->check(CLI::Range(1, 64));
    app->add_option("--m", m, "Number of backscatter devices M")->check(CLI::Range(0, 16));
    app->add_option("--seed", seed, "RNG seed");
    app->add_option("--pmax", p_max, "Power budget, watts or dBm (e.g. 50dBm)");
    app->add_option("--pc", p_circuit, "Circuit power, watts or dBm");
    app->add_option("--noise", noise, "Noise power at users and eavesdropper, watts or dBm");
    app->add_option("--rmin", r_min, "Minimum rate per user, bits/s/Hz")->check(CLI::NonNegativeNumber);
    app->add_option("--gamma", gamma, "Path-loss exponent")->check(CLI::PositiveNumber);
  }

  NetworkConfig resolve() const {
    NetworkConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::invalid_argument("cannot open config " + config_path);
      cfg = nlohmann::json::parse(in).get<NetworkConfig>();
    }
    if (k) cfg.user_count = *k;
    if (m) cfg.bd_count = *m;
    if (seed) cfg.seed = *seed;
    if (p_max) cfg.p_max = parse_power(*p_max);
    if (p_circuit) cfg.p_circuit = parse_power(*p_circuit);
    if (noise) cfg.noise_power = cfg.eav_noise_power = parse_power(*noise);
    if (r_min) {
      cfg.r_min = *r_min;
      cfg.r_min_per_user.clear();
    }
    if (gamma) cfg.pathloss_exponent = *gamma;
    cfg.validate();
    return cfg;
  }
};

inline nlohmann::json describe(const CLI::App& app) {
  nlohmann::json j;
  j["name"] = app.get_name();
  j["description"] = app.get_description();
  j["options"] = nlohmann::json::array();
  for (const CLI::Option* opt : app.get_options()) {
    nlohmann::json o;
    o["names"] = opt->get_lnames();
    o["description"] = opt->get_description();
    o["type"] = opt->get_type_name();
    o["expects_value"] = opt->get_type_size() != 0;
    o["required"] = opt->get_required();
    o["default"] = opt->get_default_str();
    j["options"].push_back(o);
  }
  j["subcommands"] = nlohmann::json::array();
  for (const CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    j["subcommands"].push_back(describe(*sub));
  }
  return j;
}

inline std::ostream& open_output(const std::string& path, std::ofstream& file, std::ostream& fallback) {
  if (path.empty() || path == "-") return fallback;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

/// Command-line entry point; returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Secrecy energy-efficiency solver for backscatter-assisted NOMA"};
  app.name("ambsee");
  app.require_subcommand(0, 1);
  bool help_json = false;
  app.add_flag("--help-json", help_json, "Print the command-line interface as JSON and exit");

  // solve
  NetworkFlags solve_net;
  std::string solve_method = "closed";
  std::string objective = "ratio";
  double alpha = 0.1;
  std::uint64_t trial = 0;
  std::string solve_out;
  std::string scenario_csv;
  std::size_t particles = 30, iterations = 100;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one random drop and print a JSON result");
  solve_net.attach(solve_cmd);
  solve_cmd->add_option("--method", solve_method, "closed, grid or pso")
      ->check(CLI::IsMember({"closed", "grid", "pso"}))
      ->capture_default_str();
  solve_cmd->add_option("--objective", objective, "ratio or tradeoff")
      ->check(CLI::IsMember({"ratio", "tradeoff"}))
      ->capture_default_str();
  solve_cmd->add_option("--alpha", alpha, "Trade-off weight, (bits/s/Hz)/W")->check(CLI::NonNegativeNumber)->capture_default_str();
  solve_cmd->add_option("--trial", trial, "Trial index of the drop")->capture_default_str();
  solve_cmd->add_option("--particles", particles, "PSO swarm size")->check(CLI::PositiveNumber)->capture_default_str();
  solve_cmd->add_option("--iterations", iterations, "PSO iterations")->capture_default_str();
  solve_cmd->add_option("--out", solve_out, "Write the JSON result here instead of standard output");
  solve_cmd->add_option("--scenario-csv", scenario_csv, "Also dump the drop geometry as CSV");

  // sweep
  NetworkFlags sweep_net;
  std::string spec_path;
  std::string sweep_out;
  std::string heatmap_prefix;
  std::optional<std::size_t> sweep_trials;
  unsigned jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a Monte Carlo sweep described by a JSON spec");
  sweep_net.attach(sweep_cmd);
  sweep_cmd->add_option("--spec", spec_path, "Sweep spec JSON file")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "Sweep CSV output (default: standard output)");
  sweep_cmd->add_option("--heatmap-prefix", heatmap_prefix,
                        "eav_position sweeps: write <prefix>_<scheme>.csv heat maps");
  sweep_cmd->add_option("--trials", sweep_trials, "Override the number of trials")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--jobs", jobs, "Worker threads (0 = all cores)")->capture_default_str();

  // dataset
  NetworkFlags data_net;
  std::string data_method = "closed";
  std::size_t samples = 1000;
  std::string data_out;
  unsigned data_jobs = 1;
  auto* data_cmd = app.add_subcommand("dataset", "Export solved drops as a CSV dataset");
  data_net.attach(data_cmd);
  data_cmd->add_option("--method", data_method, "closed, grid or pso")
      ->check(CLI::IsMember({"closed", "grid", "pso"}))
      ->capture_default_str();
  data_cmd->add_option("--n", samples, "Number of rows")->check(CLI::PositiveNumber)->capture_default_str();
  data_cmd->add_option("--out", data_out, "Dataset CSV output")->required();
  data_cmd->add_option("--jobs", data_jobs, "Worker threads (0 = all cores)")->capture_default_str();

  // bench
  NetworkFlags bench_net;
  std::vector<std::size_t> bench_m{1, 2, 3};
  std::string bench_method = "grid";
  auto* bench_cmd = app.add_subcommand("bench", "Report evaluation counts and wall time against M");
  bench_net.attach(bench_cmd);
  bench_cmd->remove_option(bench_cmd->get_option("--m"));
  bench_cmd->add_option("--m", bench_m, "BD counts to run")->check(CLI::Range(1, 6))->capture_default_str();
  bench_cmd->add_option("--method", bench_method, "grid or pso")
      ->check(CLI::IsMember({"grid", "pso"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  if (help_json) {
    out << describe(app).dump(2) << '\n';
    return kOk;
  }

  try {
    if (*solve_cmd) {
      const NetworkConfig cfg = solve_net.resolve();
      const Problem pb = Problem::from(generate_scenario(cfg, trial), cfg);
      SolveOptions opt;
      opt.method = parse_method(solve_method);
      opt.settings.objective = parse_objective(objective);
      opt.settings.alpha = alpha;
      opt.pso.particles = particles;
      opt.pso.max_iterations = iterations;
      opt.pso.seed = cfg.seed;
      opt.pso.stream = trial;
      const SolveResult r = solve(pb, opt);
      nlohmann::json j = result_json(r);
      j["config"] = cfg;
      j["trial"] = trial;
      std::ofstream file;
      open_output(solve_out, file, out) << j.dump(2) << '\n';
      if (!scenario_csv.empty()) {
        std::ofstream csv(scenario_csv);
        if (!csv) throw std::runtime_error("cannot write " + scenario_csv);
        write_scenario_csv(csv, generate_scenario(cfg, trial));
      }
      return r.feasible ? kOk : kInfeasible;
    }
    if (*sweep_cmd) {
      const NetworkConfig cfg = sweep_net.resolve();
      std::ifstream in(spec_path);
      SweepSpec spec = nlohmann::json::parse(in).get<SweepSpec>();
      if (sweep_trials) spec.trials = *sweep_trials;
      std::ofstream file;
      std::ostream& os = open_output(sweep_out, file, out);
      if (spec.variable == SweepVariable::CsiErrorVar) {
        std::vector<std::size_t> ks = spec.user_counts.empty() ? std::vector<std::size_t>{cfg.user_count}
                                                               : spec.user_counts;
        write_csi_csv(os, imperfect_csi_experiment(cfg, spec.values, ks, spec.trials, spec.seed, jobs,
                                                   spec.max_attempts));
        return kOk;
      }
      const SweepResult r = run_sweep(spec, cfg, jobs);
      write_sweep_csv(os, r);
      if (spec.variable == SweepVariable::EavPosition && !heatmap_prefix.empty()) {
        for (Scheme s : r.schemes) {
          std::ofstream hm(heatmap_prefix + "_" + to_string(s) + ".csv");
          if (!hm) throw std::runtime_error("cannot write heat map for " + std::string(to_string(s)));
          write_heatmap_csv(hm, r, s);
        }
      }
      return kOk;
    }
    if (*data_cmd) {
      const NetworkConfig cfg = data_net.resolve();
      SolveOptions opt;
      opt.method = parse_method(data_method);
      std::ofstream file(data_out);
      if (!file) throw std::runtime_error("cannot write " + data_out);
      const ExportStats st = export_dataset(cfg, samples, opt, file, data_jobs);
      err << "rows " << st.rows << ", resampled " << st.resampled << ", dropped " << st.dropped << '\n';
      return st.rows > 0 ? kOk : kInfeasible;
    }
    if (*bench_cmd) {
      const NetworkConfig cfg = bench_net.resolve();
      out << bench_json(bench(cfg, bench_m, parse_method(bench_method))).dump(2) << '\n';
      return kOk;
    }
    err << app.help();
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace ambsee::cli
