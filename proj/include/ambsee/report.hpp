#pragma once

#include <chrono>
#include <cmath>
#include <vector>

#include "json.hpp"

#include "ambsee/solve.hpp"

namespace ambsee {

inline constexpr int kResultSchemaVersion = 1;

inline const char* to_string(PowerRegime r) {
  switch (r) {
    case PowerRegime::Interior: return "interior";
    case PowerRegime::QosBound: return "qos_bound";
    case PowerRegime::BudgetBound: return "budget_bound";
  }
  return "?";
}

/// JSON form of a solve result. Powers in watts, rates in bits/s/Hz, zeta in
/// bits/s/Hz/W. Per-user arrays are in SIC order; `user_order[i]` is the
/// drop index of the i-th weakest user.
inline nlohmann::json result_json(const SolveResult& r) {
  nlohmann::json j;
  j["schema_version"] = kResultSchemaVersion;
  j["method"] = to_string(r.method);
  j["objective_kind"] = to_string(r.objective_kind);
  j["case"] = r.case_tag;
  j["feasible"] = r.feasible;
  j["infeasibility"] = to_string(r.reason);
  j["rho"] = r.rho.vector();
  j["p_w"] = r.p.values();
  j["user_order"] = r.user_order;
  j["gains"] = {{"user", r.gains.user}, {"eavesdropper", r.gains.eav}};
  j["objective"] = {{"ssr_bps_hz", r.objective.ssr},
                    {"psi", r.objective.psi},
                    {"zeta_bps_hz_per_w", r.objective.zeta},
                    {"alpha", r.objective.alpha},
                    {"total_power_w", r.p.total()}};
  j["diagnostics"] = {{"alpha_star", r.alpha_star},
                      {"residual", r.residual},
                      {"dinkelbach_iterations", r.dinkelbach_iterations},
                      {"converged", r.converged},
                      {"concavity_warning", r.concavity_warning},
                      {"power_regime", to_string(r.regime)}};
  j["evaluations"] = {{"total", r.eval_count}, {"coarse", r.coarse_evals}, {"fine", r.fine_evals}};
  return j;
}

struct BenchRow {
  std::size_t bd_count = 0;
  Method method = Method::Grid;
  std::size_t coarse_evals = 0;
  std::size_t fine_evals = 0;
  std::size_t eval_count = 0;
  std::size_t predicted_coarse = 0;  // (1/coarse_step + 1)^M for grid
  std::size_t predicted_total = 0;   // N_p (T_max + 1) for PSO
  double wall_ms = 0.0;
};

/// Runs one search per BD count on the drop (cfg.seed, trial 0) and records
/// evaluation counts and wall time.
inline std::vector<BenchRow> bench(NetworkConfig cfg, const std::vector<std::size_t>& bd_counts, Method method,
                                   const SolveOptions& base = {}) {
  std::vector<BenchRow> rows;
  for (std::size_t m : bd_counts) {
    cfg.bd_count = m;
    const Problem pb = Problem::from(generate_scenario(cfg, 0), cfg);
    SolveOptions opt = base;
    opt.method = method;
    opt.pso.seed = cfg.seed;
    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult r = solve(pb, opt);
    const auto t1 = std::chrono::steady_clock::now();
    BenchRow row;
    row.bd_count = m;
    row.method = method;
    row.coarse_evals = r.coarse_evals;
    row.fine_evals = r.fine_evals;
    row.eval_count = r.eval_count;
    if (method == Method::Grid) {
      row.predicted_coarse = static_cast<std::size_t>(
          std::llround(std::pow(static_cast<double>(coarse_axis_size(opt.grid)), static_cast<double>(m))));
      row.predicted_total = row.predicted_coarse;
    } else if (method == Method::Pso) {
      row.predicted_total = opt.pso.particles * (opt.pso.max_iterations + 1);
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rows.push_back(row);
  }
  return rows;
}

inline nlohmann::json bench_json(const std::vector<BenchRow>& rows) {
  nlohmann::json j;
  j["schema_version"] = kResultSchemaVersion;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"m", r.bd_count},
                         {"method", to_string(r.method)},
                         {"coarse_evals", r.coarse_evals},
                         {"fine_evals", r.fine_evals},
                         {"eval_count", r.eval_count},
                         {"predicted_coarse", r.predicted_coarse},
                         {"predicted_total", r.predicted_total},
                         {"wall_ms", r.wall_ms}});
  }
  return j;
}

}  // namespace ambsee
