#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "ambsee/config.hpp"
#include "ambsee/dinkelbach.hpp"
#include "ambsee/scenario.hpp"

namespace ambsee {

enum class Objective { Ratio, Tradeoff };
enum class Method { ClosedForm, Grid, Pso, Oma };

inline const char* to_string(Objective o) { return o == Objective::Ratio ? "ratio" : "tradeoff"; }

inline const char* to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed";
    case Method::Grid: return "grid";
    case Method::Pso: return "pso";
    case Method::Oma: return "oma";
  }
  return "?";
}

struct SolverSettings {
  Objective objective = Objective::Ratio;
  double alpha = 0.1;  // trade-off weight when objective == Tradeoff
  DinkelbachOptions dinkelbach{};
};

/// A drop prepared for the solvers: users sorted by direct gain (SIC order),
/// QoS parameters in that order, and the budget.
struct Problem {
  Scenario scenario;
  std::vector<std::size_t> user_order;  // user_order[i] = drop index of the i-th weakest user
  std::size_t eav_rank = 1;
  QoSParams qos;
  double p_max = 0.0;
  double p_circuit = 0.0;

  std::size_t user_count() const { return scenario.user_count(); }
  std::size_t bd_count() const { return scenario.bd_count(); }

  static Problem from(const Scenario& drop, const NetworkConfig& cfg) {
    drop.check_shape();
    Problem pb;
    const UserOrdering ord = order_users(drop);
    pb.scenario = permute_users(drop, ord.permutation);
    pb.user_order = ord.permutation;
    pb.eav_rank = ord.eav_rank;
    std::vector<double> r(drop.user_count());
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] = cfg.r_min_per_user.empty() ? cfg.r_min : cfg.r_min_per_user.at(ord.permutation[i]);
    }
    pb.qos = QoSParams::from_rates(r);
    pb.p_max = cfg.p_max;
    pb.p_circuit = cfg.p_circuit;
    return pb;
  }
};

enum class Infeasibility { None, PowerBudget, SicOrder, NoFeasiblePoint };

inline const char* to_string(Infeasibility r) {
  switch (r) {
    case Infeasibility::None: return "none";
    case Infeasibility::PowerBudget: return "power_budget";
    case Infeasibility::SicOrder: return "sic_order";
    case Infeasibility::NoFeasiblePoint: return "no_feasible_point";
  }
  return "?";
}

/// Inner solve at one reflection vector.
struct PointEvaluation {
  bool feasible = false;
  Infeasibility reason = Infeasibility::NoFeasiblePoint;
  double fitness = -std::numeric_limits<double>::infinity();  // zeta (ratio) or psi (trade-off)
  NormalizedGains gains;
  PowerSolution power;
  double alpha = 0.0;  // Dinkelbach weight (ratio) or the fixed trade-off weight
  double residual = 0.0;
  int iterations = 0;
  bool converged = true;
  bool concavity_warning = false;
};

inline PointEvaluation evaluate_reflection(const Problem& pb, const ReflectionVector& rho, const SolverSettings& st) {
  PointEvaluation ev;
  ev.gains = effective_gains(pb.scenario, rho);
  if (!sic_order_holds(ev.gains)) {
    ev.reason = Infeasibility::SicOrder;
    return ev;
  }
  if (st.objective == Objective::Ratio) {
    DinkelbachOutcome d = maximize_ratio(ev.gains, pb.qos, pb.p_max, pb.p_circuit, st.dinkelbach);
    if (d.status == DinkelbachStatus::Infeasible) {
      ev.reason = Infeasibility::PowerBudget;
      return ev;
    }
    ev.feasible = true;
    ev.reason = Infeasibility::None;
    ev.fitness = d.zeta;
    ev.alpha = d.alpha;
    ev.residual = d.residual;
    ev.iterations = d.iterations;
    ev.converged = d.converged();
    ev.concavity_warning = d.concavity_warning;
    ev.power = std::move(d.power);
  } else {
    PowerSolution sol = optimal_power(ev.gains, pb.qos, st.alpha, pb.p_max, pb.p_circuit, st.dinkelbach.power);
    if (sol.status == PowerStatus::Infeasible) {
      ev.reason = Infeasibility::PowerBudget;
      return ev;
    }
    ev.feasible = true;
    ev.reason = Infeasibility::None;
    ev.fitness = sol.psi;
    ev.alpha = st.alpha;
    ev.iterations = 1;
    ev.concavity_warning = sol.status == PowerStatus::NonConcave;
    ev.power = std::move(sol);
  }
  return ev;
}

struct SolveResult {
  Method method = Method::ClosedForm;
  Objective objective_kind = Objective::Ratio;
  std::string case_tag;
  bool feasible = false;
  Infeasibility reason = Infeasibility::NoFeasiblePoint;

  ReflectionVector rho;
  PowerAllocation p;                    // SIC order
  std::vector<std::size_t> user_order;  // drop index of each SIC position
  NormalizedGains gains;
  ObjectiveValue objective;

  double alpha_star = 0.0;
  double residual = 0.0;
  int dinkelbach_iterations = 0;
  bool converged = true;
  bool concavity_warning = false;
  PowerRegime regime = PowerRegime::QosBound;

  std::size_t eval_count = 0;
  std::size_t coarse_evals = 0;
  std::size_t fine_evals = 0;
};

inline SolveResult make_result(const Problem& pb, const ReflectionVector& rho, const PointEvaluation& ev, Method method,
                               const SolverSettings& st) {
  SolveResult r;
  r.method = method;
  r.objective_kind = st.objective;
  r.user_order = pb.user_order;
  r.rho = rho;
  r.feasible = ev.feasible;
  r.reason = ev.reason;
  r.gains = ev.gains;
  if (!ev.feasible) return r;
  r.p = ev.power.allocation;
  r.objective = objectives(ev.gains, r.p, ev.alpha, pb.p_circuit);
  r.alpha_star = ev.alpha;
  r.residual = ev.residual;
  r.dinkelbach_iterations = ev.iterations;
  r.converged = ev.converged;
  r.concavity_warning = ev.concavity_warning;
  r.regime = ev.power.regime;
  return r;
}

}  // namespace ambsee
