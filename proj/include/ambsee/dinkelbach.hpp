#pragma once

#include <cmath>
#include <vector>

#include "ambsee/power.hpp"

namespace ambsee {

struct DinkelbachOptions {
  double tolerance = 1e-8;
  int max_iterations = 100;
  PowerOptions power{};
};

enum class DinkelbachStatus { Converged, NotConverged, Infeasible };

struct DinkelbachOutcome {
  DinkelbachStatus status = DinkelbachStatus::Infeasible;
  PowerSolution power;          // p*(alpha) at the last iterate
  double alpha = 0.0;           // last weight; equals zeta of `power` within tolerance at convergence
  double zeta = 0.0;            // ssr / (theta_1 + P_c) of `power`
  double residual = 0.0;        // F(alpha)
  int iterations = 0;
  bool concavity_warning = false;
  std::vector<double> residuals;  // F(alpha_t) for t = 0, 1, ...

  bool converged() const { return status == DinkelbachStatus::Converged; }
};

/// Maximizes ssr / (theta_1 + P_c) for fixed gains by Dinkelbach's method:
/// alpha_{t+1} = ssr(p*(alpha_t)) / (theta_1(p*(alpha_t)) + P_c), starting
/// from alpha_0 = 0, until |F(alpha_t)| <= tolerance with
/// F(alpha) = ssr(p*(alpha)) - alpha (theta_1(p*(alpha)) + P_c).
inline DinkelbachOutcome maximize_ratio(const NormalizedGains& H, const QoSParams& A, double p_max, double p_circuit,
                                        const DinkelbachOptions& opt = {}) {
  DinkelbachOutcome out;
  double alpha = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    PowerSolution sol = optimal_power(H, A, alpha, p_max, p_circuit, opt.power);
    if (sol.status == PowerStatus::Infeasible) {
      out.status = DinkelbachStatus::Infeasible;
      out.power = std::move(sol);
      out.iterations = it;
      return out;
    }
    out.concavity_warning = out.concavity_warning || sol.status == PowerStatus::NonConcave;
    const double consumed = sol.allocation.total() + p_circuit;
    const double residual = sol.ssr - alpha * consumed;
    out.residuals.push_back(residual);
    out.power = std::move(sol);
    out.alpha = alpha;
    out.zeta = out.power.ssr / consumed;
    out.residual = residual;
    out.iterations = it + 1;
    if (std::abs(residual) <= opt.tolerance) {
      out.status = DinkelbachStatus::Converged;
      return out;
    }
    alpha = out.zeta;
  }
  out.status = DinkelbachStatus::NotConverged;
  return out;
}

}  // namespace ambsee
