#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "ambsee/problem.hpp"

namespace ambsee {

/// Time-sharing baseline: every BD reflects fully and user k is served alone
/// in a slot of length 1/K with power p_k. Rates carry the 1/K factor, the
/// average transmit power sum_k p_k / K counts against P_max and in the
/// denominator of the ratio.
class OmaModel {
 public:
  OmaModel(const NormalizedGains& H, const QoSParams& A, double p_max, double p_circuit)
      : gains_(H.user), eav_(H.eav), share_(1.0 / static_cast<double>(H.user_count())), p_max_(p_max),
        p_circuit_(p_circuit), floor_(H.user_count()) {
    for (std::size_t k = 0; k < gains_.size(); ++k) {
      // share * 0.5 log2(1 + H p) >= R_min  <=>  p >= (A^(1/share) - 1) / H
      floor_[k] = gains_[k] > 0.0 ? (std::pow(A.a[k], 1.0 / share_) - 1.0) / gains_[k]
                                  : std::numeric_limits<double>::infinity();
    }
  }

  bool feasible() const { return average_power(floor_) <= p_max_ * (1.0 + 1e-12); }
  const std::vector<double>& floor() const { return floor_; }

  double average_power(const std::vector<double>& p) const {
    double s = 0.0;
    for (double v : p) s += v;
    return share_ * s;
  }

  double secrecy_sum_rate(const std::vector<double>& p) const {
    double ssr = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double d = std::log2(1.0 + gains_[k] * p[k]) - std::log2(1.0 + eav_ * p[k]);
      ssr += share_ * 0.5 * std::max(0.0, d);
    }
    return ssr;
  }

  double ratio(const std::vector<double>& p) const { return secrecy_sum_rate(p) / (average_power(p) + p_circuit_); }

  /// Maximizer of share * (0.5 log2(1+Hp) - 0.5 log2(1+He p)) - mu * share * p
  /// over p >= floor: the stationary point of a concave function, clamped.
  std::vector<double> best_response(double mu) const {
    std::vector<double> p(gains_.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double h = gains_[k];
      if (!(h > eav_) || !(mu > 0.0)) {
        p[k] = h > eav_ ? std::numeric_limits<double>::infinity() : floor_[k];
        continue;
      }
      // (1 + h p)(1 + e p) = (h - e) / (2 ln2 mu)
      const double c = (h - eav_) / (2.0 * std::numbers::ln2 * mu);
      const double a = h * eav_;
      const double b = h + eav_;
      const double rhs = c - 1.0;
      double root = 0.0;
      if (rhs > 0.0) root = a > 0.0 ? (-b + std::sqrt(b * b + 4.0 * a * rhs)) / (2.0 * a) : rhs / b;
      p[k] = std::max(floor_[k], root);
    }
    return p;
  }

  /// Trade-off optimum for weight alpha under the average-power budget; the
  /// budget multiplier is found by bisection when the free optimum overspends.
  std::vector<double> optimal_power(double alpha) const {
    std::vector<double> p = best_response(alpha);
    if (average_power(p) <= p_max_) return p;
    double lo = alpha;
    double hi = std::max(1.0, 2.0 * alpha);
    while (average_power(best_response(hi)) > p_max_) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (average_power(best_response(mid)) > p_max_) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return best_response(hi);
  }

 private:
  std::vector<double> gains_;
  double eav_;
  double share_;
  double p_max_;
  double p_circuit_;
  std::vector<double> floor_;
};

struct OmaResult {
  bool feasible = false;
  std::vector<double> p;  // per-slot powers, SIC order of the problem
  double ssr = 0.0;
  double zeta = 0.0;
  double alpha = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Ratio-optimal time-sharing allocation with every BD at rho = 1.
inline OmaResult oma_baseline(const Problem& pb, const DinkelbachOptions& opt = {}) {
  OmaResult out;
  const NormalizedGains H = effective_gains(pb.scenario, ReflectionVector::ones(pb.bd_count()));
  const OmaModel model(H, pb.qos, pb.p_max, pb.p_circuit);
  if (!model.feasible()) return out;
  out.feasible = true;
  double alpha = 0.0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    std::vector<double> p = model.optimal_power(alpha);
    const double consumed = model.average_power(p) + pb.p_circuit;
    const double ssr = model.secrecy_sum_rate(p);
    const double residual = ssr - alpha * consumed;
    out.p = std::move(p);
    out.ssr = ssr;
    out.zeta = ssr / consumed;
    out.alpha = alpha;
    out.iterations = it + 1;
    if (std::abs(residual) <= opt.tolerance) {
      out.converged = true;
      return out;
    }
    alpha = out.zeta;
  }
  return out;
}

}  // namespace ambsee
