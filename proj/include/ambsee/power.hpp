#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ambsee/secrecy.hpp"

namespace ambsee {

/// The power allocation problem for a fixed reflection vector, reduced to a
/// function of the strongest user's power p_K.
///
/// Every weaker user sits exactly on its QoS constraint, so the tail sums are
/// affine in p_K: theta_k = slope_k p_K + offset_k. The feasible range of p_K
/// is [(A_K - 1)/H_K, u], where u exhausts the budget P_max.
class ReducedObjective {
 public:
  ReducedObjective(const NormalizedGains& H, const QoSParams& A, double p_max)
      : gains_(H.user), eav_(H.eav), slope_(H.user_count() + 1, 0.0), offset_(H.user_count() + 1, 0.0) {
    const std::size_t k_count = H.user_count();
    if (k_count == 0 || A.size() != k_count) throw std::invalid_argument("ReducedObjective: size mismatch");
    for (double g : gains_) {
      if (!(g > 0.0)) {
        degenerate_ = true;
      }
    }
    slope_[k_count - 1] = 1.0;
    for (std::size_t k = k_count - 1; k-- > 0;) {
      slope_[k] = A.a[k] * slope_[k + 1];
      offset_[k] = degenerate_ ? 0.0 : A.a[k] * offset_[k + 1] + (A.a[k] - 1.0) / gains_[k];
    }
    lower_ = degenerate_ ? std::numeric_limits<double>::infinity() : (A.a[k_count - 1] - 1.0) / gains_[k_count - 1];
    upper_ = (p_max - offset_[0]) / slope_[0];
    for (std::size_t k = 0; k < k_count; ++k) {
      if (gains_[k] > eav_) leaking_.push_back(k);
    }
  }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  /// P_max >= P_min, i.e. the interval [lower, upper] is nonempty (relative slack 1e-12).
  bool feasible() const {
    return !degenerate_ && lower_ <= upper_ + 1e-12 * std::max(1.0, std::abs(upper_));
  }

  double tail(std::size_t k, double p_top) const { return slope_[k] * p_top + offset_[k]; }
  double total_power(double p_top) const { return tail(0, p_top); }

  std::vector<double> allocation(double p_top) const {
    std::vector<double> p(gains_.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = std::max(0.0, tail(k, p_top) - tail(k + 1, p_top));
    return p;
  }

  /// Secrecy sum-rate along the cascade. Users at or below the eavesdropper
  /// contribute nothing.
  double secrecy_sum_rate(double p_top) const {
    double ssr = 0.0;
    for (std::size_t k : leaking_) {
      const double t0 = tail(k, p_top);
      const double t1 = tail(k + 1, p_top);
      const double ratio = ((1.0 + gains_[k] * t0) * (1.0 + eav_ * t1)) / ((1.0 + gains_[k] * t1) * (1.0 + eav_ * t0));
      ssr += std::max(0.0, 0.5 * std::log2(ratio));
    }
    return ssr;
  }

  double tradeoff(double p_top, double alpha, double p_circuit) const {
    return secrecy_sum_rate(p_top) - alpha * (total_power(p_top) + p_circuit);
  }

  /// Central finite difference of the trade-off objective, one-sided at the
  /// ends of [lower, upper].
  double slope_at(double p_top, double alpha) const {
    const double step = 1e-6 * std::max(1.0, std::abs(p_top));
    const double lo = std::max(lower_, p_top - step);
    const double hi = std::min(upper_, p_top + step);
    if (!(hi > lo)) return 0.0;
    return (tradeoff(hi, alpha, 0.0) - tradeoff(lo, alpha, 0.0)) / (hi - lo);
  }

 private:
  std::vector<double> gains_;
  double eav_;
  std::vector<double> slope_;
  std::vector<double> offset_;
  std::vector<std::size_t> leaking_;
  double lower_ = 0.0;
  double upper_ = 0.0;
  bool degenerate_ = false;
};

enum class PowerStatus { Ok, Infeasible, NonConcave };

/// Which clamp of min(max(p_hat, lower), u) produced p_K.
enum class PowerRegime { Interior, QosBound, BudgetBound };

struct PowerSolution {
  PowerStatus status = PowerStatus::Infeasible;
  PowerAllocation allocation;
  PowerRegime regime = PowerRegime::QosBound;
  double p_top = 0.0;  // p_K
  double lower = 0.0;  // (A_K - 1) / H_K
  double upper = 0.0;  // u
  double ssr = 0.0;
  double psi = 0.0;    // trade-off value including -alpha P_c

  bool ok() const { return status == PowerStatus::Ok; }
};

struct PowerOptions {
  double bracket_width = 1e-10;
  /// Interior probes used to verify the derivative changes sign at most once.
  int concavity_probes = 7;
};

/// Trade-off-optimal power allocation for fixed gains: weaker users at their
/// QoS floor, p_K = min(max(p_hat, lower), u) where p_hat zeroes the
/// derivative of the reduced objective (found by bisection on a finite
/// difference derivative).
inline PowerSolution optimal_power(const NormalizedGains& H, const QoSParams& A, double alpha, double p_max,
                                   double p_circuit = 0.0, const PowerOptions& opt = {}) {
  PowerSolution out;
  const ReducedObjective f(H, A, p_max);
  out.lower = f.lower();
  out.upper = f.upper();
  if (!f.feasible()) {
    out.status = PowerStatus::Infeasible;
    return out;
  }
  const double lo = f.lower();
  const double hi = std::max(lo, f.upper());

  const double slope_lo = f.slope_at(lo, alpha);
  const double slope_hi = f.slope_at(hi, alpha);

  out.status = PowerStatus::Ok;
  if (opt.concavity_probes > 0 && hi > lo) {
    // Single crossing: once the derivative turns negative it must stay so.
    bool seen_negative = slope_lo < 0.0;
    for (int j = 1; j <= opt.concavity_probes + 1; ++j) {
      const double x = j <= opt.concavity_probes ? lo + (hi - lo) * j / (opt.concavity_probes + 1) : hi;
      const double s = j <= opt.concavity_probes ? f.slope_at(x, alpha) : slope_hi;
      const double tol = 1e-9 * (1.0 + alpha);
      if (s > tol && seen_negative) out.status = PowerStatus::NonConcave;
      if (s < -tol) seen_negative = true;
    }
  }

  double p_top = lo;
  if (!(hi > lo) || slope_lo <= 0.0) {
    p_top = lo;
    out.regime = PowerRegime::QosBound;
  } else if (slope_hi >= 0.0) {
    p_top = hi;
    out.regime = PowerRegime::BudgetBound;
  } else {
    double a = lo;
    double b = hi;
    while (b - a > opt.bracket_width) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (f.slope_at(mid, alpha) > 0.0) {
        a = mid;
      } else {
        b = mid;
      }
    }
    p_top = 0.5 * (a + b);
    out.regime = PowerRegime::Interior;
  }

  out.p_top = p_top;
  out.allocation = PowerAllocation(f.allocation(p_top));
  out.ssr = f.secrecy_sum_rate(p_top);
  out.psi = out.ssr - alpha * (f.total_power(p_top) + p_circuit);
  return out;
}

}  // namespace ambsee
