#pragma once

// Reference computations written directly from the system-model formulas,
// without calling into the library's solvers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracle {

struct Channel {
  std::vector<double> user;  // normalized gains, SIC order
  double eav = 0.0;
};

inline double sinr(double gain, const std::vector<double>& p, std::size_t k) {
  double interference = 0.0;
  for (std::size_t j = k + 1; j < p.size(); ++j) interference += p[j];
  return gain * p[k] / (gain * interference + 1.0);
}

inline double secrecy_sum_rate(const Channel& c, const std::vector<double>& p) {
  double total = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double r = 0.5 * std::log2(1.0 + sinr(c.user[k], p, k));
    const double re = 0.5 * std::log2(1.0 + sinr(c.eav, p, k));
    total += std::max(0.0, r - re);
  }
  return total;
}

inline double zeta(const Channel& c, const std::vector<double>& p, double p_circuit) {
  double total = 0.0;
  for (double v : p) total += v;
  return secrecy_sum_rate(c, p) / (total + p_circuit);
}

/// Powers with every user below the strongest exactly at its rate floor,
/// built user by user from the strongest down.
inline std::vector<double> tight_cascade(const Channel& c, const std::vector<double>& a, double p_top) {
  const std::size_t k = c.user.size();
  std::vector<double> p(k, 0.0);
  p[k - 1] = p_top;
  double tail = p_top;
  for (std::size_t i = k - 1; i-- > 0;) {
    // 0.5 log2(1 + H p_i / (H tail + 1)) = 0.5 log2(A_i)
    p[i] = (a[i] - 1.0) * (c.user[i] * tail + 1.0) / c.user[i];
    tail += p[i];
  }
  return p;
}

inline double total(const std::vector<double>& p) {
  double s = 0.0;
  for (double v : p) s += v;
  return s;
}

/// Smallest total power meeting every rate floor, by the same cascade at the
/// strongest user's own floor.
inline double min_power(const Channel& c, const std::vector<double>& a) {
  const std::size_t k = c.user.size();
  const double p_top = (a[k - 1] - 1.0) / c.user[k - 1];
  return total(tight_cascade(c, a, p_top));
}

/// zeta of the tight cascade at p_top without heap allocation (K <= 8).
inline double cascade_zeta(const Channel& c, const std::vector<double>& a, double p_top, double p_circuit) {
  const std::size_t k = c.user.size();
  double p[8];
  double tail_after[8];
  p[k - 1] = p_top;
  tail_after[k - 1] = 0.0;
  double tail = p_top;
  for (std::size_t i = k - 1; i-- > 0;) {
    tail_after[i] = tail;
    p[i] = (a[i] - 1.0) * (c.user[i] * tail + 1.0) / c.user[i];
    tail += p[i];
  }
  double ssr = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double su = c.user[i] * p[i] / (c.user[i] * tail_after[i] + 1.0);
    const double se = c.eav * p[i] / (c.eav * tail_after[i] + 1.0);
    ssr += std::max(0.0, 0.5 * std::log2(1.0 + su) - 0.5 * std::log2(1.0 + se));
  }
  return ssr / (tail + p_circuit);
}

/// Range of p_top for which the tight cascade meets the budget; empty when
/// even the strongest user's floor overshoots it.
inline bool top_power_range(const Channel& c, const std::vector<double>& a, double p_max, double& lo, double& hi) {
  const std::size_t k = c.user.size();
  lo = (a[k - 1] - 1.0) / c.user[k - 1];
  const double t0 = total(tight_cascade(c, a, lo));
  if (t0 > p_max) return false;
  const double t1 = total(tight_cascade(c, a, lo + 1.0));
  hi = lo + (p_max - t0) / (t1 - t0);
  return true;
}

struct SweepBest {
  double value = -std::numeric_limits<double>::infinity();
  double p_top = 0.0;
  bool feasible = false;
};

/// Maximum of f(cascade(p_top)) over p_top = lo, lo + step, ... while the
/// cascade stays within the budget, with the budget end point included.
template <typename F>
SweepBest sweep_top_power(const Channel& c, const std::vector<double>& a, double p_max, double step, F&& f) {
  SweepBest best;
  const std::size_t k = c.user.size();
  const double lo = (a[k - 1] - 1.0) / c.user[k - 1];
  if (total(tight_cascade(c, a, lo)) > p_max) return best;
  best.feasible = true;
  // total power is affine in p_top: find the budget end point exactly
  const double t0 = total(tight_cascade(c, a, lo));
  const double t1 = total(tight_cascade(c, a, lo + 1.0));
  const double hi = lo + (p_max - t0) / (t1 - t0);
  auto consider = [&](double x) {
    const double v = f(tight_cascade(c, a, x));
    if (v > best.value) {
      best.value = v;
      best.p_top = x;
    }
  };
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step));
  for (std::size_t i = 0; i <= n; ++i) consider(lo + static_cast<double>(i) * step);
  consider(hi);
  return best;
}

/// Coarse-to-fine maximization of a unimodal-looking 1-D function on
/// [lo, hi]: a uniform scan followed by successively finer scans around the
/// best point. Used where an exhaustive fine grid would be too slow.
template <typename F>
double refine_max(double lo, double hi, F&& f, double final_step, double* arg = nullptr) {
  double best_x = lo;
  double best = f(lo);
  if (!(hi > lo)) {
    if (arg) *arg = lo;
    return best;
  }
  double a = lo;
  double b = hi;
  double step = (hi - lo) / 2000.0;
  while (true) {
    const bool last = step <= final_step;
    if (last) step = final_step;
    const auto n = b > a ? static_cast<std::size_t>(std::floor((b - a) / step)) : 0;
    for (std::size_t i = 0; i <= n; ++i) {
      const double x = a + static_cast<double>(i) * step;
      const double v = f(x);
      if (v > best) {
        best = v;
        best_x = x;
      }
    }
    const double vb = f(b);
    if (vb > best) {
      best = vb;
      best_x = b;
    }
    if (last || !(step > 0.0)) break;
    a = std::max(lo, best_x - 2.0 * step);
    b = std::min(hi, best_x + 2.0 * step);
    step /= 50.0;
  }
  if (arg) *arg = best_x;
  return best;
}

}  // namespace oracle
