#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ambsee/channel.hpp"

namespace ambsee {

/// Per-user transmit powers in SIC order (index 0 is the weakest user) with
/// the tail sums theta_k = sum_{i >= k} p_i; theta has one trailing zero.
class PowerAllocation {
 public:
  PowerAllocation() : theta_{0.0} {}
  explicit PowerAllocation(std::vector<double> p) : p_(std::move(p)), theta_(p_.size() + 1, 0.0) {
    for (double v : p_) {
      if (!(v >= 0.0) || !std::isfinite(v)) throw std::domain_error("power must be finite and >= 0");
    }
    for (std::size_t k = p_.size(); k-- > 0;) theta_[k] = theta_[k + 1] + p_[k];
  }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t k) const { return p_[k]; }
  double tail(std::size_t k) const { return theta_.at(k); }
  double total() const { return theta_.front(); }
  const std::vector<double>& values() const { return p_; }

 private:
  std::vector<double> p_;
  std::vector<double> theta_;
};

/// A_k = 2^(2 R_min,k).
struct QoSParams {
  std::vector<double> a;

  static QoSParams from_rates(std::span<const double> r_min) {
    QoSParams q;
    q.a.reserve(r_min.size());
    for (double r : r_min) {
      if (!(r >= 0.0)) throw std::domain_error("minimum rate must be >= 0");
      q.a.push_back(std::exp2(2.0 * r));
    }
    return q;
  }
  static QoSParams uniform(std::size_t k, double r_min) { return from_rates(std::vector<double>(k, r_min)); }

  std::size_t size() const { return a.size(); }
};

/// Receiver of a SINR evaluation: a user index or the eavesdropper.
struct Receiver {
  std::optional<std::size_t> user;
  static Receiver at_user(std::size_t i) { return Receiver{i}; }
  static Receiver eavesdropper() { return Receiver{}; }
};

inline double sinr_with_gain(double gain, const PowerAllocation& p, std::size_t k) {
  return gain * p[k] / (gain * p.tail(k + 1) + 1.0);
}

/// SINR for decoding user k's message at receiver i: H_i p_k / (H_i theta_{k+1} + 1).
inline double sinr(const NormalizedGains& H, const PowerAllocation& p, std::size_t k, Receiver i) {
  if (k >= p.size()) throw std::out_of_range("sinr: user index out of range");
  const double gain = i.user ? H.user.at(*i.user) : H.eav;
  return sinr_with_gain(gain, p, k);
}

struct UserRates {
  double rate = 0.0;      // R_k
  double eav_rate = 0.0;  // R_k^e
  double secrecy = 0.0;   // [R_k - R_k^e]^+
};

inline std::vector<UserRates> rates_and_secrecy(const NormalizedGains& H, const PowerAllocation& p) {
  if (H.user_count() != p.size()) throw std::invalid_argument("rates_and_secrecy: size mismatch");
  std::vector<UserRates> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    out[k].rate = 0.5 * std::log2(1.0 + sinr_with_gain(H.user[k], p, k));
    out[k].eav_rate = 0.5 * std::log2(1.0 + sinr_with_gain(H.eav, p, k));
    out[k].secrecy = std::max(0.0, out[k].rate - out[k].eav_rate);
  }
  return out;
}

inline double secrecy_sum_rate(const NormalizedGains& H, const PowerAllocation& p) {
  double ssr = 0.0;
  for (const auto& r : rates_and_secrecy(H, p)) ssr += r.secrecy;
  return ssr;
}

struct ObjectiveValue {
  double ssr = 0.0;    // bits/s/Hz
  double psi = 0.0;    // ssr - alpha (theta_1 + P_c)
  double zeta = 0.0;   // ssr / (theta_1 + P_c), bits/s/Hz/W
  double alpha = 0.0;  // (bits/s/Hz)/W
};

inline ObjectiveValue objectives(const NormalizedGains& H, const PowerAllocation& p, double alpha, double p_circuit) {
  if (!(alpha >= 0.0)) throw std::domain_error("alpha must be >= 0");
  if (!(p_circuit > 0.0)) throw std::domain_error("circuit power must be > 0");
  ObjectiveValue v;
  v.alpha = alpha;
  v.ssr = secrecy_sum_rate(H, p);
  const double consumed = p.total() + p_circuit;
  v.psi = v.ssr - alpha * consumed;
  v.zeta = v.ssr / consumed;
  return v;
}

inline constexpr double kConstraintSlack = 1e-9;

namespace detail {

/// lhs >= rhs up to a relative slack.
inline bool at_least(double lhs, double rhs, double slack = kConstraintSlack) {
  return lhs >= rhs - slack * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace detail

struct ConstraintReport {
  bool budget = false;       // C1: theta_1 <= P_max
  bool qos = false;          // C2: theta_k >= A_k theta_{k+1} + (A_k - 1) / H_k for every k
  bool sic_order = false;    // C3: gamma_{k->i} >= gamma_{k->k} for all k < K, i > k
  bool reflection = true;    // C4: enforced by ReflectionVector
  std::vector<bool> qos_per_user;

  bool all() const { return budget && qos && sic_order && reflection; }
};

inline ConstraintReport check_constraints(const NormalizedGains& H, const PowerAllocation& p, const QoSParams& A,
                                          double p_max) {
  const std::size_t k_count = p.size();
  if (H.user_count() != k_count || A.size() != k_count) throw std::invalid_argument("check_constraints: size mismatch");
  ConstraintReport r;
  r.budget = detail::at_least(p_max, p.total());
  r.qos_per_user.resize(k_count);
  r.qos = true;
  for (std::size_t k = 0; k < k_count; ++k) {
    const double need = A.a[k] * p.tail(k + 1) + (A.a[k] - 1.0) / H.user[k];
    r.qos_per_user[k] = detail::at_least(p.tail(k), need);
    r.qos = r.qos && r.qos_per_user[k];
  }
  r.sic_order = true;
  for (std::size_t k = 0; k + 1 < k_count; ++k) {
    const double own = sinr_with_gain(H.user[k], p, k);
    for (std::size_t i = k + 1; i < k_count; ++i) {
      r.sic_order = r.sic_order && detail::at_least(sinr_with_gain(H.user[i], p, k), own);
    }
  }
  return r;
}

/// Composite gains nondecreasing along the SIC order; equivalent to C3 for
/// any power vector with positive entries.
inline bool sic_order_holds(const NormalizedGains& H) {
  for (std::size_t k = 0; k + 1 < H.user_count(); ++k) {
    if (!detail::at_least(H.user[k + 1], H.user[k])) return false;
  }
  return true;
}

/// Minimum total power meeting every QoS constraint:
/// sum_k (A_k - 1) / H_k * prod_{j<k} A_j. Returns +inf when some H_k is 0.
inline double p_min(const NormalizedGains& H, const QoSParams& A) {
  if (H.user_count() != A.size()) throw std::invalid_argument("p_min: size mismatch");
  double total = 0.0;
  double prefix = 1.0;
  for (std::size_t k = 0; k < A.size(); ++k) {
    if (!(H.user[k] > 0.0)) return std::numeric_limits<double>::infinity();
    total += (A.a[k] - 1.0) / H.user[k] * prefix;
    prefix *= A.a[k];
  }
  return total;
}

inline bool power_feasible(const NormalizedGains& H, const QoSParams& A, double p_max) {
  return p_max >= p_min(H, A);
}

}  // namespace ambsee
